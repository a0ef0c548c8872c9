#ifndef PDNF_SYMMETRY_HPP
#define PDNF_SYMMETRY_HPP

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "pdnf/analysis.hpp"
#include "pdnf/normalform.hpp"

namespace pdnf {

enum class Verdict {
  convergent_certified,
  convergent_certified_at_horizon,
  hypothesis_failed,
  inconclusive,
};

enum class EvidenceStatus {
  pass,
  fail,
  horizon_limited,  // verified only up to the truncation or k_max horizon
  inconclusive,
  info,             // recorded, never affects the verdict
};

const char* to_string(Verdict v);
const char* to_string(EvidenceStatus s);

struct Evidence {
  std::string name;
  EvidenceStatus status = EvidenceStatus::info;
  std::string summary;
  /// Small exact facts (counts, factors, flags) keyed by name.
  std::map<std::string, std::string> facts;

  std::optional<VectorField> residual;
  std::optional<VectorField> normal_form;
  std::optional<VectorField> auxiliary_symmetry;
  std::optional<Proportionality> proportionality;
  std::optional<OmegaReport> omega;
  std::optional<ScalarPoly> condition_a_alpha;
  std::optional<ShapeFit> shape;
  std::optional<IntegralBasis> integrals;
};

struct CertificateReport {
  std::string theorem;  // "theorem1", "theorem2" or "corollary2d"
  int truncation = 0;
  unsigned k_max = 0;
  Verdict verdict = Verdict::inconclusive;
  /// An omega enumeration stopped at its lattice budget.
  bool budget_exceeded = false;
  std::vector<Evidence> entries;

  const Evidence* find(const std::string& name) const;
};

/// Verdict implied by the entries: any fail gives hypothesis_failed, then
/// any inconclusive gives inconclusive, then any horizon-limited entry
/// gives convergent_certified_at_horizon. Info entries are ignored.
Verdict assemble_verdict(const std::vector<Evidence>& entries);

/// {f,g} truncated at N. Zero certifies the symmetry up to degree N.
/// Throws std::invalid_argument on a dimension mismatch or when N exceeds
/// either truncation.
VectorField check_symmetry(const VectorField& f, const VectorField& g, int truncation);

/// g carried through the coordinate changes recorded in `nr`: first into
/// eigencoordinates, then through each generator in order.
VectorField transport_symmetry(const VectorField& g, const NormalizationResult& nr);

/// Linearly independent B with {h, B u} = 0, found as the exact kernel of
/// B -> {h, B u} over the n^2 entries of B.
std::vector<ExactMatrix> linear_symmetries(const VectorField& h);

struct CertifyOptions {
  OmegaOptions omega;
};

/// Theorem 1. M is given in the original coordinates. Failures of the
/// sub-operations are recorded as failed entries, never thrown.
CertificateReport certify_theorem1(const VectorField& f, const VectorField& g, const ExactMatrix& m, int truncation,
                                   unsigned k_max, const EigenData& eigen, const CertifyOptions& options = {});

/// Theorem 2 with ell symmetries gs. Throws std::invalid_argument when
/// ell == 0 or gs is empty.
CertificateReport certify_theorem2(const VectorField& f, const std::vector<VectorField>& gs, const ExactMatrix& m,
                                   int truncation, unsigned k_max, unsigned ell, const EigenData& eigen,
                                   const CertifyOptions& options = {});

/// The planar corollary: a symmetry not proportional to f plus condition
/// omega. Throws std::invalid_argument unless n == 2.
CertificateReport corollary_2d(const VectorField& f, const VectorField& g, int truncation, unsigned k_max,
                               const EigenData& eigen, const CertifyOptions& options = {});

}  // namespace pdnf

#endif  // PDNF_SYMMETRY_HPP
