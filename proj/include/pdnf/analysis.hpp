#ifndef PDNF_ANALYSIS_HPP
#define PDNF_ANALYSIS_HPP

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "pdnf/algebra.hpp"
#include "pdnf/polyvec.hpp"

namespace pdnf {

/// Thrown when a lattice enumeration would visit more points than allowed.
class BudgetExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Small divisors

enum class OmegaVariant {
  paper,    // min |(q,a)| over (q,a) != 0
  shifted,  // min |(q,a) - a_j| over j with (q,a) - a_j != 0
};

struct OmegaOptions {
  OmegaVariant variant = OmegaVariant::paper;
  /// Restrict to q_i >= 1 for every i instead of q_i >= 0.
  bool strict_positive = false;
  /// Significant decimal digits for the logarithmic partial sums.
  unsigned precision = 50;
  /// Maximum number of (reduced) lattice points visited.
  std::uint64_t budget = 10'000'000;
  /// Partial sums below this value count as a violation at the horizon.
  Rational threshold{-100};
};

struct OmegaRecord {
  unsigned k = 0;
  /// omega_k^2, exact. Empty when no admissible q exists with |q| < 2^k.
  std::optional<Rational> omega_squared;
  std::optional<MultiIndex> minimizer;
  /// Shifted variant only: the j attaining the minimum.
  std::optional<std::size_t> component;
  std::string omega_decimal;  // sqrt(omega_squared), `precision` digits
  std::string partial_sum;    // sum_{k' <= k} 2^{-k'} ln omega_k', `precision` digits
  bool partial_sum_is_zero = false;  // exact: every omega so far equals 1
};

enum class OmegaVerdict { holds_at_horizon, violated, indeterminate };

struct OmegaReport {
  ExactVector eigenvalues;
  unsigned k_max = 0;
  OmegaOptions options;
  std::vector<OmegaRecord> records;  // records[k - 1]
  std::uint64_t lattice_points = 0;
  OmegaVerdict verdict = OmegaVerdict::indeterminate;
};

/// Evaluates omega_k for k = 1..k_max by exact enumeration of
/// q with 1 <= |q| < 2^k. Eigenvalues that coincide are grouped first, since
/// (q,a) only sees the per-group sums of q; the search runs over those sums.
///
/// Throws std::invalid_argument for empty or all-zero eigenvalues or
/// k_max == 0, and BudgetExceeded past options.budget lattice points.
OmegaReport check_omega(const ExactVector& a, unsigned k_max, const OmegaOptions& options = {});

// ---------------------------------------------------------------------------
// Proportionality

struct Proportionality {
  GaussianRational factor;  // x = factor * y
  bool ambiguous = false;   // both inputs zero: any factor works
};

std::optional<Proportionality> constant_proportionality(const ExactMatrix& x, const ExactMatrix& y);
/// Fields are compared up to the smaller of the two truncations.
std::optional<Proportionality> constant_proportionality(const VectorField& x, const VectorField& y);

// ---------------------------------------------------------------------------
// Shapes

/// alpha with fhat = A u + alpha(u) A u up to fhat's truncation, solved
/// degree by degree. Empty if no such scalar series exists. Throws
/// std::invalid_argument if the linear part is zero.
std::optional<ScalarPoly> check_condition_A(const VectorField& fhat);

struct ShapeFit {
  ExactMatrix base;       // A, the linear part of the fitted field
  ExactMatrix candidate;  // M
  ScalarPoly alpha;
  ScalarPoly mu;
  VectorField residual;   // h - (A u + alpha A u + mu M u); zero on success
  /// Degrees where alpha A u and mu M u overlap, so the split between alpha
  /// and mu was fixed by setting free unknowns to zero.
  std::vector<unsigned> nonunique_degrees;
};

/// Fits h = A u + alpha(u) A u + mu(u) M u degree by degree. Empty when some
/// degree has no exact solution. Throws std::invalid_argument when M is
/// constant-proportional to A or has the wrong shape.
std::optional<ShapeFit> fit_nf_shape(const VectorField& h, const ExactMatrix& m);

/// Tries each candidate in order and returns the first exact fit. Candidates
/// proportional to A are skipped.
std::optional<ShapeFit> fit_nf_shape_any(const VectorField& h, const std::vector<ExactMatrix>& candidates);

// ---------------------------------------------------------------------------
// Common constants of motion of u' = diag(a) u and u' = M u

struct IntegralBasis {
  int degree_bound = 0;
  std::vector<ScalarPoly> basis;  // by degree, then kernel order
};

/// Polynomials kappa of degree 1..N with (A u).grad kappa = 0 and
/// (M u).grad kappa = 0, A = diag(a). An empty basis means there is no
/// common polynomial constant of motion up to degree N.
IntegralBasis common_linear_integrals(const ExactVector& a, const ExactMatrix& m, int degree_bound);

}  // namespace pdnf

#endif  // PDNF_ANALYSIS_HPP
