#ifndef PDNF_NORMALFORM_HPP
#define PDNF_NORMALFORM_HPP

#include <optional>
#include <stdexcept>
#include <vector>

#include "pdnf/algebra.hpp"
#include "pdnf/polyvec.hpp"

namespace pdnf {

class InconsistentEigenData : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Eigenvalues of a diagonalizable linear part, optionally with the change
/// of basis P (columns are eigenvectors, so P^{-1} A P = diag(a)).
class EigenData {
 public:
  EigenData() = default;
  /// Linear part already diagonal.
  explicit EigenData(ExactVector eigenvalues);
  /// Throws InconsistentEigenData if P is singular or the wrong shape.
  EigenData(ExactVector eigenvalues, ExactMatrix basis);

  const ExactVector& eigenvalues() const { return eigenvalues_; }
  std::size_t dimension() const { return eigenvalues_.size(); }
  bool has_basis() const { return basis_.has_value(); }
  const ExactMatrix& basis() const { return *basis_; }
  const ExactMatrix& basis_inverse() const { return *basis_inverse_; }

  /// Exact check that P^{-1} A P (or A itself) equals diag(a).
  bool diagonalizes(const ExactMatrix& a) const;

  /// Fields expressed in the original coordinates u mapped to w, u = P w.
  VectorField to_eigencoordinates(const VectorField& f) const;
  ExactMatrix to_eigencoordinates(const ExactMatrix& m) const;

  friend bool operator==(const EigenData&, const EigenData&) = default;

 private:
  ExactVector eigenvalues_;
  std::optional<ExactMatrix> basis_;
  std::optional<ExactMatrix> basis_inverse_;
};

struct HomologicalSplit {
  VectorField generator;           // only nonresonant monomials
  VectorField resonant_remainder;  // only resonant monomials
};

struct NormalizationResult {
  VectorField normal_form;               // in eigencoordinates
  std::vector<VectorField> generators;   // generators[d - 2] has degree d
  EigenData eigen;
  int truncation = 0;

  const VectorField& generator(unsigned d) const { return generators.at(d - 2); }
  bool all_generators_zero() const;
};

/// (q, a) == a_j.
bool is_resonant(const MultiIndex& q, std::size_t j, const ExactVector& a);

/// {diag(a) u, h}. Acts on u^q e_j as multiplication by (q, a) - a_j.
VectorField homological_apply(const ExactVector& a, const VectorField& h);

/// F_d = homological_apply(a, generator) + resonant_remainder, with the
/// generator free of resonant monomials.
HomologicalSplit solve_homological(const ExactVector& a, const VectorField& homogeneous);

/// Field in coordinates v with u = v + generator(v), truncated at degree N:
///   (I + D generator(v))^{-1} f(v + generator(v)).
/// The generator must be homogeneous of degree >= 2. The linear part is
/// unchanged.
VectorField pushforward(const VectorField& f, const VectorField& generator, int truncation);

/// Degree-by-degree Poincare-Dulac normalization up to degree N.
///
/// Moves f into eigencoordinates, then for d = 2..N splits the degree-d
/// slice with solve_homological and removes its nonresonant part with one
/// pushforward. Throws InconsistentEigenData when the eigen data does not
/// diagonalize f's linear part, and std::invalid_argument when N < 2 or N
/// exceeds f's truncation.
NormalizationResult normalize(const VectorField& f, const EigenData& eigen, int truncation);

/// Applies the stored generators of `result`, in order, to a field given
/// in the original coordinates.
VectorField replay(const VectorField& f, const NormalizationResult& result);

/// [[0, I_m], [-I_m, 0]].
ExactMatrix block_rotation_matrix(std::size_t m);

/// Eigenvalues (i,..,i,-i,..,-i) of block_rotation_matrix(m) with
/// P = [[I, I], [iI, -iI]].
EigenData eigenbasis_for_block_rotation(std::size_t m);

}  // namespace pdnf

#endif  // PDNF_NORMALFORM_HPP
