#ifndef PDNF_POLYVEC_HPP
#define PDNF_POLYVEC_HPP

#include <cstddef>
#include <map>
#include <optional>
#include <ostream>
#include <vector>

#include "pdnf/algebra.hpp"

namespace pdnf {

/// Exponent vector q of the monomial u^q.
///
/// Ordering is graded: lower total degree first, and within one degree the
/// lexicographically larger exponent vector first (u1^2 < u1 u2 < u2^2).
class MultiIndex {
 public:
  MultiIndex() = default;
  explicit MultiIndex(std::size_t n) : exponents_(n, 0) {}
  MultiIndex(std::initializer_list<unsigned> exponents) : exponents_(exponents) {}
  explicit MultiIndex(std::vector<unsigned> exponents) : exponents_(std::move(exponents)) {}

  static MultiIndex unit(std::size_t n, std::size_t i);

  std::size_t size() const { return exponents_.size(); }
  unsigned degree() const;
  unsigned operator[](std::size_t i) const { return exponents_[i]; }
  const std::vector<unsigned>& exponents() const { return exponents_; }

  MultiIndex operator+(const MultiIndex& other) const;

  /// (q, a) = sum q_i a_i.
  GaussianRational dot(const ExactVector& a) const;

  friend bool operator==(const MultiIndex& x, const MultiIndex& y) { return x.exponents_ == y.exponents_; }
  friend bool operator!=(const MultiIndex& x, const MultiIndex& y) { return !(x == y); }
  friend bool operator<(const MultiIndex& x, const MultiIndex& y);

 private:
  std::vector<unsigned> exponents_;
};

std::ostream& operator<<(std::ostream& os, const MultiIndex& q);

/// All multi-indices of length n and total degree d, in MultiIndex order.
std::vector<MultiIndex> monomials_of_degree(std::size_t n, unsigned d);

/// Truncated polynomial in n variables.
///
/// Terms above the truncation degree are unknown rather than zero; products
/// and derivatives shrink the truncation to the highest degree that is still
/// fully determined by the operands.
class ScalarPoly {
 public:
  using TermMap = std::map<MultiIndex, GaussianRational>;

  ScalarPoly() = default;
  ScalarPoly(std::size_t n, int truncation) : n_(n), truncation_(truncation) {}

  static ScalarPoly variable(std::size_t n, int truncation, std::size_t i);
  static ScalarPoly constant(std::size_t n, int truncation, const GaussianRational& c);

  std::size_t dimension() const { return n_; }
  int truncation() const { return truncation_; }
  const TermMap& terms() const { return terms_; }
  GaussianRational coefficient(const MultiIndex& q) const;

  bool is_zero() const { return terms_.empty(); }
  /// Lowest degree carrying a nonzero term, or truncation+1 for the zero
  /// polynomial (nothing nonzero is known below that degree).
  int valuation() const;
  bool is_homogeneous(unsigned d) const;

  /// Adds c u^q; terms above the truncation are discarded and zero sums
  /// are removed.
  void add_term(const MultiIndex& q, const GaussianRational& c);

  ScalarPoly truncated(int truncation) const;
  ScalarPoly homogeneous_part(unsigned d) const;
  ScalarPoly derivative(std::size_t i) const;
  GaussianRational evaluate(const ExactVector& point) const;

  ScalarPoly operator-() const;
  ScalarPoly& operator+=(const ScalarPoly& y);
  ScalarPoly& operator-=(const ScalarPoly& y);
  ScalarPoly& operator*=(const GaussianRational& s);
  friend ScalarPoly operator+(ScalarPoly x, const ScalarPoly& y) { return x += y; }
  friend ScalarPoly operator-(ScalarPoly x, const ScalarPoly& y) { return x -= y; }
  friend ScalarPoly operator*(const GaussianRational& s, ScalarPoly x) { return x *= s; }
  friend ScalarPoly operator*(const ScalarPoly& x, const ScalarPoly& y);

  friend bool operator==(const ScalarPoly& x, const ScalarPoly& y) {
    return x.n_ == y.n_ && x.truncation_ == y.truncation_ && x.terms_ == y.terms_;
  }
  friend bool operator!=(const ScalarPoly& x, const ScalarPoly& y) { return !(x == y); }

 private:
  std::size_t n_ = 0;
  int truncation_ = 0;
  TermMap terms_;
};

std::ostream& operator<<(std::ostream& os, const ScalarPoly& p);

/// Product truncated at an explicit degree, ignoring the operands' own
/// truncations.
ScalarPoly multiply_to(const ScalarPoly& x, const ScalarPoly& y, int truncation);

/// p(s_1(v), ..., s_n(v)) truncated at `truncation`. The substitutes must
/// have no constant term.
ScalarPoly compose(const ScalarPoly& p, const std::vector<ScalarPoly>& substitutes, int truncation);

/// Polynomial vector field u -> A u + F(u), truncated at degree N.
///
/// The linear part is held as a matrix; the nonlinear part holds degrees
/// 2..N per component. There is never a constant term.
class VectorField {
 public:
  struct Term {
    std::size_t component;
    MultiIndex exponents;
    GaussianRational coeff;
  };

  VectorField() = default;
  VectorField(std::size_t n, int truncation);
  VectorField(ExactMatrix linear, int truncation);

  /// Builds a field from full component polynomials (degree 1 terms go to
  /// the matrix). Throws if any component has a constant term.
  static VectorField from_components(const std::vector<ScalarPoly>& components, int truncation);

  std::size_t dimension() const { return n_; }
  int truncation() const { return truncation_; }
  const ExactMatrix& linear_part() const { return linear_; }
  const ScalarPoly& nonlinear(std::size_t j) const { return nonlinear_[j]; }
  /// Full j-th component, linear terms included.
  ScalarPoly component(std::size_t j) const;
  std::vector<ScalarPoly> components() const;
  /// Nonlinear terms sorted by (component, exponents).
  std::vector<Term> nonlinear_terms() const;

  bool is_zero() const;
  bool is_linear() const;
  /// Lowest degree carrying a nonzero term, or truncation+1 for the zero field.
  int valuation() const;

  void add_term(std::size_t component, const MultiIndex& q, const GaussianRational& c);

  VectorField truncated(int truncation) const;
  VectorField nonlinear_part() const;
  VectorField with_linear_part(ExactMatrix linear) const;
  ExactVector evaluate(const ExactVector& point) const;

  VectorField operator-() const;
  VectorField& operator+=(const VectorField& y);
  VectorField& operator-=(const VectorField& y);
  VectorField& operator*=(const GaussianRational& s);
  friend VectorField operator+(VectorField x, const VectorField& y) { return x += y; }
  friend VectorField operator-(VectorField x, const VectorField& y) { return x -= y; }
  friend VectorField operator*(const GaussianRational& s, VectorField x) { return x *= s; }
  /// Scalar-function multiple s(u) f(u).
  friend VectorField operator*(const ScalarPoly& s, const VectorField& f);

  friend bool operator==(const VectorField& x, const VectorField& y) {
    return x.n_ == y.n_ && x.truncation_ == y.truncation_ && x.linear_ == y.linear_ &&
           x.nonlinear_ == y.nonlinear_;
  }
  friend bool operator!=(const VectorField& x, const VectorField& y) { return !(x == y); }

 private:
  std::size_t n_ = 0;
  int truncation_ = 0;
  ExactMatrix linear_;
  std::vector<ScalarPoly> nonlinear_;
};

std::ostream& operator<<(std::ostream& os, const VectorField& f);

/// {f,g}_k = (f.grad) g_k - (g.grad) f_k. The result truncation is the
/// highest degree fully determined by the truncated operands.
VectorField lie_bracket(const VectorField& f, const VectorField& g);

/// Degree-d slice of f (d = 1 gives the linear part). Throws
/// std::out_of_range unless 1 <= d <= truncation.
VectorField homogeneous_part(const VectorField& f, unsigned d);

/// (f . grad) p.
ScalarPoly directional_derivative(const VectorField& f, const ScalarPoly& p);

/// Exact linear change of coordinates u = P w: returns P^{-1} f(P w).
VectorField conjugate_linear(const VectorField& f, const ExactMatrix& p, const ExactMatrix& p_inverse);

}  // namespace pdnf

#endif  // PDNF_POLYVEC_HPP
