#ifndef PDNF_ALGEBRA_HPP
#define PDNF_ALGEBRA_HPP

#include <cstddef>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <gmpxx.h>

namespace pdnf {

using Rational = mpq_class;

class ArithmeticError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Complex number with exact rational real and imaginary parts.
///
/// Both parts are kept canonical (lowest terms, positive denominator), so
/// `operator==` is plain structural equality.
class GaussianRational {
 public:
  GaussianRational() = default;
  GaussianRational(long re) : re_(re) {}  // NOLINT(google-explicit-constructor)
  GaussianRational(Rational re, Rational im = 0);

  static GaussianRational i() { return {0, 1}; }
  static GaussianRational from_fraction(long num, long den, long im_num = 0, long im_den = 1);

  /// Parses `a`, `a/b`, `c/d*i`, `a/b+c/d*i` (optional signs, bare `i`).
  /// Throws std::invalid_argument on anything else.
  static GaussianRational parse(std::string_view text);

  const Rational& re() const { return re_; }
  const Rational& im() const { return im_; }

  bool is_zero() const { return sgn(re_) == 0 && sgn(im_) == 0; }
  bool is_real() const { return sgn(im_) == 0; }

  GaussianRational conj() const { return {re_, -im_}; }
  /// |x|^2 = re^2 + im^2.
  Rational norm2() const { return re_ * re_ + im_ * im_; }
  GaussianRational inverse() const;

  GaussianRational operator-() const { return {-re_, -im_}; }
  GaussianRational& operator+=(const GaussianRational& y);
  GaussianRational& operator-=(const GaussianRational& y);
  GaussianRational& operator*=(const GaussianRational& y);
  GaussianRational& operator/=(const GaussianRational& y);

  friend GaussianRational operator+(GaussianRational x, const GaussianRational& y) { return x += y; }
  friend GaussianRational operator-(GaussianRational x, const GaussianRational& y) { return x -= y; }
  friend GaussianRational operator*(GaussianRational x, const GaussianRational& y) { return x *= y; }
  friend GaussianRational operator/(GaussianRational x, const GaussianRational& y) { return x /= y; }

  friend bool operator==(const GaussianRational& x, const GaussianRational& y) {
    return x.re_ == y.re_ && x.im_ == y.im_;
  }
  friend bool operator!=(const GaussianRational& x, const GaussianRational& y) { return !(x == y); }

  /// Canonical text form; `parse(to_string())` is the identity.
  std::string to_string() const;

 private:
  Rational re_{0};
  Rational im_{0};
};

std::ostream& operator<<(std::ostream& os, const GaussianRational& x);

using ExactVector = std::vector<GaussianRational>;

/// Dense row-major matrix over Gaussian rationals.
class ExactMatrix {
 public:
  ExactMatrix() = default;
  ExactMatrix(std::size_t rows, std::size_t cols);
  ExactMatrix(std::initializer_list<std::initializer_list<GaussianRational>> rows);

  static ExactMatrix identity(std::size_t n);
  static ExactMatrix diagonal(const ExactVector& d);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  GaussianRational& operator()(std::size_t r, std::size_t c) { return entries_[r * cols_ + c]; }
  const GaussianRational& operator()(std::size_t r, std::size_t c) const { return entries_[r * cols_ + c]; }

  bool is_zero() const;
  bool is_square() const { return rows_ == cols_; }
  bool is_diagonal() const;
  ExactVector diagonal_entries() const;
  /// Row-major flattening.
  const ExactVector& entries() const { return entries_; }

  ExactMatrix operator-() const;
  ExactMatrix& operator+=(const ExactMatrix& y);
  ExactMatrix& operator-=(const ExactMatrix& y);
  friend ExactMatrix operator+(ExactMatrix x, const ExactMatrix& y) { return x += y; }
  friend ExactMatrix operator-(ExactMatrix x, const ExactMatrix& y) { return x -= y; }
  friend ExactMatrix operator*(const ExactMatrix& x, const ExactMatrix& y);
  friend ExactMatrix operator*(const GaussianRational& s, ExactMatrix x);
  friend ExactVector operator*(const ExactMatrix& x, const ExactVector& v);

  friend bool operator==(const ExactMatrix& x, const ExactMatrix& y) {
    return x.rows_ == y.rows_ && x.cols_ == y.cols_ && x.entries_ == y.entries_;
  }
  friend bool operator!=(const ExactMatrix& x, const ExactMatrix& y) { return !(x == y); }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  ExactVector entries_;
};

std::ostream& operator<<(std::ostream& os, const ExactMatrix& m);

/// Reduced row echelon form; pivots are chosen by increasing column index.
struct RowEchelon {
  ExactMatrix reduced;
  std::vector<std::size_t> pivot_columns;
};

RowEchelon row_reduce(ExactMatrix m);

std::size_t rank(const ExactMatrix& m);

/// Basis of the right null space.
///
/// One vector per non-pivot column, in increasing column order; each vector
/// is scaled so that its first nonzero coordinate is 1. Empty when the
/// kernel is trivial.
std::vector<ExactVector> kernel_basis(const ExactMatrix& m);

struct LinearSolution {
  ExactVector x;          // particular solution with every free unknown set to 0
  std::size_t nullity = 0;
};

/// Solves m x = b exactly; nullopt when the system is inconsistent.
std::optional<LinearSolution> solve(const ExactMatrix& m, const ExactVector& b);

std::optional<ExactMatrix> inverse(const ExactMatrix& m);

}  // namespace pdnf

#endif  // PDNF_ALGEBRA_HPP
