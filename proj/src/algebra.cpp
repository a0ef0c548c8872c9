#include "pdnf/algebra.hpp"

#include <regex>
#include <sstream>
#include <utility>

namespace pdnf {

namespace {

Rational parse_rational(std::string text) {
  if (!text.empty() && text.front() == '+') text.erase(0, 1);
  Rational r;
  const auto slash = text.find('/');
  if (slash != std::string::npos && text.find_first_not_of('0', slash + 1) == std::string::npos) {
    throw std::invalid_argument("zero denominator in coefficient");
  }
  if (r.set_str(text, 10) != 0) {
    throw std::invalid_argument("bad rational '" + text + "'");
  }
  r.canonicalize();
  return r;
}

Rational parse_imag_magnitude(const std::string& sign, const std::string& magnitude) {
  Rational m = magnitude.empty() ? Rational(1) : parse_rational(magnitude);
  return sign == "-" ? Rational(-m) : m;
}

std::string format_imag(const Rational& im) {
  if (im == 1) return "i";
  if (im == -1) return "-i";
  return im.get_str() + "*i";
}

}  // namespace

GaussianRational::GaussianRational(Rational re, Rational im) : re_(std::move(re)), im_(std::move(im)) {
  re_.canonicalize();
  im_.canonicalize();
}

GaussianRational GaussianRational::from_fraction(long num, long den, long im_num, long im_den) {
  if (den == 0 || im_den == 0) throw ArithmeticError("zero denominator");
  return {Rational(num, den), Rational(im_num, im_den)};
}

GaussianRational GaussianRational::parse(std::string_view text) {
  static const std::regex real_only(R"(([+-]?[0-9]+(?:/[0-9]+)?))");
  static const std::regex imag_only(R"(([+-]?)(?:([0-9]+(?:/[0-9]+)?)\*)?i)");
  static const std::regex both(R"(([+-]?[0-9]+(?:/[0-9]+)?)([+-])(?:([0-9]+(?:/[0-9]+)?)\*)?i)");

  const std::string s(text);
  std::smatch m;
  if (std::regex_match(s, m, real_only)) {
    return {parse_rational(m[1].str()), 0};
  }
  if (std::regex_match(s, m, imag_only)) {
    return {0, parse_imag_magnitude(m[1].str(), m[2].str())};
  }
  if (std::regex_match(s, m, both)) {
    return {parse_rational(m[1].str()), parse_imag_magnitude(m[2].str(), m[3].str())};
  }
  throw std::invalid_argument("bad coefficient '" + s + "'");
}

GaussianRational GaussianRational::inverse() const {
  if (is_zero()) throw ArithmeticError("division by zero");
  const Rational n = norm2();
  return {re_ / n, -im_ / n};
}

GaussianRational& GaussianRational::operator+=(const GaussianRational& y) {
  re_ += y.re_;
  im_ += y.im_;
  return *this;
}

GaussianRational& GaussianRational::operator-=(const GaussianRational& y) {
  re_ -= y.re_;
  im_ -= y.im_;
  return *this;
}

GaussianRational& GaussianRational::operator*=(const GaussianRational& y) {
  if (sgn(im_) == 0 && sgn(y.im_) == 0) {
    re_ *= y.re_;
    return *this;
  }
  Rational re = re_ * y.re_ - im_ * y.im_;
  Rational im = re_ * y.im_ + im_ * y.re_;
  re_ = std::move(re);
  im_ = std::move(im);
  return *this;
}

GaussianRational& GaussianRational::operator/=(const GaussianRational& y) {
  if (y.is_zero()) throw ArithmeticError("division by zero");
  if (sgn(im_) == 0 && sgn(y.im_) == 0) {
    re_ /= y.re_;
    return *this;
  }
  return *this *= y.inverse();
}

std::string GaussianRational::to_string() const {
  if (sgn(im_) == 0) return re_.get_str();
  if (sgn(re_) == 0) return format_imag(im_);
  return re_.get_str() + (sgn(im_) > 0 ? "+" : "") + format_imag(im_);
}

std::ostream& operator<<(std::ostream& os, const GaussianRational& x) { return os << x.to_string(); }

// ExactMatrix

ExactMatrix::ExactMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), entries_(rows * cols) {}

ExactMatrix::ExactMatrix(std::initializer_list<std::initializer_list<GaussianRational>> rows) {
  rows_ = rows.size();
  cols_ = rows_ == 0 ? 0 : rows.begin()->size();
  entries_.reserve(rows_ * cols_);
  for (const auto& row : rows) {
    if (row.size() != cols_) throw std::invalid_argument("ragged matrix initializer");
    entries_.insert(entries_.end(), row.begin(), row.end());
  }
}

ExactMatrix ExactMatrix::identity(std::size_t n) {
  ExactMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
  return m;
}

ExactMatrix ExactMatrix::diagonal(const ExactVector& d) {
  ExactMatrix m(d.size(), d.size());
  for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
  return m;
}

bool ExactMatrix::is_zero() const {
  for (const auto& e : entries_) {
    if (!e.is_zero()) return false;
  }
  return true;
}

bool ExactMatrix::is_diagonal() const {
  if (!is_square()) return false;
  for (std::size_t r = 0; r < rows_; ++r) {
    for (std::size_t c = 0; c < cols_; ++c) {
      if (r != c && !(*this)(r, c).is_zero()) return false;
    }
  }
  return true;
}

ExactVector ExactMatrix::diagonal_entries() const {
  ExactVector d;
  for (std::size_t i = 0; i < std::min(rows_, cols_); ++i) d.push_back((*this)(i, i));
  return d;
}

ExactMatrix ExactMatrix::operator-() const {
  ExactMatrix m(*this);
  for (auto& e : m.entries_) e = -e;
  return m;
}

ExactMatrix& ExactMatrix::operator+=(const ExactMatrix& y) {
  if (rows_ != y.rows_ || cols_ != y.cols_) throw std::invalid_argument("matrix shape mismatch");
  for (std::size_t k = 0; k < entries_.size(); ++k) entries_[k] += y.entries_[k];
  return *this;
}

ExactMatrix& ExactMatrix::operator-=(const ExactMatrix& y) {
  if (rows_ != y.rows_ || cols_ != y.cols_) throw std::invalid_argument("matrix shape mismatch");
  for (std::size_t k = 0; k < entries_.size(); ++k) entries_[k] -= y.entries_[k];
  return *this;
}

ExactMatrix operator*(const ExactMatrix& x, const ExactMatrix& y) {
  if (x.cols_ != y.rows_) throw std::invalid_argument("matrix shape mismatch");
  ExactMatrix out(x.rows_, y.cols_);
  for (std::size_t r = 0; r < x.rows_; ++r) {
    for (std::size_t k = 0; k < x.cols_; ++k) {
      const auto& a = x(r, k);
      if (a.is_zero()) continue;
      for (std::size_t c = 0; c < y.cols_; ++c) {
        if (!y(k, c).is_zero()) out(r, c) += a * y(k, c);
      }
    }
  }
  return out;
}

ExactMatrix operator*(const GaussianRational& s, ExactMatrix x) {
  for (auto& e : x.entries_) e *= s;
  return x;
}

ExactVector operator*(const ExactMatrix& x, const ExactVector& v) {
  if (x.cols_ != v.size()) throw std::invalid_argument("matrix/vector shape mismatch");
  ExactVector out(x.rows_);
  for (std::size_t r = 0; r < x.rows_; ++r) {
    for (std::size_t c = 0; c < x.cols_; ++c) {
      if (!x(r, c).is_zero() && !v[c].is_zero()) out[r] += x(r, c) * v[c];
    }
  }
  return out;
}

std::ostream& operator<<(std::ostream& os, const ExactMatrix& m) {
  os << '[';
  for (std::size_t r = 0; r < m.rows(); ++r) {
    os << (r ? ", [" : "[");
    for (std::size_t c = 0; c < m.cols(); ++c) os << (c ? ", " : "") << m(r, c);
    os << ']';
  }
  return os << ']';
}

// Gaussian elimination

RowEchelon row_reduce(ExactMatrix m) {
  RowEchelon out;
  std::size_t row = 0;
  for (std::size_t col = 0; col < m.cols() && row < m.rows(); ++col) {
    std::size_t pivot = row;
    while (pivot < m.rows() && m(pivot, col).is_zero()) ++pivot;
    if (pivot == m.rows()) continue;
    if (pivot != row) {
      for (std::size_t c = col; c < m.cols(); ++c) std::swap(m(pivot, c), m(row, c));
    }
    const GaussianRational inv = m(row, col).inverse();
    for (std::size_t c = col; c < m.cols(); ++c) m(row, c) *= inv;
    for (std::size_t r = 0; r < m.rows(); ++r) {
      if (r == row || m(r, col).is_zero()) continue;
      const GaussianRational factor = m(r, col);
      for (std::size_t c = col; c < m.cols(); ++c) {
        if (!m(row, c).is_zero()) m(r, c) -= factor * m(row, c);
      }
    }
    out.pivot_columns.push_back(col);
    ++row;
  }
  out.reduced = std::move(m);
  return out;
}

std::size_t rank(const ExactMatrix& m) { return row_reduce(m).pivot_columns.size(); }

std::vector<ExactVector> kernel_basis(const ExactMatrix& m) {
  const RowEchelon ech = row_reduce(m);
  std::vector<bool> is_pivot(m.cols(), false);
  for (auto c : ech.pivot_columns) is_pivot[c] = true;

  std::vector<ExactVector> basis;
  for (std::size_t free = 0; free < m.cols(); ++free) {
    if (is_pivot[free]) continue;
    ExactVector v(m.cols());
    v[free] = 1;
    for (std::size_t r = 0; r < ech.pivot_columns.size(); ++r) {
      v[ech.pivot_columns[r]] = -ech.reduced(r, free);
    }
    for (const auto& lead : v) {
      if (lead.is_zero()) continue;
      if (lead != 1) {
        const GaussianRational inv = lead.inverse();
        for (auto& e : v) e *= inv;
      }
      break;
    }
    basis.push_back(std::move(v));
  }
  return basis;
}

std::optional<LinearSolution> solve(const ExactMatrix& m, const ExactVector& b) {
  if (b.size() != m.rows()) throw std::invalid_argument("right-hand side length mismatch");
  ExactMatrix augmented(m.rows(), m.cols() + 1);
  for (std::size_t r = 0; r < m.rows(); ++r) {
    for (std::size_t c = 0; c < m.cols(); ++c) augmented(r, c) = m(r, c);
    augmented(r, m.cols()) = b[r];
  }
  const RowEchelon ech = row_reduce(std::move(augmented));
  if (!ech.pivot_columns.empty() && ech.pivot_columns.back() == m.cols()) return std::nullopt;

  LinearSolution sol;
  sol.x.assign(m.cols(), GaussianRational{});
  for (std::size_t r = 0; r < ech.pivot_columns.size(); ++r) {
    sol.x[ech.pivot_columns[r]] = ech.reduced(r, m.cols());
  }
  sol.nullity = m.cols() - ech.pivot_columns.size();
  return sol;
}

std::optional<ExactMatrix> inverse(const ExactMatrix& m) {
  if (!m.is_square()) return std::nullopt;
  const std::size_t n = m.rows();
  ExactMatrix augmented(n, 2 * n);
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < n; ++c) augmented(r, c) = m(r, c);
    augmented(r, n + r) = 1;
  }
  const RowEchelon ech = row_reduce(std::move(augmented));
  if (ech.pivot_columns.size() < n || ech.pivot_columns[n - 1] != n - 1) return std::nullopt;
  ExactMatrix inv(n, n);
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < n; ++c) inv(r, c) = ech.reduced(r, n + c);
  }
  return inv;
}

}  // namespace pdnf
