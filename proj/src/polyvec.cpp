#include "pdnf/polyvec.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

#include "pdnf/parallel.hpp"

namespace pdnf {

// MultiIndex

MultiIndex MultiIndex::unit(std::size_t n, std::size_t i) {
  MultiIndex q(n);
  q.exponents_.at(i) = 1;
  return q;
}

unsigned MultiIndex::degree() const { return std::accumulate(exponents_.begin(), exponents_.end(), 0u); }

MultiIndex MultiIndex::operator+(const MultiIndex& other) const {
  if (size() != other.size()) throw std::invalid_argument("multi-index length mismatch");
  MultiIndex out(*this);
  for (std::size_t i = 0; i < size(); ++i) out.exponents_[i] += other.exponents_[i];
  return out;
}

GaussianRational MultiIndex::dot(const ExactVector& a) const {
  if (a.size() != size()) throw std::invalid_argument("multi-index/eigenvalue length mismatch");
  GaussianRational s;
  for (std::size_t i = 0; i < size(); ++i) {
    if (exponents_[i] != 0) s += GaussianRational(static_cast<long>(exponents_[i])) * a[i];
  }
  return s;
}

bool operator<(const MultiIndex& x, const MultiIndex& y) {
  const unsigned dx = x.degree();
  const unsigned dy = y.degree();
  if (dx != dy) return dx < dy;
  return x.exponents_ > y.exponents_;
}

std::ostream& operator<<(std::ostream& os, const MultiIndex& q) {
  os << '(';
  for (std::size_t i = 0; i < q.size(); ++i) os << (i ? "," : "") << q[i];
  return os << ')';
}

namespace {

void fill_monomials(std::vector<unsigned>& prefix, std::size_t n, unsigned remaining, std::vector<MultiIndex>& out) {
  if (prefix.size() + 1 == n) {
    prefix.push_back(remaining);
    out.emplace_back(prefix);
    prefix.pop_back();
    return;
  }
  for (unsigned e = remaining + 1; e-- > 0;) {
    prefix.push_back(e);
    fill_monomials(prefix, n, remaining - e, out);
    prefix.pop_back();
  }
}

}  // namespace

std::vector<MultiIndex> monomials_of_degree(std::size_t n, unsigned d) {
  std::vector<MultiIndex> out;
  if (n == 0) return out;
  std::vector<unsigned> prefix;
  prefix.reserve(n);
  fill_monomials(prefix, n, d, out);
  return out;
}

// ScalarPoly

ScalarPoly ScalarPoly::variable(std::size_t n, int truncation, std::size_t i) {
  ScalarPoly p(n, truncation);
  p.add_term(MultiIndex::unit(n, i), 1);
  return p;
}

ScalarPoly ScalarPoly::constant(std::size_t n, int truncation, const GaussianRational& c) {
  ScalarPoly p(n, truncation);
  p.add_term(MultiIndex(n), c);
  return p;
}

GaussianRational ScalarPoly::coefficient(const MultiIndex& q) const {
  const auto it = terms_.find(q);
  return it == terms_.end() ? GaussianRational{} : it->second;
}

int ScalarPoly::valuation() const {
  return terms_.empty() ? truncation_ + 1 : static_cast<int>(terms_.begin()->first.degree());
}

bool ScalarPoly::is_homogeneous(unsigned d) const {
  return std::all_of(terms_.begin(), terms_.end(), [d](const auto& t) { return t.first.degree() == d; });
}

void ScalarPoly::add_term(const MultiIndex& q, const GaussianRational& c) {
  if (q.size() != n_) throw std::invalid_argument("monomial has wrong number of variables");
  if (c.is_zero() || static_cast<int>(q.degree()) > truncation_) return;
  auto [it, inserted] = terms_.try_emplace(q, c);
  if (!inserted) {
    it->second += c;
    if (it->second.is_zero()) terms_.erase(it);
  }
}

ScalarPoly ScalarPoly::truncated(int truncation) const {
  if (truncation >= truncation_) return *this;
  ScalarPoly out(n_, truncation);
  for (const auto& [q, c] : terms_) {
    if (static_cast<int>(q.degree()) > truncation) break;
    out.terms_.emplace_hint(out.terms_.end(), q, c);
  }
  return out;
}

ScalarPoly ScalarPoly::homogeneous_part(unsigned d) const {
  ScalarPoly out(n_, truncation_);
  for (const auto& [q, c] : terms_) {
    if (q.degree() == d) out.terms_.emplace_hint(out.terms_.end(), q, c);
  }
  return out;
}

ScalarPoly ScalarPoly::derivative(std::size_t i) const {
  if (i >= n_) throw std::out_of_range("derivative variable out of range");
  ScalarPoly out(n_, truncation_ - 1);
  for (const auto& [q, c] : terms_) {
    const unsigned e = q[i];
    if (e == 0) continue;
    std::vector<unsigned> lowered = q.exponents();
    --lowered[i];
    out.add_term(MultiIndex(std::move(lowered)), GaussianRational(static_cast<long>(e)) * c);
  }
  return out;
}

GaussianRational ScalarPoly::evaluate(const ExactVector& point) const {
  if (point.size() != n_) throw std::invalid_argument("evaluation point has wrong dimension");
  GaussianRational sum;
  for (const auto& [q, c] : terms_) {
    GaussianRational term = c;
    for (std::size_t i = 0; i < n_; ++i) {
      for (unsigned e = 0; e < q[i]; ++e) term *= point[i];
    }
    sum += term;
  }
  return sum;
}

ScalarPoly ScalarPoly::operator-() const {
  ScalarPoly out(*this);
  for (auto& [q, c] : out.terms_) c = -c;
  return out;
}

ScalarPoly& ScalarPoly::operator+=(const ScalarPoly& y) {
  if (n_ != y.n_) throw std::invalid_argument("polynomial dimension mismatch");
  if (y.truncation_ < truncation_) *this = truncated(y.truncation_);
  for (const auto& [q, c] : y.terms_) add_term(q, c);
  return *this;
}

ScalarPoly& ScalarPoly::operator-=(const ScalarPoly& y) { return *this += -y; }

ScalarPoly& ScalarPoly::operator*=(const GaussianRational& s) {
  if (s.is_zero()) {
    terms_.clear();
    return *this;
  }
  for (auto& [q, c] : terms_) c *= s;
  return *this;
}

ScalarPoly multiply_to(const ScalarPoly& x, const ScalarPoly& y, int truncation) {
  if (x.dimension() != y.dimension()) throw std::invalid_argument("polynomial dimension mismatch");
  ScalarPoly out(x.dimension(), truncation);
  for (const auto& [qx, cx] : x.terms()) {
    const int dx = static_cast<int>(qx.degree());
    if (dx > truncation) break;
    for (const auto& [qy, cy] : y.terms()) {
      if (dx + static_cast<int>(qy.degree()) > truncation) break;
      out.add_term(qx + qy, cx * cy);
    }
  }
  return out;
}

ScalarPoly operator*(const ScalarPoly& x, const ScalarPoly& y) {
  const int t = std::min(x.truncation() + y.valuation(), y.truncation() + x.valuation());
  return multiply_to(x, y, t);
}

ScalarPoly compose(const ScalarPoly& p, const std::vector<ScalarPoly>& substitutes, int truncation) {
  if (substitutes.size() != p.dimension()) throw std::invalid_argument("substitution has wrong arity");
  if (substitutes.empty()) return p.truncated(truncation);
  const std::size_t m = substitutes.front().dimension();
  for (const auto& s : substitutes) {
    if (s.dimension() != m) throw std::invalid_argument("substitutes live in different dimensions");
    if (!s.coefficient(MultiIndex(m)).is_zero()) throw std::invalid_argument("substitute has a constant term");
  }

  // powers[i][e] = substitutes[i]^e, built on demand.
  std::vector<std::vector<ScalarPoly>> powers(p.dimension());
  auto power = [&](std::size_t i, unsigned e) -> const ScalarPoly& {
    auto& cache = powers[i];
    if (cache.empty()) cache.push_back(ScalarPoly::constant(m, truncation, 1));
    while (cache.size() <= e) cache.push_back(multiply_to(cache.back(), substitutes[i], truncation));
    return cache[e];
  };

  ScalarPoly out(m, truncation);
  for (const auto& [q, c] : p.terms()) {
    if (static_cast<int>(q.degree()) > truncation) break;
    ScalarPoly term = ScalarPoly::constant(m, truncation, c);
    for (std::size_t i = 0; i < q.size(); ++i) {
      if (q[i] != 0) term = multiply_to(term, power(i, q[i]), truncation);
    }
    out += term;
  }
  return out;
}

std::ostream& operator<<(std::ostream& os, const ScalarPoly& p) {
  if (p.is_zero()) return os << '0';
  bool first = true;
  for (const auto& [q, c] : p.terms()) {
    os << (first ? "" : " + ") << '(' << c << ")*u^" << q;
    first = false;
  }
  return os;
}

// VectorField

VectorField::VectorField(std::size_t n, int truncation)
    : n_(n), truncation_(truncation), linear_(n, n), nonlinear_(n, ScalarPoly(n, truncation)) {
  if (truncation < 1) throw std::invalid_argument("vector field truncation must be at least 1");
}

VectorField::VectorField(ExactMatrix linear, int truncation) : VectorField(linear.rows(), truncation) {
  if (!linear.is_square()) throw std::invalid_argument("linear part must be square");
  linear_ = std::move(linear);
}

VectorField VectorField::from_components(const std::vector<ScalarPoly>& components, int truncation) {
  VectorField f(components.size(), truncation);
  for (std::size_t j = 0; j < components.size(); ++j) {
    if (components[j].dimension() != f.n_) throw std::invalid_argument("component has wrong dimension");
    for (const auto& [q, c] : components[j].terms()) f.add_term(j, q, c);
  }
  return f;
}

ScalarPoly VectorField::component(std::size_t j) const {
  ScalarPoly p = nonlinear_.at(j);
  for (std::size_t i = 0; i < n_; ++i) p.add_term(MultiIndex::unit(n_, i), linear_(j, i));
  return p;
}

std::vector<ScalarPoly> VectorField::components() const {
  std::vector<ScalarPoly> out;
  out.reserve(n_);
  for (std::size_t j = 0; j < n_; ++j) out.push_back(component(j));
  return out;
}

std::vector<VectorField::Term> VectorField::nonlinear_terms() const {
  std::vector<Term> out;
  for (std::size_t j = 0; j < n_; ++j) {
    for (const auto& [q, c] : nonlinear_[j].terms()) out.push_back({j, q, c});
  }
  return out;
}

bool VectorField::is_zero() const {
  return linear_.is_zero() &&
         std::all_of(nonlinear_.begin(), nonlinear_.end(), [](const auto& p) { return p.is_zero(); });
}

bool VectorField::is_linear() const {
  return std::all_of(nonlinear_.begin(), nonlinear_.end(), [](const auto& p) { return p.is_zero(); });
}

int VectorField::valuation() const {
  if (!linear_.is_zero()) return 1;
  int v = truncation_ + 1;
  for (const auto& p : nonlinear_) v = std::min(v, p.valuation());
  return v;
}

void VectorField::add_term(std::size_t component, const MultiIndex& q, const GaussianRational& c) {
  if (component >= n_) throw std::out_of_range("component index out of range");
  if (q.size() != n_) throw std::invalid_argument("monomial has wrong number of variables");
  const unsigned d = q.degree();
  if (d == 0) {
    if (!c.is_zero()) throw std::invalid_argument("vector fields have no constant terms");
    return;
  }
  if (d == 1) {
    const auto i = static_cast<std::size_t>(
        std::find(q.exponents().begin(), q.exponents().end(), 1u) - q.exponents().begin());
    linear_(component, i) += c;
    return;
  }
  nonlinear_[component].add_term(q, c);
}

VectorField VectorField::truncated(int truncation) const {
  if (truncation >= truncation_) return *this;
  VectorField out(linear_, truncation);
  for (std::size_t j = 0; j < n_; ++j) out.nonlinear_[j] = nonlinear_[j].truncated(truncation);
  return out;
}

VectorField VectorField::nonlinear_part() const {
  VectorField out(*this);
  out.linear_ = ExactMatrix(n_, n_);
  return out;
}

VectorField VectorField::with_linear_part(ExactMatrix linear) const {
  if (linear.rows() != n_ || linear.cols() != n_) throw std::invalid_argument("linear part has wrong shape");
  VectorField out(*this);
  out.linear_ = std::move(linear);
  return out;
}

ExactVector VectorField::evaluate(const ExactVector& point) const {
  if (point.size() != n_) throw std::invalid_argument("evaluation point has wrong dimension");
  ExactVector out = linear_ * point;
  for (std::size_t j = 0; j < n_; ++j) out[j] += nonlinear_[j].evaluate(point);
  return out;
}

VectorField VectorField::operator-() const {
  VectorField out(*this);
  return out *= -1;
}

VectorField& VectorField::operator+=(const VectorField& y) {
  if (n_ != y.n_) throw std::invalid_argument("vector field dimension mismatch");
  truncation_ = std::min(truncation_, y.truncation_);
  linear_ += y.linear_;
  for (std::size_t j = 0; j < n_; ++j) {
    nonlinear_[j] += y.nonlinear_[j];
    nonlinear_[j] = nonlinear_[j].truncated(truncation_);
  }
  return *this;
}

VectorField& VectorField::operator-=(const VectorField& y) { return *this += -y; }

VectorField& VectorField::operator*=(const GaussianRational& s) {
  linear_ = s * linear_;
  for (auto& p : nonlinear_) p *= s;
  return *this;
}

VectorField operator*(const ScalarPoly& s, const VectorField& f) {
  if (s.dimension() != f.dimension()) throw std::invalid_argument("scalar factor has wrong dimension");
  std::vector<ScalarPoly> comps;
  int t = f.truncation() + s.valuation();
  for (std::size_t j = 0; j < f.dimension(); ++j) {
    comps.push_back(s * f.component(j));
    t = std::min(t, comps.back().truncation());
  }
  return VectorField::from_components(comps, t);
}

std::ostream& operator<<(std::ostream& os, const VectorField& f) {
  os << "VectorField(n=" << f.dimension() << ", N=" << f.truncation() << ", A=" << f.linear_part();
  for (const auto& t : f.nonlinear_terms()) {
    os << ", [" << t.component + 1 << "]" << t.exponents << ":" << t.coeff;
  }
  return os << ')';
}

VectorField lie_bracket(const VectorField& f, const VectorField& g) {
  if (f.dimension() != g.dimension()) throw std::invalid_argument("lie_bracket: dimension mismatch");
  const std::size_t n = f.dimension();
  const auto fc = f.components();
  const auto gc = g.components();

  std::vector<ScalarPoly> out(n);
  parallel_for(n, [&](std::size_t k) {
    ScalarPoly acc(n, std::min(f.truncation(), g.truncation()) + std::max(f.truncation(), g.truncation()));
    for (std::size_t i = 0; i < n; ++i) {
      if (!fc[i].is_zero()) acc += fc[i] * gc[k].derivative(i);
      if (!gc[i].is_zero()) acc -= gc[i] * fc[k].derivative(i);
    }
    out[k] = std::move(acc);
  });

  // Sound truncation: degree d of the bracket pairs f-degree d1 with
  // g-degree d - d1 + 1, so it is fully known iff
  // d <= min(N_f + v_g - 1, N_g + v_f - 1).
  const int t = std::min(f.truncation() + g.valuation() - 1, g.truncation() + f.valuation() - 1);
  return VectorField::from_components(out, t);
}

VectorField homogeneous_part(const VectorField& f, unsigned d) {
  if (d < 1 || static_cast<int>(d) > f.truncation()) throw std::out_of_range("homogeneous_part: degree out of range");
  if (d == 1) return VectorField(f.linear_part(), f.truncation());
  VectorField out(f.dimension(), f.truncation());
  for (const auto& t : f.nonlinear_terms()) {
    if (t.exponents.degree() == d) out.add_term(t.component, t.exponents, t.coeff);
  }
  return out;
}

ScalarPoly directional_derivative(const VectorField& f, const ScalarPoly& p) {
  if (f.dimension() != p.dimension()) throw std::invalid_argument("directional_derivative: dimension mismatch");
  ScalarPoly acc(p.dimension(), f.truncation() + p.truncation());
  for (std::size_t i = 0; i < f.dimension(); ++i) {
    const ScalarPoly fi = f.component(i);
    if (!fi.is_zero()) acc += fi * p.derivative(i);
  }
  return acc;
}

VectorField conjugate_linear(const VectorField& f, const ExactMatrix& p, const ExactMatrix& p_inverse) {
  const std::size_t n = f.dimension();
  if (p.rows() != n || p.cols() != n || p_inverse.rows() != n || p_inverse.cols() != n) {
    throw std::invalid_argument("conjugate_linear: matrix shape mismatch");
  }
  std::vector<ScalarPoly> substitutes;
  for (std::size_t i = 0; i < n; ++i) {
    ScalarPoly s(n, f.truncation());
    for (std::size_t j = 0; j < n; ++j) s.add_term(MultiIndex::unit(n, j), p(i, j));
    substitutes.push_back(std::move(s));
  }
  std::vector<ScalarPoly> composed;
  for (std::size_t i = 0; i < n; ++i) composed.push_back(compose(f.component(i), substitutes, f.truncation()));

  std::vector<ScalarPoly> out;
  for (std::size_t k = 0; k < n; ++k) {
    ScalarPoly acc(n, f.truncation());
    for (std::size_t i = 0; i < n; ++i) {
      if (!p_inverse(k, i).is_zero()) acc += p_inverse(k, i) * composed[i];
    }
    out.push_back(std::move(acc));
  }
  return VectorField::from_components(out, f.truncation());
}

}  // namespace pdnf
