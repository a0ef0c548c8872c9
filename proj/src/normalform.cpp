#include "pdnf/normalform.hpp"

#include <algorithm>

namespace pdnf {

// EigenData

EigenData::EigenData(ExactVector eigenvalues) : eigenvalues_(std::move(eigenvalues)) {}

EigenData::EigenData(ExactVector eigenvalues, ExactMatrix basis) : eigenvalues_(std::move(eigenvalues)) {
  if (basis.rows() != eigenvalues_.size() || basis.cols() != eigenvalues_.size()) {
    throw InconsistentEigenData("eigenbasis has wrong shape");
  }
  auto inv = inverse(basis);
  if (!inv) throw InconsistentEigenData("eigenbasis is singular");
  basis_ = std::move(basis);
  basis_inverse_ = std::move(inv);
}

bool EigenData::diagonalizes(const ExactMatrix& a) const {
  if (a.rows() != dimension() || a.cols() != dimension()) return false;
  return to_eigencoordinates(a) == ExactMatrix::diagonal(eigenvalues_);
}

VectorField EigenData::to_eigencoordinates(const VectorField& f) const {
  if (f.dimension() != dimension()) throw std::invalid_argument("eigen data has wrong dimension");
  return basis_ ? conjugate_linear(f, *basis_, *basis_inverse_) : f;
}

ExactMatrix EigenData::to_eigencoordinates(const ExactMatrix& m) const {
  return basis_ ? (*basis_inverse_) * m * (*basis_) : m;
}

bool NormalizationResult::all_generators_zero() const {
  return std::all_of(generators.begin(), generators.end(), [](const auto& g) { return g.is_zero(); });
}

// Homological operator

bool is_resonant(const MultiIndex& q, std::size_t j, const ExactVector& a) {
  if (j >= a.size()) throw std::out_of_range("is_resonant: component out of range");
  return q.dot(a) == a[j];
}

VectorField homological_apply(const ExactVector& a, const VectorField& h) {
  const std::size_t n = h.dimension();
  if (a.size() != n) throw std::invalid_argument("homological_apply: dimension mismatch");
  VectorField out(n, h.truncation());
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t i = 0; i < n; ++i) {
      const auto& b = h.linear_part()(j, i);
      if (!b.is_zero()) out.add_term(j, MultiIndex::unit(n, i), (a[i] - a[j]) * b);
    }
  }
  for (const auto& t : h.nonlinear_terms()) {
    out.add_term(t.component, t.exponents, (t.exponents.dot(a) - a[t.component]) * t.coeff);
  }
  return out;
}

HomologicalSplit solve_homological(const ExactVector& a, const VectorField& homogeneous) {
  const std::size_t n = homogeneous.dimension();
  if (a.size() != n) throw std::invalid_argument("solve_homological: dimension mismatch");
  HomologicalSplit split{VectorField(n, homogeneous.truncation()), VectorField(n, homogeneous.truncation())};
  for (const auto& t : homogeneous.nonlinear_terms()) {
    const GaussianRational divisor = t.exponents.dot(a) - a[t.component];
    if (divisor.is_zero()) {
      split.resonant_remainder.add_term(t.component, t.exponents, t.coeff);
    } else {
      split.generator.add_term(t.component, t.exponents, t.coeff / divisor);
    }
  }
  return split;
}

// Near-identity changes of coordinates

VectorField pushforward(const VectorField& f, const VectorField& generator, int truncation) {
  const std::size_t n = f.dimension();
  if (generator.dimension() != n) throw std::invalid_argument("pushforward: dimension mismatch");
  const int t = std::min(truncation, f.truncation());
  if (generator.is_zero()) return f.truncated(t);

  const int d = generator.valuation();
  if (d < 2 || !generator.linear_part().is_zero()) {
    throw std::invalid_argument("pushforward: generator must start at degree 2");
  }
  for (std::size_t j = 0; j < n; ++j) {
    if (!generator.nonlinear(j).is_homogeneous(static_cast<unsigned>(d))) {
      throw std::invalid_argument("pushforward: generator must be homogeneous");
    }
  }

  std::vector<ScalarPoly> substitutes;
  for (std::size_t i = 0; i < n; ++i) {
    ScalarPoly s = ScalarPoly::variable(n, t, i);
    s += generator.nonlinear(i).truncated(t);
    substitutes.push_back(std::move(s));
  }

  std::vector<ScalarPoly> rhs;
  for (std::size_t k = 0; k < n; ++k) rhs.push_back(compose(f.component(k), substitutes, t));

  // jac[k][i] = d generator_k / d v_i, homogeneous of degree d - 1.
  std::vector<std::vector<ScalarPoly>> jac(n);
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t i = 0; i < n; ++i) jac[k].push_back(generator.nonlinear(k).derivative(i));
  }

  // w = rhs - Dg(v) w; each pass fixes d - 1 more degrees.
  std::vector<ScalarPoly> w = rhs;
  for (int pass = 0; pass <= t; ++pass) {
    std::vector<ScalarPoly> next = rhs;
    for (std::size_t k = 0; k < n; ++k) {
      for (std::size_t i = 0; i < n; ++i) {
        if (!jac[k][i].is_zero()) next[k] -= multiply_to(jac[k][i], w[i], t);
      }
    }
    if (next == w) break;
    w = std::move(next);
  }
  return VectorField::from_components(w, t);
}

NormalizationResult normalize(const VectorField& f, const EigenData& eigen, int truncation) {
  if (truncation < 2) throw std::invalid_argument("normalize: truncation degree must be at least 2");
  if (truncation > f.truncation()) {
    throw std::invalid_argument("normalize: truncation degree exceeds the field's truncation");
  }
  if (!eigen.diagonalizes(f.linear_part())) {
    throw InconsistentEigenData("normalize: eigen data does not diagonalize the linear part");
  }

  NormalizationResult result{eigen.to_eigencoordinates(f.truncated(truncation)), {}, eigen, truncation};
  const ExactVector& a = eigen.eigenvalues();
  for (int d = 2; d <= truncation; ++d) {
    auto split = solve_homological(a, homogeneous_part(result.normal_form, static_cast<unsigned>(d)));
    if (!split.generator.is_zero()) {
      result.normal_form = pushforward(result.normal_form, split.generator, truncation);
    }
    result.generators.push_back(std::move(split.generator));
  }
  return result;
}

VectorField replay(const VectorField& f, const NormalizationResult& result) {
  VectorField current = result.eigen.to_eigencoordinates(f.truncated(result.truncation));
  for (const auto& g : result.generators) {
    if (!g.is_zero()) current = pushforward(current, g, result.truncation);
  }
  return current;
}

ExactMatrix block_rotation_matrix(std::size_t m) {
  ExactMatrix a(2 * m, 2 * m);
  for (std::size_t k = 0; k < m; ++k) {
    a(k, m + k) = 1;
    a(m + k, k) = -1;
  }
  return a;
}

EigenData eigenbasis_for_block_rotation(std::size_t m) {
  if (m == 0) throw std::invalid_argument("block rotation needs m >= 1");
  ExactVector a(2 * m);
  ExactMatrix p(2 * m, 2 * m);
  for (std::size_t k = 0; k < m; ++k) {
    a[k] = GaussianRational::i();
    a[m + k] = -GaussianRational::i();
    p(k, k) = 1;
    p(k, m + k) = 1;
    p(m + k, k) = GaussianRational::i();
    p(m + k, m + k) = -GaussianRational::i();
  }
  return EigenData(std::move(a), std::move(p));
}

}  // namespace pdnf
