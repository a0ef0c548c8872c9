#include "pdnf/examples.hpp"

#include <stdexcept>
#include <string>

namespace pdnf {

namespace {

void check_degree(unsigned k, int truncation) {
  if (k == 0) throw std::invalid_argument("example: k must be at least 1");
  if (truncation < static_cast<int>(2 * k + 1)) {
    throw std::invalid_argument("example: truncation " + std::to_string(truncation) + " cannot hold degree " +
                                std::to_string(2 * k + 1));
  }
}

ScalarPoly power(const ScalarPoly& base, unsigned k, int truncation) {
  ScalarPoly out = ScalarPoly::constant(base.dimension(), truncation, 1);
  for (unsigned i = 0; i < k; ++i) out = multiply_to(out, base, truncation);
  return out;
}

// s(u) * u, truncated at N.
VectorField radial(const ScalarPoly& s, int truncation) {
  const std::size_t n = s.dimension();
  VectorField out(n, truncation);
  for (const auto& [q, c] : s.terms()) {
    for (std::size_t j = 0; j < n; ++j) out.add_term(j, q + MultiIndex::unit(n, j), c);
  }
  return out;
}

}  // namespace

ExampleSystem build_example_rotation2d(unsigned k, int truncation) {
  check_degree(k, truncation);
  ScalarPoly r2(2, truncation);
  r2.add_term({2, 0}, 1);
  r2.add_term({0, 2}, 1);
  const VectorField g = radial(power(r2, k, truncation), truncation);
  return {VectorField(block_rotation_matrix(1), truncation) + g, g, eigenbasis_for_block_rotation(1), {}};
}

ExampleSystem build_example_so3(unsigned k, const std::optional<ScalarPoly>& p_choice, int truncation) {
  check_degree(k, truncation);
  constexpr std::size_t m = 3;
  constexpr std::size_t n = 2 * m;
  ScalarPoly xx(n, truncation);
  ScalarPoly yy(n, truncation);
  ScalarPoly xy(n, truncation);
  for (std::size_t i = 0; i < m; ++i) {
    xx.add_term(MultiIndex::unit(n, i) + MultiIndex::unit(n, i), 1);
    yy.add_term(MultiIndex::unit(n, m + i) + MultiIndex::unit(n, m + i), 1);
    xy.add_term(MultiIndex::unit(n, i) + MultiIndex::unit(n, m + i), 1);
  }

  ScalarPoly p;
  if (p_choice) {
    if (p_choice->dimension() != 3) throw std::invalid_argument("so3 example: p must be a polynomial in 3 invariants");
    if (p_choice->is_zero() || !p_choice->is_homogeneous(k)) {
      throw std::invalid_argument("so3 example: p must be homogeneous of degree k in the invariants");
    }
    p = compose(*p_choice, {xx, yy, xy}, truncation - 1);
  } else {
    p = power(xx + yy, k, truncation - 1);
  }

  const VectorField g = radial(power(xx + yy, k, truncation - 1), truncation);
  return {VectorField(block_rotation_matrix(m), truncation) + radial(p, truncation), g,
          eigenbasis_for_block_rotation(m), {xx, yy, xy}};
}

}  // namespace pdnf
