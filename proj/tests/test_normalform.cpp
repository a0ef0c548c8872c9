#include <random>
#include <vector>

#include "doctest.h"
#include "pdnf/normalform.hpp"
#include "test_support.hpp"

using namespace pdnf;
using pdnf::testing::q;
using pdnf::testing::qi;

namespace {

VectorField monomial_field(std::size_t n, int truncation, std::size_t j, const MultiIndex& e,
                           const GaussianRational& c = 1) {
  VectorField f(n, truncation);
  f.add_term(j, e, c);
  return f;
}

ExactVector diag_a(std::initializer_list<GaussianRational> a) { return ExactVector(a); }

// Truncated univariate series oracle: c[k] multiplies v^k, k <= order.
using Series = std::vector<GaussianRational>;

Series series_mul(const Series& x, const Series& y, std::size_t order) {
  Series out(order + 1);
  for (std::size_t i = 0; i < x.size() && i <= order; ++i) {
    for (std::size_t j = 0; j < y.size() && i + j <= order; ++j) out[i + j] += x[i] * y[j];
  }
  return out;
}

}  // namespace

TEST_CASE("homological_apply examples") {
  const auto a = diag_a({1, 2});
  // (2*1) - 2 = 0
  CHECK(homological_apply(a, monomial_field(2, 4, 1, {2, 0})).is_zero());
  const VectorField lin(ExactMatrix::diagonal(a), 4);
  CHECK(homological_apply(a, lin).is_zero());
  // (1 + 2) - 1 = 2
  CHECK(homological_apply(a, monomial_field(2, 4, 0, {1, 1})) == monomial_field(2, 4, 0, {1, 1}, 2));

  // Direct expansion of (A u).grad h - A h for h = u1 u2 e1, A = diag(1,2):
  // (u1 d/du1 + 2 u2 d/du2)(u1 u2) - 1 * u1 u2 = 3 u1 u2 - u1 u2.
  const VectorField au(ExactMatrix::diagonal(a), 4);
  CHECK(lie_bracket(au, monomial_field(2, 4, 0, {1, 1})) == monomial_field(2, 4, 0, {1, 1}, 2));
}

TEST_CASE("homological operator is the bracket with the diagonal linear field") {
  std::mt19937 rng(7);
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t n = 1 + trial % 3;
    ExactVector a;
    for (std::size_t i = 0; i < n; ++i) a.push_back(pdnf::testing::random_gaussian(rng));
    const auto h = pdnf::testing::random_field(rng, n, 1, 4, 6, 0.3);
    const VectorField au(ExactMatrix::diagonal(a), 6);
    CHECK(homological_apply(a, h) == lie_bracket(au, h));

    for (unsigned d = 2; d <= 4; ++d) {
      for (const auto& qq : monomials_of_degree(n, d)) {
        for (std::size_t j = 0; j < n; ++j) {
          const auto mono = monomial_field(n, 6, j, qq);
          CHECK(homological_apply(a, mono) == (qq.dot(a) - a[j]) * mono);
        }
      }
    }
  }
}

TEST_CASE("is_resonant examples") {
  CHECK(is_resonant({2, 0}, 1, diag_a({1, 2})));
  CHECK(is_resonant({2, 1}, 0, diag_a({GaussianRational::i(), -GaussianRational::i()})));
  CHECK_FALSE(is_resonant({2, 1}, 1, diag_a({GaussianRational::i(), -GaussianRational::i()})));

  // a = (1,1): (q,a) = |q| >= 2 never equals 1.
  const auto ones = diag_a({1, 1});
  for (unsigned d = 2; d <= 6; ++d) {
    for (const auto& qq : monomials_of_degree(2, d)) {
      CHECK_FALSE(is_resonant(qq, 0, ones));
      CHECK_FALSE(is_resonant(qq, 1, ones));
    }
  }
}

TEST_CASE("solve_homological examples") {
  const auto a = diag_a({1, 2});
  auto split = solve_homological(a, monomial_field(2, 4, 1, {2, 0}));
  CHECK(split.generator.is_zero());
  CHECK(split.resonant_remainder == monomial_field(2, 4, 1, {2, 0}));

  // divisor (0,2).(1,2) - 1 = 3
  split = solve_homological(a, monomial_field(2, 4, 0, {0, 2}));
  CHECK(split.generator == monomial_field(2, 4, 0, {0, 2}, q(1, 3)));
  CHECK(split.resonant_remainder.is_zero());

  split = solve_homological(a, VectorField(2, 4));
  CHECK(split.generator.is_zero());
  CHECK(split.resonant_remainder.is_zero());
}

TEST_CASE("solve_homological reconstructs its input") {
  std::mt19937 rng(13);
  const std::vector<ExactVector> spectra = {
      diag_a({1, 2}), diag_a({GaussianRational::i(), -GaussianRational::i()}), diag_a({1, -1, 0}),
      diag_a({q(1, 2), q(3, 2), 2})};
  for (const auto& a : spectra) {
    for (unsigned d = 2; d <= 5; ++d) {
      const auto fd = homogeneous_part(pdnf::testing::random_field(rng, a.size(), d, d, 6, 0.5), d);
      const auto split = solve_homological(a, fd);
      CHECK(homological_apply(a, split.generator) + split.resonant_remainder == fd);
      for (const auto& t : split.generator.nonlinear_terms()) {
        CHECK_FALSE(is_resonant(t.exponents, t.component, a));
      }
      for (const auto& t : split.resonant_remainder.nonlinear_terms()) {
        CHECK(is_resonant(t.exponents, t.component, a));
      }
    }
  }
}

TEST_CASE("pushforward examples") {
  VectorField f(ExactMatrix{{1}}, 6);
  f.add_term(0, {2}, 1);

  CHECK(pushforward(f, VectorField(1, 6), 6) == f);

  const auto phi = monomial_field(1, 6, 0, {2});
  CHECK(pushforward(f, phi, 2) == VectorField(ExactMatrix{{1}}, 2));

  // Series oracle: f(v + v^2) = v + 2v^2 + 2v^3 + v^4 times (1 + 2v)^{-1}.
  const std::size_t order = 6;
  const Series shifted = {0, 1, 1};
  Series composed = series_mul(shifted, shifted, order);
  for (std::size_t k = 0; k < shifted.size(); ++k) composed[k] += shifted[k];
  Series inv(order + 1);
  GaussianRational pw = 1;
  for (std::size_t k = 0; k <= order; ++k, pw *= q(-2)) inv[k] = pw;
  const Series expected = series_mul(composed, inv, order);

  const auto pushed = pushforward(f, phi, 6);
  for (unsigned k = 1; k <= order; ++k) {
    CHECK(pushed.component(0).coefficient(MultiIndex{k}) == expected[k]);
  }
  CHECK(expected[2] == q(0));
  CHECK(expected[3] == q(2));

  CHECK_THROWS_AS(pushforward(f, VectorField(ExactMatrix{{1}}, 6), 6), std::invalid_argument);
}

TEST_CASE("pushforward keeps the linear part and maps brackets to brackets") {
  std::mt19937 rng(19);
  for (int trial = 0; trial < 15; ++trial) {
    const std::size_t n = 1 + trial % 3;
    const int t = 5;
    const auto f = pdnf::testing::random_field(rng, n, 1, 3, t, 0.4);
    const auto g = pdnf::testing::random_field(rng, n, 1, 3, t, 0.4);
    const unsigned d = 2 + trial % 2;
    const auto phi = homogeneous_part(pdnf::testing::random_field(rng, n, d, d, t, 0.5), d);

    const auto pf = pushforward(f, phi, t);
    CHECK(pf.linear_part() == f.linear_part());

    // The transformed bracket equals the bracket of the transforms.
    const auto lhs = lie_bracket(pf, pushforward(g, phi, t));
    const auto rhs = pushforward(lie_bracket(f, g), phi, t);
    const int common = std::min(lhs.truncation(), rhs.truncation());
    CHECK(lhs.truncated(common) == rhs.truncated(common));
  }
}

TEST_CASE("normalize examples") {
  SUBCASE("already normal") {
    VectorField f(ExactMatrix::diagonal({1, 2}), 5);
    f.add_term(1, {2, 0}, 3);
    const auto nr = normalize(f, EigenData(diag_a({1, 2})), 5);
    CHECK(nr.normal_form == f);
    CHECK(nr.all_generators_zero());
    CHECK(nr.generators.size() == 4);
  }
  SUBCASE("one dimension, no resonances") {
    VectorField f(ExactMatrix{{1}}, 4);
    f.add_term(0, {2}, 1);
    const auto nr = normalize(f, EigenData(diag_a({1})), 4);
    CHECK(nr.normal_form == VectorField(ExactMatrix{{1}}, 4));
    // divisor q - 1 = 1 at degree 2
    CHECK(nr.generator(2) == monomial_field(1, 4, 0, {2}));
  }
  SUBCASE("a = (1,2)") {
    VectorField f(ExactMatrix::diagonal({1, 2}), 5);
    f.add_term(1, {2, 0}, 1);
    f.add_term(1, {0, 2}, 1);
    const auto nr = normalize(f, EigenData(diag_a({1, 2})), 5);
    VectorField expected(ExactMatrix::diagonal({1, 2}), 5);
    expected.add_term(1, {2, 0}, 1);
    CHECK(nr.normal_form == expected);
    CHECK(replay(f, nr) == nr.normal_form);
  }
  SUBCASE("errors") {
    VectorField f(ExactMatrix{{1, 1}, {0, 2}}, 4);
    CHECK_THROWS_AS(normalize(f, EigenData(diag_a({1, 2})), 4), InconsistentEigenData);
    VectorField g(ExactMatrix::diagonal({1, 2}), 4);
    CHECK_THROWS_AS(normalize(g, EigenData(diag_a({1, 2})), 1), std::invalid_argument);
    CHECK_THROWS_AS(normalize(g, EigenData(diag_a({1, 2})), 5), std::invalid_argument);
  }
}

TEST_CASE("normalize postconditions on random fields") {
  std::mt19937 rng(23);
  for (int trial = 0; trial < 12; ++trial) {
    const std::size_t n = 1 + trial % 3;
    ExactVector a;
    for (std::size_t i = 0; i < n; ++i) a.push_back(pdnf::testing::random_nonzero(rng, 2));
    VectorField f = pdnf::testing::random_field(rng, n, 2, 3, 5, 0.3);
    f = f.with_linear_part(ExactMatrix::diagonal(a));
    const auto nr = normalize(f, EigenData(a), 5);
    CHECK(nr.normal_form.linear_part() == ExactMatrix::diagonal(a));
    CHECK(homological_apply(a, nr.normal_form.nonlinear_part()).is_zero());
    for (unsigned d = 2; d <= 5; ++d) {
      const auto& g = nr.generator(d);
      CHECK(g.linear_part().is_zero());
      for (const auto& t : g.nonlinear_terms()) {
        CHECK(t.exponents.degree() == d);
        CHECK_FALSE(is_resonant(t.exponents, t.component, a));
      }
    }
    CHECK(replay(f, nr) == nr.normal_form);
  }
}

TEST_CASE("eigenbasis_for_block_rotation") {
  const auto e1 = eigenbasis_for_block_rotation(1);
  CHECK(e1.eigenvalues() == diag_a({GaussianRational::i(), -GaussianRational::i()}));
  CHECK(e1.basis() == ExactMatrix{{1, 1}, {GaussianRational::i(), -GaussianRational::i()}});
  // By hand: A P = [[i, -i], [-1, -1]] = P diag(i, -i).
  const ExactMatrix a1 = block_rotation_matrix(1);
  CHECK(a1 == ExactMatrix{{0, 1}, {-1, 0}});
  CHECK(a1 * e1.basis() == e1.basis() * ExactMatrix::diagonal(e1.eigenvalues()));
  CHECK(e1.diagonalizes(a1));

  const auto e3 = eigenbasis_for_block_rotation(3);
  const auto i = GaussianRational::i();
  CHECK(e3.eigenvalues() == diag_a({i, i, i, -i, -i, -i}));
  CHECK(e3.diagonalizes(block_rotation_matrix(3)));
  for (std::size_t m = 1; m <= 4; ++m) {
    const auto e = eigenbasis_for_block_rotation(m);
    CHECK(e.basis() * e.basis_inverse() == ExactMatrix::identity(2 * m));
  }
  CHECK_THROWS(eigenbasis_for_block_rotation(0));
}

TEST_CASE("normalize through a supplied eigenbasis") {
  // u' = A u + r^2 u with the 2x2 rotation: in eigencoordinates r^2 = 4 w z
  // and every nonlinear term is resonant, so nothing needs removing.
  VectorField f(block_rotation_matrix(1), 5);
  f.add_term(0, {3, 0}, 1);
  f.add_term(0, {1, 2}, 1);
  f.add_term(1, {2, 1}, 1);
  f.add_term(1, {0, 3}, 1);
  const auto nr = normalize(f, eigenbasis_for_block_rotation(1), 5);
  CHECK(nr.all_generators_zero());
  VectorField expected(ExactMatrix::diagonal({GaussianRational::i(), -GaussianRational::i()}), 5);
  expected.add_term(0, {2, 1}, 4);
  expected.add_term(1, {1, 2}, 4);
  CHECK(nr.normal_form == expected);
}
