#include <algorithm>
#include <numeric>
#include <random>

#include "doctest.h"
#include "pdnf/algebra.hpp"
#include "test_support.hpp"

using namespace pdnf;
using pdnf::testing::q;
using pdnf::testing::qi;

TEST_CASE("scalar arithmetic") {
  CHECK(q(1, 2) + q(1, 3) == q(5, 6));
  CHECK(GaussianRational::i() * GaussianRational::i() == q(-1));

  // Hand oracle: (1 + i)(1/2 - i/2) = 1/2 - i/2 + i/2 - i^2/2 = 1.
  const GaussianRational one_plus_i = q(1) + qi(1);
  const GaussianRational expected = q(1, 2) - qi(1, 2);
  CHECK(one_plus_i.inverse() == expected);
  CHECK(one_plus_i * expected == q(1));

  CHECK((q(3) + qi(-4)).norm2() == Rational(25));
  CHECK((q(3) + qi(-4)).conj() == q(3) + qi(4));
  CHECK(q(6, 4).re() == Rational(3, 2));
  CHECK_THROWS_AS(q(1) / GaussianRational{}, ArithmeticError);
  CHECK_THROWS_AS(GaussianRational{}.inverse(), ArithmeticError);
}

TEST_CASE("inverse property") {
  std::mt19937 rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    const auto x = pdnf::testing::random_nonzero(rng, 9);
    CHECK(x * x.inverse() == q(1));
  }
}

TEST_CASE("coefficient grammar") {
  CHECK(GaussianRational::parse("5/6") == q(5, 6));
  CHECK(GaussianRational::parse("-3") == q(-3));
  CHECK(GaussianRational::parse("+3/9") == q(1, 3));
  CHECK(GaussianRational::parse("1/2*i") == qi(1, 2));
  CHECK(GaussianRational::parse("-i") == qi(-1));
  CHECK(GaussianRational::parse("1/2-3/4*i") == q(1, 2) + qi(-3, 4));
  CHECK(GaussianRational::parse("123456789012345678901234567890").re() ==
        Rational("123456789012345678901234567890"));

  CHECK(q(0).to_string() == "0");
  CHECK((q(-7, 2) + qi(1)).to_string() == "-7/2+i");
  CHECK((q(1) + qi(-2, 3)).to_string() == "1-2/3*i");
  CHECK(qi(5).to_string() == "5*i");

  for (const char* bad : {"", "1/0", "i*2", "1+2", "1/2/3", "2i", "1 + i", "x", "--1", "1+-i"}) {
    CHECK_THROWS_AS(GaussianRational::parse(bad), std::invalid_argument);
  }

  std::mt19937 rng(3);
  for (int trial = 0; trial < 300; ++trial) {
    const auto x = pdnf::testing::random_gaussian(rng, 50);
    CHECK(GaussianRational::parse(x.to_string()) == x);
  }
}

TEST_CASE("kernel_basis examples") {
  CHECK(kernel_basis(ExactMatrix::identity(2)).empty());

  const auto full = kernel_basis(ExactMatrix(2, 2));
  REQUIRE(full.size() == 2);
  CHECK(full[0] == ExactVector{q(1), q(0)});
  CHECK(full[1] == ExactVector{q(0), q(1)});

  // Hand row reduction: [[1,1],[2,2]] -> [[1,1],[0,0]], kernel spanned by (1,-1).
  const auto k = kernel_basis(ExactMatrix{{1, 1}, {2, 2}});
  REQUIRE(k.size() == 1);
  CHECK(k[0] == ExactVector{q(1), q(-1)});
}

TEST_CASE("rank examples") {
  CHECK(rank(ExactMatrix::identity(3)) == 3);
  CHECK(rank(ExactMatrix(2, 3)) == 0);
  CHECK(rank(ExactMatrix{{1, 1}, {2, 2}}) == 1);
  CHECK(rank(ExactMatrix{{1, GaussianRational::i()}, {GaussianRational::i(), -1}}) == 1);
}

TEST_CASE("kernel and rank properties") {
  std::mt19937 rng(5);
  for (int trial = 0; trial < 60; ++trial) {
    std::uniform_int_distribution<std::size_t> dim(1, 6);
    const std::size_t rows = dim(rng);
    const std::size_t cols = dim(rng);
    ExactMatrix m = pdnf::testing::random_matrix(rng, rows, cols, 0.5);
    if (rows > 1 && trial % 3 == 0) {
      // force a dependent row
      for (std::size_t c = 0; c < cols; ++c) m(rows - 1, c) = q(2) * m(0, c) - m(1 % rows, c);
    }
    const auto basis = kernel_basis(m);
    CHECK(rank(m) + basis.size() == cols);
    for (const auto& v : basis) {
      for (const auto& e : m * v) CHECK(e.is_zero());
      const auto lead = std::find_if(v.begin(), v.end(), [](const auto& x) { return !x.is_zero(); });
      REQUIRE(lead != v.end());
      CHECK(*lead == q(1));
    }

    // Row order does not affect the kernel basis.
    std::vector<std::size_t> perm(rows);
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    ExactMatrix shuffled(rows, cols);
    for (std::size_t r = 0; r < rows; ++r) {
      for (std::size_t c = 0; c < cols; ++c) shuffled(r, c) = m(perm[r], c);
    }
    CHECK(kernel_basis(shuffled) == basis);
  }
}

TEST_CASE("solve and inverse") {
  const ExactMatrix m{{1, 2}, {3, 4}};
  const auto sol = solve(m, {q(5), q(6)});
  REQUIRE(sol);
  CHECK(sol->nullity == 0);
  CHECK(m * sol->x == ExactVector{q(5), q(6)});

  CHECK_FALSE(solve(ExactMatrix{{1, 1}, {2, 2}}, {q(1), q(3)}));
  const auto under = solve(ExactMatrix{{1, 1}, {2, 2}}, {q(1), q(2)});
  REQUIRE(under);
  CHECK(under->nullity == 1);
  CHECK(under->x == ExactVector{q(1), q(0)});

  std::mt19937 rng(8);
  for (int trial = 0; trial < 30; ++trial) {
    const auto a = pdnf::testing::random_matrix(rng, 4, 4, 0.8);
    const auto inv = inverse(a);
    if (rank(a) < 4) {
      CHECK_FALSE(inv);
      continue;
    }
    REQUIRE(inv);
    CHECK(a * *inv == ExactMatrix::identity(4));
    CHECK(*inv * a == ExactMatrix::identity(4));
  }
}
