#include <random>
#include <vector>

#include <mpfr.h>

#include "doctest.h"
#include "pdnf/analysis.hpp"
#include "test_support.hpp"

using namespace pdnf;
using pdnf::testing::q;
using pdnf::testing::qi;

namespace {

const GaussianRational I = GaussianRational::i();

// Brute-force oracle over the full lattice: omega_k^2 for k = 1..k_max.
std::vector<std::optional<Rational>> omega_oracle(const ExactVector& a, unsigned k_max, OmegaVariant variant,
                                                  bool strict) {
  std::vector<std::optional<Rational>> out;
  const std::size_t n = a.size();
  for (unsigned k = 1; k <= k_max; ++k) {
    const unsigned limit = (1u << k) - 1;
    std::optional<Rational> best;
    std::vector<unsigned> qv(n, 0);
    // odometer over [0, limit]^n
    for (;;) {
      unsigned total = 0;
      bool positive = true;
      for (auto e : qv) {
        total += e;
        positive = positive && e >= 1;
      }
      if (total >= 1 && total <= limit && (!strict || positive)) {
        GaussianRational dot;
        for (std::size_t i = 0; i < n; ++i) dot += GaussianRational(static_cast<long>(qv[i])) * a[i];
        std::vector<GaussianRational> divisors;
        if (variant == OmegaVariant::paper) {
          divisors.push_back(dot);
        } else {
          for (const auto& aj : a) divisors.push_back(dot - aj);
        }
        for (const auto& dv : divisors) {
          if (!dv.is_zero() && (!best || dv.norm2() < *best)) best = dv.norm2();
        }
      }
      std::size_t pos = 0;
      while (pos < n && qv[pos] == limit) qv[pos++] = 0;
      if (pos == n) break;
      ++qv[pos];
    }
    out.push_back(best);
  }
  return out;
}

// |x - y| <= 10^-40 with both given as decimal strings.
bool close_1e40(const std::string& x, const std::string& y) {
  mpfr_t a, b;
  mpfr_inits2(400, a, b, static_cast<mpfr_ptr>(nullptr));
  mpfr_set_str(a, x.c_str(), 10, MPFR_RNDN);
  mpfr_set_str(b, y.c_str(), 10, MPFR_RNDN);
  mpfr_sub(a, a, b, MPFR_RNDN);
  mpfr_abs(a, a, MPFR_RNDN);
  mpfr_set_str(b, "1e-40", 10, MPFR_RNDN);
  const bool ok = mpfr_cmp(a, b) <= 0;
  mpfr_clears(a, b, static_cast<mpfr_ptr>(nullptr));
  return ok;
}

std::string minus_ln2_times_tail(unsigned k_last) {
  // -(ln 2) * sum_{k=2..k_last} 2^{-k}, independent of the library code path.
  mpfr_t ln2, s;
  mpfr_inits2(400, ln2, s, static_cast<mpfr_ptr>(nullptr));
  mpfr_const_log2(ln2, MPFR_RNDN);
  mpfr_set_ui(s, 0, MPFR_RNDN);
  for (unsigned k = 2; k <= k_last; ++k) {
    mpfr_t t;
    mpfr_init2(t, 400);
    mpfr_set_ui(t, 1, MPFR_RNDN);
    mpfr_div_2ui(t, t, k, MPFR_RNDN);
    mpfr_add(s, s, t, MPFR_RNDN);
    mpfr_clear(t);
  }
  mpfr_mul(s, s, ln2, MPFR_RNDN);
  mpfr_neg(s, s, MPFR_RNDN);
  char* text = nullptr;
  mpfr_asprintf(&text, "%.80Re", s);
  std::string out(text);
  mpfr_free_str(text);
  mpfr_clears(ln2, s, static_cast<mpfr_ptr>(nullptr));
  return out;
}

ScalarPoly poly2(int truncation, std::initializer_list<std::pair<MultiIndex, GaussianRational>> terms,
                 std::size_t n = 2) {
  ScalarPoly p(n, truncation);
  for (const auto& [e, c] : terms) p.add_term(e, c);
  return p;
}

}  // namespace

TEST_CASE("check_omega examples") {
  SUBCASE("a = (i, -i)") {
    const auto report = check_omega({I, -I}, 5);
    REQUIRE(report.records.size() == 5);
    for (const auto& r : report.records) {
      REQUIRE(r.omega_squared);
      CHECK(*r.omega_squared == 1);
      CHECK(r.partial_sum_is_zero);
      CHECK(r.minimizer->dot({I, -I}).norm2() == 1);
    }
    CHECK(report.verdict == OmegaVerdict::holds_at_horizon);
  }
  SUBCASE("a = (1, 2)") {
    const auto report = check_omega({1, 2}, 4);
    for (const auto& r : report.records) {
      CHECK(*r.omega_squared == 1);
      CHECK(*r.minimizer == MultiIndex{1, 0});
    }
  }
  SUBCASE("a = (1, -3/2)") {
    const auto report = check_omega({1, q(-3, 2)}, 6);
    CHECK(*report.records[0].omega_squared == 1);
    CHECK(report.records[0].partial_sum_is_zero);
    for (unsigned k = 2; k <= 6; ++k) {
      const auto& r = report.records[k - 1];
      CHECK(*r.omega_squared == Rational(1, 4));
      CHECK(*r.minimizer == MultiIndex{1, 1});
      CHECK_FALSE(r.partial_sum_is_zero);
      CHECK(close_1e40(r.partial_sum, minus_ln2_times_tail(k)));
    }
    CHECK(report.records[1].omega_decimal.rfind("5.0000000000", 0) == 0);
  }
  SUBCASE("errors") {
    CHECK_THROWS_AS(check_omega({}, 3), std::invalid_argument);
    CHECK_THROWS_AS(check_omega({0, 0}, 3), std::invalid_argument);
    CHECK_THROWS_AS(check_omega({1}, 0), std::invalid_argument);
    OmegaOptions tight;
    tight.budget = 10;
    CHECK_THROWS_AS(check_omega({1, 2}, 6, tight), BudgetExceeded);
  }
}

TEST_CASE("check_omega agrees with brute-force enumeration") {
  std::mt19937 rng(37);
  for (int trial = 0; trial < 24; ++trial) {
    const std::size_t n = 1 + trial % 3;
    ExactVector a;
    for (std::size_t i = 0; i < n; ++i) a.push_back(pdnf::testing::random_gaussian(rng, 3));
    if (trial % 4 == 0 && n > 1) a[1] = a[0];  // repeated eigenvalue
    if (std::all_of(a.begin(), a.end(), [](const auto& x) { return x.is_zero(); })) a[0] = 1;

    const unsigned k_max = n == 3 ? 3 : 4;
    for (auto variant : {OmegaVariant::paper, OmegaVariant::shifted}) {
      for (bool strict : {false, true}) {
        OmegaOptions opt;
        opt.variant = variant;
        opt.strict_positive = strict;
        const auto report = check_omega(a, k_max, opt);
        const auto oracle = omega_oracle(a, k_max, variant, strict);
        for (unsigned k = 1; k <= k_max; ++k) {
          const auto& r = report.records[k - 1];
          CHECK(r.omega_squared == oracle[k - 1]);
          if (k > 1 && r.omega_squared && report.records[k - 2].omega_squared) {
            CHECK(*r.omega_squared <= *report.records[k - 2].omega_squared);
          }
          if (!r.minimizer) continue;
          // the minimizer re-verifies its own constraints
          CHECK(r.minimizer->degree() >= 1);
          CHECK(r.minimizer->degree() < (1u << k));
          if (strict) {
            for (auto e : r.minimizer->exponents()) CHECK(e >= 1);
          }
          const auto dot = r.minimizer->dot(a);
          const auto divisor = variant == OmegaVariant::paper ? dot : dot - a[*r.component];
          CHECK_FALSE(divisor.is_zero());
          CHECK(divisor.norm2() == *r.omega_squared);
        }
      }
    }
  }
}

TEST_CASE("check_omega verdicts") {
  OmegaOptions opt;
  opt.threshold = Rational(-1, 10);
  // omega_k = 1/2 from k = 2: partial sums reach -(ln 2)(1/4 + 1/8) < -0.1
  CHECK(check_omega({1, q(-3, 2)}, 3, opt).verdict == OmegaVerdict::violated);
  opt.strict_positive = true;
  // with q_i >= 1 in 3 variables nothing is admissible below |q| = 3
  const auto report = check_omega({1, 1, 1}, 1, opt);
  CHECK(report.verdict == OmegaVerdict::indeterminate);
  CHECK_FALSE(report.records[0].omega_squared);
}

TEST_CASE("constant_proportionality") {
  const ExactMatrix a{{0, 1}, {-1, 0}};
  auto p = constant_proportionality(q(2) * a, a);
  REQUIRE(p);
  CHECK(p->factor == q(2));
  CHECK_FALSE(p->ambiguous);

  p = constant_proportionality(ExactMatrix(2, 2), a);
  REQUIRE(p);
  CHECK(p->factor == q(0));

  p = constant_proportionality(ExactMatrix(2, 2), ExactMatrix(2, 2));
  REQUIRE(p);
  CHECK(p->ambiguous);
  CHECK_FALSE(constant_proportionality(a, ExactMatrix(2, 2)));
  CHECK_FALSE(constant_proportionality(ExactMatrix::identity(2), a));

  // F = (u1^2, u2^2), G = (u1^2, u1 u2): ratio 1 on the first component,
  // but u2^2 has no partner in G.
  VectorField f(2, 4);
  f.add_term(0, {2, 0}, 1);
  f.add_term(1, {0, 2}, 1);
  VectorField g(2, 4);
  g.add_term(0, {2, 0}, 1);
  g.add_term(1, {1, 1}, 1);
  CHECK_FALSE(constant_proportionality(g, f));
  const auto fp = constant_proportionality(qi(3) * f, f);
  REQUIRE(fp);
  CHECK(fp->factor == qi(3));
}

TEST_CASE("check_condition_A examples") {
  const VectorField au(ExactMatrix::diagonal({1, -1}), 5);
  const auto zero = check_condition_A(au);
  REQUIRE(zero);
  CHECK(zero->is_zero());

  const auto s = poly2(4, {{{1, 1}, 1}});
  const auto found = check_condition_A(au + s * au);
  REQUIRE(found);
  CHECK(*found == s);

  // u1^2 e2 would need alpha u1 * (1) on e1 and alpha * 2 u2 on e2.
  VectorField h(ExactMatrix::diagonal({1, 2}), 4);
  h.add_term(1, {2, 0}, 1);
  CHECK_FALSE(check_condition_A(h));

  CHECK_THROWS_AS(check_condition_A(VectorField(2, 3)), std::invalid_argument);
}

TEST_CASE("check_condition_A round trip") {
  std::mt19937 rng(43);
  for (int trial = 0; trial < 15; ++trial) {
    const std::size_t n = 1 + trial % 3;
    const ExactMatrix a = pdnf::testing::random_matrix(rng, n, n, 0.8) + ExactMatrix::identity(n);
    if (a.is_zero()) continue;
    const auto alpha = pdnf::testing::random_scalar(rng, n, 1, 4, 4, 0.4);
    const VectorField au(a, 5);
    const auto found = check_condition_A(au + alpha * au);
    REQUIRE(found);
    CHECK(*found == alpha);
  }
}

TEST_CASE("fit_nf_shape examples") {
  const ExactMatrix a = ExactMatrix::diagonal({I, -I});
  const VectorField au(a, 5);
  const VectorField idu(ExactMatrix::identity(2), 5);

  auto fit = fit_nf_shape(au, ExactMatrix::identity(2));
  REQUIRE(fit);
  CHECK(fit->alpha.is_zero());
  CHECK(fit->mu.is_zero());
  CHECK(fit->residual.is_zero());

  const auto s = poly2(4, {{{1, 1}, 1}});
  fit = fit_nf_shape(au + s * au + s * idu, ExactMatrix::identity(2));
  REQUIRE(fit);
  CHECK(fit->alpha == s);
  CHECK(fit->mu == s);
  CHECK(fit->residual.is_zero());
  CHECK(fit->nonunique_degrees.empty());

  VectorField h(ExactMatrix::diagonal({1, 2}), 4);
  h.add_term(1, {2, 0}, 1);
  CHECK_FALSE(fit_nf_shape(h, ExactMatrix::identity(2)));

  CHECK_THROWS_AS(fit_nf_shape(au, qi(2) * a), std::invalid_argument);
  CHECK_THROWS_AS(fit_nf_shape(au, ExactMatrix::identity(3)), std::invalid_argument);

  const auto any = fit_nf_shape_any(au + s * idu, {a, ExactMatrix::identity(2)});
  REQUIRE(any);
  CHECK(any->candidate == ExactMatrix::identity(2));
}

TEST_CASE("fit_nf_shape round trip") {
  std::mt19937 rng(47);
  for (int trial = 0; trial < 12; ++trial) {
    const std::size_t n = 2 + trial % 2;
    ExactVector diag;
    for (std::size_t i = 0; i < n; ++i) diag.push_back(pdnf::testing::random_nonzero(rng));
    const ExactMatrix a = ExactMatrix::diagonal(diag);
    ExactMatrix m = pdnf::testing::random_matrix(rng, n, n, 0.7);
    if (constant_proportionality(m, a)) m += ExactMatrix::identity(n);
    if (constant_proportionality(m, a)) continue;

    const auto alpha = pdnf::testing::random_scalar(rng, n, 1, 3, 4, 0.4);
    const auto mu = pdnf::testing::random_scalar(rng, n, 1, 3, 4, 0.4);
    const VectorField au(a, 5);
    const VectorField h = au + alpha * au + mu * VectorField(m, 5);
    const auto fit = fit_nf_shape(h, m);
    REQUIRE(fit);
    CHECK(fit->residual.is_zero());
    CHECK((au + fit->alpha * au + fit->mu * VectorField(m, 5)) == h);
  }
}

TEST_CASE("common_linear_integrals examples") {
  CHECK(common_linear_integrals({I, -I}, ExactMatrix::identity(2), 4).basis.empty());

  const auto basis = common_linear_integrals({I, -I}, ExactMatrix::diagonal({1, -1}), 4).basis;
  REQUIRE(basis.size() == 2);
  CHECK(basis[0] == poly2(4, {{{1, 1}, 1}}));
  CHECK(basis[1] == poly2(4, {{{2, 2}, 1}}));

  CHECK(common_linear_integrals({1, 2}, ExactMatrix::diagonal({0, 1}), 4).basis.empty());
}

TEST_CASE("common_linear_integrals matches monomial enumeration for diagonal pairs") {
  std::mt19937 rng(53);
  std::uniform_int_distribution<int> small(-2, 2);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = 1 + trial % 3;
    ExactVector a;
    ExactVector m;
    for (std::size_t i = 0; i < n; ++i) {
      a.push_back(GaussianRational(small(rng)) + (trial % 2 ? qi(small(rng)) : q(0)));
      m.push_back(GaussianRational(small(rng)));
    }
    const int top = 3 + trial % 3;
    const auto integrals = common_linear_integrals(a, ExactMatrix::diagonal(m), top);

    std::vector<MultiIndex> expected;
    for (unsigned d = 1; d <= static_cast<unsigned>(top); ++d) {
      for (const auto& e : monomials_of_degree(n, d)) {
        if (e.dot(a).is_zero() && e.dot(m).is_zero()) expected.push_back(e);
      }
    }
    REQUIRE(integrals.basis.size() == expected.size());
    for (std::size_t k = 0; k < expected.size(); ++k) {
      REQUIRE(integrals.basis[k].terms().size() == 1);
      CHECK(integrals.basis[k].terms().begin()->first == expected[k]);
    }
  }
}

TEST_CASE("integrals satisfy both derivative conditions for non-diagonal M") {
  std::mt19937 rng(59);
  for (int trial = 0; trial < 10; ++trial) {
    const std::size_t n = 2 + trial % 2;
    ExactVector a;
    for (std::size_t i = 0; i < n; ++i) a.push_back(GaussianRational(static_cast<long>(i % 2 ? -1 : 1)) * I);
    const ExactMatrix m = trial % 2 ? pdnf::testing::random_matrix(rng, n, n, 0.4) : ExactMatrix(n, n);
    const auto integrals = common_linear_integrals(a, m, 4);
    const VectorField au(ExactMatrix::diagonal(a), 5);
    const VectorField mu(m, 5);
    for (const auto& kappa : integrals.basis) {
      CHECK(kappa.coefficient(MultiIndex(n)).is_zero());
      CHECK(directional_derivative(au, kappa).is_zero());
      CHECK(directional_derivative(mu, kappa).is_zero());
    }
    if (m.is_zero()) CHECK_FALSE(integrals.basis.empty());
  }
}
