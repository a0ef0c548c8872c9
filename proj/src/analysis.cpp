#include "pdnf/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>

#include <mpfr.h>

#include "pdnf/parallel.hpp"

namespace pdnf {

namespace {

class BigFloat {
 public:
  explicit BigFloat(mpfr_prec_t bits) {
    mpfr_init2(value_, bits);
    mpfr_set_zero(value_, 1);
  }
  ~BigFloat() { mpfr_clear(value_); }
  BigFloat(const BigFloat&) = delete;
  BigFloat& operator=(const BigFloat&) = delete;

  mpfr_ptr get() { return value_; }
  mpfr_srcptr get() const { return value_; }

  std::string to_decimal(unsigned digits) const {
    char* text = nullptr;
    mpfr_asprintf(&text, "%.*Re", static_cast<int>(digits == 0 ? 0 : digits - 1), value_);
    std::string out(text);
    mpfr_free_str(text);
    return out;
  }

 private:
  mpfr_t value_;
};

mpfr_prec_t bits_for_digits(unsigned digits) {
  return static_cast<mpfr_prec_t>(std::ceil(digits * 3.3219280948873622)) + 64;
}

struct EigenGroup {
  GaussianRational value;
  std::vector<std::size_t> members;
};

std::vector<EigenGroup> group_eigenvalues(const ExactVector& a) {
  std::vector<EigenGroup> groups;
  for (std::size_t i = 0; i < a.size(); ++i) {
    auto it = std::find_if(groups.begin(), groups.end(), [&](const auto& g) { return g.value == a[i]; });
    if (it == groups.end()) {
      groups.push_back({a[i], {i}});
    } else {
      it->members.push_back(i);
    }
  }
  return groups;
}

// Visits every s with sum s = total and s[g] >= lower[g], first part largest
// first.
void for_each_composition(std::vector<std::uint64_t>& s, std::size_t index, std::uint64_t remaining,
                          const std::vector<std::uint64_t>& lower,
                          const std::function<void(const std::vector<std::uint64_t>&)>& visit) {
  if (index + 1 == s.size()) {
    if (remaining < lower[index]) return;
    s[index] = remaining;
    visit(s);
    return;
  }
  std::uint64_t tail_min = 0;
  for (std::size_t g = index + 1; g < s.size(); ++g) tail_min += lower[g];
  if (remaining < lower[index] + tail_min) return;
  for (std::uint64_t e = remaining - tail_min + 1; e-- > lower[index];) {
    s[index] = e;
    for_each_composition(s, index + 1, remaining - e, lower, visit);
  }
}

MultiIndex expand_minimizer(const std::vector<std::uint64_t>& sums, const std::vector<EigenGroup>& groups,
                            std::size_t n, bool strict_positive) {
  std::vector<unsigned> q(n, strict_positive ? 1u : 0u);
  for (std::size_t g = 0; g < groups.size(); ++g) {
    const auto& members = groups[g].members;
    const std::uint64_t rest = strict_positive ? members.size() - 1 : 0;
    q[members.front()] = static_cast<unsigned>(sums[g] - rest);
  }
  return MultiIndex(std::move(q));
}

struct FitOutcome {
  std::vector<ScalarPoly> multipliers;
  std::vector<unsigned> nonunique_degrees;
};

// Solves h_d = sum_b s_b(u) (B_b u) for homogeneous s_b of degree d - 1,
// for every d = 2..N.
std::optional<FitOutcome> fit_multiples(const VectorField& h, const std::vector<ExactMatrix>& bases) {
  const std::size_t n = h.dimension();
  const int top = h.truncation();
  FitOutcome out;
  out.multipliers.assign(bases.size(), ScalarPoly(n, top - 1));

  for (int d = 2; d <= top; ++d) {
    const auto targets = monomials_of_degree(n, static_cast<unsigned>(d));
    const auto sources = monomials_of_degree(n, static_cast<unsigned>(d - 1));
    std::map<MultiIndex, std::size_t> target_index;
    for (std::size_t r = 0; r < targets.size(); ++r) target_index.emplace(targets[r], r);

    ExactMatrix system(n * targets.size(), bases.size() * sources.size());
    for (std::size_t b = 0; b < bases.size(); ++b) {
      for (std::size_t s = 0; s < sources.size(); ++s) {
        const std::size_t col = b * sources.size() + s;
        for (std::size_t k = 0; k < n; ++k) {
          for (std::size_t i = 0; i < n; ++i) {
            const auto& entry = bases[b](k, i);
            if (entry.is_zero()) continue;
            const auto row = k * targets.size() + target_index.at(sources[s] + MultiIndex::unit(n, i));
            system(row, col) += entry;
          }
        }
      }
    }
    ExactVector rhs(system.rows());
    for (std::size_t k = 0; k < n; ++k) {
      for (std::size_t r = 0; r < targets.size(); ++r) {
        rhs[k * targets.size() + r] = h.nonlinear(k).coefficient(targets[r]);
      }
    }

    const auto sol = solve(system, rhs);
    if (!sol) return std::nullopt;
    if (sol->nullity > 0) out.nonunique_degrees.push_back(static_cast<unsigned>(d));
    for (std::size_t b = 0; b < bases.size(); ++b) {
      for (std::size_t s = 0; s < sources.size(); ++s) {
        out.multipliers[b].add_term(sources[s], sol->x[b * sources.size() + s]);
      }
    }
  }
  return out;
}

}  // namespace

// ---------------------------------------------------------------------------

OmegaReport check_omega(const ExactVector& a, unsigned k_max, const OmegaOptions& options) {
  if (a.empty()) throw std::invalid_argument("check_omega: no eigenvalues");
  if (std::all_of(a.begin(), a.end(), [](const auto& x) { return x.is_zero(); })) {
    throw std::invalid_argument("check_omega: all eigenvalues are zero");
  }
  if (k_max == 0 || k_max > 62) throw std::invalid_argument("check_omega: k_max must lie in 1..62");
  if (options.precision == 0) throw std::invalid_argument("check_omega: precision must be positive");

  const std::size_t n = a.size();
  const auto groups = group_eigenvalues(a);
  std::vector<std::uint64_t> lower(groups.size(), 0);
  std::uint64_t min_total = 1;
  if (options.strict_positive) {
    for (std::size_t g = 0; g < groups.size(); ++g) lower[g] = groups[g].members.size();
    min_total = n;
  }

  OmegaReport report;
  report.eigenvalues = a;
  report.k_max = k_max;
  report.options = options;

  std::optional<Rational> best;
  std::vector<std::uint64_t> best_sums;
  std::optional<std::size_t> best_component;

  auto consider = [&](const Rational& candidate, const std::vector<std::uint64_t>& sums,
                      std::optional<std::size_t> component) {
    if (!best || candidate < *best) {
      best = candidate;
      best_sums = sums;
      best_component = component;
    }
  };

  auto visit = [&](const std::vector<std::uint64_t>& sums) {
    if (++report.lattice_points > options.budget) {
      throw BudgetExceeded("check_omega: lattice budget of " + std::to_string(options.budget) + " points exceeded");
    }
    GaussianRational dot;
    for (std::size_t g = 0; g < groups.size(); ++g) {
      if (sums[g] != 0) dot += GaussianRational(static_cast<long>(sums[g])) * groups[g].value;
    }
    if (options.variant == OmegaVariant::paper) {
      if (!dot.is_zero()) consider(dot.norm2(), sums, std::nullopt);
      return;
    }
    for (const auto& group : groups) {
      const GaussianRational divisor = dot - group.value;
      if (!divisor.is_zero()) consider(divisor.norm2(), sums, group.members.front());
    }
  };

  const mpfr_prec_t bits = bits_for_digits(options.precision);
  BigFloat sum(bits);
  BigFloat term(bits);
  Rational threshold = options.threshold;
  bool any_value = false;
  bool below_threshold = false;
  bool sum_is_zero = true;

  std::vector<std::uint64_t> sums(groups.size(), 0);
  for (unsigned k = 1; k <= k_max; ++k) {
    const std::uint64_t upper = (std::uint64_t{1} << k) - 1;
    const std::uint64_t lower_total = std::max<std::uint64_t>(k == 1 ? 1 : std::uint64_t{1} << (k - 1), min_total);
    for (std::uint64_t t = lower_total; t <= upper; ++t) for_each_composition(sums, 0, t, lower, visit);

    OmegaRecord record;
    record.k = k;
    if (best) {
      any_value = true;
      record.omega_squared = best;
      record.minimizer = expand_minimizer(best_sums, groups, n, options.strict_positive);
      record.component = best_component;

      mpfr_set_q(term.get(), best->get_mpq_t(), MPFR_RNDN);
      mpfr_sqrt(term.get(), term.get(), MPFR_RNDN);
      record.omega_decimal = term.to_decimal(options.precision);

      if (*best != 1) {
        sum_is_zero = false;
        // 2^{-k} ln omega_k = 2^{-(k+1)} ln omega_k^2
        mpfr_set_q(term.get(), best->get_mpq_t(), MPFR_RNDN);
        mpfr_log(term.get(), term.get(), MPFR_RNDN);
        mpfr_div_2ui(term.get(), term.get(), k + 1, MPFR_RNDN);
        mpfr_add(sum.get(), sum.get(), term.get(), MPFR_RNDN);
      }
    }
    record.partial_sum = sum.to_decimal(options.precision);
    record.partial_sum_is_zero = sum_is_zero;
    if (mpfr_cmp_q(sum.get(), threshold.get_mpq_t()) < 0) below_threshold = true;
    report.records.push_back(std::move(record));
  }

  if (!any_value) {
    report.verdict = OmegaVerdict::indeterminate;
  } else {
    report.verdict = below_threshold ? OmegaVerdict::violated : OmegaVerdict::holds_at_horizon;
  }
  return report;
}

// ---------------------------------------------------------------------------

std::optional<Proportionality> constant_proportionality(const ExactMatrix& x, const ExactMatrix& y) {
  if (x.rows() != y.rows() || x.cols() != y.cols()) {
    throw std::invalid_argument("constant_proportionality: shape mismatch");
  }
  const auto& ye = y.entries();
  const auto lead = std::find_if(ye.begin(), ye.end(), [](const auto& e) { return !e.is_zero(); });
  if (lead == ye.end()) {
    if (x.is_zero()) return Proportionality{0, true};
    return std::nullopt;
  }
  const GaussianRational factor = x.entries()[static_cast<std::size_t>(lead - ye.begin())] / *lead;
  if (x != factor * y) return std::nullopt;
  return Proportionality{factor, false};
}

std::optional<Proportionality> constant_proportionality(const VectorField& x, const VectorField& y) {
  if (x.dimension() != y.dimension()) throw std::invalid_argument("constant_proportionality: dimension mismatch");
  const int t = std::min(x.truncation(), y.truncation());
  const VectorField xt = x.truncated(t);
  const VectorField yt = y.truncated(t);
  if (yt.is_zero()) {
    if (xt.is_zero()) return Proportionality{0, true};
    return std::nullopt;
  }

  GaussianRational factor;
  if (!yt.linear_part().is_zero()) {
    const auto& ye = yt.linear_part().entries();
    const auto lead = std::find_if(ye.begin(), ye.end(), [](const auto& e) { return !e.is_zero(); });
    factor = xt.linear_part().entries()[static_cast<std::size_t>(lead - ye.begin())] / *lead;
  } else {
    const auto terms = yt.nonlinear_terms();
    const auto& first = terms.front();
    factor = xt.nonlinear(first.component).coefficient(first.exponents) / first.coeff;
  }
  if (xt != factor * yt) return std::nullopt;
  return Proportionality{factor, false};
}

// ---------------------------------------------------------------------------

std::optional<ScalarPoly> check_condition_A(const VectorField& fhat) {
  if (fhat.linear_part().is_zero()) throw std::invalid_argument("check_condition_A: linear part is zero");
  const auto fit = fit_multiples(fhat, {fhat.linear_part()});
  if (!fit) return std::nullopt;
  return fit->multipliers.front();
}

std::optional<ShapeFit> fit_nf_shape(const VectorField& h, const ExactMatrix& m) {
  const ExactMatrix& a = h.linear_part();
  if (m.rows() != a.rows() || m.cols() != a.cols()) throw std::invalid_argument("fit_nf_shape: M has wrong shape");
  if (constant_proportionality(m, a)) throw std::invalid_argument("fit_nf_shape: M is proportional to A");

  const auto fit = fit_multiples(h, {a, m});
  if (!fit) return std::nullopt;

  ShapeFit shape{a, m, fit->multipliers[0], fit->multipliers[1], VectorField(h.dimension(), h.truncation()),
                 fit->nonunique_degrees};
  const VectorField au(a, h.truncation());
  const VectorField mu(m, h.truncation());
  shape.residual = h - (au + shape.alpha * au + shape.mu * mu);
  return shape;
}

std::optional<ShapeFit> fit_nf_shape_any(const VectorField& h, const std::vector<ExactMatrix>& candidates) {
  for (const auto& m : candidates) {
    if (constant_proportionality(m, h.linear_part())) continue;
    if (auto fit = fit_nf_shape(h, m)) return fit;
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------

IntegralBasis common_linear_integrals(const ExactVector& a, const ExactMatrix& m, int degree_bound) {
  const std::size_t n = a.size();
  if (degree_bound < 1) throw std::invalid_argument("common_linear_integrals: degree bound must be >= 1");
  if (m.rows() != n || m.cols() != n) throw std::invalid_argument("common_linear_integrals: M has wrong shape");

  std::vector<std::vector<ScalarPoly>> per_degree(static_cast<std::size_t>(degree_bound));
  parallel_for(per_degree.size(), [&](std::size_t slot) {
    const auto d = static_cast<unsigned>(slot + 1);
    const auto monos = monomials_of_degree(n, d);
    std::map<MultiIndex, std::size_t> index;
    for (std::size_t c = 0; c < monos.size(); ++c) index.emplace(monos[c], c);

    // Rows [0, size) hold (A u).grad, rows [size, 2 size) hold (M u).grad.
    ExactMatrix op(2 * monos.size(), monos.size());
    for (std::size_t c = 0; c < monos.size(); ++c) {
      const auto& q = monos[c];
      op(c, c) = q.dot(a);
      for (std::size_t i = 0; i < n; ++i) {
        if (q[i] == 0) continue;
        std::vector<unsigned> lowered = q.exponents();
        --lowered[i];
        const MultiIndex base(std::move(lowered));
        for (std::size_t l = 0; l < n; ++l) {
          if (m(i, l).is_zero()) continue;
          const auto row = monos.size() + index.at(base + MultiIndex::unit(n, l));
          op(row, c) += GaussianRational(static_cast<long>(q[i])) * m(i, l);
        }
      }
    }

    for (const auto& v : kernel_basis(op)) {
      ScalarPoly kappa(n, degree_bound);
      for (std::size_t c = 0; c < monos.size(); ++c) kappa.add_term(monos[c], v[c]);
      per_degree[slot].push_back(std::move(kappa));
    }
  });

  IntegralBasis out{degree_bound, {}};
  for (auto& polys : per_degree) {
    for (auto& p : polys) out.basis.push_back(std::move(p));
  }
  return out;
}

}  // namespace pdnf
