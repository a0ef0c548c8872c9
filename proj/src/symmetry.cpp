#include "pdnf/symmetry.hpp"

#include <exception>
#include <functional>
#include <utility>

#include "pdnf/parallel.hpp"

namespace pdnf {

namespace {

using Key = std::pair<std::size_t, MultiIndex>;

// Every coefficient of f, linear entries included, keyed by (component, exponent).
std::map<Key, GaussianRational> coefficients(const VectorField& f) {
  std::map<Key, GaussianRational> out;
  const std::size_t n = f.dimension();
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t i = 0; i < n; ++i) {
      const auto& c = f.linear_part()(k, i);
      if (!c.is_zero()) out.emplace(Key{k, MultiIndex::unit(n, i)}, c);
    }
  }
  for (const auto& t : f.nonlinear_terms()) out.emplace(Key{t.component, t.exponents}, t.coeff);
  return out;
}

// Columns are the coefficient vectors of `fields` over the union of their supports.
ExactMatrix stack_columns(const std::vector<std::map<Key, GaussianRational>>& fields,
                          std::map<Key, std::size_t>& rows) {
  for (const auto& f : fields) {
    for (const auto& [key, c] : f) rows.emplace(key, 0);
  }
  std::size_t r = 0;
  for (auto& [key, index] : rows) index = r++;
  ExactMatrix m(rows.size(), fields.size());
  for (std::size_t col = 0; col < fields.size(); ++col) {
    for (const auto& [key, c] : fields[col]) m(rows.at(key), col) = c;
  }
  return m;
}

ExactVector vectorize(const ExactMatrix& b) {
  ExactVector v;
  for (std::size_t r = 0; r < b.rows(); ++r) {
    for (std::size_t c = 0; c < b.cols(); ++c) v.push_back(b(r, c));
  }
  return v;
}

// Rank of matrices viewed as vectors of their entries.
std::size_t matrix_rank(const std::vector<ExactMatrix>& ms) {
  if (ms.empty()) return 0;
  const std::size_t size = ms.front().rows() * ms.front().cols();
  ExactMatrix stacked(size, ms.size());
  for (std::size_t c = 0; c < ms.size(); ++c) {
    const auto v = vectorize(ms[c]);
    for (std::size_t r = 0; r < size; ++r) stacked(r, c) = v[r];
  }
  return rank(stacked);
}

Evidence make(std::string name, EvidenceStatus status, std::string summary) {
  Evidence e;
  e.name = std::move(name);
  e.status = status;
  e.summary = std::move(summary);
  return e;
}

// Runs `body`, turning any exception into a failed entry.
Evidence guarded(const std::string& name, const std::function<Evidence()>& body) {
  try {
    return body();
  } catch (const std::exception& err) {
    return make(name, EvidenceStatus::fail, std::string("precondition failed: ") + err.what());
  }
}

Evidence eigen_entry(const VectorField& f, const EigenData& eigen) {
  if (eigen.dimension() != f.dimension()) {
    return make("eigen-data", EvidenceStatus::fail, "eigen data dimension differs from the field");
  }
  if (!eigen.diagonalizes(f.linear_part())) {
    return make("eigen-data", EvidenceStatus::fail, "eigen data does not diagonalize the linear part");
  }
  return make("eigen-data", EvidenceStatus::pass, "eigen data diagonalizes the linear part exactly");
}

Evidence symmetry_entry(const std::string& name, const VectorField& f, const VectorField& g, int truncation) {
  return guarded(name, [&] {
    auto residual = check_symmetry(f, g, truncation);
    const bool zero = residual.is_zero();
    Evidence e = make(name, zero ? EvidenceStatus::pass : EvidenceStatus::fail,
                      zero ? "{f,g} = 0 up to the truncation degree" : "{f,g} has nonzero terms");
    e.facts["residual_truncation"] = std::to_string(residual.truncation());
    e.residual = std::move(residual);
    return e;
  });
}

Evidence not_proportional_entry(const VectorField& f, const VectorField& g, int truncation) {
  return guarded("not-proportional-to-f", [&] {
    const auto ft = f.truncated(truncation);
    const auto gt = g.truncated(truncation);
    if (gt.is_zero()) return make("not-proportional-to-f", EvidenceStatus::fail, "g is zero");
    const auto p = constant_proportionality(gt, ft);
    if (p) {
      Evidence e = make("not-proportional-to-f", EvidenceStatus::fail, "g is a constant multiple of f");
      e.facts["factor"] = p->factor.to_string();
      e.proportionality = p;
      return e;
    }
    return make("not-proportional-to-f", EvidenceStatus::pass, "g is not a constant multiple of f");
  });
}

Evidence linear_part_entry(const VectorField& f, const VectorField& g, int truncation) {
  return guarded("linear-part", [&] {
    const ExactMatrix& b = g.linear_part();
    if (!b.is_zero()) {
      const auto p = constant_proportionality(b, f.linear_part());
      if (!p) return make("linear-part", EvidenceStatus::fail, "B is neither zero nor proportional to A");
      Evidence e = make("linear-part", EvidenceStatus::pass, "B is proportional to A");
      e.facts["factor"] = p->factor.to_string();
      e.proportionality = p;
      return e;
    }

    const auto big_g = g.truncated(truncation).nonlinear_part();
    const auto big_f = f.truncated(truncation).nonlinear_part();
    if (big_g.is_zero()) return make("linear-part", EvidenceStatus::fail, "B = 0 and G = 0");
    Evidence e = make("linear-part", EvidenceStatus::pass,
                      "B = 0; the auxiliary symmetry g + f has linear part A");
    e.facts["B_zero"] = "true";
    const auto p = constant_proportionality(big_g, big_f);
    if (p) {
      // The literal reading excludes G = cF, yet the worked examples have
      // exactly that. What the argument needs is g + f = Au + (1 + c)F, a
      // symmetry with linear part A that is not a multiple of f.
      e.facts["G_proportional_to_F"] = "true";
      e.facts["G_over_F"] = p->factor.to_string();
      e.summary += "; G is a constant multiple of F, accepted through g + f";
      e.proportionality = p;
    } else {
      e.facts["G_proportional_to_F"] = "false";
    }
    e.auxiliary_symmetry = g.truncated(truncation) + f.truncated(truncation);
    return e;
  });
}

Evidence omega_entry(const EigenData& eigen, unsigned k_max, const OmegaOptions& options, bool& budget_exceeded) {
  try {
    auto report = check_omega(eigen.eigenvalues(), k_max, options);
    Evidence e;
    e.name = "condition-omega";
    switch (report.verdict) {
      case OmegaVerdict::holds_at_horizon:
        e.status = EvidenceStatus::horizon_limited;
        e.summary = "partial sums stay above the threshold up to k_max";
        break;
      case OmegaVerdict::violated:
        e.status = EvidenceStatus::fail;
        e.summary = "a partial sum falls below the threshold";
        break;
      case OmegaVerdict::indeterminate:
        e.status = EvidenceStatus::inconclusive;
        e.summary = "no admissible q below the horizon";
        break;
    }
    e.facts["lattice_points"] = std::to_string(report.lattice_points);
    e.omega = std::move(report);
    return e;
  } catch (const BudgetExceeded& err) {
    budget_exceeded = true;
    return make("condition-omega", EvidenceStatus::inconclusive, err.what());
  } catch (const std::exception& err) {
    return make("condition-omega", EvidenceStatus::fail, std::string("precondition failed: ") + err.what());
  }
}

Evidence condition_a_entry(const VectorField& f, const EigenData& eigen, int truncation,
                           const std::optional<NormalizationResult>& nr) {
  Evidence e = make("condition-A", EvidenceStatus::info, "");
  try {
    const auto fhat = eigen.to_eigencoordinates(f.truncated(truncation));
    auto alpha = check_condition_A(fhat);
    e.facts["f_satisfies"] = alpha ? "true" : "false";
    if (alpha) e.condition_a_alpha = std::move(alpha);
    if (nr) e.facts["nf_satisfies"] = check_condition_A(nr->normal_form) ? "true" : "false";
    e.summary = e.condition_a_alpha
                    ? "f already has the form Au + alpha(u) Au; convergence follows classically"
                    : "f does not have the form Au + alpha(u) Au, as the theorems assume";
  } catch (const std::exception& err) {
    e.summary = std::string("not evaluated: ") + err.what();
  }
  return e;
}

struct Hypothesis2 {
  Evidence normal_form;
  Evidence shape;
  Evidence integrals;
  std::optional<NormalizationResult> nr;
};

// Hypothesis (ii): the NF fits Au + alpha Au + mu Mu, and u' = Au, u' = Mu
// share no polynomial constant of motion up to degree N.
Hypothesis2 hypothesis_two(const VectorField& f, const ExactMatrix& m, int truncation, const EigenData& eigen) {
  Hypothesis2 out;
  std::string nf_error;
  try {
    out.nr = normalize(f, eigen, truncation);
    std::size_t nonzero = 0;
    for (const auto& gen : out.nr->generators) nonzero += gen.is_zero() ? 0 : 1;
    out.normal_form = make("normal-form", EvidenceStatus::info, "normalized degree by degree");
    out.normal_form.facts["nonzero_generators"] = std::to_string(nonzero);
    out.normal_form.normal_form = out.nr->normal_form;
  } catch (const std::exception& err) {
    nf_error = err.what();
    out.normal_form = make("normal-form", EvidenceStatus::fail, std::string("normalization failed: ") + err.what());
  }

  std::optional<ExactMatrix> m_eigen;
  std::string m_error;
  try {
    if (m.rows() != f.dimension() || m.cols() != f.dimension()) throw std::invalid_argument("M has the wrong shape");
    if (eigen.dimension() != f.dimension()) throw std::invalid_argument("eigen data dimension differs");
    m_eigen = eigen.to_eigencoordinates(m);
  } catch (const std::exception& err) {
    m_error = err.what();
  }

  if (!out.nr) {
    out.shape = make("nf-shape", EvidenceStatus::fail, "no normal form: " + nf_error);
  } else if (!m_eigen) {
    out.shape = make("nf-shape", EvidenceStatus::fail, "precondition failed: " + m_error);
  } else {
    out.shape = guarded("nf-shape", [&] {
      auto fit = fit_nf_shape(out.nr->normal_form, *m_eigen);
      if (!fit) return make("nf-shape", EvidenceStatus::fail, "the NF is not of the form Au + alpha Au + mu Mu");
      Evidence e = make("nf-shape", EvidenceStatus::pass, "NF = Au + alpha Au + mu Mu exactly up to degree N");
      e.facts["nonunique_degrees"] = std::to_string(fit->nonunique_degrees.size());
      e.shape = std::move(fit);
      return e;
    });
  }

  if (!m_eigen) {
    out.integrals = make("no-common-integrals", EvidenceStatus::fail, "precondition failed: " + m_error);
  } else {
    out.integrals = guarded("no-common-integrals", [&] {
      auto basis = common_linear_integrals(eigen.eigenvalues(), *m_eigen, truncation);
      const bool none = basis.basis.empty();
      Evidence e = make("no-common-integrals", none ? EvidenceStatus::horizon_limited : EvidenceStatus::fail,
                        none ? "no common polynomial constant of motion up to degree N"
                             : "u' = Au and u' = Mu share a polynomial constant of motion");
      e.facts["kernel_dimension"] = std::to_string(basis.basis.size());
      e.integrals = std::move(basis);
      return e;
    });
  }
  return out;
}

Evidence transport_entry(const VectorField& g, const std::optional<NormalizationResult>& nr) {
  Evidence e = make("transported-symmetry", EvidenceStatus::info, "");
  if (!nr) {
    e.summary = "not evaluated: no normal form";
    return e;
  }
  try {
    const auto moved = transport_symmetry(g, *nr);
    auto residual = lie_bracket(nr->normal_form, moved).truncated(nr->truncation);
    e.facts["bracket_with_nf_zero"] = residual.is_zero() ? "true" : "false";
    e.facts["linear_part_preserved"] =
        moved.linear_part() == nr->eigen.to_eigencoordinates(g.linear_part()) ? "true" : "false";
    e.summary = "symmetry carried into NF coordinates";
    e.residual = std::move(residual);
    e.auxiliary_symmetry = moved;
  } catch (const std::exception& err) {
    e.summary = std::string("not evaluated: ") + err.what();
  }
  return e;
}

CertificateReport finish(CertificateReport report) {
  report.verdict = assemble_verdict(report.entries);
  return report;
}

}  // namespace

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::convergent_certified: return "convergent-certified";
    case Verdict::convergent_certified_at_horizon: return "convergent-certified-at-horizon";
    case Verdict::hypothesis_failed: return "hypothesis-failed";
    case Verdict::inconclusive: return "inconclusive";
  }
  return "?";
}

const char* to_string(EvidenceStatus s) {
  switch (s) {
    case EvidenceStatus::pass: return "pass";
    case EvidenceStatus::fail: return "fail";
    case EvidenceStatus::horizon_limited: return "horizon-limited";
    case EvidenceStatus::inconclusive: return "inconclusive";
    case EvidenceStatus::info: return "info";
  }
  return "?";
}

const Evidence* CertificateReport::find(const std::string& name) const {
  for (const auto& e : entries) {
    if (e.name == name) return &e;
  }
  return nullptr;
}

Verdict assemble_verdict(const std::vector<Evidence>& entries) {
  bool inconclusive = false;
  bool horizon = false;
  for (const auto& e : entries) {
    if (e.status == EvidenceStatus::fail) return Verdict::hypothesis_failed;
    inconclusive = inconclusive || e.status == EvidenceStatus::inconclusive;
    horizon = horizon || e.status == EvidenceStatus::horizon_limited;
  }
  if (inconclusive) return Verdict::inconclusive;
  return horizon ? Verdict::convergent_certified_at_horizon : Verdict::convergent_certified;
}

VectorField check_symmetry(const VectorField& f, const VectorField& g, int truncation) {
  if (f.dimension() != g.dimension()) throw std::invalid_argument("check_symmetry: dimension mismatch");
  if (truncation < 1 || truncation > f.truncation() || truncation > g.truncation()) {
    throw std::invalid_argument("check_symmetry: degree " + std::to_string(truncation) +
                                " outside the operands' truncations");
  }
  return lie_bracket(f, g).truncated(truncation);
}

VectorField transport_symmetry(const VectorField& g, const NormalizationResult& nr) { return replay(g, nr); }

std::vector<ExactMatrix> linear_symmetries(const VectorField& h) {
  const std::size_t n = h.dimension();
  std::vector<std::map<Key, GaussianRational>> columns(n * n);
  parallel_for(n * n, [&](std::size_t idx) {
    ExactMatrix e(n, n);
    e(idx / n, idx % n) = 1;
    columns[idx] = coefficients(lie_bracket(h, VectorField(e, h.truncation())));
  });
  std::map<Key, std::size_t> rows;
  const ExactMatrix system = stack_columns(columns, rows);

  std::vector<ExactMatrix> out;
  if (system.rows() == 0) {
    for (std::size_t idx = 0; idx < n * n; ++idx) {
      ExactMatrix e(n, n);
      e(idx / n, idx % n) = 1;
      out.push_back(std::move(e));
    }
    return out;
  }
  for (const auto& v : kernel_basis(system)) {
    ExactMatrix b(n, n);
    for (std::size_t idx = 0; idx < n * n; ++idx) b(idx / n, idx % n) = v[idx];
    out.push_back(std::move(b));
  }
  return out;
}

CertificateReport certify_theorem1(const VectorField& f, const VectorField& g, const ExactMatrix& m, int truncation,
                                   unsigned k_max, const EigenData& eigen, const CertifyOptions& options) {
  CertificateReport report;
  report.theorem = "theorem1";
  report.truncation = truncation;
  report.k_max = k_max;

  report.entries.push_back(eigen_entry(f, eigen));
  report.entries.push_back(symmetry_entry("symmetry", f, g, truncation));
  report.entries.push_back(not_proportional_entry(f, g, truncation));
  report.entries.push_back(linear_part_entry(f, g, truncation));
  report.entries.push_back(omega_entry(eigen, k_max, options.omega, report.budget_exceeded));

  auto two = hypothesis_two(f, m, truncation, eigen);
  report.entries.push_back(condition_a_entry(f, eigen, truncation, two.nr));
  report.entries.push_back(std::move(two.normal_form));
  report.entries.push_back(std::move(two.shape));
  report.entries.push_back(std::move(two.integrals));

  // The proof carries the symmetry with linear part A (g itself, or g + f
  // when B = 0) to the NF.
  const Evidence* linear = report.find("linear-part");
  const VectorField& carried =
      linear && linear->auxiliary_symmetry ? *linear->auxiliary_symmetry : g;
  report.entries.push_back(transport_entry(carried, two.nr));
  return finish(std::move(report));
}

CertificateReport certify_theorem2(const VectorField& f, const std::vector<VectorField>& gs, const ExactMatrix& m,
                                   int truncation, unsigned k_max, unsigned ell, const EigenData& eigen,
                                   const CertifyOptions& options) {
  if (ell == 0) throw std::invalid_argument("certify_theorem2: ell must be at least 1");
  if (gs.empty()) throw std::invalid_argument("certify_theorem2: no symmetries given");

  CertificateReport report;
  report.theorem = "theorem2";
  report.truncation = truncation;
  report.k_max = k_max;
  report.entries.push_back(eigen_entry(f, eigen));

  std::vector<ExactMatrix> bs;
  for (std::size_t j = 0; j < gs.size(); ++j) {
    const std::string tag = "[" + std::to_string(j + 1) + "]";
    report.entries.push_back(symmetry_entry("symmetry" + tag, f, gs[j], truncation));
    const bool zero = gs[j].linear_part().is_zero();
    report.entries.push_back(make("linear-part" + tag, zero ? EvidenceStatus::fail : EvidenceStatus::pass,
                                  zero ? "B is zero" : "B is nonzero"));
    bs.push_back(gs[j].linear_part());
  }

  report.entries.push_back(guarded("independence", [&] {
    const std::size_t r = matrix_rank(bs);
    const bool ok = r == gs.size() && gs.size() == ell;
    Evidence e = make("independence", ok ? EvidenceStatus::pass : EvidenceStatus::fail,
                      r != gs.size() ? "the matrices B_j are linearly dependent"
                      : ok           ? "ell linearly independent matrices B_j"
                                     : "the number of symmetries differs from ell");
    e.facts["rank"] = std::to_string(r);
    e.facts["symmetries"] = std::to_string(gs.size());
    e.facts["ell"] = std::to_string(ell);
    bs.push_back(f.linear_part());
    e.facts["A_in_span_of_B"] = matrix_rank(bs) == r ? "true" : "false";
    bs.pop_back();
    return e;
  }));

  report.entries.push_back(guarded("no-combination-proportional-to-f", [&] {
    std::vector<std::map<Key, GaussianRational>> cols;
    for (const auto& g : gs) cols.push_back(coefficients(g.truncated(truncation)));
    const auto target = coefficients(f.truncated(truncation));
    cols.push_back(target);
    std::map<Key, std::size_t> rows;
    ExactMatrix system = stack_columns(cols, rows);
    ExactMatrix lhs(system.rows(), gs.size());
    ExactVector rhs(system.rows());
    for (std::size_t r = 0; r < system.rows(); ++r) {
      for (std::size_t c = 0; c < gs.size(); ++c) lhs(r, c) = system(r, c);
      rhs[r] = system(r, gs.size());
    }
    const bool hit = !target.empty() && solve(lhs, rhs).has_value();
    return make("no-combination-proportional-to-f", hit ? EvidenceStatus::fail : EvidenceStatus::pass,
                hit ? "f is a linear combination of the g_j" : "no combination of the g_j is a multiple of f");
  }));

  report.entries.push_back(omega_entry(eigen, k_max, options.omega, report.budget_exceeded));
  auto two = hypothesis_two(f, m, truncation, eigen);

  if (two.nr) {
    report.entries.push_back(guarded("nf-linear-symmetries", [&] {
      const auto sym = linear_symmetries(two.nr->normal_form);
      const std::size_t with_a = sym.size();
      auto extended = sym;
      extended.push_back(two.nr->normal_form.linear_part());
      const bool a_inside = matrix_rank(extended) == matrix_rank(sym);
      const std::size_t without_a = a_inside && with_a > 0 ? with_a - 1 : with_a;
      const bool match_with = ell == with_a;
      const bool match_without = ell == without_a;
      Evidence e = make("nf-linear-symmetries",
                        match_with || match_without ? EvidenceStatus::pass : EvidenceStatus::fail,
                        match_with      ? "ell equals the NF's linear-symmetry count, Au included"
                        : match_without ? "ell equals the NF's linear-symmetry count, Au excluded"
                                        : "ell differs from the NF's linear-symmetry count under both conventions");
      e.facts["count_including_Au"] = std::to_string(with_a);
      e.facts["count_excluding_Au"] = std::to_string(without_a);
      e.facts["ell"] = std::to_string(ell);
      return e;
    }));
  } else {
    report.entries.push_back(make("nf-linear-symmetries", EvidenceStatus::fail, "no normal form"));
  }

  report.entries.push_back(condition_a_entry(f, eigen, truncation, two.nr));
  report.entries.push_back(std::move(two.normal_form));
  report.entries.push_back(std::move(two.shape));
  report.entries.push_back(std::move(two.integrals));
  return finish(std::move(report));
}

CertificateReport corollary_2d(const VectorField& f, const VectorField& g, int truncation, unsigned k_max,
                               const EigenData& eigen, const CertifyOptions& options) {
  if (f.dimension() != 2 || g.dimension() != 2) throw std::invalid_argument("corollary_2d: needs n = 2");

  CertificateReport report;
  report.theorem = "corollary2d";
  report.truncation = truncation;
  report.k_max = k_max;
  report.entries.push_back(eigen_entry(f, eigen));
  report.entries.push_back(symmetry_entry("symmetry", f, g, truncation));
  report.entries.push_back(not_proportional_entry(f, g, truncation));
  report.entries.push_back(omega_entry(eigen, k_max, options.omega, report.budget_exceeded));
  report.entries.push_back(make("hypothesis-ii", EvidenceStatus::info, "automatically satisfied for n = 2"));
  return finish(std::move(report));
}

}  // namespace pdnf
