#include "pdnf/commands.hpp"

#include <algorithm>
#include <functional>
#include <optional>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "pdnf/examples.hpp"
#include "pdnf/io.hpp"
#include "pdnf/parallel.hpp"

namespace pdnf {

using nlohmann::json;

namespace {

constexpr int default_degree = 6;
constexpr unsigned default_kmax = 8;

struct Settings {
  std::vector<std::string> inputs;
  int degree = default_degree;
  unsigned kmax = default_kmax;
  std::string m_spec = "identity";
  std::string out_path;
  std::string nf_out_path;
  std::string g_out_path;
  unsigned threads = 1;
  std::string variant = "paper";
  bool strict_positive = false;
  unsigned precision = 50;
  std::uint64_t budget = 10'000'000;
  std::string threshold = "-100";
  std::string theorem = "1";
  unsigned ell = 0;
  std::string eigenvalues;
  std::string example;
  unsigned k = 1;

  bool degree_given = false;
  CLI::Option* ell_option = nullptr;
};

// A finished command: the machine report, a human summary and the exit code.
struct Outcome {
  json report;
  std::string summary;
  int code = exit_ok;
};

json approximation(const std::string& value, unsigned digits) {
  return {{"approximation", true}, {"digits", digits}, {"value", value}};
}

json multi_index(const MultiIndex& q) { return q.exponents(); }

json proportionality_json(const Proportionality& p) {
  return {{"factor", p.factor.to_string()}, {"ambiguous", p.ambiguous}};
}

json shape_json(const ShapeFit& fit) {
  return {{"base", to_json(fit.base)},       {"candidate", to_json(fit.candidate)},
          {"alpha", to_json(fit.alpha)},     {"mu", to_json(fit.mu)},
          {"residual", to_json(fit.residual)}, {"nonunique_degrees", fit.nonunique_degrees}};
}

json integrals_json(const IntegralBasis& basis) {
  json list = json::array();
  for (const auto& p : basis.basis) list.push_back(to_json(p));
  return {{"degree_bound", basis.degree_bound}, {"basis", list}};
}

const char* variant_name(OmegaVariant v) { return v == OmegaVariant::paper ? "paper" : "shifted"; }

const char* omega_verdict_name(OmegaVerdict v) {
  switch (v) {
    case OmegaVerdict::holds_at_horizon: return "holds-at-horizon";
    case OmegaVerdict::violated: return "violated";
    case OmegaVerdict::indeterminate: return "indeterminate";
  }
  return "?";
}

// Truncation actually used: the flag when given, otherwise the default
// capped by the inputs' truncations.
int effective_degree(const Settings& s, const std::vector<const VectorField*>& fields) {
  if (s.degree_given) {
    if (s.degree < 2) throw InputError(InputErrorKind::dimension, "--degree", "must be at least 2");
    for (const auto* f : fields) {
      if (s.degree > f->truncation()) {
        throw InputError(InputErrorKind::dimension, "--degree",
                         "exceeds an input truncation of " + std::to_string(f->truncation()));
      }
    }
    return s.degree;
  }
  int degree = default_degree;
  for (const auto* f : fields) degree = std::min(degree, f->truncation());
  if (degree < 2) throw InputError(InputErrorKind::dimension, "truncation", "inputs must reach degree 2");
  return degree;
}

OmegaOptions omega_options(const Settings& s) {
  OmegaOptions opt;
  if (s.variant == "paper") {
    opt.variant = OmegaVariant::paper;
  } else if (s.variant == "shifted") {
    opt.variant = OmegaVariant::shifted;
  } else {
    throw InputError(InputErrorKind::schema, "--omega-variant", "expected paper or shifted");
  }
  opt.strict_positive = s.strict_positive;
  if (s.precision == 0) throw InputError(InputErrorKind::dimension, "--precision", "must be positive");
  opt.precision = s.precision;
  opt.budget = s.budget;
  try {
    const auto t = GaussianRational::parse(s.threshold);
    if (!t.is_real()) throw std::invalid_argument("threshold must be real");
    opt.threshold = t.re();
  } catch (const std::invalid_argument& err) {
    throw InputError(InputErrorKind::coefficient, "--threshold", err.what());
  }
  return opt;
}

json omega_parameters(const OmegaOptions& opt, unsigned kmax) {
  return {{"kmax", kmax},
          {"omega_variant", variant_name(opt.variant)},
          {"strict_positive_q", opt.strict_positive},
          {"precision", opt.precision},
          {"budget", opt.budget},
          {"threshold", GaussianRational(opt.threshold).to_string()}};
}

ExactMatrix load_m(const Settings& s, std::size_t n) {
  ExactMatrix m = s.m_spec == "identity" ? ExactMatrix::identity(n) : parse_matrix_file(s.m_spec);
  if (m.rows() != n || m.cols() != n) {
    throw InputError(InputErrorKind::dimension, "--M", "expected a " + std::to_string(n) + "x" + std::to_string(n) +
                                                           " matrix");
  }
  return m;
}

json field_document(const VectorField& f, const std::optional<EigenData>& eigen) {
  return to_json(FieldSpecDocument{f, eigen});
}

// --- subcommands -----------------------------------------------------------

Outcome cmd_normalize(const Settings& s) {
  const auto doc = parse_field_file(s.inputs.at(0));
  const auto eigen = doc.eigen_or_diagonal();
  const int degree = effective_degree(s, {&doc.field});
  const auto nr = normalize(doc.field, eigen, degree);

  json generators = json::array();
  for (std::size_t i = 0; i < nr.generators.size(); ++i) {
    if (nr.generators[i].is_zero()) continue;
    generators.push_back({{"degree", i + 2}, {"field", to_json(nr.generators[i])}});
  }
  const json nf = field_document(nr.normal_form, EigenData(eigen.eigenvalues()));
  if (!s.nf_out_path.empty()) write_text_file(s.nf_out_path, dump(nf));

  Outcome o;
  o.report = {{"command", "normalize"},
              {"parameters", {{"degree", degree}}},
              {"eigenvalues", to_json(eigen.eigenvalues())},
              {"normal_form", nf},
              {"generators", generators},
              {"all_generators_zero", nr.all_generators_zero()}};
  o.summary = "normalized up to degree " + std::to_string(degree) + "; " + std::to_string(generators.size()) +
              " nonzero generator(s)\n";
  return o;
}

ExactVector eigenvalues_from(const Settings& s, std::optional<EigenData>& eigen_out) {
  const bool from_flag = !s.eigenvalues.empty();
  if (from_flag == !s.inputs.empty()) {
    throw InputError(InputErrorKind::schema, "arguments", "give either --eigenvalues or one field file");
  }
  if (from_flag) return parse_coefficient_list(s.eigenvalues);
  const auto doc = parse_field_file(s.inputs.at(0));
  eigen_out = doc.eigen_or_diagonal();
  return eigen_out->eigenvalues();
}

Outcome cmd_check_omega(const Settings& s) {
  std::optional<EigenData> unused;
  const auto a = eigenvalues_from(s, unused);
  const auto opt = omega_options(s);
  OmegaReport report;
  try {
    report = check_omega(a, s.kmax, opt);
  } catch (const BudgetExceeded&) {
    throw;
  } catch (const std::invalid_argument& err) {
    throw InputError(InputErrorKind::dimension, "eigenvalues", err.what());
  }
  Outcome o;
  o.report = to_json(report);
  o.report["command"] = "check-omega";
  o.code = report.verdict == OmegaVerdict::holds_at_horizon ? exit_ok : exit_hypothesis_failed;
  o.summary = std::string("condition omega: ") + omega_verdict_name(report.verdict) + " (k_max = " +
              std::to_string(s.kmax) + ", " + std::to_string(report.lattice_points) + " lattice points)\n";
  return o;
}

Outcome cmd_check_condition_a(const Settings& s) {
  const auto doc = parse_field_file(s.inputs.at(0));
  const auto eigen = doc.eigen_or_diagonal();
  const int degree = effective_degree(s, {&doc.field});
  const auto fhat = eigen.to_eigencoordinates(doc.field.truncated(degree));
  if (fhat.linear_part().is_zero()) throw InputError(InputErrorKind::dimension, "A", "linear part is zero");
  const auto alpha = check_condition_A(fhat);
  const auto nr = normalize(doc.field, eigen, degree);
  const auto nf_alpha = check_condition_A(nr.normal_form);

  Outcome o;
  o.report = {{"command", "check-condition-a"},
              {"parameters", {{"degree", degree}}},
              {"field_satisfies", alpha.has_value()},
              {"alpha", alpha ? to_json(*alpha) : json(nullptr)},
              {"normal_form_satisfies", nf_alpha.has_value()},
              {"normal_form_alpha", nf_alpha ? to_json(*nf_alpha) : json(nullptr)}};
  const bool holds = alpha || nf_alpha;
  o.code = holds ? exit_ok : exit_hypothesis_failed;
  o.summary = std::string("condition A: ") + (holds ? "satisfied" : "not satisfied") + " up to degree " +
              std::to_string(degree) + "\n";
  return o;
}

Outcome cmd_check_symmetry(const Settings& s) {
  if (s.inputs.size() != 2) throw InputError(InputErrorKind::schema, "arguments", "expected f.json g.json");
  const auto f = parse_field_file(s.inputs[0]);
  const auto g = parse_field_file(s.inputs[1]);
  if (f.field.dimension() != g.field.dimension()) {
    throw InputError(InputErrorKind::dimension, "n", "f and g have different dimensions");
  }
  const int degree = effective_degree(s, {&f.field, &g.field});
  const auto residual = check_symmetry(f.field, g.field, degree);
  Outcome o;
  o.report = {{"command", "check-symmetry"},
              {"parameters", {{"degree", degree}}},
              {"is_symmetry", residual.is_zero()},
              {"residual", to_json(residual)}};
  o.code = residual.is_zero() ? exit_ok : exit_hypothesis_failed;
  o.summary = residual.is_zero() ? "{f,g} = 0 up to degree " + std::to_string(degree) + "\n"
                                 : "{f,g} is nonzero up to degree " + std::to_string(degree) + "\n";
  return o;
}

Outcome cmd_fit_shape(const Settings& s) {
  const auto doc = parse_field_file(s.inputs.at(0));
  const auto eigen = doc.eigen_or_diagonal();
  const int degree = effective_degree(s, {&doc.field});
  const auto m = load_m(s, doc.field.dimension());
  const auto nr = normalize(doc.field, eigen, degree);
  const auto m_eigen = eigen.to_eigencoordinates(m);
  std::optional<ShapeFit> fit;
  try {
    fit = fit_nf_shape(nr.normal_form, m_eigen);
  } catch (const std::invalid_argument& err) {
    throw InputError(InputErrorKind::dimension, "--M", err.what());
  }
  Outcome o;
  o.report = {{"command", "fit-shape"},
              {"parameters", {{"degree", degree}, {"M", s.m_spec}}},
              {"M_eigencoordinates", to_json(m_eigen)},
              {"normal_form", to_json(nr.normal_form)},
              {"fits", fit.has_value()},
              {"fit", fit ? shape_json(*fit) : json(nullptr)}};
  o.code = fit ? exit_ok : exit_hypothesis_failed;
  o.summary = fit ? "NF = Au + alpha Au + mu Mu up to degree " + std::to_string(degree) + "\n"
                  : "NF does not have the form Au + alpha Au + mu Mu\n";
  return o;
}

Outcome cmd_integrals(const Settings& s) {
  std::optional<EigenData> eigen;
  const auto a = eigenvalues_from(s, eigen);
  ExactMatrix m = load_m(s, a.size());
  if (eigen) m = eigen->to_eigencoordinates(m);
  if (s.degree < 1) throw InputError(InputErrorKind::dimension, "--degree", "must be at least 1");
  const auto basis = common_linear_integrals(a, m, s.degree);
  Outcome o;
  o.report = {{"command", "integrals"},
              {"parameters", {{"degree", s.degree}, {"M", s.m_spec}}},
              {"eigenvalues", to_json(a)},
              {"M_eigencoordinates", to_json(m)},
              {"integrals", integrals_json(basis)}};
  o.summary = std::to_string(basis.basis.size()) + " common polynomial integral(s) up to degree " +
              std::to_string(s.degree) + "\n";
  return o;
}

Outcome cmd_certify(const Settings& s) {
  if (s.inputs.size() < 2) throw InputError(InputErrorKind::schema, "arguments", "expected f.json g.json [g2.json ..]");
  const auto f = parse_field_file(s.inputs[0]);
  std::vector<VectorField> gs;
  std::vector<const VectorField*> all{&f.field};
  for (std::size_t i = 1; i < s.inputs.size(); ++i) {
    gs.push_back(parse_field_file(s.inputs[i]).field);
    if (gs.back().dimension() != f.field.dimension()) {
      throw InputError(InputErrorKind::dimension, s.inputs[i], "dimension differs from f");
    }
  }
  for (const auto& g : gs) all.push_back(&g);
  const auto eigen = f.eigen_or_diagonal();
  const int degree = effective_degree(s, all);
  CertifyOptions options;
  options.omega = omega_options(s);

  CertificateReport report;
  json params = omega_parameters(options.omega, s.kmax);
  params["degree"] = degree;
  params["theorem"] = s.theorem;
  if (s.theorem == "1") {
    if (gs.size() != 1) throw InputError(InputErrorKind::schema, "arguments", "theorem 1 takes one symmetry");
    const auto m = load_m(s, f.field.dimension());
    params["M"] = s.m_spec;
    report = certify_theorem1(f.field, gs[0], m, degree, s.kmax, eigen, options);
  } else if (s.theorem == "2") {
    const auto m = load_m(s, f.field.dimension());
    const unsigned ell = s.ell_option && s.ell_option->count() ? s.ell : static_cast<unsigned>(gs.size());
    if (ell == 0) throw InputError(InputErrorKind::dimension, "--ell", "must be at least 1");
    params["M"] = s.m_spec;
    params["ell"] = ell;
    report = certify_theorem2(f.field, gs, m, degree, s.kmax, ell, eigen, options);
  } else if (s.theorem == "corollary") {
    if (gs.size() != 1) throw InputError(InputErrorKind::schema, "arguments", "the corollary takes one symmetry");
    if (f.field.dimension() != 2) throw InputError(InputErrorKind::dimension, "n", "the corollary needs n = 2");
    report = corollary_2d(f.field, gs[0], degree, s.kmax, eigen, options);
  } else {
    throw InputError(InputErrorKind::schema, "--theorem", "expected 1, 2 or corollary");
  }

  Outcome o;
  o.report = to_json(report);
  o.report["command"] = "certify";
  o.report["parameters"] = params;
  switch (report.verdict) {
    case Verdict::convergent_certified:
    case Verdict::convergent_certified_at_horizon: o.code = exit_ok; break;
    case Verdict::hypothesis_failed: o.code = exit_hypothesis_failed; break;
    case Verdict::inconclusive: o.code = report.budget_exceeded ? exit_budget_exceeded : exit_hypothesis_failed; break;
  }
  std::ostringstream text;
  text << report.theorem << ": " << to_string(report.verdict) << "\n";
  for (const auto& e : report.entries) text << "  [" << to_string(e.status) << "] " << e.name << ": " << e.summary << "\n";
  o.summary = text.str();
  return o;
}

Outcome cmd_example(const Settings& s) {
  if (s.k == 0) throw InputError(InputErrorKind::dimension, "--k", "must be at least 1");
  const int degree = s.degree_given ? s.degree : std::max<int>(default_degree, 2 * s.k + 1);
  ExampleSystem ex;
  try {
    if (s.example == "rotation2d") {
      ex = build_example_rotation2d(s.k, degree);
    } else if (s.example == "so3") {
      ex = build_example_so3(s.k, std::nullopt, degree);
    } else {
      throw InputError(InputErrorKind::schema, "example", "expected rotation2d or so3");
    }
  } catch (const InputError&) {
    throw;
  } catch (const std::invalid_argument& err) {
    throw InputError(InputErrorKind::dimension, "--degree", err.what());
  }
  Outcome o;
  o.report = field_document(ex.f, ex.eigen);
  if (!s.g_out_path.empty()) write_text_file(s.g_out_path, dump(field_document(ex.g, std::nullopt)));
  o.summary = s.example + " example, k = " + std::to_string(s.k) + ", truncation " + std::to_string(degree) + "\n";
  return o;
}

void add_degree(CLI::App* app, Settings& s) {
  app->add_option("--degree", s.degree, "Truncation degree N (default 6, capped by the inputs)");
}

void add_omega(CLI::App* app, Settings& s) {
  app->add_option("--kmax", s.kmax, "Largest k for condition omega (default 8)");
  app->add_option("--omega-variant", s.variant, "paper: |(q,a)|; shifted: |(q,a) - a_j|");
  app->add_flag("--strict-positive-q", s.strict_positive, "Require every q_i >= 1");
  app->add_option("--precision", s.precision, "Decimal digits for logarithms (default 50)");
  app->add_option("--budget", s.budget, "Lattice point budget (default 10^7)");
  app->add_option("--threshold", s.threshold, "Partial sums below this fail (default -100)");
}

}  // namespace

json to_json(const OmegaReport& report) {
  json records = json::array();
  for (const auto& r : report.records) {
    json rec = {{"k", r.k},
                {"omega_squared", r.omega_squared ? json(GaussianRational(*r.omega_squared).to_string()) : json(nullptr)},
                {"minimizer", r.minimizer ? multi_index(*r.minimizer) : json(nullptr)},
                {"partial_sum_exact_zero", r.partial_sum_is_zero},
                {"partial_sum", approximation(r.partial_sum, report.options.precision)}};
    rec["omega"] = r.omega_squared ? approximation(r.omega_decimal, report.options.precision) : json(nullptr);
    if (report.options.variant == OmegaVariant::shifted) {
      rec["component"] = r.component ? json(*r.component + 1) : json(nullptr);
    }
    records.push_back(std::move(rec));
  }
  return {{"eigenvalues", to_json(report.eigenvalues)},
          {"parameters", omega_parameters(report.options, report.k_max)},
          {"records", records},
          {"lattice_points", report.lattice_points},
          {"verdict", omega_verdict_name(report.verdict)}};
}

json to_json(const CertificateReport& report) {
  json entries = json::array();
  for (const auto& e : report.entries) {
    json w = json::object();
    if (e.residual) w["residual"] = to_json(*e.residual);
    if (e.normal_form) w["normal_form"] = to_json(*e.normal_form);
    if (e.auxiliary_symmetry) w["auxiliary_symmetry"] = to_json(*e.auxiliary_symmetry);
    if (e.proportionality) w["proportionality"] = proportionality_json(*e.proportionality);
    if (e.omega) w["omega"] = to_json(*e.omega);
    if (e.condition_a_alpha) w["alpha"] = to_json(*e.condition_a_alpha);
    if (e.shape) w["shape"] = shape_json(*e.shape);
    if (e.integrals) w["integrals"] = integrals_json(*e.integrals);
    entries.push_back({{"name", e.name},
                       {"status", to_string(e.status)},
                       {"summary", e.summary},
                       {"facts", e.facts},
                       {"witnesses", w}});
  }
  return {{"theorem", report.theorem},
          {"truncation", report.truncation},
          {"kmax", report.k_max},
          {"verdict", to_string(report.verdict)},
          {"budget_exceeded", report.budget_exceeded},
          {"entries", entries}};
}

int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Poincare-Dulac normal forms, symmetries and convergence certificates", "pdnf"};
  app.require_subcommand(1);
  app.fallthrough();
  Settings s;
  app.add_option("--threads", s.threads, "Worker threads (default 1); results do not depend on it")
      ->check(CLI::Range(1u, 256u));

  using Handler = std::function<Outcome(const Settings&)>;
  std::vector<std::pair<CLI::App*, Handler>> commands;
  auto add = [&](const std::string& name, const std::string& help, Handler h) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->add_option("--out", s.out_path, "Write the JSON report here");
    commands.emplace_back(sub, std::move(h));
    return sub;
  };

  auto* normalize_cmd = add("normalize", "Normal form and generators of a field", cmd_normalize);
  normalize_cmd->add_option("field", s.inputs, "Field document")->required()->expected(1);
  normalize_cmd->add_option("--nf-out", s.nf_out_path, "Write the normal form as a field document");
  add_degree(normalize_cmd, s);

  auto* omega_cmd = add("check-omega", "Small divisors omega_k and their logarithmic partial sums", cmd_check_omega);
  omega_cmd->add_option("field", s.inputs, "Field document (alternative to --eigenvalues)")->expected(0, 1);
  omega_cmd->add_option("--eigenvalues", s.eigenvalues, "Comma-separated eigenvalues, e.g. \"i,-i\"");
  add_omega(omega_cmd, s);

  auto* cond_a = add("check-condition-a", "Whether the field has the form Au + alpha(u) Au", cmd_check_condition_a);
  cond_a->add_option("field", s.inputs, "Field document")->required()->expected(1);
  add_degree(cond_a, s);

  auto* sym = add("check-symmetry", "Bracket {f,g} up to the truncation degree", cmd_check_symmetry);
  sym->add_option("fields", s.inputs, "f.json g.json")->required()->expected(2);
  add_degree(sym, s);

  auto* fit = add("fit-shape", "Fit the NF to Au + alpha Au + mu Mu", cmd_fit_shape);
  fit->add_option("field", s.inputs, "Field document")->required()->expected(1);
  fit->add_option("--M", s.m_spec, "identity or a matrix file, in the field's coordinates");
  add_degree(fit, s);

  auto* integ = add("integrals", "Common polynomial integrals of u' = Au and u' = Mu", cmd_integrals);
  integ->add_option("field", s.inputs, "Field document (alternative to --eigenvalues)")->expected(0, 1);
  integ->add_option("--eigenvalues", s.eigenvalues, "Comma-separated eigenvalues");
  integ->add_option("--M", s.m_spec, "identity or a matrix file");
  integ->add_option("--degree", s.degree, "Degree bound (default 6)");

  auto* cert = add("certify", "Check the hypotheses of Theorem 1, Theorem 2 or the planar corollary", cmd_certify);
  cert->add_option("fields", s.inputs, "f.json g.json [g2.json ..]")->required()->expected(2, 64);
  cert->add_option("--theorem", s.theorem, "1, 2 or corollary (default 1)");
  cert->add_option("--M", s.m_spec, "identity or a matrix file, in the field's coordinates");
  s.ell_option = cert->add_option("--ell", s.ell, "Theorem 2: number of symmetries (default: count of g files)");
  add_degree(cert, s);
  add_omega(cert, s);

  auto* example = add("example", "Write an example field (f to --out, g to --g-out)", cmd_example);
  example->add_option("name", s.example, "rotation2d or so3")->required();
  example->add_option("--k", s.k, "Power of x^2 + y^2 (default 1)");
  example->add_option("--g-out", s.g_out_path, "Write the symmetry g here");
  add_degree(example, s);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return exit_ok;
  } catch (const CLI::ParseError& e) {
    err << "input error: " << e.what() << "\n\n" << app.help();
    return exit_input_error;
  }

  set_thread_count(s.threads);
  for (auto& [sub, handler] : commands) {
    if (!sub->parsed()) continue;
    const CLI::Option* degree_flag = sub->get_option_no_throw("--degree");
    s.degree_given = degree_flag && degree_flag->count() > 0;
    try {
      const Outcome o = handler(s);
      const std::string text = dump(o.report);
      if (!s.out_path.empty()) {
        write_text_file(s.out_path, text);
        out << o.summary;
      } else {
        out << text;
        err << o.summary;
      }
      return o.code;
    } catch (const BudgetExceeded& e) {
      err << "budget exceeded: " << e.what() << "\n";
      return exit_budget_exceeded;
    } catch (const InputError& e) {
      err << "input error: " << e.what() << "\n";
      return exit_input_error;
    } catch (const std::invalid_argument& e) {
      err << "input error: " << e.what() << "\n";
      return exit_input_error;
    } catch (const std::out_of_range& e) {
      err << "input error: " << e.what() << "\n";
      return exit_input_error;
    }
  }
  return exit_input_error;
}

}  // namespace pdnf
