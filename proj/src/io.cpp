#include "pdnf/io.hpp"

#include <fstream>
#include <set>
#include <sstream>

namespace pdnf {

using nlohmann::json;

namespace {

std::string where(const std::string& path) { return path.empty() ? "document" : path; }

[[noreturn]] void fail(InputErrorKind kind, const std::string& path, const std::string& detail) {
  throw InputError(kind, path, detail);
}

void expect_keys(const json& j, const std::string& path, const std::set<std::string>& required,
                 const std::set<std::string>& optional) {
  if (!j.is_object()) fail(InputErrorKind::schema, path, "expected an object");
  for (const auto& key : required) {
    if (!j.contains(key)) fail(InputErrorKind::schema, path, "missing key \"" + key + "\"");
  }
  for (const auto& [key, value] : j.items()) {
    if (!required.count(key) && !optional.count(key)) {
      fail(InputErrorKind::schema, path, "unknown key \"" + key + "\"");
    }
  }
}

long long read_int(const json& j, const std::string& path, long long lo, long long hi) {
  if (!j.is_number_integer()) fail(InputErrorKind::schema, path, "expected an integer");
  const long long v = j.get<long long>();
  if (v < lo || v > hi) {
    fail(InputErrorKind::dimension, path,
         "value " + std::to_string(v) + " outside " + std::to_string(lo) + ".." + std::to_string(hi));
  }
  return v;
}

GaussianRational read_coeff(const json& j, const std::string& path) {
  if (!j.is_string()) fail(InputErrorKind::coefficient, path, "coefficients are strings such as \"1/2-3*i\"");
  try {
    return GaussianRational::parse(j.get<std::string>());
  } catch (const std::invalid_argument& err) {
    fail(InputErrorKind::coefficient, path, err.what());
  }
}

ExactMatrix read_matrix(const json& j, const std::string& path, std::optional<std::size_t> size) {
  if (!j.is_array() || j.empty()) fail(InputErrorKind::schema, path, "expected a nonempty array of rows");
  const std::size_t rows = j.size();
  if (size && rows != *size) {
    fail(InputErrorKind::dimension, path, "expected " + std::to_string(*size) + " rows, got " + std::to_string(rows));
  }
  ExactMatrix m(rows, rows);
  for (std::size_t r = 0; r < rows; ++r) {
    const std::string row_path = path + "[" + std::to_string(r) + "]";
    const json& row = j[r];
    if (!row.is_array()) fail(InputErrorKind::schema, row_path, "expected an array");
    if (row.size() != rows) {
      fail(InputErrorKind::dimension, row_path,
           "expected " + std::to_string(rows) + " entries, got " + std::to_string(row.size()));
    }
    for (std::size_t c = 0; c < rows; ++c) m(r, c) = read_coeff(row[c], row_path + "[" + std::to_string(c) + "]");
  }
  return m;
}

ExactVector read_vector(const json& j, const std::string& path, std::size_t size) {
  if (!j.is_array()) fail(InputErrorKind::schema, path, "expected an array");
  if (j.size() != size) {
    fail(InputErrorKind::dimension, path, "expected " + std::to_string(size) + " entries, got " + std::to_string(j.size()));
  }
  ExactVector v;
  for (std::size_t i = 0; i < size; ++i) v.push_back(read_coeff(j[i], path + "[" + std::to_string(i) + "]"));
  return v;
}

json parse_json(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& err) {
    // Turn the byte offset into line:column.
    std::size_t line = 1;
    std::size_t column = 1;
    for (std::size_t i = 0; i + 1 < err.byte && i < text.size(); ++i) {
      if (text[i] == '\n') {
        ++line;
        column = 1;
      } else {
        ++column;
      }
    }
    fail(InputErrorKind::malformed_json, "line " + std::to_string(line) + ", column " + std::to_string(column),
         err.what());
  }
}

}  // namespace

const char* to_string(InputErrorKind kind) {
  switch (kind) {
    case InputErrorKind::malformed_json: return "malformed JSON";
    case InputErrorKind::schema: return "schema error";
    case InputErrorKind::coefficient: return "coefficient error";
    case InputErrorKind::dimension: return "dimension error";
    case InputErrorKind::io: return "file error";
  }
  return "input error";
}

InputError::InputError(InputErrorKind kind, const std::string& path, const std::string& detail)
    : std::invalid_argument(std::string(to_string(kind)) + " at " + where(path) + ": " + detail),
      kind_(kind),
      path_(path) {}

EigenData FieldSpecDocument::eigen_or_diagonal() const {
  if (eigen) return *eigen;
  if (!field.linear_part().is_diagonal()) {
    fail(InputErrorKind::schema, "eigen", "A is not diagonal, so an eigen block with P is required");
  }
  return EigenData(field.linear_part().diagonal_entries());
}

FieldSpecDocument parse_field_document(const std::string& text) {
  const json j = parse_json(text);
  expect_keys(j, "", {"n", "truncation", "A", "terms"}, {"eigen"});
  const auto n = static_cast<std::size_t>(read_int(j["n"], "n", 1, 64));
  const auto truncation = static_cast<int>(read_int(j["truncation"], "truncation", 1, 1000));

  FieldSpecDocument doc;
  doc.field = VectorField(read_matrix(j["A"], "A", n), truncation);

  const json& terms = j["terms"];
  if (!terms.is_array()) fail(InputErrorKind::schema, "terms", "expected an array");
  std::set<std::pair<std::size_t, MultiIndex>> seen;
  for (std::size_t t = 0; t < terms.size(); ++t) {
    const std::string path = "terms[" + std::to_string(t) + "]";
    const json& term = terms[t];
    expect_keys(term, path, {"component", "exponents", "coeff"}, {});
    const auto component = static_cast<std::size_t>(read_int(term["component"], path + ".component", 1,
                                                             static_cast<long long>(n)));
    const json& ex = term["exponents"];
    if (!ex.is_array()) fail(InputErrorKind::schema, path + ".exponents", "expected an array");
    if (ex.size() != n) {
      fail(InputErrorKind::dimension, path + ".exponents",
           "expected " + std::to_string(n) + " exponents, got " + std::to_string(ex.size()));
    }
    std::vector<unsigned> e;
    for (std::size_t i = 0; i < n; ++i) {
      e.push_back(static_cast<unsigned>(
          read_int(ex[i], path + ".exponents[" + std::to_string(i) + "]", 0, truncation)));
    }
    const MultiIndex q(std::move(e));
    if (q.degree() < 2) fail(InputErrorKind::schema, path + ".exponents", "terms have degree >= 2; linear terms go in A");
    if (static_cast<int>(q.degree()) > truncation) {
      fail(InputErrorKind::dimension, path + ".exponents", "degree exceeds the truncation");
    }
    if (!seen.emplace(component, q).second) fail(InputErrorKind::schema, path, "duplicate (component, exponents)");
    doc.field.add_term(component - 1, q, read_coeff(term["coeff"], path + ".coeff"));
  }

  if (j.contains("eigen")) {
    const json& e = j["eigen"];
    expect_keys(e, "eigen", {"values"}, {"P"});
    ExactVector values = read_vector(e["values"], "eigen.values", n);
    try {
      doc.eigen = e.contains("P") ? EigenData(std::move(values), read_matrix(e["P"], "eigen.P", n))
                                  : EigenData(std::move(values));
    } catch (const InconsistentEigenData& err) {
      fail(InputErrorKind::dimension, "eigen.P", err.what());
    }
    if (!doc.eigen->diagonalizes(doc.field.linear_part())) {
      fail(InputErrorKind::dimension, "eigen", "the eigen data does not diagonalize A");
    }
  }
  return doc;
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(InputErrorKind::io, path, "cannot open file");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(InputErrorKind::io, path, "cannot write file");
  out << text;
  if (!out) fail(InputErrorKind::io, path, "write failed");
}

FieldSpecDocument parse_field_file(const std::string& path) { return parse_field_document(read_text_file(path)); }

json to_json(const ExactVector& v) {
  json out = json::array();
  for (const auto& c : v) out.push_back(c.to_string());
  return out;
}

json to_json(const ExactMatrix& m) {
  json out = json::array();
  for (std::size_t r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (std::size_t c = 0; c < m.cols(); ++c) row.push_back(m(r, c).to_string());
    out.push_back(std::move(row));
  }
  return out;
}

json to_json(const VectorField& f) {
  json terms = json::array();
  for (const auto& t : f.nonlinear_terms()) {
    terms.push_back({{"component", t.component + 1},
                     {"exponents", t.exponents.exponents()},
                     {"coeff", t.coeff.to_string()}});
  }
  return {{"n", f.dimension()}, {"truncation", f.truncation()}, {"A", to_json(f.linear_part())}, {"terms", terms}};
}

json to_json(const FieldSpecDocument& doc) {
  json out = to_json(doc.field);
  if (doc.eigen) {
    json e = {{"values", to_json(doc.eigen->eigenvalues())}};
    if (doc.eigen->has_basis()) e["P"] = to_json(doc.eigen->basis());
    out["eigen"] = std::move(e);
  }
  return out;
}

json to_json(const ScalarPoly& p) {
  json terms = json::array();
  for (const auto& [q, c] : p.terms()) terms.push_back({{"exponents", q.exponents()}, {"coeff", c.to_string()}});
  return {{"n", p.dimension()}, {"truncation", p.truncation()}, {"terms", terms}};
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

ExactMatrix parse_matrix_document(const std::string& text) {
  const json j = parse_json(text);
  if (j.is_object()) {
    expect_keys(j, "", {"M"}, {});
    return read_matrix(j["M"], "M", std::nullopt);
  }
  return read_matrix(j, "", std::nullopt);
}

ExactMatrix parse_matrix_file(const std::string& path) { return parse_matrix_document(read_text_file(path)); }

ExactVector parse_coefficient_list(const std::string& text) {
  ExactVector out;
  std::size_t start = 0;
  std::size_t index = 0;
  while (start <= text.size()) {
    const std::size_t comma = text.find(',', start);
    std::string item = text.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
    item.erase(0, item.find_first_not_of(" \t"));
    item.erase(item.find_last_not_of(" \t") + 1);
    const std::string path = "eigenvalues[" + std::to_string(index++) + "]";
    if (item.empty()) fail(InputErrorKind::coefficient, path, "empty entry");
    try {
      out.push_back(GaussianRational::parse(item));
    } catch (const std::invalid_argument& err) {
      fail(InputErrorKind::coefficient, path, err.what());
    }
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

}  // namespace pdnf
