#ifndef PDNF_IO_HPP
#define PDNF_IO_HPP

#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>

#include <nlohmann/json.hpp>

#include "pdnf/analysis.hpp"
#include "pdnf/normalform.hpp"

namespace pdnf {

enum class InputErrorKind { malformed_json, schema, coefficient, dimension, io };

const char* to_string(InputErrorKind kind);

/// Rejected input. what() names the kind and the offending field path,
/// e.g. "coefficient error at terms[2].coeff: ...".
class InputError : public std::invalid_argument {
 public:
  InputError(InputErrorKind kind, const std::string& path, const std::string& detail);
  InputErrorKind kind() const { return kind_; }
  const std::string& path() const { return path_; }

 private:
  InputErrorKind kind_;
  std::string path_;
};

struct FieldSpecDocument {
  VectorField field;
  /// Eigenvalues, with P when the linear part is not already diagonal.
  std::optional<EigenData> eigen;

  /// The eigen block, or diag(A) when A is diagonal and no block is given.
  /// Throws InputError otherwise.
  EigenData eigen_or_diagonal() const;
};

/// Parses one document:
///   {"n": int, "truncation": int, "A": [[coeff,..],..],
///    "terms": [{"component": 1..n, "exponents": [int,..], "coeff": coeff}],
///    "eigen": {"values": [coeff,..], "P": [[coeff,..],..]}}
/// with "eigen" and "P" optional. Terms must have degree 2..truncation and
/// no (component, exponents) pair may repeat.
FieldSpecDocument parse_field_document(const std::string& text);
FieldSpecDocument parse_field_file(const std::string& path);

nlohmann::json to_json(const FieldSpecDocument& doc);
nlohmann::json to_json(const VectorField& f);
nlohmann::json to_json(const ScalarPoly& p);
nlohmann::json to_json(const ExactMatrix& m);
nlohmann::json to_json(const ExactVector& v);

/// Deterministic text: sorted keys, two-space indent, trailing newline.
std::string dump(const nlohmann::json& j);

/// A matrix document: either [[coeff,..],..] or {"M": [[coeff,..],..]}.
ExactMatrix parse_matrix_document(const std::string& text);
ExactMatrix parse_matrix_file(const std::string& path);

/// Comma-separated coefficients, e.g. "i,-i" or "1, -3/2".
ExactVector parse_coefficient_list(const std::string& text);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

}  // namespace pdnf

#endif  // PDNF_IO_HPP
