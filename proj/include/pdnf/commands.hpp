#ifndef PDNF_COMMANDS_HPP
#define PDNF_COMMANDS_HPP

#include <iosfwd>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "pdnf/analysis.hpp"
#include "pdnf/symmetry.hpp"

namespace pdnf {

enum ExitCode : int {
  exit_ok = 0,
  exit_hypothesis_failed = 2,
  exit_input_error = 3,
  exit_budget_exceeded = 4,
};

/// Runs one subcommand. `args` excludes the program name. The JSON report
/// goes to --out when given (with the text summary on `out`), otherwise to
/// `out` with the summary on `err`.
int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

nlohmann::json to_json(const OmegaReport& report);
nlohmann::json to_json(const CertificateReport& report);

}  // namespace pdnf

#endif  // PDNF_COMMANDS_HPP
