#pragma once

#include <json.hpp>

#include <array>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "hrext/experiments.hpp"

namespace hrext {

std::string version();

/// Malformed flag value or configuration; the CLI maps it to exit code 2.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class OutputFormat { Csv, Json };

/// Fully resolved settings of one run. Everything except `workers` and `out` is echoed into the
/// output; neither can change results, and leaving them out keeps outputs byte-identical.
struct RunConfig {
  std::string command = "verify";  // "hr-eval" or "verify"
  std::string target;              // verify: weak | strong | maxmin | aslt | bounds
  std::string lambda = "1";        // number or "inf"
  double phi = 0.5;
  std::optional<std::array<double, 3>> tau;  // tau_11, tau_22, tau_12
  // Unset fields take per-target defaults in resolve_defaults().
  std::optional<std::int64_t> n;
  std::vector<std::int64_t> n_grid;
  std::optional<std::int64_t> reps;
  std::optional<GridSpec> grid;
  std::uint64_t seed = 1;
  std::string out;  // empty: stdout
  OutputFormat format = OutputFormat::Csv;
  std::optional<double> tol;
  std::string coupling = "indep";
  double epsilon = 0.1;
  std::string kind = "L1";
  std::vector<GumbelPoint> points;  // empty: command default
  bool allow_large = false;
  int workers = 1;
};

/// Fills unset fields with the defaults of cfg.command / cfg.target and validates the target.
RunConfig resolve_defaults(RunConfig cfg);

nlohmann::json config_to_json(const RunConfig& cfg);
RunConfig config_from_json(const nlohmann::json& j);

// Flag value parsers; all throw UsageError.
HrParam parse_lambda(const std::string& s);
GridSpec parse_grid(const std::string& s);            // lo:hi[:count]
std::vector<std::int64_t> parse_ngrid(const std::string& s);  // 1e3,1e4,...
std::array<double, 3> parse_tau(const std::string& s);        // t11,t22,t12
Coupling parse_coupling(const std::string& s);                // indep | shared:C
std::vector<GumbelPoint> parse_points(const std::string& s);  // x,y[;x,y...]
OutputFormat parse_format(const std::string& s);

using Cell = std::variant<double, std::int64_t, std::string>;

struct Report {
  RunConfig config;
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
  nlohmann::json summary = nlohmann::json::object();
  bool passed = true;
};

/// Rows (x, y, branch, H, V) over the grid.
Report run_hr_eval(const RunConfig& cfg);

/// Empirical-vs-theory check selected by cfg.target.
Report run_verify(const RunConfig& cfg);

/// RFC-4180 CSV: '#'-prefixed provenance lines (tool version, resolved config), the header row,
/// the data rows, and a trailing '#' summary line. Doubles use 17 significant digits.
std::string to_csv(const Report& report);

nlohmann::json to_json(const Report& report);

std::string render(const Report& report);

}  // namespace hrext
