#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "lipaging/paging.hpp"
#include "lipaging/simulator.hpp"
#include "lipaging/topology.hpp"

namespace lipaging::cli {

enum ExitCode : int { kSuccess = 0, kValidationFailure = 1, kBadInput = 2 };

/// A config field failed validation; `field` names it.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string field, const std::string& message)
      : std::runtime_error(field + ": " + message), field_(std::move(field)) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

/// CMR grid used when none is given: 17 points log-spaced over [0.01, 100].
std::vector<double> default_cmrs();

struct RunConfig {
  std::size_t cells = 31;
  std::optional<std::filesystem::path> graph;
  std::vector<double> shapes{0.1, 1.0, 10.0};
  std::vector<double> cmrs = default_cmrs();
  /// Echoed only; costs depend on the CMR alone.
  double mobility_rate = 1.0;
  double truncation_tol = kDefaultTruncationTolerance;
  double stationary_tol = kDefaultStationaryTolerance;
  SimConfig sim;
  /// Last-interaction cells for simulate/validate; empty means every cell.
  std::vector<CellId> li_cells;
  std::optional<std::filesystem::path> out;
  /// Test hook: shifts the analytic cost before validation.
  double cost_offset = 0.0;

  /// Throws ConfigError naming the first offending field.
  void check() const;
  CellGraph load_area() const;
};

/**
 * Overlays the JSON document's fields onto `base`.  Recognised keys: n,
 * graph, gamma, cmr, lambda_m, tol, stationary_tol, seed, samples,
 * inversion_tol, threads, cells, out.
 */
RunConfig apply_json(RunConfig base, const std::string& json_text);

/// Entry point for the `lipaging` tool.  Returns the process exit code.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace lipaging::cli
