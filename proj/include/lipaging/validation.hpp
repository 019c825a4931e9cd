#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "lipaging/mobility.hpp"
#include "lipaging/residence.hpp"
#include "lipaging/simulator.hpp"

namespace lipaging {

/// Gate used by `validate`: any |z| above it is a failed comparison.
inline constexpr double kValidationZGate = 4.0;

/**
 * Probability bins whose expected count N * p falls below this are pooled
 * into one remainder bin; the remainder is compared only if it clears the
 * same floor.  Below it the normal approximation behind z-scores breaks down.
 */
inline constexpr double kMinExpectedCount = 20.0;

struct Comparison {
  enum class Quantity { Cost, Profile, Crossings };

  Quantity quantity;
  /// Cell id for Profile, crossing count k for Crossings, 0 for Cost.
  /// kPooled marks the remainder bin.
  std::size_t index;
  double analytic;
  double estimate;
  double std_error;
  double z;

  static constexpr std::size_t kPooled = static_cast<std::size_t>(-1);
};

const char* to_string(Comparison::Quantity q);

struct ValidationCase {
  double shape = 1.0;
  double cmr = 1.0;
  CellId li_cell = 0;
  std::uint64_t samples = 0;
  std::uint64_t faults = 0;
  std::uint64_t resamples = 0;
  std::vector<Comparison> rows;

  double max_abs_z() const;
  bool passes(double gate = kValidationZGate) const;
};

/// (analytic - estimate) / se; zero when the two agree exactly, infinite when
/// they differ with zero standard error.
double z_score(double analytic, double estimate, double std_error);

/**
 * Runs one simulation from `li_cell` and compares its estimates of C_P(u),
 * p(i|u) and a(k) with the analytic engine.  `cost_offset` is added to the
 * analytic cost before comparing; it exists so tests can inject a known error.
 */
ValidationCase validate_case(const TransitionMatrix& P, const StationaryDistribution& pi,
                             const ResidenceModel& model, double call_rate, CellId li_cell,
                             const SimConfig& cfg, double cost_offset = 0.0,
                             double truncation_tol = kDefaultTruncationTolerance);

}  // namespace lipaging
