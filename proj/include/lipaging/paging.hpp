#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "lipaging/mobility.hpp"
#include "lipaging/residence.hpp"
#include "lipaging/topology.hpp"

namespace lipaging {

/// Where the terminal is expected to be at call arrival, given its last
/// interaction in `li_cell`.
struct LocationProfile {
  CellId li_cell = 0;
  std::vector<double> probs;
  /// Truncated crossing mass that was routed to the stationary vector.
  double tail_assigned = 0.0;
};

inline constexpr double kProfileSumTolerance = 1e-10;

/**
 * sum_{k<=K} a(k) e_u P^k + tail * pi.  The tail goes to pi because e_u P^k
 * converges to it, which keeps the profile normalized.
 */
LocationProfile location_profile(const TransitionMatrix& P, const CrossingPmf& pmf,
                                 const StationaryDistribution& pi, CellId li_cell);

/// Cells by decreasing probability; ties go to the lower cell id.
std::vector<CellId> paging_order(std::span<const double> probs);

/// Mean number of polls for sequential paging in optimal order, sum_j j q_j.
double sequential_cost(std::span<const double> probs);
inline double sequential_cost(const LocationProfile& profile) {
  return sequential_cost(profile.probs);
}

struct CostReport {
  double shape = 1.0;
  double cmr = 0.0;
  double variance = 0.0;
  /// C_P(u) for every last-interaction cell u.
  std::vector<double> per_cell;
  /// sum_u pi(u) C_P(u)
  double total = 0.0;
  /// Flooding polls every cell at once.
  double flooding = 0.0;
  /// 1 - total / flooding
  double savings = 0.0;
};

CostReport total_cost(const TransitionMatrix& P, const CrossingPmf& pmf,
                      const StationaryDistribution& pi, std::size_t threads = 1);

struct SweepOptions {
  double mobility_rate = 1.0;
  double truncation_tol = kDefaultTruncationTolerance;
  double stationary_tol = kDefaultStationaryTolerance;
  std::size_t threads = 0;
};

/// One report per (shape, cmr), shape-major in the given order, cmr ascending.
std::vector<CostReport> sweep(const CellGraph& graph, std::span<const double> shapes,
                              std::span<const double> cmrs,
                              const SweepOptions& options = {});

}  // namespace lipaging
