#include "lipaging/paging.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "lipaging/errors.hpp"
#include "lipaging/parallel.hpp"

namespace lipaging {

namespace {

CostReport assemble_report(const CrossingPmf& pmf, const StationaryDistribution& pi,
                           std::vector<double> per_cell) {
  CostReport report;
  report.shape = pmf.model.shape();
  report.cmr = pmf.cmr;
  report.variance = pmf.model.variance();
  report.per_cell = std::move(per_cell);
  for (CellId u = 0; u < report.per_cell.size(); ++u) {
    report.total += pi.pi[u] * report.per_cell[u];
  }
  report.flooding = static_cast<double>(report.per_cell.size());
  report.savings = 1.0 - report.total / report.flooding;
  return report;
}

}  // namespace

LocationProfile location_profile(const TransitionMatrix& P, const CrossingPmf& pmf,
                                 const StationaryDistribution& pi, CellId li_cell) {
  const std::size_t n = P.size();
  if (pi.pi.size() != n) {
    throw InvalidArgument("stationary vector has " + std::to_string(pi.pi.size()) +
                          " entries, transition matrix has " + std::to_string(n));
  }
  Propagator walk(P, li_cell);

  LocationProfile profile{li_cell, std::vector<double>(n, 0.0), pmf.tail};
  const std::size_t K = pmf.truncation();
  for (std::size_t k = 0;; ++k) {
    const double weight = pmf.probs[k];
    const auto v = walk.current();
    for (CellId i = 0; i < n; ++i) profile.probs[i] += weight * v[i];
    if (k == K) break;
    walk.advance();
  }
  for (CellId i = 0; i < n; ++i) profile.probs[i] += pmf.tail * pi.pi[i];
  return profile;
}

std::vector<CellId> paging_order(std::span<const double> probs) {
  std::vector<CellId> order(probs.size());
  std::iota(order.begin(), order.end(), CellId{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](CellId a, CellId b) { return probs[a] > probs[b]; });
  return order;
}

double sequential_cost(std::span<const double> probs) {
  const auto order = paging_order(probs);
  double cost = 0.0;
  for (std::size_t rank = 0; rank < order.size(); ++rank) {
    cost += static_cast<double>(rank + 1) * probs[order[rank]];
  }
  return cost;
}

CostReport total_cost(const TransitionMatrix& P, const CrossingPmf& pmf,
                      const StationaryDistribution& pi, std::size_t threads) {
  std::vector<double> per_cell(P.size(), 0.0);
  parallel_for(per_cell.size(), threads, [&](std::size_t u) {
    per_cell[u] = sequential_cost(location_profile(P, pmf, pi, u));
  });
  return assemble_report(pmf, pi, std::move(per_cell));
}

std::vector<CostReport> sweep(const CellGraph& graph, std::span<const double> shapes,
                              std::span<const double> cmrs, const SweepOptions& options) {
  if (shapes.empty() || cmrs.empty()) {
    throw InvalidArgument("sweep needs at least one shape and one CMR");
  }
  std::vector<double> sorted_cmrs(cmrs.begin(), cmrs.end());
  std::sort(sorted_cmrs.begin(), sorted_cmrs.end());
  for (double p : sorted_cmrs) {
    if (!(p > 0.0)) throw InvalidArgument("CMR values must be positive");
  }

  const auto P = symmetric_random_walk(graph);
  const auto pi = stationary_distribution(P, options.stationary_tol);

  std::vector<CrossingPmf> pmfs;
  pmfs.reserve(shapes.size() * sorted_cmrs.size());
  for (double shape : shapes) {
    const ResidenceModel model(shape, options.mobility_rate);
    for (double p : sorted_cmrs) {
      pmfs.push_back(crossing_pmf(model, p * options.mobility_rate, options.truncation_tol));
    }
  }

  const std::size_t n = graph.size();
  std::vector<double> costs(pmfs.size() * n);
  parallel_for(costs.size(), options.threads, [&](std::size_t task) {
    const auto& pmf = pmfs[task / n];
    costs[task] = sequential_cost(location_profile(P, pmf, pi, task % n));
  });

  std::vector<CostReport> reports;
  reports.reserve(pmfs.size());
  for (std::size_t c = 0; c < pmfs.size(); ++c) {
    reports.push_back(assemble_report(
        pmfs[c], pi, std::vector<double>(costs.begin() + c * n, costs.begin() + (c + 1) * n)));
  }
  return reports;
}

}  // namespace lipaging
