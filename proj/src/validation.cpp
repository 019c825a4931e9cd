#include "lipaging/validation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "lipaging/paging.hpp"

namespace lipaging {
namespace {

double binomial_se(double p, double n) { return std::sqrt(p * (1.0 - p) / n); }

// Compares per-bin frequencies with analytic probabilities, pooling the bins
// that are too sparse for a normal approximation.
void compare_bins(Comparison::Quantity quantity, const std::vector<double>& analytic,
                  double extra_analytic_mass, const std::vector<std::uint64_t>& counts,
                  double samples, std::vector<Comparison>& rows) {
  const std::size_t bins = std::max(analytic.size(), counts.size());
  double pooled_analytic = extra_analytic_mass;
  double pooled_count = 0.0;
  for (std::size_t i = 0; i < bins; ++i) {
    const double a = i < analytic.size() ? analytic[i] : 0.0;
    const double c = i < counts.size() ? static_cast<double>(counts[i]) : 0.0;
    if (a * samples >= kMinExpectedCount) {
      const double est = c / samples;
      const double se = binomial_se(est, samples);
      rows.push_back({quantity, i, a, est, se, z_score(a, est, se)});
    } else {
      pooled_analytic += a;
      pooled_count += c;
    }
  }
  if (pooled_analytic * samples >= kMinExpectedCount) {
    const double est = pooled_count / samples;
    const double se = binomial_se(est, samples);
    rows.push_back({quantity, Comparison::kPooled, pooled_analytic, est, se,
                    z_score(pooled_analytic, est, se)});
  }
}

}  // namespace

const char* to_string(Comparison::Quantity q) {
  switch (q) {
    case Comparison::Quantity::Cost:
      return "cost";
    case Comparison::Quantity::Profile:
      return "profile";
    case Comparison::Quantity::Crossings:
      return "crossings";
  }
  return "unknown";
}

double z_score(double analytic, double estimate, double std_error) {
  const double diff = analytic - estimate;
  if (diff == 0.0) return 0.0;
  if (std_error == 0.0) return std::copysign(std::numeric_limits<double>::infinity(), diff);
  return diff / std_error;
}

double ValidationCase::max_abs_z() const {
  double m = 0.0;
  for (const auto& r : rows) m = std::max(m, std::abs(r.z));
  return m;
}

bool ValidationCase::passes(double gate) const {
  return faults == 0 && max_abs_z() <= gate;
}

ValidationCase validate_case(const TransitionMatrix& P, const StationaryDistribution& pi,
                             const ResidenceModel& model, double call_rate, CellId li_cell,
                             const SimConfig& cfg, double cost_offset,
                             double truncation_tol) {
  const auto pmf = crossing_pmf(model, call_rate, truncation_tol);
  const auto profile = location_profile(P, pmf, pi, li_cell);
  const auto order = paging_order(profile.probs);
  const auto tally = simulate_intervals(P, model, call_rate, li_cell, cfg, order);

  ValidationCase result;
  result.shape = model.shape();
  result.cmr = pmf.cmr;
  result.li_cell = li_cell;
  result.samples = tally.samples;
  result.faults = tally.faults;
  result.resamples = tally.resamples;

  const auto cost = cost_from(tally);
  const double analytic_cost = sequential_cost(profile) + cost_offset;
  result.rows.push_back({Comparison::Quantity::Cost, 0, analytic_cost, cost.mean,
                         cost.std_error, z_score(analytic_cost, cost.mean, cost.std_error)});

  const double n = static_cast<double>(tally.samples);
  compare_bins(Comparison::Quantity::Profile, profile.probs, 0.0, tally.final_counts, n,
               result.rows);
  compare_bins(Comparison::Quantity::Crossings, pmf.probs, pmf.tail, tally.crossing_counts, n,
               result.rows);
  return result;
}

}  // namespace lipaging
