#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "lipaging/mobility.hpp"
#include "lipaging/paging.hpp"
#include "lipaging/residence.hpp"

namespace lipaging {

using Rng = std::mt19937_64;

/// Independent stream number `stream` for a run seeded with `seed`.
Rng make_stream(std::uint64_t seed, std::uint64_t stream);

struct SimConfig {
  std::uint64_t seed = 20031;
  std::size_t samples = 100'000;
  double inversion_tol = 1e-10;
  /// 0 = one worker per hardware thread.
  std::size_t threads = 0;
};

/// Samples in one RNG stream.  Fixed so estimates do not depend on threads.
inline constexpr std::size_t kSamplesPerStream = 16384;
inline constexpr std::size_t kCrossingCap = 10'000'000;

/**
 * Draws residual dwell times from the equilibrium law by inverting its CDF.
 *
 * A quantile table built once per model brackets each draw; the root is then
 * polished by Newton steps that fall back to bisection whenever they leave the
 * bracket, until the bracket or step is below the inversion tolerance.
 */
class EquilibriumSampler {
 public:
  explicit EquilibriumSampler(const ResidenceModel& model, double inversion_tol = 1e-10);

  /// Inverse CDF at u in [0, 1).  Returns a negative value if no finite
  /// upper bracket could be found.
  double quantile(double u) const;

  /// Draws until a bracket is found; `resamples` counts the rejected draws.
  double operator()(Rng& rng, std::uint64_t* resamples = nullptr) const;

  const ResidenceModel& model() const { return model_; }

 private:
  ResidenceModel model_;
  double tol_;
  std::vector<double> knots_;  // knots_[i] = quantile(i / (size - 1)) for i < size-1
};

double sample_equilibrium_residual(const ResidenceModel& model, Rng& rng,
                                   double inversion_tol = 1e-10);

struct IntervalSample {
  std::size_t crossings = 0;
  CellId final_cell = 0;
  double call_time = 0.0;
  /// Crossing cap reached; the interval is abandoned.
  bool fault = false;
};

/**
 * One paging interval: call time ~ Exp(lambda_c), first dwell from the
 * equilibrium law, later dwells i.i.d. Gamma, one walk step per completed
 * dwell.
 */
class IntervalSimulator {
 public:
  IntervalSimulator(const TransitionMatrix& P, const ResidenceModel& model,
                    double call_rate, double inversion_tol = 1e-10);

  IntervalSample operator()(CellId li_cell, Rng& rng, std::uint64_t* resamples = nullptr) const;

  std::size_t cells() const { return P_->size(); }

 private:
  CellId step(CellId from, Rng& rng) const;

  const TransitionMatrix* P_;
  EquilibriumSampler residual_;
  double call_rate_;
  double dwell_shape_;
  double dwell_scale_;
};

IntervalSample simulate_interval(const TransitionMatrix& P, const ResidenceModel& model,
                                 double call_rate, CellId li_cell, Rng& rng);

/// Integer tallies over many intervals; summable across streams.
struct IntervalTally {
  std::uint64_t samples = 0;
  std::vector<std::uint64_t> final_counts;
  std::vector<std::uint64_t> crossing_counts;
  /// Paging rank (1-based) of the final cell under the supplied order.
  std::uint64_t rank_sum = 0;
  std::uint64_t rank_sq_sum = 0;
  std::uint64_t faults = 0;
  std::uint64_t resamples = 0;

  void merge(const IntervalTally& other);
};

/**
 * Runs cfg.samples intervals from `li_cell`.  When `order` is non-empty the
 * rank of each final cell in it is accumulated.  Samples are split into fixed
 * streams of kSamplesPerStream, so results are identical for any thread count.
 */
IntervalTally simulate_intervals(const TransitionMatrix& P, const ResidenceModel& model,
                                 double call_rate, CellId li_cell, const SimConfig& cfg,
                                 std::span<const CellId> order = {});

struct ProfileEstimate {
  std::vector<double> probs;
  std::vector<double> std_errors;
};

struct CostEstimate {
  double mean = 0.0;
  double std_error = 0.0;
};

struct CrossingEstimate {
  std::vector<double> probs;
  std::vector<double> std_errors;
  double mean = 0.0;
  double mean_std_error = 0.0;
};

ProfileEstimate profile_from(const IntervalTally& tally);
CostEstimate cost_from(const IntervalTally& tally);
CrossingEstimate crossings_from(const IntervalTally& tally);

ProfileEstimate estimate_profile(const TransitionMatrix& P, const ResidenceModel& model,
                                 double call_rate, CellId li_cell, const SimConfig& cfg);

/// Mean rank of the simulated final cell when cells are polled in the order
/// of `analytic`, i.e. the realized cost of the deployed policy.
CostEstimate estimate_cost(const TransitionMatrix& P, const ResidenceModel& model,
                           double call_rate, CellId li_cell, const SimConfig& cfg,
                           const LocationProfile& analytic);

}  // namespace lipaging
