#include "lipaging/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "lipaging/errors.hpp"
#include "lipaging/parallel.hpp"

namespace lipaging {
namespace {

constexpr std::size_t kQuantileIntervals = 512;
constexpr int kMaxBracketDoublings = 200;
constexpr int kMaxPolishIterations = 300;

// 53 random bits mapped to [0, 1).
double uniform01(Rng& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace

Rng make_stream(std::uint64_t seed, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream),
                    static_cast<std::uint32_t>(stream >> 32), 0x9e3779b9u};
  return Rng(seq);
}

EquilibriumSampler::EquilibriumSampler(const ResidenceModel& model, double inversion_tol)
    : model_(model), tol_(inversion_tol) {
  if (!(inversion_tol > 0.0)) throw InvalidArgument("inversion tolerance must be positive");

  knots_.assign(kQuantileIntervals, 0.0);
  double lo = 0.0;
  for (std::size_t i = 1; i < kQuantileIntervals; ++i) {
    const double u = static_cast<double>(i) / kQuantileIntervals;
    double hi = std::max(2.0 * lo, lo + model_.mean());
    while (equilibrium_cdf_closed_form(model_, hi) < u) hi *= 2.0;
    // Knots are resolved well below the inversion tolerance so that a draw
    // never starts from a bracket that already excludes its root.
    for (int it = 0; it < 400 && hi - lo > 1e-3 * tol_ * std::max(1.0, hi); ++it) {
      const double mid = 0.5 * (lo + hi);
      (equilibrium_cdf_closed_form(model_, mid) < u ? lo : hi) = mid;
    }
    knots_[i] = lo;
  }
}

double EquilibriumSampler::quantile(double u) const {
  if (!(u >= 0.0 && u < 1.0)) throw InvalidArgument("quantile level must be in [0, 1)");
  if (u == 0.0) return 0.0;

  const auto idx = std::min(static_cast<std::size_t>(u * kQuantileIntervals),
                            kQuantileIntervals - 1);
  double lo = knots_[idx];
  double hi;
  if (idx + 1 < kQuantileIntervals) {
    hi = knots_[idx + 1];
  } else {
    hi = std::max(2.0 * lo, lo + model_.mean());
    int doublings = 0;
    while (equilibrium_cdf_closed_form(model_, hi) < u) {
      if (++doublings > kMaxBracketDoublings || !std::isfinite(hi)) return -1.0;
      hi *= 2.0;
    }
  }

  // The CDF is concave, so Newton steps from the left approach the root
  // monotonically; the bracket guards against the flat far tail.
  double x = lo;
  for (int it = 0; it < kMaxPolishIterations; ++it) {
    const double excess = equilibrium_cdf_closed_form(model_, x) - u;
    if (excess > 0.0) {
      hi = x;
    } else {
      lo = x;
    }
    if (hi - lo <= tol_) return 0.5 * (lo + hi);
    const double slope = equilibrium_density(model_, x);
    double next = slope > 0.0 ? x - excess / slope : 0.5 * (lo + hi);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (std::abs(next - x) <= tol_) return next;
    x = next;
  }
  return 0.5 * (lo + hi);
}

double EquilibriumSampler::operator()(Rng& rng, std::uint64_t* resamples) const {
  for (;;) {
    const double t = quantile(uniform01(rng));
    if (t >= 0.0) return t;
    if (resamples) ++*resamples;
  }
}

double sample_equilibrium_residual(const ResidenceModel& model, Rng& rng,
                                   double inversion_tol) {
  return EquilibriumSampler(model, inversion_tol)(rng);
}

IntervalSimulator::IntervalSimulator(const TransitionMatrix& P, const ResidenceModel& model,
                                     double call_rate, double inversion_tol)
    : P_(&P),
      residual_(model, inversion_tol),
      call_rate_(call_rate),
      dwell_shape_(model.shape()),
      dwell_scale_(1.0 / model.gamma_rate()) {
  if (!(call_rate > 0.0) || !std::isfinite(call_rate)) {
    throw InvalidArgument("call rate must be positive");
  }
}

CellId IntervalSimulator::step(CellId from, Rng& rng) const {
  const auto row = P_->nonzeros(from);
  double u = uniform01(rng);
  for (const auto& e : row) {
    if (u < e.prob) return e.col;
    u -= e.prob;
  }
  return row.back().col;
}

IntervalSample IntervalSimulator::operator()(CellId li_cell, Rng& rng,
                                             std::uint64_t* resamples) const {
  if (li_cell >= P_->size()) {
    throw InvalidArgument("cell " + std::to_string(li_cell) + " out of range");
  }
  std::exponential_distribution<double> call(call_rate_);
  std::gamma_distribution<double> dwell(dwell_shape_, dwell_scale_);

  IntervalSample sample;
  sample.call_time = call(rng);
  sample.final_cell = li_cell;
  double boundary = residual_(rng, resamples);
  while (boundary < sample.call_time) {
    sample.final_cell = step(sample.final_cell, rng);
    if (++sample.crossings >= kCrossingCap) {
      sample.fault = true;
      break;
    }
    boundary += dwell(rng);
  }
  return sample;
}

IntervalSample simulate_interval(const TransitionMatrix& P, const ResidenceModel& model,
                                 double call_rate, CellId li_cell, Rng& rng) {
  return IntervalSimulator(P, model, call_rate)(li_cell, rng);
}

void IntervalTally::merge(const IntervalTally& other) {
  samples += other.samples;
  if (final_counts.size() < other.final_counts.size()) {
    final_counts.resize(other.final_counts.size(), 0);
  }
  for (std::size_t i = 0; i < other.final_counts.size(); ++i) {
    final_counts[i] += other.final_counts[i];
  }
  if (crossing_counts.size() < other.crossing_counts.size()) {
    crossing_counts.resize(other.crossing_counts.size(), 0);
  }
  for (std::size_t k = 0; k < other.crossing_counts.size(); ++k) {
    crossing_counts[k] += other.crossing_counts[k];
  }
  rank_sum += other.rank_sum;
  rank_sq_sum += other.rank_sq_sum;
  faults += other.faults;
  resamples += other.resamples;
}

IntervalTally simulate_intervals(const TransitionMatrix& P, const ResidenceModel& model,
                                 double call_rate, CellId li_cell, const SimConfig& cfg,
                                 std::span<const CellId> order) {
  if (cfg.samples == 0) throw InvalidArgument("sample count must be at least 1");
  const std::size_t n = P.size();
  if (!order.empty() && order.size() != n) {
    throw InvalidArgument("paging order must list every cell");
  }
  std::vector<std::uint64_t> rank_of(n, 0);
  for (std::size_t r = 0; r < order.size(); ++r) rank_of.at(order[r]) = r + 1;

  const IntervalSimulator simulate(P, model, call_rate, cfg.inversion_tol);
  const std::size_t streams = (cfg.samples + kSamplesPerStream - 1) / kSamplesPerStream;
  std::vector<IntervalTally> partial(streams);

  parallel_for(streams, cfg.threads, [&](std::size_t s) {
    Rng rng = make_stream(cfg.seed, s);
    const std::size_t count =
        std::min(kSamplesPerStream, cfg.samples - s * kSamplesPerStream);
    IntervalTally& tally = partial[s];
    tally.final_counts.assign(n, 0);
    for (std::size_t i = 0; i < count; ++i) {
      const auto sample = simulate(li_cell, rng, &tally.resamples);
      ++tally.samples;
      if (sample.fault) {
        ++tally.faults;
        continue;
      }
      ++tally.final_counts[sample.final_cell];
      if (tally.crossing_counts.size() <= sample.crossings) {
        tally.crossing_counts.resize(sample.crossings + 1, 0);
      }
      ++tally.crossing_counts[sample.crossings];
      if (!order.empty()) {
        const std::uint64_t rank = rank_of[sample.final_cell];
        tally.rank_sum += rank;
        tally.rank_sq_sum += rank * rank;
      }
    }
  });

  IntervalTally total;
  total.final_counts.assign(n, 0);
  for (const auto& t : partial) total.merge(t);
  return total;
}

namespace {

double binomial_se(double p, double n) { return std::sqrt(p * (1.0 - p) / n); }

CostEstimate moments(double sum, double sq_sum, double n) {
  const double mean = sum / n;
  const double var = n > 1.0 ? std::max(0.0, (sq_sum - n * mean * mean) / (n - 1.0)) : 0.0;
  return {mean, std::sqrt(var / n)};
}

}  // namespace

ProfileEstimate profile_from(const IntervalTally& tally) {
  const double n = static_cast<double>(tally.samples);
  ProfileEstimate est;
  for (auto c : tally.final_counts) {
    const double p = static_cast<double>(c) / n;
    est.probs.push_back(p);
    est.std_errors.push_back(binomial_se(p, n));
  }
  return est;
}

CostEstimate cost_from(const IntervalTally& tally) {
  return moments(static_cast<double>(tally.rank_sum), static_cast<double>(tally.rank_sq_sum),
                 static_cast<double>(tally.samples));
}

CrossingEstimate crossings_from(const IntervalTally& tally) {
  const double n = static_cast<double>(tally.samples);
  CrossingEstimate est;
  double sum = 0.0;
  double sq_sum = 0.0;
  for (std::size_t k = 0; k < tally.crossing_counts.size(); ++k) {
    const double c = static_cast<double>(tally.crossing_counts[k]);
    const double p = c / n;
    est.probs.push_back(p);
    est.std_errors.push_back(binomial_se(p, n));
    sum += c * static_cast<double>(k);
    sq_sum += c * static_cast<double>(k) * static_cast<double>(k);
  }
  const auto m = moments(sum, sq_sum, n);
  est.mean = m.mean;
  est.mean_std_error = m.std_error;
  return est;
}

ProfileEstimate estimate_profile(const TransitionMatrix& P, const ResidenceModel& model,
                                 double call_rate, CellId li_cell, const SimConfig& cfg) {
  return profile_from(simulate_intervals(P, model, call_rate, li_cell, cfg));
}

CostEstimate estimate_cost(const TransitionMatrix& P, const ResidenceModel& model,
                           double call_rate, CellId li_cell, const SimConfig& cfg,
                           const LocationProfile& analytic) {
  const auto order = paging_order(analytic.probs);
  return cost_from(simulate_intervals(P, model, call_rate, li_cell, cfg, order));
}

}  // namespace lipaging
