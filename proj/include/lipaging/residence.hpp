#pragma once

#include <cstddef>
#include <vector>

namespace lipaging {

/**
 * Gamma cell-residence (dwell) time law with shape gamma and mean
 * 1/lambda_m.  The Gamma rate parameter is gamma * lambda_m, so the variance
 * is 1 / (gamma * lambda_m^2) and shape 1 is the exponential law.
 */
class ResidenceModel {
 public:
  explicit ResidenceModel(double shape, double mobility_rate = 1.0);

  double shape() const { return shape_; }
  double mobility_rate() const { return mobility_rate_; }
  double gamma_rate() const { return shape_ * mobility_rate_; }
  double mean() const { return 1.0 / mobility_rate_; }
  double variance() const { return 1.0 / (shape_ * mobility_rate_ * mobility_rate_); }
  double log_gamma_shape() const { return log_gamma_shape_; }

  bool operator==(const ResidenceModel&) const = default;

 private:
  double shape_;
  double mobility_rate_;
  double log_gamma_shape_;
};

/// Laplace transform of the dwell density, (g l / (s + g l))^g.
double laplace_at(const ResidenceModel& model, double s);

/// 1 - laplace_at(model, s), evaluated without cancellation.
double laplace_complement(const ResidenceModel& model, double s);

double dwell_density(const ResidenceModel& model, double t);
double dwell_cdf(const ResidenceModel& model, double t);
double dwell_survival(const ResidenceModel& model, double t);

/**
 * Equilibrium (residual-life) CDF lambda_m * int_0^t S(x) dx by adaptive
 * tanh-sinh quadrature, absolute error <= 1e-10.
 */
double equilibrium_cdf(const ResidenceModel& model, double t);

/**
 * Same quantity in closed form,
 *   lambda_m t Q(g, g l t) + P(g + 1, g l t),
 * which is what the Monte Carlo sampler inverts.
 */
double equilibrium_cdf_closed_form(const ResidenceModel& model, double t);

/// Derivative of the equilibrium CDF, lambda_m * S(t).
double equilibrium_density(const ResidenceModel& model, double t);

inline constexpr double kDefaultTruncationTolerance = 1e-12;

/**
 * Distribution of the number of cell boundaries crossed between the last
 * interaction and the next call:
 *
 *   a(0) = 1 - (1 - f)/p,   a(k) = (1/p) (1 - f)^2 f^(k-1),  k >= 1,
 *
 * with f the dwell Laplace transform at the call rate and p the CMR.
 * Truncated at the first K whose analytic tail (1/p)(1 - f) f^K drops below
 * the tolerance; the tail mass is kept in `tail`.
 */
struct CrossingPmf {
  ResidenceModel model;
  double call_rate;
  double cmr;
  double transform;  // f*(call_rate)
  std::vector<double> probs;
  double tail;

  std::size_t truncation() const { return probs.size() - 1; }
  /// a(k) for k <= K, zero beyond the truncation point.
  double at(std::size_t k) const { return k < probs.size() ? probs[k] : 0.0; }
  /// Analytic mean number of crossings, 1/p.
  double mean() const { return 1.0 / cmr; }
};

CrossingPmf crossing_pmf(const ResidenceModel& model, double call_rate,
                         double tol = kDefaultTruncationTolerance);

}  // namespace lipaging
