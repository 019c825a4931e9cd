#include "lipaging/residence.hpp"

#include <algorithm>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <cmath>
#include <string>

#include "lipaging/errors.hpp"
#include "lipaging/special_functions.hpp"

namespace lipaging {
namespace {

void require_time(double t) {
  if (!(t >= 0.0)) throw InvalidArgument("time must be >= 0, got " + std::to_string(t));
}

special::GammaPQ dwell_pq(const ResidenceModel& model, double t) {
  return special::regularized_gamma(model.shape(), model.gamma_rate() * t,
                                    model.log_gamma_shape());
}

}  // namespace

ResidenceModel::ResidenceModel(double shape, double mobility_rate)
    : shape_(shape), mobility_rate_(mobility_rate) {
  if (!(shape > 0.0) || !std::isfinite(shape)) {
    throw InvalidArgument("residence shape must be positive, got " + std::to_string(shape));
  }
  if (!(mobility_rate > 0.0) || !std::isfinite(mobility_rate)) {
    throw InvalidArgument("mobility rate must be positive, got " +
                          std::to_string(mobility_rate));
  }
  log_gamma_shape_ = std::lgamma(shape);
}

double laplace_at(const ResidenceModel& model, double s) {
  if (!(s >= 0.0)) throw InvalidArgument("Laplace argument must be >= 0");
  return std::exp(-model.shape() * std::log1p(s / model.gamma_rate()));
}

double laplace_complement(const ResidenceModel& model, double s) {
  if (!(s >= 0.0)) throw InvalidArgument("Laplace argument must be >= 0");
  return -std::expm1(-model.shape() * std::log1p(s / model.gamma_rate()));
}

double dwell_density(const ResidenceModel& model, double t) {
  require_time(t);
  const double g = model.shape();
  const double rate = model.gamma_rate();
  if (t == 0.0) {
    if (g < 1.0) return INFINITY;
    return g == 1.0 ? rate : 0.0;
  }
  return std::exp(g * std::log(rate) + (g - 1.0) * std::log(t) - rate * t -
                  model.log_gamma_shape());
}

double dwell_cdf(const ResidenceModel& model, double t) {
  require_time(t);
  return dwell_pq(model, t).p;
}

double dwell_survival(const ResidenceModel& model, double t) {
  require_time(t);
  return dwell_pq(model, t).q;
}

double equilibrium_density(const ResidenceModel& model, double t) {
  return model.mobility_rate() * dwell_survival(model, t);
}

double equilibrium_cdf(const ResidenceModel& model, double t) {
  require_time(t);
  if (t == 0.0) return 0.0;
  // tanh-sinh copes with the x^shape kink of S at the origin when shape < 1.
  thread_local boost::math::quadrature::tanh_sinh<double> integrator;
  double error = 0.0;
  const double value = integrator.integrate(
      [&model](double x) { return model.mobility_rate() * dwell_survival(model, x); }, 0.0, t,
      1e-13, &error);
  if (error > 1e-10) {
    throw SolverError("equilibrium quadrature error estimate " + std::to_string(error) +
                          " exceeds 1e-10 at t=" + std::to_string(t),
                      error);
  }
  return std::min(value, 1.0);
}

double equilibrium_cdf_closed_form(const ResidenceModel& model, double t) {
  require_time(t);
  if (t == 0.0) return 0.0;
  const double g = model.shape();
  const double x = model.gamma_rate() * t;
  const auto pq = special::regularized_gamma(g, x, model.log_gamma_shape());
  // P(g+1, x) = P(g, x) - x^g e^{-x} / Gamma(g+1)
  const double kernel = std::exp(g * std::log(x) - x - model.log_gamma_shape() - std::log(g));
  const double value = (x / g) * pq.q + pq.p - kernel;
  return std::clamp(value, 0.0, 1.0);
}

CrossingPmf crossing_pmf(const ResidenceModel& model, double call_rate, double tol) {
  if (!(tol > 0.0)) throw InvalidArgument("truncation tolerance must be positive");
  if (!(call_rate > 0.0) || !std::isfinite(call_rate)) {
    throw InvalidArgument("call rate must be positive, got " + std::to_string(call_rate));
  }
  const double cmr = call_rate / model.mobility_rate();
  const double f = laplace_at(model, call_rate);
  const double one_minus_f = laplace_complement(model, call_rate);
  const double leave = one_minus_f / cmr;  // 1 - a(0) = sum_{k>=1} a(k)

  CrossingPmf pmf{model, call_rate, cmr, f, {}, 0.0};
  pmf.probs.push_back(1.0 - leave);
  // Remaining mass after index k is leave * f^k.
  double remaining = leave;
  double term = leave * one_minus_f;
  while (remaining >= tol) {
    pmf.probs.push_back(term);
    remaining *= f;
    term *= f;
    if (f == 0.0) remaining = 0.0;
  }
  pmf.tail = remaining;
  return pmf;
}

}  // namespace lipaging
