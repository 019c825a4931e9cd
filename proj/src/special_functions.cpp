#include "lipaging/special_functions.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "lipaging/errors.hpp"

namespace lipaging::special {
namespace {

constexpr int kMaxIterations = 100000;
constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr double kTiny = 1e-300;

double log_prefactor(double a, double x, double log_gamma_a) {
  return -x + a * std::log(x) - log_gamma_a;
}

// sum_{n>=0} x^n / (a (a+1) ... (a+n)); P = e^{-x} x^a / Gamma(a) * sum
double series_p(double a, double x, double log_gamma_a) {
  double ap = a;
  double term = 1.0 / a;
  double sum = term;
  for (int n = 0; n < kMaxIterations; ++n) {
    ap += 1.0;
    term *= x / ap;
    sum += term;
    if (std::abs(term) < std::abs(sum) * kEps) {
      return sum * std::exp(log_prefactor(a, x, log_gamma_a));
    }
  }
  throw SolverError("incomplete gamma series failed for a=" + std::to_string(a) +
                        ", x=" + std::to_string(x),
                    std::abs(term));
}

// Modified Lentz evaluation of the Legendre continued fraction for Q.
double continued_fraction_q(double a, double x, double log_gamma_a) {
  double b = x + 1.0 - a;
  double c = 1.0 / kTiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < kMaxIterations; ++i) {
    const double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < kTiny) d = kTiny;
    c = b + an / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::abs(delta - 1.0) < kEps) {
      return h * std::exp(log_prefactor(a, x, log_gamma_a));
    }
  }
  throw SolverError("incomplete gamma continued fraction failed for a=" +
                        std::to_string(a) + ", x=" + std::to_string(x),
                    std::abs(h));
}

}  // namespace

GammaPQ regularized_gamma(double a, double x, double log_gamma_a) {
  if (!(a > 0.0)) throw InvalidArgument("incomplete gamma needs a > 0");
  if (!(x >= 0.0)) throw InvalidArgument("incomplete gamma needs x >= 0");
  if (x == 0.0) return {0.0, 1.0};
  if (std::isinf(x)) return {1.0, 0.0};
  if (x < a + 1.0) {
    const double p = series_p(a, x, log_gamma_a);
    return {p, 1.0 - p};
  }
  const double q = continued_fraction_q(a, x, log_gamma_a);
  return {1.0 - q, q};
}

GammaPQ regularized_gamma(double a, double x) {
  return regularized_gamma(a, x, std::lgamma(a));
}

}  // namespace lipaging::special
