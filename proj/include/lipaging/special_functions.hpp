#pragma once

namespace lipaging::special {

/// Regularized incomplete Gamma pair: p = P(a, x), q = Q(a, x) = 1 - P(a, x).
struct GammaPQ {
  double p;
  double q;
};

/**
 * Evaluates P(a, x) and Q(a, x) for a > 0, x >= 0.  Uses the power series
 * below x = a + 1 and the Lentz continued fraction above it; whichever side
 * is computed directly is the accurate one, the other is its complement.
 * `log_gamma_a` lets hot loops pass a cached lgamma(a).
 */
GammaPQ regularized_gamma(double a, double x, double log_gamma_a);
GammaPQ regularized_gamma(double a, double x);

inline double regularized_gamma_p(double a, double x) { return regularized_gamma(a, x).p; }
inline double regularized_gamma_q(double a, double x) { return regularized_gamma(a, x).q; }

}  // namespace lipaging::special
