#include <doctest.h>

#include <boost/math/special_functions/gamma.hpp>
#include <cmath>

#include "lipaging/errors.hpp"
#include "lipaging/special_functions.hpp"

using namespace lipaging;

TEST_CASE("incomplete gamma agrees with Boost across both regimes") {
  for (double a : {0.05, 0.1, 0.5, 1.0, 2.0, 3.7, 10.0, 11.0, 25.0}) {
    for (double x : {1e-8, 1e-3, 0.1, 0.5, 1.0, 2.0, a, a + 1.0, a + 1.5, 5.0, 20.0, 60.0}) {
      const auto pq = special::regularized_gamma(a, x);
      const double p = boost::math::gamma_p(a, x);
      const double q = boost::math::gamma_q(a, x);
      INFO("a=" << a << " x=" << x);
      CHECK(std::abs(pq.p - p) <= 1e-13 + 1e-12 * p);
      CHECK(std::abs(pq.q - q) <= 1e-13 + 1e-12 * q);
      CHECK(pq.p + pq.q == doctest::Approx(1.0).epsilon(1e-14));
    }
  }
}

TEST_CASE("incomplete gamma closed forms") {
  // a = 1: P = 1 - e^{-x}
  CHECK(special::regularized_gamma_p(1.0, 0.7) == doctest::Approx(1.0 - std::exp(-0.7)).epsilon(1e-14));
  // a = 2: Q = e^{-x}(1 + x)
  CHECK(special::regularized_gamma_q(2.0, 4.0) == doctest::Approx(5.0 * std::exp(-4.0)).epsilon(1e-14));
  CHECK(special::regularized_gamma_p(3.0, 0.0) == 0.0);
  CHECK(special::regularized_gamma_q(3.0, INFINITY) == 0.0);
}

TEST_CASE("incomplete gamma domain errors") {
  CHECK_THROWS_AS(special::regularized_gamma(0.0, 1.0), InvalidArgument);
  CHECK_THROWS_AS(special::regularized_gamma(1.0, -1.0), InvalidArgument);
}
