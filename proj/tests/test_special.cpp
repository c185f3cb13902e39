#include <doctest.h>

#include <cmath>
#include <vector>

#include "indagg/special.hpp"
#include "oracles.hpp"

using namespace indagg;
using oracles::ibeta_by_quadrature;



TEST_CASE("incomplete beta agrees with an independent quadrature oracle") {
  const double as[] = {1.0, 2.5, 7.0, 12.5, 24.5};
  const double zs[] = {0.05, 0.3, 0.5, 0.85};
  int checked = 0;
  for (double a : as) {
    for (double z : zs) {
      const double b = 31.0 - a;  // spread (a, b) pairs across the range
      const double expected = ibeta_by_quadrature(a, b, z);
      const double got = incomplete_beta(a, b, z);
      CHECK(std::fabs(got - expected) < 1e-8);
      ++checked;
    }
  }
  CHECK(checked == 20);
}

TEST_CASE("incomplete beta identities") {
  CHECK(incomplete_beta(5.0, 5.0, 0.5) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(incomplete_beta(7.0, 7.0, 0.5) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(incomplete_beta(3.0, 4.0, 0.0) == 0.0);
  CHECK(incomplete_beta(3.0, 4.0, 1.0) == 1.0);
  // I_x(a, b) = 1 - I_{1-x}(b, a)
  for (double x : {0.1, 0.37, 0.62, 0.9}) {
    for (double a : {1.5, 4.0, 11.0}) {
      const double lhs = incomplete_beta(a, 2.0 * a, x);
      const double rhs = 1.0 - incomplete_beta(2.0 * a, a, 1.0 - x);
      CHECK(lhs == doctest::Approx(rhs).epsilon(1e-11));
    }
  }
  // I_x(1, 1) is the identity
  CHECK(incomplete_beta(1.0, 1.0, 0.3) == doctest::Approx(0.3).epsilon(1e-12));
}

TEST_CASE("normal cdf spot values") {
  CHECK(normal_cdf(0.0) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(normal_cdf(1.959963984540054) == doctest::Approx(0.975).epsilon(1e-12));
  CHECK(normal_cdf(-1.959963984540054) == doctest::Approx(0.025).epsilon(1e-10));
  CHECK(normal_cdf(6.0) > 1.0 - 1e-8);
}

TEST_CASE("kolmogorov tail behaves at the ends and at a frozen point") {
  CHECK(kolmogorov_tail(0.0) == 1.0);
  CHECK(kolmogorov_tail(1e-4) == 1.0);
  CHECK(kolmogorov_tail(10.0) < 1e-10);
  // Q(1) = 2 (e^-2 - e^-8 + e^-18 - ...)
  CHECK(kolmogorov_tail(1.0) == doctest::Approx(0.26999967167735456).epsilon(1e-9));
  // monotone decreasing up to the 1e-10 series truncation
  double prev = 1.0;
  for (double lam = 0.05; lam < 3.0; lam += 0.05) {
    const double q = kolmogorov_tail(lam);
    CHECK(q <= prev + 1e-9);
    prev = q;
  }
}

TEST_CASE("F distribution CDF symmetry and median") {
  CHECK(f_cdf(1.0, 10.0, 10.0) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(f_cdf(1.0, 24.0, 24.0) == doctest::Approx(0.5).epsilon(1e-12));
  for (double f : {0.3, 0.8, 1.7, 4.2}) {
    CHECK(f_cdf(f, 14.0, 24.0) + f_sf(f, 14.0, 24.0) == doctest::Approx(1.0).epsilon(1e-11));
    // P(F(d1,d2) <= f) = P(F(d2,d1) >= 1/f)
    CHECK(f_cdf(f, 14.0, 24.0) == doctest::Approx(f_sf(1.0 / f, 24.0, 14.0)).epsilon(1e-11));
  }
}
