#pragma once

namespace indagg {

/// Regularized incomplete beta function I_x(a, b), a, b > 0, x in [0, 1].
/// Modified Lentz continued fraction; relative error below 1e-12 over the
/// argument ranges used by the F test (a, b up to a few hundred).
double incomplete_beta(double a, double b, double x);

/// Standard normal CDF.
double normal_cdf(double z);

/// Kolmogorov limiting tail Q(lambda) = 2 sum_{j>=1} (-1)^{j-1} exp(-2 j^2 lambda^2),
/// clamped into [0, 1]. The series is truncated once a term drops below
/// 1e-10; when it does not get there (lambda -> 0), the limit 1 is returned.
double kolmogorov_tail(double lambda);

/// CDF and survival function of the F distribution with (d1, d2) degrees of
/// freedom, each evaluated through its own incomplete-beta route so both
/// tails keep full relative accuracy.
double f_cdf(double f, double d1, double d2);
double f_sf(double f, double d1, double d2);

}  // namespace indagg
