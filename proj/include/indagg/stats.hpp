#pragma once

#include <span>
#include <string>

namespace indagg {

enum class TestKind { mann_whitney_u, kolmogorov_smirnov, f_variance };

const char* to_string(TestKind test);
TestKind test_from_string(const std::string& name);  // "u" | "ks" | "f"

/// `degenerate` marks inputs on which the test statistic is not informative
/// (all pooled values tied, or zero-variance samples for the F test); the
/// p-value is then set by convention as documented per test.
struct TestResult {
  double statistic = 0.0;
  double p_value = 1.0;
  bool degenerate = false;
};

/// Two-sided Mann-Whitney U test. Ranks use midranks for ties; U is the
/// rank-sum statistic of x. The p-value is the normal approximation with
/// continuity correction and tie-corrected variance
///   var = (n1 n2 / 12) * [(N+1) - sum(t^3 - t) / (N (N-1))].
/// All N values identical => p = 1, degenerate. Requires |x|, |y| >= 2.
TestResult mann_whitney_u(std::span<const double> x, std::span<const double> y);

/// Two-sample Kolmogorov-Smirnov test. D = sup |Fx - Fy| over the pooled
/// values (right-continuous steps, so ties are handled exactly); p-value is
/// the asymptotic Kolmogorov tail at
///   lambda = (sqrt(ne) + 0.12 + 0.11 / sqrt(ne)) * D,  ne = n1 n2 / (n1 + n2).
/// Requires |x|, |y| >= 2.
TestResult ks_two_sample(std::span<const double> x, std::span<const double> y);

/// Two-sided variance-ratio F test under a Gaussian hypothesis. f = s2x/s2y
/// with unbiased variances, p = 2 min(P(F <= f), P(F >= f)) on (n1-1, n2-1)
/// degrees of freedom. Conventions: both variances zero => p = 1, degenerate;
/// exactly one zero => p = 0, degenerate (statistic 0 or DBL_MAX).
/// Requires |x|, |y| >= 2.
TestResult f_variance_test(std::span<const double> x, std::span<const double> y);

/// True iff p_value < level, strictly. Requires level in (0, 1).
bool reject(const TestResult& result, double level);

}  // namespace indagg
