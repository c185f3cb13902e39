#include "indagg/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "indagg/special.hpp"

namespace indagg {

namespace {

void require_sizes(std::span<const double> x, std::span<const double> y) {
  if (x.size() < 2 || y.size() < 2) {
    throw std::invalid_argument("two-sample test needs at least 2 values per sample");
  }
}

double sample_variance(std::span<const double> v) {
  double mean = 0.0;
  for (double e : v) mean += e;
  mean /= static_cast<double>(v.size());
  double ss = 0.0;
  for (double e : v) ss += (e - mean) * (e - mean);
  return ss / static_cast<double>(v.size() - 1);
}

}  // namespace

const char* to_string(TestKind test) {
  switch (test) {
    case TestKind::mann_whitney_u: return "u";
    case TestKind::kolmogorov_smirnov: return "ks";
    case TestKind::f_variance: return "f";
  }
  return "?";
}

TestKind test_from_string(const std::string& name) {
  if (name == "u" || name == "U") return TestKind::mann_whitney_u;
  if (name == "ks" || name == "KS") return TestKind::kolmogorov_smirnov;
  if (name == "f" || name == "F") return TestKind::f_variance;
  throw std::invalid_argument("unknown test kind: " + name);
}

TestResult mann_whitney_u(std::span<const double> x, std::span<const double> y) {
  require_sizes(x, y);
  const std::size_t n1 = x.size();
  const std::size_t n2 = y.size();
  const std::size_t n = n1 + n2;

  // (value, is_x) pooled and sorted; midranks shared across ties.
  std::vector<std::pair<double, bool>> pooled;
  pooled.reserve(n);
  for (double v : x) pooled.emplace_back(v, true);
  for (double v : y) pooled.emplace_back(v, false);
  std::sort(pooled.begin(), pooled.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });

  double rank_sum_x = 0.0;
  double tie_term = 0.0;  // sum over tie groups of t^3 - t
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j < n && pooled[j].first == pooled[i].first) ++j;
    const double t = static_cast<double>(j - i);
    const double midrank = 0.5 * static_cast<double>(i + 1 + j);  // mean of ranks i+1..j
    for (std::size_t m = i; m < j; ++m) {
      if (pooled[m].second) rank_sum_x += midrank;
    }
    tie_term += t * t * t - t;
    i = j;
  }

  TestResult result;
  const double dn1 = static_cast<double>(n1);
  const double dn2 = static_cast<double>(n2);
  const double dn = static_cast<double>(n);
  const double u = rank_sum_x - 0.5 * dn1 * (dn1 + 1.0);
  result.statistic = u;

  const double var =
      dn1 * dn2 / 12.0 * ((dn + 1.0) - tie_term / (dn * (dn - 1.0)));
  if (var <= 0.0) {
    // every pooled value identical
    result.p_value = 1.0;
    result.degenerate = true;
    return result;
  }
  const double mu = 0.5 * dn1 * dn2;
  const double z = std::max(0.0, std::fabs(u - mu) - 0.5) / std::sqrt(var);
  result.p_value = std::clamp(2.0 * (1.0 - normal_cdf(z)), 0.0, 1.0);
  return result;
}

TestResult ks_two_sample(std::span<const double> x, std::span<const double> y) {
  require_sizes(x, y);
  std::vector<double> xs(x.begin(), x.end());
  std::vector<double> ys(y.begin(), y.end());
  std::sort(xs.begin(), xs.end());
  std::sort(ys.begin(), ys.end());

  const double inv1 = 1.0 / static_cast<double>(xs.size());
  const double inv2 = 1.0 / static_cast<double>(ys.size());
  double d = 0.0;
  std::size_t i = 0, j = 0;
  while (i < xs.size() && j < ys.size()) {
    const double v = std::min(xs[i], ys[j]);
    while (i < xs.size() && xs[i] == v) ++i;
    while (j < ys.size() && ys[j] == v) ++j;
    d = std::max(d, std::fabs(static_cast<double>(i) * inv1 - static_cast<double>(j) * inv2));
  }
  // remaining one-sided tail never beats the gap already seen at max 1.0
  d = std::min(d, 1.0);

  TestResult result;
  result.statistic = d;
  const double ne = static_cast<double>(xs.size()) * static_cast<double>(ys.size()) /
                    static_cast<double>(xs.size() + ys.size());
  const double lambda = (std::sqrt(ne) + 0.12 + 0.11 / std::sqrt(ne)) * d;
  result.p_value = kolmogorov_tail(lambda);
  return result;
}

TestResult f_variance_test(std::span<const double> x, std::span<const double> y) {
  require_sizes(x, y);
  const double s2x = sample_variance(x);
  const double s2y = sample_variance(y);

  TestResult result;
  if (s2x == 0.0 && s2y == 0.0) {
    result.statistic = 1.0;
    result.p_value = 1.0;
    result.degenerate = true;
    return result;
  }
  if (s2x == 0.0 || s2y == 0.0) {
    result.statistic = s2x == 0.0 ? 0.0 : std::numeric_limits<double>::max();
    result.p_value = 0.0;
    result.degenerate = true;
    return result;
  }

  const double f = s2x / s2y;
  const double d1 = static_cast<double>(x.size() - 1);
  const double d2 = static_cast<double>(y.size() - 1);
  result.statistic = f;
  result.p_value = std::min(1.0, 2.0 * std::min(f_cdf(f, d1, d2), f_sf(f, d1, d2)));
  return result;
}

bool reject(const TestResult& result, double level) {
  if (!(level > 0.0 && level < 1.0)) {
    throw std::invalid_argument("rejection level must be in (0, 1)");
  }
  return result.p_value < level;
}

}  // namespace indagg
