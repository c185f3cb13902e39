// Test-only oracles: exact enumerations and quadrature, kept independent of
// the library code paths they validate.
#pragma once

#include <bit>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace oracles {

// Gauss-Legendre nodes/weights on [-1, 1] by Newton iteration on the Legendre
// recurrence.
inline void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights) {
  nodes.resize(static_cast<std::size_t>(n));
  weights.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::fabs(dx) < 1e-15) break;
    }
    nodes[static_cast<std::size_t>(i)] = -x;
    nodes[static_cast<std::size_t>(n - 1 - i)] = x;
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    weights[static_cast<std::size_t>(i)] = w;
    weights[static_cast<std::size_t>(n - 1 - i)] = w;
  }
}

// integral of t^(a-1) (1-t)^(b-1) over [0, z] divided by B(a, b); composite
// 24-node Gauss-Legendre over 48 panels (the integrand is smooth for a, b >= 1)
inline double ibeta_by_quadrature(double a, double b, double z) {
  std::vector<double> nodes, weights;
  gauss_legendre(24, nodes, weights);
  const int panels = 48;
  double integral = 0.0;
  for (int p = 0; p < panels; ++p) {
    const double lo = z * p / panels;
    const double hi = z * (p + 1) / panels;
    const double mid = 0.5 * (lo + hi);
    const double half = 0.5 * (hi - lo);
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      const double t = mid + half * nodes[i];
      integral += weights[i] * half * std::pow(t, a - 1.0) * std::pow(1.0 - t, b - 1.0);
    }
  }
  const double log_beta = std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b);
  return integral / std::exp(log_beta);
}

// Exact two-sided U-test p-value for tie-free samples: every choice of the n1
// ranks occupied by x is equally likely; p = P(|U' - mu| >= |U - mu|).
inline double u_exact_two_sided(int n1, int n2, double u_obs) {
  const int n = n1 + n2;
  if (n > 16) throw std::invalid_argument("u_exact_two_sided: n too large");
  const double mu = 0.5 * n1 * n2;
  long long total = 0, extreme = 0;
  for (unsigned mask = 0; mask < (1u << n); ++mask) {
    if (std::popcount(mask) != n1) continue;
    ++total;
    int rank_sum = 0;
    for (int r = 0; r < n; ++r) {
      if (mask >> r & 1u) rank_sum += r + 1;
    }
    const double u = rank_sum - 0.5 * n1 * (n1 + 1);
    if (std::fabs(u - mu) >= std::fabs(u_obs - mu) - 1e-9) ++extreme;
  }
  return static_cast<double>(extreme) / static_cast<double>(total);
}

// Exact P(D >= d_obs) for tie-free samples by enumerating every interleaving;
// D lives on the lattice |i n2 - j n1| / (n1 n2), so comparisons are integer.
inline double ks_exact_tail(int n1, int n2, double d_obs) {
  const int n = n1 + n2;
  if (n > 16) throw std::invalid_argument("ks_exact_tail: n too large");
  const long long d_num = std::llround(d_obs * n1 * n2);
  long long total = 0, extreme = 0;
  for (unsigned mask = 0; mask < (1u << n); ++mask) {
    if (std::popcount(mask) != n1) continue;
    ++total;
    long long i = 0, j = 0, best = 0;
    for (int r = 0; r < n; ++r) {
      if (mask >> r & 1u) {
        ++i;
      } else {
        ++j;
      }
      best = std::max(best, std::llabs(i * n2 - j * n1));
    }
    if (best >= d_num) ++extreme;
  }
  return static_cast<double>(extreme) / static_cast<double>(total);
}

// P(D < q) under the null for sample sizes (m, n) by path counting over the
// lattice walk; exact for tie-free data, any m and n.
inline double p_smirnov_less(double q, int m, int n) {
  const double md = m, nd = n;
  const double qq = (0.5 + std::floor(q * md * nd - 1e-7)) / (md * nd);
  std::vector<double> u(static_cast<std::size_t>(n) + 1);
  for (int j = 0; j <= n; ++j) u[static_cast<std::size_t>(j)] = (j / nd > qq) ? 0.0 : 1.0;
  for (int i = 1; i <= m; ++i) {
    const double w = i / (i + nd);
    u[0] = (i / md > qq) ? 0.0 : w * u[0];
    for (int j = 1; j <= n; ++j) {
      u[static_cast<std::size_t>(j)] =
          (std::fabs(i / md - j / nd) > qq)
              ? 0.0
              : w * u[static_cast<std::size_t>(j)] + u[static_cast<std::size_t>(j - 1)];
    }
  }
  return u[static_cast<std::size_t>(n)];
}

}  // namespace oracles
