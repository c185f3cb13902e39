#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "indagg/rng.hpp"
#include "indagg/signal.hpp"

namespace indagg {

/// The two simulated corpora differ only in the mean-shift amplitude range:
/// variant B draws mu from [0.505, 2.5] instead of [1.01, 5].
enum class Variant { a, b };

const char* to_string(Variant variant);
Variant variant_from_string(const std::string& name);  // accepts "A"/"a"/"B"/"b"

struct DatasetConfig {
  Variant variant = Variant::a;
  int n_normal = 0;
  int n_per_anomaly = 0;
  std::uint64_t seed = 0;
};

/// Change-point bounds for a length-n signal: ceil(2n/10) <= k <= floor(8n/10).
inline int change_point_min(int n) { return (2 * n + 9) / 10; }
inline int change_point_max(int n) { return (8 * n) / 10; }

/// Draws one signal. Length n ~ U{100..200}; pre-change samples are iid
/// N(0,1). Draw order is fixed (n, then k, then the shift parameter, then the
/// observations front to back), so a given rng state always yields the same
/// series.
///
/// Shifts after the 1-based change point k:
///   variance: N(0, sigma^2), sigma ~ U[1.01, 5]
///   mean:     N(mu, 1), mu ~ U[1.01, 5] (variant A) or U[0.505, 2.5] (B)
///   trend:    N(slope * (t - k), 1) at observation t > k, slope ~ U[0.02, 3]
Signal generate_signal(Rng& rng, Variant variant, ClassLabel label);

/// n_normal signals labelled none followed by n_per_anomaly signals for each
/// anomaly class in code order. Ids are sequential from 0. Signal i is drawn
/// from its own stream derive_seed(config.seed, i), so the dataset is stable
/// under parallel generation.
std::vector<Signal> generate_dataset(const DatasetConfig& config);

}  // namespace indagg
