#include "indagg/sim.hpp"

#include <stdexcept>

namespace indagg {

const char* to_string(ClassLabel label) {
  switch (label) {
    case ClassLabel::none: return "none";
    case ClassLabel::variance: return "variance";
    case ClassLabel::mean: return "mean";
    case ClassLabel::trend: return "trend";
  }
  return "?";
}

ClassLabel label_from_int(int code) {
  if (code < 0 || code >= kNumClasses) {
    throw std::invalid_argument("class label code out of range: " + std::to_string(code));
  }
  return static_cast<ClassLabel>(code);
}

const char* to_string(Variant variant) { return variant == Variant::a ? "A" : "B"; }

Variant variant_from_string(const std::string& name) {
  if (name == "A" || name == "a") return Variant::a;
  if (name == "B" || name == "b") return Variant::b;
  throw std::invalid_argument("unknown dataset variant: " + name);
}

Signal generate_signal(Rng& rng, Variant variant, ClassLabel label) {
  Signal signal;
  signal.label = label;
  const int n = static_cast<int>(rng.uniform_int(100, 200));
  signal.values.resize(n);

  if (label == ClassLabel::none) {
    for (auto& v : signal.values) v = rng.gaussian();
    return signal;
  }

  const int k = static_cast<int>(rng.uniform_int(change_point_min(n), change_point_max(n)));
  signal.change_point = k;

  double param = 0.0;
  switch (label) {
    case ClassLabel::variance:
      param = rng.uniform(1.01, 5.0);
      break;
    case ClassLabel::mean:
      param = variant == Variant::a ? rng.uniform(1.01, 5.0) : rng.uniform(0.505, 2.5);
      break;
    case ClassLabel::trend:
      param = rng.uniform(0.02, 3.0);
      break;
    case ClassLabel::none:
      break;
  }
  signal.shift_param = param;

  for (int t = 1; t <= n; ++t) {
    double x = rng.gaussian();
    if (t > k) {
      switch (label) {
        case ClassLabel::variance: x *= param; break;
        case ClassLabel::mean: x += param; break;
        case ClassLabel::trend: x += param * static_cast<double>(t - k); break;
        case ClassLabel::none: break;
      }
    }
    signal.values[t - 1] = x;
  }
  return signal;
}

std::vector<Signal> generate_dataset(const DatasetConfig& config) {
  if (config.n_normal < 0 || config.n_per_anomaly < 0) {
    throw std::invalid_argument("dataset sizes must be nonnegative");
  }
  const std::int64_t total = config.n_normal + 3LL * config.n_per_anomaly;
  std::vector<Signal> dataset;
  dataset.reserve(static_cast<std::size_t>(total));
  for (std::int64_t i = 0; i < total; ++i) {
    ClassLabel label = ClassLabel::none;
    if (i >= config.n_normal) {
      label = static_cast<ClassLabel>(1 + (i - config.n_normal) / config.n_per_anomaly);
    }
    Rng rng(derive_seed(config.seed, static_cast<std::uint64_t>(i)));
    Signal signal = generate_signal(rng, config.variant, label);
    signal.id = i;
    dataset.push_back(std::move(signal));
  }
  return dataset;
}

}  // namespace indagg
