#include "indagg/indicators.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace indagg {

namespace {

std::string format_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%g", v);
  return buf;
}

/// Smallest integer >= beta * m, with a tiny guard so exact products such as
/// 0.1 * 30 do not land on the wrong side after rounding.
int ceil_threshold(double beta, int m) {
  const int c = static_cast<int>(std::ceil(beta * static_cast<double>(m) - 1e-9));
  return std::max(c, 1);
}

}  // namespace

std::string IndicatorSpec::id() const {
  std::string out = to_string(test);
  out += '-';
  switch (family.kind) {
    case FamilyKind::rate:
      out += "rate" + format_number(family.beta);
      break;
    case FamilyKind::longest_run:
      out += "run" + format_number(family.beta);
      break;
    case FamilyKind::k_of_n:
      out += "kofn" + std::to_string(family.k) + "of" + std::to_string(family.n_windows);
      break;
  }
  out += "-w";
  switch (window) {
    case WindowSize::w30: out += "30"; break;
    case WindowSize::w50: out += "50"; break;
    case WindowSize::adaptive: out += "adp"; break;
  }
  out += "-l" + format_number(level);
  out += "-ov";
  switch (overlap) {
    case OverlapKind::full: out += "full"; break;
    case OverlapKind::five: out += "5"; break;
    case OverlapKind::ten: out += "10"; break;
  }
  out += smoothed ? "-sma" : "-raw";
  return out;
}

std::vector<std::string> IndicatorGrid::ids() const {
  std::vector<std::string> out;
  out.reserve(specs.size());
  for (const auto& spec : specs) out.push_back(spec.id());
  return out;
}

int resolve_window(WindowSize window, int n) {
  switch (window) {
    case WindowSize::w30: return 30;
    case WindowSize::w50: return 50;
    case WindowSize::adaptive: {
      const int w = std::min(n - 2, 100);
      return w - (w % 2);
    }
  }
  return 0;
}

int resolve_step(OverlapKind overlap, int window) {
  switch (overlap) {
    case OverlapKind::full: return 1;
    case OverlapKind::five: return window - 5;
    case OverlapKind::ten: return window - 10;
  }
  return 1;
}

std::vector<int> WindowScheme::positions(int n) const {
  std::vector<int> out;
  if (total_window < 2 || total_window % 2 != 0 || step < 1) {
    throw std::invalid_argument("window scheme requires an even window >= 2 and step >= 1");
  }
  const int half = total_window / 2;
  for (int t = half; t <= n - half; t += step) out.push_back(t);
  return out;
}

WindowScheme make_scheme(WindowSize window, OverlapKind overlap, int n) {
  const int w = resolve_window(window, n);
  return WindowScheme{w, resolve_step(overlap, w)};
}

Signal smooth(const Signal& signal) {
  const int n = signal.n();
  if (n < 5) throw std::invalid_argument("smooth: signal shorter than 5 observations");
  Signal out;
  out.id = signal.id;
  out.label = signal.label;
  out.shift_param = signal.shift_param;
  if (signal.change_point) out.change_point = *signal.change_point - 2;
  out.values.resize(n - 4);
  double window_sum = signal.values[0] + signal.values[1] + signal.values[2] +
                      signal.values[3] + signal.values[4];
  out.values[0] = window_sum / 5.0;
  for (int j = 1; j + 4 < n; ++j) {
    window_sum += signal.values[j + 4] - signal.values[j - 1];
    out.values[j] = window_sum / 5.0;
  }
  return out;
}

std::vector<double> scan_p_values(std::span<const double> values, TestKind test,
                                  const WindowScheme& scheme) {
  const int n = static_cast<int>(values.size());
  const std::vector<int> positions = scheme.positions(n);
  if (positions.empty()) {
    throw std::invalid_argument("scan: no window position fits a signal of length " +
                                std::to_string(n));
  }
  const int half = scheme.total_window / 2;
  std::vector<double> out;
  out.reserve(positions.size());
  for (int t : positions) {
    const auto before = values.subspan(static_cast<std::size_t>(t - half), half);
    const auto after = values.subspan(static_cast<std::size_t>(t), half);
    TestResult result;
    switch (test) {
      case TestKind::mann_whitney_u: result = mann_whitney_u(before, after); break;
      case TestKind::kolmogorov_smirnov: result = ks_two_sample(before, after); break;
      case TestKind::f_variance: result = f_variance_test(before, after); break;
    }
    out.push_back(result.p_value);
  }
  return out;
}

std::vector<std::uint8_t> scan(std::span<const double> values, TestKind test,
                               const WindowScheme& scheme, double level) {
  const std::vector<double> p_values = scan_p_values(values, test, scheme);
  std::vector<std::uint8_t> flags(p_values.size());
  for (std::size_t i = 0; i < p_values.size(); ++i) {
    flags[i] = p_values[i] < level ? 1 : 0;
  }
  return flags;
}

bool confirm(std::span<const std::uint8_t> flags, const ConfirmationFamily& family) {
  const int m = static_cast<int>(flags.size());
  if (m < 1) throw std::invalid_argument("confirm: needs at least one flag");
  switch (family.kind) {
    case FamilyKind::rate: {
      int count = 0;
      for (auto f : flags) count += f;
      return count >= ceil_threshold(family.beta, m);
    }
    case FamilyKind::longest_run: {
      int best = 0, run = 0;
      for (auto f : flags) {
        run = f ? run + 1 : 0;
        best = std::max(best, run);
      }
      return best >= ceil_threshold(family.beta, m);
    }
    case FamilyKind::k_of_n: {
      const int width = family.n_windows;
      if (m < width) {
        int count = 0;
        for (auto f : flags) count += f;
        return count >= family.k;
      }
      int count = 0;
      for (int i = 0; i < width; ++i) count += flags[i];
      if (count >= family.k) return true;
      for (int i = width; i < m; ++i) {
        count += flags[i] - flags[i - width];
        if (count >= family.k) return true;
      }
      return false;
    }
  }
  return false;
}

std::vector<std::uint8_t> evaluate_grid(const Signal& signal, const IndicatorGrid& grid,
                                        GridDiagnostics* diagnostics,
                                        const GridEvalOptions& options) {
  std::vector<std::uint8_t> bits(grid.size(), 0);

  bool have_smoothed = false;
  Signal smoothed;

  struct CacheEntry {
    bool smoothed;
    TestKind test;
    int window;
    int step;
    std::vector<double> p_values;
  };
  std::vector<CacheEntry> cache;  // at most a few dozen entries; linear scan

  for (std::size_t s = 0; s < grid.specs.size(); ++s) {
    const IndicatorSpec& spec = grid.specs[s];
    try {
      const Signal* source = &signal;
      if (spec.smoothed) {
        if (!have_smoothed) {
          smoothed = smooth(signal);
          have_smoothed = true;
        }
        source = &smoothed;
      }
      const int n = source->n();
      const int window = resolve_window(spec.window, n);
      const int step = resolve_step(spec.overlap, window);

      const std::vector<double>* p_values = nullptr;
      std::vector<double> uncached;
      if (options.cache_p_values) {
        for (const auto& entry : cache) {
          if (entry.smoothed == spec.smoothed && entry.test == spec.test &&
              entry.window == window && entry.step == step) {
            p_values = &entry.p_values;
            break;
          }
        }
        if (p_values == nullptr) {
          cache.push_back({spec.smoothed, spec.test, window, step,
                           scan_p_values(source->values, spec.test, WindowScheme{window, step})});
          p_values = &cache.back().p_values;
        }
      } else {
        uncached = scan_p_values(source->values, spec.test, WindowScheme{window, step});
        p_values = &uncached;
      }

      std::vector<std::uint8_t> flags(p_values->size());
      for (std::size_t i = 0; i < p_values->size(); ++i) {
        flags[i] = (*p_values)[i] < spec.level ? 1 : 0;
      }
      bits[s] = confirm(flags, spec.family) ? 1 : 0;
    } catch (const std::exception& e) {
      if (diagnostics != nullptr) {
        ++diagnostics->scan_errors;
        if (diagnostics->messages.size() < 20) {
          diagnostics->messages.push_back("signal " + std::to_string(signal.id) + ", spec " +
                                          spec.id() + ": " + e.what());
        }
      }
      bits[s] = 0;
    }
  }
  return bits;
}

IndicatorGrid default_grid() {
  IndicatorGrid grid;
  grid.specs.reserve(810);
  const TestKind tests[] = {TestKind::mann_whitney_u, TestKind::kolmogorov_smirnov,
                            TestKind::f_variance};
  const WindowSize windows[] = {WindowSize::w30, WindowSize::w50, WindowSize::adaptive};
  const double levels[] = {0.005, 0.1, 0.5};
  const double betas[] = {0.1, 0.3, 0.5};
  const OverlapKind overlaps[] = {OverlapKind::full, OverlapKind::five, OverlapKind::ten};
  const std::pair<int, int> k_of_n[] = {{2, 3}, {3, 5}, {4, 5}};

  for (bool smoothed : {false, true}) {
    for (TestKind test : tests) {
      for (WindowSize window : windows) {
        for (double level : levels) {
          IndicatorSpec base;
          base.test = test;
          base.window = window;
          base.level = level;
          base.smoothed = smoothed;
          for (double beta : betas) {
            for (OverlapKind overlap : overlaps) {
              IndicatorSpec spec = base;
              spec.family = {FamilyKind::rate, beta, 0, 0};
              spec.overlap = overlap;
              grid.specs.push_back(spec);
            }
          }
          for (double beta : betas) {
            IndicatorSpec spec = base;
            spec.family = {FamilyKind::longest_run, beta, 0, 0};
            spec.overlap = OverlapKind::full;
            grid.specs.push_back(spec);
          }
          for (auto [k, nw] : k_of_n) {
            IndicatorSpec spec = base;
            spec.family = {FamilyKind::k_of_n, 0.0, k, nw};
            spec.overlap = OverlapKind::full;
            grid.specs.push_back(spec);
          }
        }
      }
    }
  }
  return grid;
}

}  // namespace indagg
