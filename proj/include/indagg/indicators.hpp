#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "indagg/signal.hpp"
#include "indagg/stats.hpp"

namespace indagg {

/// Window size of one test: the TOTAL number of observations compared, split
/// into two halves of W/2 around the candidate change point. `adaptive`
/// resolves per signal to min(n-2, 100), rounded down to an even value.
enum class WindowSize { w30, w50, adaptive };

/// Observations shared by two consecutive windows: W-1 (`full`, step 1),
/// 5 (step W-5) or 10 (step W-10).
enum class OverlapKind { full, five, ten };

enum class FamilyKind { rate, longest_run, k_of_n };

/// How the per-window rejection flags collapse into one bit:
///   rate:        at least ceil(beta * m) of the m flags are set
///   longest_run: a run of at least ceil(beta * m) consecutive set flags
///   k_of_n:      some n_windows consecutive flags contain at least k set
///                (when m < n_windows, the single window of all m flags is
///                checked against k)
struct ConfirmationFamily {
  FamilyKind kind = FamilyKind::rate;
  double beta = 0.0;
  int k = 0;
  int n_windows = 0;
};

struct IndicatorSpec {
  TestKind test = TestKind::mann_whitney_u;
  WindowSize window = WindowSize::w30;
  double level = 0.1;
  ConfirmationFamily family;
  OverlapKind overlap = OverlapKind::full;
  bool smoothed = false;

  /// Stable id encoding every field, e.g. "u-rate0.1-w30-l0.005-ovfull-raw".
  std::string id() const;
};

/// Ordered list of specs; the order defines indicator-matrix column order.
struct IndicatorGrid {
  std::vector<IndicatorSpec> specs;

  std::size_t size() const { return specs.size(); }
  std::vector<std::string> ids() const;
};

/// Candidate change points for a length-n signal: t = W/2, W/2 + step, ...
/// up to n - W/2. Position t compares values[t-W/2..t-1] against
/// values[t..t+W/2-1] (0-based).
struct WindowScheme {
  int total_window = 0;  // W, even
  int step = 1;

  std::vector<int> positions(int n) const;
};

/// Resolves a WindowSize against a concrete signal length.
int resolve_window(WindowSize window, int n);
int resolve_step(OverlapKind overlap, int window);
WindowScheme make_scheme(WindowSize window, OverlapKind overlap, int n);

/// Centered moving average of 5; output has length n - 4 and element j is
/// mean(values[j..j+4]). The change point shifts by -2 (center alignment).
/// Throws if n < 5.
Signal smooth(const Signal& signal);

/// Raw p-values, one per scheme position. Throws if no position fits.
std::vector<double> scan_p_values(std::span<const double> values, TestKind test,
                                  const WindowScheme& scheme);

/// Rejection flags (p < level), one per position, in position order.
std::vector<std::uint8_t> scan(std::span<const double> values, TestKind test,
                               const WindowScheme& scheme, double level);

/// Collapses flags into the indicator bit. m = |flags| >= 1.
bool confirm(std::span<const std::uint8_t> flags, const ConfirmationFamily& family);

/// Collects per-signal evaluation problems (signals too short for a spec's
/// window produce bit 0 instead of aborting the batch).
struct GridDiagnostics {
  int scan_errors = 0;
  std::vector<std::string> messages;  // capped at 20 entries
};

struct GridEvalOptions {
  /// P-values per (smoothed, test, window, step) are computed once and reused
  /// across levels and families. Disabling the cache must not change any bit;
  /// the switch exists so tests can prove that.
  bool cache_p_values = true;
};

/// One bit per spec, in grid order.
std::vector<std::uint8_t> evaluate_grid(const Signal& signal, const IndicatorGrid& grid,
                                        GridDiagnostics* diagnostics = nullptr,
                                        const GridEvalOptions& options = {});

/// The default 810-spec grid: for each of raw/smoothed x {U, KS, F} x window
/// {30, 50, adaptive} x level {0.005, 0.1, 0.5}, fifteen confirmation
/// variants: rate(beta) for beta in {0.1, 0.3, 0.5} x overlap {full, 5, 10},
/// longest_run(beta) for beta in {0.1, 0.3, 0.5} at full overlap, and k-of-n
/// for (k, n) in {(2,3), (3,5), (4,5)} at full overlap. Enumeration order is
/// fixed: smoothed slowest, then test, window, level, then the variants in
/// the order above; it defines matrix column order everywhere.
IndicatorGrid default_grid();

}  // namespace indagg
