#pragma once

#include "rkfd/integrate.hpp"

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace rkfd {

/// Errors at or below this level are dominated by 64-bit roundoff and are
/// excluded from order estimates.
inline constexpr double kRoundoffFloor = 1e-13;

/// ln(e1/e2) / ln(h1/h2), or nullopt when either error is at or below
/// `floor`.  Throws std::invalid_argument for h1 == h2 or non-positive h.
std::optional<double> observed_order(double e1, double e2, double h1, double h2,
                                     double floor = kRoundoffFloor);

/// Least-squares slope of log(e) against log(h) over the points whose error
/// exceeds `floor`; nullopt with fewer than two such points.
std::optional<double> fit_slope(std::span<const double> h, std::span<const double> e,
                                double floor = kRoundoffFloor);

struct ConvergencePoint {
  double h;
  double error;
  /// Order against the previous (larger) h; empty for the first point.
  std::optional<double> observed_order;
};

struct ConvergenceReport {
  std::string method;
  std::string problem;
  Slot slot = Slot::y;
  bool local = false;
  std::vector<ConvergencePoint> points;
  std::optional<double> slope;

  /// The defined pairwise orders, in h order.
  std::vector<double> pairwise_orders() const;
};

/// Error of a single step from the initial state, for each h in the strictly
/// decreasing `h_list`.  The reference is the exact solution when known,
/// otherwise RK4 on the reduction with step h/1000.
ConvergenceReport local_error_study(const Method& method, const Ivp4& problem,
                                    std::span<const double> h_list, Slot slot = Slot::y);

/// Full-interval runs at h0, h0/2, ..., h0/2^(levels-1) (levels >= 2).
/// Needs an exact solution; a diverging run aborts the study.
ConvergenceReport convergence_study(const Method& method, const Ivp4& problem, double h0,
                                    int levels);

struct EfficiencyPoint {
  std::string method;
  std::string problem;
  double h = 0.0;
  std::size_t n_steps = 0;
  std::size_t n_fevals = 0;
  std::optional<double> max_abs_error;
  std::optional<double> wall_seconds;
  /// Set when the run diverged; the numeric fields are then incomplete.
  std::optional<std::string> failure;
};

/// One full run per h, ordered by decreasing h.  Divergence is recorded in
/// the point rather than thrown.
std::vector<EfficiencyPoint> efficiency_curve(const Method& method, const Ivp4& problem,
                                              std::span<const double> h_list);

/// Every (method, problem, h) cell.  wall_seconds is the median over
/// `repeats` timed runs of the stepping loop alone.  Rows are ordered by
/// method name, problem name, then decreasing h.
std::vector<EfficiencyPoint> bench(std::span<const Method> methods, std::span<const Ivp4> problems,
                                   std::span<const double> h_list, int repeats = 5);

/// Worker count for independent cells: RKFD_THREADS if set and positive,
/// else the hardware concurrency.
std::size_t analysis_threads();

}  // namespace rkfd
