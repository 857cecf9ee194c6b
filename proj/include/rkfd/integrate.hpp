#pragma once

#include "rkfd/problems.hpp"
#include "rkfd/state.hpp"
#include "rkfd/tableau.hpp"

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace rkfd {

/// One explicit RKFD step; the work buffers are reused across steps.
class RkfdStepper {
 public:
  /// Throws TableauError if `tableau` is not explicit.
  RkfdStepper(RkfdTableau tableau, std::size_t m);

  /// Advances `state` by h in place, calling f exactly s times.  Throws
  /// DivergenceError (step index 0) when the result is not finite.
  void step(const Rhs& f, State4& state, double h);

  const RkfdTableau& tableau() const noexcept { return tableau_; }
  std::size_t fevals() const noexcept { return fevals_; }

 private:
  RkfdTableau tableau_;
  std::size_t m_;
  std::size_t fevals_ = 0;
  std::vector<double> stage_f_;  // s x m, row per stage
  std::vector<double> stage_y_;  // m
  std::vector<double> acc_;      // m
};

/// Classical explicit RK applied to (y, v, u, w)' = (v, u, w, f(x, y)).
class RkReducedStepper {
 public:
  RkReducedStepper(RkTableau tableau, std::size_t m);

  void step(const Rhs& f, State4& state, double h);

  const RkTableau& tableau() const noexcept { return tableau_; }
  std::size_t fevals() const noexcept { return fevals_; }

 private:
  RkTableau tableau_;
  std::size_t m_;
  std::size_t fevals_ = 0;
  std::vector<double> k_;      // s x 4m stage derivatives
  std::vector<double> z_;      // 4m packed state
  std::vector<double> stage_;  // 4m stage value
};

State4 rkfd_step(const RkfdTableau& tableau, const Rhs& f, const State4& state, double h);

struct RunOptions {
  /// Keep every stride-th grid point; both endpoints are always kept.
  std::size_t stride = 1;
  bool record_states = true;
  /// Compare against the exact solution at every grid point.
  bool track_error = true;
  /// Measure wall time of the stepping loop.
  bool time = false;
};

struct RunResult {
  std::string method;
  std::string problem;
  double h = 0.0;
  std::size_t n_steps = 0;
  std::size_t n_fevals = 0;
  std::vector<State4> states;
  /// max over grid points and components of |y_n - y(x_n)|.
  std::optional<double> max_abs_error;
  /// The same maximum per slot (y, y', y'', y''').
  std::optional<std::array<double, 4>> max_slot_error;
  std::optional<double> wall_seconds;
};

/// Integrates from x0 to x_end with steps of h; the last step is shortened
/// to land on x_end exactly.
RunResult rkfd_integrate(const RkfdTableau& tableau, const Ivp4& problem, double h,
                         const RunOptions& options = {});

RunResult rk_integrate_reduced(const RkTableau& rk, const Ivp4& problem, double h,
                               const RunOptions& options = {});

/// Runs convert_rk_to_rkfd(rk) and rk on the reduction over n_steps of h and
/// returns the largest difference over all grid points, components and
/// slots.  Requires b^T e = 1, b^T c = 1/2, b^T A c = 1/6 and an x-only f;
/// throws std::invalid_argument otherwise.
double check_reduction_equivalence(const RkTableau& rk, const Ivp4& problem, double h,
                                   std::size_t n_steps);

/// A named integrator: either a direct RKFD tableau or an RK tableau run on
/// the first-order reduction.
struct Method {
  std::string name;
  std::variant<RkfdTableau, RkTableau> tableau;

  std::size_t stages() const noexcept;
  bool is_rkfd() const noexcept { return std::holds_alternative<RkfdTableau>(tableau); }
};

Method make_method(RkfdTableau tableau);
Method make_method(RkTableau tableau);

RunResult integrate(const Method& method, const Ivp4& problem, double h,
                    const RunOptions& options = {});

/// One step of `method` from `state`.
State4 single_step(const Method& method, const Ivp4& problem, const State4& state, double h);

/// Number of steps and final step length used to cover [x0, x_end] with h.
struct StepPlan {
  std::size_t n_steps;
  double last_h;
};

StepPlan plan_steps(double x0, double x_end, double h);

}  // namespace rkfd
