#include "rkfd/integrate.hpp"

#include "rkfd/error.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <stdexcept>
#include <sstream>

namespace rkfd {

namespace {

void require_step(double h) {
  if (!(h > 0.0) || !std::isfinite(h)) throw std::invalid_argument("step size must be positive");
}

template <typename Fn>
void call_rhs(Fn&& fn, double x) {
  try {
    fn();
  } catch (const DomainError& e) {
    throw DivergenceError(0, x, e.what());
  }
}

bool finite(std::span<const double> v) {
  return std::all_of(v.begin(), v.end(), [](double a) { return std::isfinite(a); });
}

void update_errors(const Ivp4& problem, const State4& state, std::array<double, 4>& worst) {
  const State4 ref = problem.exact(state.x);
  for (std::size_t s = 0; s < 4; ++s) {
    const auto& got = slot(state, kAllSlots[s]);
    const auto& want = slot(ref, kAllSlots[s]);
    for (std::size_t i = 0; i < got.size(); ++i) {
      worst[s] = std::max(worst[s], std::abs(got[i] - want[i]));
    }
  }
}

template <typename Stepper>
RunResult drive(Stepper& stepper, const std::string& method, const Ivp4& problem, double h,
                const RunOptions& options) {
  require_step(h);
  if (options.stride == 0) throw std::invalid_argument("stride must be at least 1");
  const StepPlan plan = plan_steps(problem.x0, problem.x_end, h);
  const bool track = options.track_error && problem.has_exact();

  RunResult result;
  result.method = method;
  result.problem = problem.name;
  result.h = h;
  result.n_steps = plan.n_steps;

  State4 state = problem.initial_state();
  std::array<double, 4> worst{};
  if (options.record_states) {
    result.states.reserve(plan.n_steps / options.stride + 2);
    result.states.push_back(state);
  }

  const auto start = std::chrono::steady_clock::now();
  for (std::size_t k = 0; k < plan.n_steps; ++k) {
    const bool last = k + 1 == plan.n_steps;
    try {
      stepper.step(problem.f, state, last ? plan.last_h : h);
    } catch (const DivergenceError& e) {
      throw DivergenceError(k + 1, state.x, method + " on " + problem.name + ": " + e.detail());
    }
    state.x = last ? problem.x_end : problem.x0 + static_cast<double>(k + 1) * h;
    if (track) update_errors(problem, state, worst);
    if (options.record_states && (last || (k + 1) % options.stride == 0)) {
      result.states.push_back(state);
    }
  }
  const auto stop = std::chrono::steady_clock::now();

  result.n_fevals = stepper.fevals();
  if (track) {
    result.max_slot_error = worst;
    result.max_abs_error = worst[0];
  }
  if (options.time) result.wall_seconds = std::chrono::duration<double>(stop - start).count();
  return result;
}

}  // namespace

StepPlan plan_steps(double x0, double x_end, double h) {
  require_step(h);
  const double length = x_end - x0;
  if (!(length > 0.0)) throw std::invalid_argument("interval must satisfy x_end > x0");
  const double q = length / h;
  const double nearest = std::round(q);
  if (nearest >= 1.0 && std::abs(q - nearest) <= 1e-12 * nearest) {
    return {static_cast<std::size_t>(nearest), h};
  }
  const auto n = static_cast<std::size_t>(std::ceil(q));
  return {n, length - static_cast<double>(n - 1) * h};
}

RkfdStepper::RkfdStepper(RkfdTableau tableau, std::size_t m)
    : tableau_(std::move(tableau)),
      m_(m),
      stage_f_(static_cast<std::size_t>(tableau_.stages()) * m),
      stage_y_(m),
      acc_(4 * m) {
  if (m == 0) throw std::invalid_argument("stepper needs at least one component");
  if (!tableau_.is_explicit()) {
    throw TableauError("tableau '" + tableau_.name() + "' is implicit; only explicit RKFD is supported");
  }
}

void RkfdStepper::step(const Rhs& f, State4& state, double h) {
  const auto s = static_cast<std::size_t>(tableau_.stages());
  const auto& c = tableau_.c();
  const auto& a = tableau_.a_hat();
  const double h2 = h * h;
  const double h3 = h2 * h;
  const double h4 = h3 * h;
  const double x = state.x;

  for (std::size_t i = 0; i < s; ++i) {
    const auto ii = static_cast<Eigen::Index>(i);
    const double ch = c(ii) * h;
    const double t2 = 0.5 * ch * ch;
    const double t3 = ch * ch * ch / 6.0;
    for (std::size_t k = 0; k < m_; ++k) {
      stage_y_[k] = state.y[k] + ch * state.dy[k] + t2 * state.d2y[k] + t3 * state.d3y[k];
    }
    for (std::size_t j = 0; j < i; ++j) {
      const double w = a(ii, static_cast<Eigen::Index>(j));
      if (w == 0.0) continue;
      const double* fj = &stage_f_[j * m_];
      for (std::size_t k = 0; k < m_; ++k) stage_y_[k] += h4 * w * fj[k];
    }
    std::span<double> fi(&stage_f_[i * m_], m_);
    call_rhs([&] { f(x + ch, stage_y_, fi); }, x);
    ++fevals_;
  }

  const auto& b = tableau_.b();
  const auto& bp = tableau_.bp();
  const auto& bpp = tableau_.bpp();
  const auto& bppp = tableau_.bppp();
  for (std::size_t k = 0; k < m_; ++k) {
    double sb = 0.0, sbp = 0.0, sbpp = 0.0, sbppp = 0.0;
    for (std::size_t i = 0; i < s; ++i) {
      const auto ii = static_cast<Eigen::Index>(i);
      const double fik = stage_f_[i * m_ + k];
      sb += b(ii) * fik;
      sbp += bp(ii) * fik;
      sbpp += bpp(ii) * fik;
      sbppp += bppp(ii) * fik;
    }
    const double y = state.y[k], dy = state.dy[k], d2y = state.d2y[k], d3y = state.d3y[k];
    acc_[k] = y + h * dy + 0.5 * h2 * d2y + h3 / 6.0 * d3y + h4 * sb;
    acc_[m_ + k] = dy + h * d2y + 0.5 * h2 * d3y + h3 * sbp;
    acc_[2 * m_ + k] = d2y + h * d3y + h2 * sbpp;
    acc_[3 * m_ + k] = d3y + h * sbppp;
  }
  if (!finite(acc_)) throw DivergenceError(0, x, "non-finite state");

  for (std::size_t k = 0; k < m_; ++k) {
    state.y[k] = acc_[k];
    state.dy[k] = acc_[m_ + k];
    state.d2y[k] = acc_[2 * m_ + k];
    state.d3y[k] = acc_[3 * m_ + k];
  }
  state.x = x + h;
}

RkReducedStepper::RkReducedStepper(RkTableau tableau, std::size_t m)
    : tableau_(std::move(tableau)),
      m_(m),
      k_(static_cast<std::size_t>(tableau_.stages()) * 4 * m),
      z_(4 * m),
      stage_(4 * m) {
  if (m == 0) throw std::invalid_argument("stepper needs at least one component");
}

void RkReducedStepper::step(const Rhs& f, State4& state, double h) {
  const auto s = static_cast<std::size_t>(tableau_.stages());
  const std::size_t n = 4 * m_;
  const auto& a = tableau_.a();
  const auto& b = tableau_.b();
  const auto& c = tableau_.c();
  const double x = state.x;

  std::copy(state.y.begin(), state.y.end(), z_.begin());
  std::copy(state.dy.begin(), state.dy.end(), z_.begin() + static_cast<std::ptrdiff_t>(m_));
  std::copy(state.d2y.begin(), state.d2y.end(), z_.begin() + static_cast<std::ptrdiff_t>(2 * m_));
  std::copy(state.d3y.begin(), state.d3y.end(), z_.begin() + static_cast<std::ptrdiff_t>(3 * m_));

  for (std::size_t i = 0; i < s; ++i) {
    const auto ii = static_cast<Eigen::Index>(i);
    std::copy(z_.begin(), z_.end(), stage_.begin());
    for (std::size_t j = 0; j < i; ++j) {
      const double w = a(ii, static_cast<Eigen::Index>(j));
      if (w == 0.0) continue;
      const double* kj = &k_[j * n];
      for (std::size_t q = 0; q < n; ++q) stage_[q] += h * w * kj[q];
    }
    double* ki = &k_[i * n];
    // (y, v, u, w)' = (v, u, w, f)
    std::copy(stage_.begin() + static_cast<std::ptrdiff_t>(m_), stage_.end(), ki);
    std::span<const double> ys(stage_.data(), m_);
    std::span<double> fw(ki + 3 * m_, m_);
    call_rhs([&] { f(x + c(ii) * h, ys, fw); }, x);
    ++fevals_;
  }

  for (std::size_t i = 0; i < s; ++i) {
    const double w = b(static_cast<Eigen::Index>(i));
    if (w == 0.0) continue;
    const double* ki = &k_[i * n];
    for (std::size_t q = 0; q < n; ++q) z_[q] += h * w * ki[q];
  }
  if (!finite(z_)) throw DivergenceError(0, x, "non-finite state");

  for (std::size_t k = 0; k < m_; ++k) {
    state.y[k] = z_[k];
    state.dy[k] = z_[m_ + k];
    state.d2y[k] = z_[2 * m_ + k];
    state.d3y[k] = z_[3 * m_ + k];
  }
  state.x = x + h;
}

State4 rkfd_step(const RkfdTableau& tableau, const Rhs& f, const State4& state, double h) {
  require_step(h);
  RkfdStepper stepper(tableau, state.size());
  State4 next = state;
  stepper.step(f, next, h);
  return next;
}

RunResult rkfd_integrate(const RkfdTableau& tableau, const Ivp4& problem, double h,
                         const RunOptions& options) {
  RkfdStepper stepper(tableau, problem.m);
  return drive(stepper, tableau.name(), problem, h, options);
}

RunResult rk_integrate_reduced(const RkTableau& rk, const Ivp4& problem, double h,
                               const RunOptions& options) {
  RkReducedStepper stepper(rk, problem.m);
  return drive(stepper, rk.name(), problem, h, options);
}

double check_reduction_equivalence(const RkTableau& rk, const Ivp4& problem, double h,
                                   std::size_t n_steps) {
  require_step(h);
  if (n_steps == 0) throw std::invalid_argument("n_steps must be positive");
  if (!problem.x_only) {
    throw std::invalid_argument(
        "reduction equivalence only holds for f depending on x alone; '" + problem.name +
        "' depends on y");
  }
  const Eigen::VectorXd& b = rk.b();
  const double order1 = b.sum() - 1.0;
  const double order2 = b.dot(rk.c()) - 0.5;
  const double order3 = b.dot(rk.a() * rk.c()) - 1.0 / 6.0;
  if (std::abs(order1) > kConsistencyTolerance || std::abs(order2) > kConsistencyTolerance ||
      std::abs(order3) > kConsistencyTolerance) {
    throw std::invalid_argument("RK tableau '" + rk.name() +
                                "' is not of order >= 3 (needs b^T e = 1, b^T c = 1/2, b^T A c = 1/6)");
  }

  Ivp4 window = problem;
  window.x_end = problem.x0 + static_cast<double>(n_steps) * h;
  RunOptions options;
  options.track_error = false;
  const RunResult direct = rkfd_integrate(convert_rk_to_rkfd(rk), window, h, options);
  const RunResult reduced = rk_integrate_reduced(rk, window, h, options);

  double worst = 0.0;
  for (std::size_t n = 0; n < direct.states.size(); ++n) {
    for (Slot s : kAllSlots) {
      const auto& u = slot(direct.states[n], s);
      const auto& v = slot(reduced.states[n], s);
      for (std::size_t i = 0; i < u.size(); ++i) worst = std::max(worst, std::abs(u[i] - v[i]));
    }
  }
  return worst;
}

std::size_t Method::stages() const noexcept {
  return std::visit([](const auto& t) { return static_cast<std::size_t>(t.stages()); }, tableau);
}

Method make_method(RkfdTableau tableau) {
  std::string name = tableau.name();
  return Method{std::move(name), std::move(tableau)};
}

Method make_method(RkTableau tableau) {
  std::string name = tableau.name();
  return Method{std::move(name), std::move(tableau)};
}

RunResult integrate(const Method& method, const Ivp4& problem, double h, const RunOptions& options) {
  RunResult r = std::visit(
      [&](const auto& t) -> RunResult {
        using T = std::decay_t<decltype(t)>;
        if constexpr (std::is_same_v<T, RkfdTableau>) {
          return rkfd_integrate(t, problem, h, options);
        } else {
          return rk_integrate_reduced(t, problem, h, options);
        }
      },
      method.tableau);
  r.method = method.name;
  return r;
}

State4 single_step(const Method& method, const Ivp4& problem, const State4& state, double h) {
  require_step(h);
  State4 next = state;
  std::visit(
      [&](const auto& t) {
        using T = std::decay_t<decltype(t)>;
        if constexpr (std::is_same_v<T, RkfdTableau>) {
          RkfdStepper stepper(t, problem.m);
          stepper.step(problem.f, next, h);
        } else {
          RkReducedStepper stepper(t, problem.m);
          stepper.step(problem.f, next, h);
        }
      },
      method.tableau);
  return next;
}

}  // namespace rkfd
