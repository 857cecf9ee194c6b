#include "rkfd/analysis.hpp"

#include "rkfd/error.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <functional>
#include <sstream>
#include <thread>

namespace rkfd {

namespace {

// Runs task(i) for i in [0, n) on up to analysis_threads() workers.  The
// first exception by index is rethrown after all workers finish.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& task) {
  const std::size_t workers = std::min(n, analysis_threads());
  std::vector<std::exception_ptr> errors(n);
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) {
      try {
        task(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < n; i = next++) {
          try {
            task(i);
          } catch (...) {
            errors[i] = std::current_exception();
          }
        }
      });
    }
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

double slot_error(const State4& got, const State4& want, Slot s) {
  const auto& u = slot(got, s);
  const auto& v = slot(want, s);
  double worst = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) worst = std::max(worst, std::abs(u[i] - v[i]));
  return worst;
}

State4 reference_after_one_step(const Ivp4& problem, double h) {
  const double x1 = problem.x0 + h;
  if (problem.has_exact()) return problem.exact(x1);
  Ivp4 window = problem;
  window.x_end = x1;
  RunOptions options;
  options.track_error = false;
  options.record_states = true;
  options.stride = 1000;
  const RunResult ref = rk_integrate_reduced(builtin_rk4(), window, h / 1000.0, options);
  return ref.states.back();
}

void fill_orders(ConvergenceReport& report) {
  std::vector<double> hs, es;
  for (std::size_t i = 0; i < report.points.size(); ++i) {
    auto& p = report.points[i];
    hs.push_back(p.h);
    es.push_back(p.error);
    if (i > 0) {
      const auto& q = report.points[i - 1];
      p.observed_order = observed_order(q.error, p.error, q.h, p.h);
    }
  }
  report.slope = fit_slope(hs, es);
}

void require_decreasing(std::span<const double> h_list) {
  if (h_list.empty()) throw std::invalid_argument("h list must not be empty");
  for (std::size_t i = 0; i < h_list.size(); ++i) {
    if (!(h_list[i] > 0.0)) throw std::invalid_argument("step sizes must be positive");
    if (i > 0 && !(h_list[i] < h_list[i - 1])) {
      throw std::invalid_argument("h list must be strictly decreasing");
    }
  }
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

EfficiencyPoint accuracy_point(const Method& method, const Ivp4& problem, double h) {
  EfficiencyPoint point;
  point.method = method.name;
  point.problem = problem.name;
  point.h = h;
  const StepPlan plan = plan_steps(problem.x0, problem.x_end, h);
  point.n_steps = plan.n_steps;
  try {
    RunOptions options;
    options.record_states = false;
    const RunResult r = integrate(method, problem, h, options);
    point.n_fevals = r.n_fevals;
    point.max_abs_error = r.max_abs_error;
  } catch (const DivergenceError& e) {
    point.failure = e.what();
  }
  return point;
}

std::vector<double> sorted_descending(std::span<const double> h_list) {
  std::vector<double> hs(h_list.begin(), h_list.end());
  for (double h : hs) {
    if (!(h > 0.0)) throw std::invalid_argument("step sizes must be positive");
  }
  std::sort(hs.begin(), hs.end(), std::greater<>());
  hs.erase(std::unique(hs.begin(), hs.end()), hs.end());
  return hs;
}

}  // namespace

std::size_t analysis_threads() {
  if (const char* env = std::getenv("RKFD_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<std::size_t>(v);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

std::optional<double> observed_order(double e1, double e2, double h1, double h2, double floor) {
  if (!(h1 > 0.0) || !(h2 > 0.0)) throw std::invalid_argument("step sizes must be positive");
  if (h1 == h2) throw std::invalid_argument("observed_order needs two distinct step sizes");
  if (!(e1 > floor) || !(e2 > floor)) return std::nullopt;
  return std::log(e1 / e2) / std::log(h1 / h2);
}

std::optional<double> fit_slope(std::span<const double> h, std::span<const double> e, double floor) {
  if (h.size() != e.size()) throw std::invalid_argument("fit_slope: length mismatch");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  std::size_t n = 0;
  for (std::size_t i = 0; i < h.size(); ++i) {
    if (!(e[i] > floor)) continue;
    const double lx = std::log(h[i]);
    const double ly = std::log(e[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
    ++n;
  }
  if (n < 2) return std::nullopt;
  const double dn = static_cast<double>(n);
  const double denom = dn * sxx - sx * sx;
  if (denom == 0.0) return std::nullopt;
  return (dn * sxy - sx * sy) / denom;
}

std::vector<double> ConvergenceReport::pairwise_orders() const {
  std::vector<double> out;
  for (const auto& p : points) {
    if (p.observed_order) out.push_back(*p.observed_order);
  }
  return out;
}

ConvergenceReport local_error_study(const Method& method, const Ivp4& problem,
                                    std::span<const double> h_list, Slot s) {
  require_decreasing(h_list);
  if (problem.x0 + h_list.front() > problem.x_end) {
    throw std::invalid_argument("single step of h = " + std::to_string(h_list.front()) +
                                " leaves the interval of " + problem.name);
  }
  ConvergenceReport report;
  report.method = method.name;
  report.problem = problem.name;
  report.slot = s;
  report.local = true;
  const State4 start = problem.initial_state();
  for (double h : h_list) {
    const State4 got = single_step(method, problem, start, h);
    const State4 want = reference_after_one_step(problem, h);
    report.points.push_back({h, slot_error(got, want, s), std::nullopt});
  }
  fill_orders(report);
  return report;
}

ConvergenceReport convergence_study(const Method& method, const Ivp4& problem, double h0,
                                    int levels) {
  if (levels < 2) throw std::invalid_argument("convergence study needs at least two levels");
  if (!(h0 > 0.0)) throw std::invalid_argument("h0 must be positive");
  if (!problem.has_exact()) {
    throw std::invalid_argument("convergence study needs an exact solution for " + problem.name);
  }
  ConvergenceReport report;
  report.method = method.name;
  report.problem = problem.name;
  report.points.resize(static_cast<std::size_t>(levels));
  parallel_for(report.points.size(), [&](std::size_t i) {
    const double h = h0 / std::ldexp(1.0, static_cast<int>(i));
    RunOptions options;
    options.record_states = false;
    try {
      const RunResult r = integrate(method, problem, h, options);
      report.points[i] = {h, *r.max_abs_error, std::nullopt};
    } catch (const DivergenceError& e) {
      std::ostringstream detail;
      detail << "convergence study aborted at h = " << h << ": " << e.detail();
      throw DivergenceError(e.step(), e.x(), detail.str());
    }
  });
  fill_orders(report);
  return report;
}

std::vector<EfficiencyPoint> efficiency_curve(const Method& method, const Ivp4& problem,
                                              std::span<const double> h_list) {
  const std::vector<double> hs = sorted_descending(h_list);
  if (hs.empty()) throw std::invalid_argument("h list must not be empty");
  std::vector<EfficiencyPoint> points(hs.size());
  parallel_for(hs.size(), [&](std::size_t i) { points[i] = accuracy_point(method, problem, hs[i]); });

  // Timing runs serially so cells do not contend.
  for (auto& p : points) {
    if (p.failure) continue;
    RunOptions options;
    options.record_states = false;
    options.track_error = false;
    options.time = true;
    p.wall_seconds = integrate(method, problem, p.h, options).wall_seconds;
  }
  return points;
}

std::vector<EfficiencyPoint> bench(std::span<const Method> methods, std::span<const Ivp4> problems,
                                   std::span<const double> h_list, int repeats) {
  if (repeats < 1) throw std::invalid_argument("repeats must be at least 1");
  const std::vector<double> hs = sorted_descending(h_list);
  if (hs.empty() || methods.empty() || problems.empty()) {
    throw std::invalid_argument("bench needs at least one method, problem and step size");
  }

  struct Cell {
    const Method* method;
    const Ivp4* problem;
    double h;
  };
  std::vector<Cell> cells;
  for (const auto& m : methods) {
    for (const auto& p : problems) {
      for (double h : hs) cells.push_back({&m, &p, h});
    }
  }
  std::stable_sort(cells.begin(), cells.end(), [](const Cell& a, const Cell& b) {
    if (a.method->name != b.method->name) return a.method->name < b.method->name;
    if (a.problem->name != b.problem->name) return a.problem->name < b.problem->name;
    return a.h > b.h;
  });

  std::vector<EfficiencyPoint> points(cells.size());
  parallel_for(cells.size(), [&](std::size_t i) {
    points[i] = accuracy_point(*cells[i].method, *cells[i].problem, cells[i].h);
  });

  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (points[i].failure) continue;
    std::vector<double> times;
    times.reserve(static_cast<std::size_t>(repeats));
    RunOptions options;
    options.record_states = false;
    options.track_error = false;
    options.time = true;
    for (int r = 0; r < repeats; ++r) {
      times.push_back(*integrate(*cells[i].method, *cells[i].problem, cells[i].h, options).wall_seconds);
    }
    points[i].wall_seconds = median(std::move(times));
  }
  return points;
}

}  // namespace rkfd
