#include "rkfd/problems.hpp"

#include "rkfd/error.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace rkfd {

namespace {

State4 scalar_state(double x, double y, double dy, double d2y, double d3y) {
  return State4(x, {y}, {dy}, {d2y}, {d3y});
}

Ivp4 scalar_problem(std::string name, std::function<double(double, double)> g, double x_end,
                    std::array<double, 4> ic, std::function<State4(double)> exact) {
  Ivp4 p;
  p.name = std::move(name);
  p.m = 1;
  p.f = [g = std::move(g)](double x, std::span<const double> y, std::span<double> out) {
    out[0] = g(x, y[0]);
  };
  p.x0 = 0.0;
  p.x_end = x_end;
  p.y0 = {ic[0]};
  p.dy0 = {ic[1]};
  p.d2y0 = {ic[2]};
  p.d3y0 = {ic[3]};
  p.exact = std::move(exact);
  return p;
}

double factorial(int n) {
  double r = 1.0;
  for (int i = 2; i <= n; ++i) r *= i;
  return r;
}

}  // namespace

State4 State4::zeros(std::size_t m, double x0) {
  return State4(x0, std::vector<double>(m, 0.0), std::vector<double>(m, 0.0),
                std::vector<double>(m, 0.0), std::vector<double>(m, 0.0));
}

State4::State4(double x0, std::vector<double> y0, std::vector<double> dy0,
               std::vector<double> d2y0, std::vector<double> d3y0)
    : x(x0), y(std::move(y0)), dy(std::move(dy0)), d2y(std::move(d2y0)), d3y(std::move(d3y0)) {
  if (dy.size() != y.size() || d2y.size() != y.size() || d3y.size() != y.size()) {
    throw std::invalid_argument("State4: slot lengths differ");
  }
}

bool State4::all_finite() const noexcept {
  if (!std::isfinite(x)) return false;
  for (Slot s : kAllSlots) {
    for (double v : slot(*this, s)) {
      if (!std::isfinite(v)) return false;
    }
  }
  return true;
}

std::vector<double>& slot(State4& state, Slot s) noexcept {
  switch (s) {
    case Slot::y: return state.y;
    case Slot::dy: return state.dy;
    case Slot::d2y: return state.d2y;
    case Slot::d3y: return state.d3y;
  }
  return state.y;
}

const std::vector<double>& slot(const State4& state, Slot s) noexcept {
  return slot(const_cast<State4&>(state), s);
}

const char* slot_name(Slot s) noexcept {
  switch (s) {
    case Slot::y: return "y";
    case Slot::dy: return "dy";
    case Slot::d2y: return "d2y";
    case Slot::d3y: return "d3y";
  }
  return "?";
}

State4 Ivp4::initial_state() const { return State4(x0, y0, dy0, d2y0, d3y0); }

std::vector<double> Ivp4::eval(double x, std::span<const double> y) const {
  std::vector<double> out(m);
  f(x, y, out);
  return out;
}

void validate(const Ivp4& p) {
  if (!(p.x_end > p.x0)) throw std::invalid_argument(p.name + ": interval must satisfy x_end > x0");
  if (p.m == 0) throw std::invalid_argument(p.name + ": need at least one component");
  for (const auto* v : {&p.y0, &p.dy0, &p.d2y0, &p.d3y0}) {
    if (v->size() != p.m) throw std::invalid_argument(p.name + ": initial data length != m");
  }
  if (!p.f) throw std::invalid_argument(p.name + ": missing right-hand side");
  for (double v : p.eval(p.x0, p.y0)) {
    if (!std::isfinite(v)) throw std::invalid_argument(p.name + ": f not finite at initial data");
  }
  if (p.has_exact()) {
    const State4 e = p.exact(p.x0);
    for (std::size_t i = 0; i < p.m; ++i) {
      if (std::abs(e.y[i] - p.y0[i]) > 1e-12) {
        std::ostringstream msg;
        msg << p.name << ": exact(x0) differs from y0 in component " << i + 1;
        throw std::invalid_argument(msg.str());
      }
    }
  }
}

Ivp4 problem_1() {
  return scalar_problem(
      "p1", [](double, double y) { return -4.0 * y; }, 10.0, {0.0, 1.0, 2.0, 2.0},
      [](double x) {
        const double ex = std::exp(x), s = std::sin(x), c = std::cos(x);
        return scalar_state(x, ex * s, ex * (s + c), 2.0 * ex * c, 2.0 * ex * (c - s));
      });
}

Ivp4 problem_2() {
  return scalar_problem(
      "p2",
      [](double x, double y) {
        const double c = std::cos(x);
        return y * y + c * c + std::sin(x) - 1.0;
      },
      10.0, {0.0, 1.0, 0.0, -1.0},
      [](double x) {
        const double s = std::sin(x), c = std::cos(x);
        return scalar_state(x, s, c, -s, -c);
      });
}

Ivp4 problem_3() {
  return scalar_problem(
      "p3",
      [](double, double y) {
        if (!(std::abs(y) < std::numbers::pi / 2)) {
          std::ostringstream msg;
          msg.precision(17);
          msg << "p3: f has a pole at |y| = pi/2 (y = " << y << ")";
          throw DomainError(msg.str());
        }
        const double s = std::sin(y), c = std::cos(y);
        const double c2 = c * c;
        return 3.0 * s * (3.0 + 2.0 * s * s) / (c2 * c2 * c2 * c);
      },
      std::numbers::pi / 4, {0.0, 1.0, 0.0, 1.0},
      [](double x) {
        const double q = 1.0 - x * x;
        const double r = std::sqrt(q);
        return scalar_state(x, std::asin(x), 1.0 / r, x / (q * r), (1.0 + 2.0 * x * x) / (q * q * r));
      });
}

Ivp4 problem_4() {
  Ivp4 p;
  p.name = "p4";
  p.m = 4;
  // Components ordered (y, z, w, u).
  p.f = [](double x, std::span<const double> v, std::span<double> out) {
    const double em = std::exp(-x);
    out[0] = std::exp(3.0 * x) * v[3];
    out[1] = 16.0 * em * v[0];
    out[2] = 81.0 * em * v[1];
    out[3] = 256.0 * em * v[2];
  };
  p.x0 = 0.0;
  p.x_end = 2.0;
  p.y0 = {1.0, 1.0, 1.0, 1.0};
  p.dy0 = {-1.0, -2.0, -3.0, -4.0};
  p.d2y0 = {1.0, 4.0, 9.0, 16.0};
  p.d3y0 = {-1.0, -8.0, -27.0, -64.0};
  p.exact = [](double x) {
    State4 s = State4::zeros(4, x);
    for (std::size_t i = 0; i < 4; ++i) {
      const double k = -static_cast<double>(i + 1);
      const double e = std::exp(k * x);
      s.y[i] = e;
      s.dy[i] = k * e;
      s.d2y[i] = k * k * e;
      s.d3y[i] = k * k * k * e;
    }
    return s;
  };
  return p;
}

Ivp4 problem_5() {
  return scalar_problem(
      "p5", [](double, double y) { return 1.0 - y; }, 1.0, {0.0, 0.0, 0.0, 0.0},
      [](double x) {
        // y = 1 - p with p = cosh(ax) cos(ax), a = 1/sqrt2, so a^2 = 1/2.
        const double a = std::numbers::sqrt2 / 2;
        const double ch = std::cosh(a * x), sh = std::sinh(a * x);
        const double co = std::cos(a * x), si = std::sin(a * x);
        const double p0 = ch * co;
        const double p1 = a * (sh * co - ch * si);
        const double p2 = -sh * si;
        const double p3 = -a * (ch * si + sh * co);
        return scalar_state(x, 1.0 - p0, -p1, -p2, -p3);
      });
}

Ivp4 quadrature_problem(std::string name, std::function<double(double)> g, double x_end,
                        ExactSolution exact) {
  Ivp4 p = scalar_problem(
      std::move(name), [g = std::move(g)](double x, double) { return g(x); }, x_end,
      {0.0, 0.0, 0.0, 0.0}, std::move(exact));
  p.x_only = true;
  return p;
}

Ivp4 poly_problem(int k) {
  if (k < 0 || k > 3) throw std::invalid_argument("poly_problem: degree must be 0..3");
  const double kf = factorial(k);
  auto term = [kf, k](double x, int derivative) {
    const int power = k + 4 - derivative;
    return std::pow(x, power) * kf / factorial(power);
  };
  return quadrature_problem(
      "poly" + std::to_string(k), [k](double x) { return std::pow(x, k); }, 1.0,
      [term](double x) { return scalar_state(x, term(x, 0), term(x, 1), term(x, 2), term(x, 3)); });
}

Ivp4 cos_problem() {
  return quadrature_problem(
      "cos", [](double x) { return std::cos(x); }, 10.0, [](double x) {
        const double s = std::sin(x), c = std::cos(x);
        return scalar_state(x, c - 1.0 + 0.5 * x * x, x - s, 1.0 - c, s);
      });
}

std::vector<std::string> problem_names() {
  return {"p1", "p2", "p3", "p4", "p5", "poly0", "poly1", "poly2", "poly3"};
}

Ivp4 problem_by_name(const std::string& key) {
  if (key == "p1") return problem_1();
  if (key == "p2") return problem_2();
  if (key == "p3") return problem_3();
  if (key == "p4") return problem_4();
  if (key == "p5") return problem_5();
  if (key.size() == 5 && key.rfind("poly", 0) == 0 && key[4] >= '0' && key[4] <= '3') {
    return poly_problem(key[4] - '0');
  }
  throw std::invalid_argument("unknown problem '" + key + "'");
}

}  // namespace rkfd
