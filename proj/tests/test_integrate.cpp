#include "rkfd/error.hpp"
#include "rkfd/integrate.hpp"

#include <doctest.h>

#include <cmath>
#include <limits>

using namespace rkfd;

namespace {

const Rhs zero_rhs = [](double, std::span<const double>, std::span<double> out) {
  for (auto& v : out) v = 0.0;
};

Ivp4 cubic_problem() {
  // y = 1 + 2x - x^2 + x^3 / 3, so y'''' = 0.
  Ivp4 p;
  p.name = "cubic";
  p.f = zero_rhs;
  p.x0 = 0.0;
  p.x_end = 3.0;
  p.y0 = {1.0};
  p.dy0 = {2.0};
  p.d2y0 = {-2.0};
  p.d3y0 = {2.0};
  p.exact = [](double x) {
    return State4(x, {1 + 2 * x - x * x + x * x * x / 3}, {2 - 2 * x + x * x}, {-2 + 2 * x},
                  {2.0});
  };
  return p;
}

std::vector<Method> builtin_methods() {
  return {make_method(builtin_rkfd4_corrected()), make_method(builtin_rkfd5()),
          make_method(builtin_rkfd5_printed()), make_method(builtin_rk4())};
}

bool within_factor(double value, double target, double factor) {
  return value <= target * factor && value >= target / factor;
}

}  // namespace

TEST_CASE("pure Taylor update when f vanishes") {
  const State4 s0(0.0, {1.0}, {0.0}, {0.0}, {6.0});
  for (const auto& t : {builtin_rkfd4_corrected(), builtin_rkfd5(), builtin_rkfd4_printed()}) {
    const State4 s1 = rkfd_step(t, zero_rhs, s0, 1.0);
    CHECK(s1 == State4(1.0, {2.0}, {3.0}, {6.0}, {6.0}));
  }
}

TEST_CASE("y'''' = 1 in one unit step") {
  const Rhs one = [](double, std::span<const double>, std::span<double> out) { out[0] = 1.0; };
  for (const auto& t : {builtin_rkfd4_corrected(), builtin_rkfd5(), builtin_rkfd5_printed()}) {
    CAPTURE(t.name());
    const State4 s1 = rkfd_step(t, one, State4::zeros(1), 1.0);
    CHECK(s1.y[0] == doctest::Approx(1.0 / 24).epsilon(1e-15));
    CHECK(s1.dy[0] == doctest::Approx(1.0 / 6).epsilon(1e-15));
    CHECK(s1.d2y[0] == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(s1.d3y[0] == doctest::Approx(1.0).epsilon(1e-15));
  }
  // The printed weights miss 1/6 by 1/1926 in the y' slot.
  const State4 bad = rkfd_step(builtin_rkfd4_printed(), one, State4::zeros(1), 1.0);
  CHECK(bad.dy[0] - 1.0 / 6 == doctest::Approx(1.0 / 1926).epsilon(1e-12));
}

TEST_CASE("quartic exactness over ten steps") {
  const auto p = poly_problem(0);
  for (const auto& m : builtin_methods()) {
    CAPTURE(m.name);
    const auto r = integrate(m, p, 0.1);
    REQUIRE(r.max_slot_error);
    CHECK(r.n_steps == 10);
    for (double e : *r.max_slot_error) CHECK(e <= 1e-13);
  }
  const auto r = integrate(make_method(builtin_rkfd4_printed()), p, 0.1);
  // Ten defects of h^3/1926, each carried forward unchanged in y'.
  CHECK((*r.max_slot_error)[1] == doctest::Approx(10 * 1e-3 / 1926).epsilon(1e-6));
  CHECK((*r.max_slot_error)[2] <= 1e-13);
  CHECK((*r.max_slot_error)[3] <= 1e-13);
}

TEST_CASE("cubic solutions are reproduced") {
  const auto p = cubic_problem();
  std::vector<Method> methods = builtin_methods();
  methods.push_back(make_method(builtin_rkfd4_printed()));
  for (const auto& m : methods) {
    for (double h : {0.7, 0.25, 0.1}) {
      CAPTURE(m.name);
      CAPTURE(h);
      const auto r = integrate(m, p, h);
      for (double e : *r.max_slot_error) CHECK(e <= 1e-13);
    }
  }
}

TEST_CASE("higher quadrature exactness of the fifth-order tableau") {
  // b^T c = 1/120 is a fifth-order condition, so y'''' = x is exact.
  const auto r = integrate(make_method(builtin_rkfd5()), poly_problem(1), 0.1);
  CHECK(*r.max_abs_error <= 1e-14);
}

TEST_CASE("feval accounting and the reference error cells on problem 2") {
  const auto p = problem_2();
  const auto fd = integrate(make_method(builtin_rkfd4_corrected()), p, 0.1);
  CHECK(fd.n_steps == 100);
  CHECK(fd.n_fevals == 300);
  CHECK(within_factor(*fd.max_abs_error, 6.09e-4, 5.0));

  const auto rk = integrate(make_method(builtin_rk4()), p, 0.1);
  CHECK(rk.n_steps == 100);
  CHECK(rk.n_fevals == 400);
  CHECK(within_factor(*rk.max_abs_error, 7.66e-4, 5.0));

  const auto fd_fine = integrate(make_method(builtin_rkfd4_corrected()), p, 0.01);
  CHECK(fd_fine.n_fevals == 3000);
  CHECK(within_factor(*fd_fine.max_abs_error, 7.38e-9, 5.0));

  const auto rk_fine = integrate(make_method(builtin_rk4()), p, 0.01);
  CHECK(rk_fine.n_fevals == 4000);
  CHECK(within_factor(*rk_fine.max_abs_error, 7.78e-8, 5.0));

  const auto five = integrate(make_method(builtin_rkfd5()), p, 0.1);
  CHECK(five.n_fevals == 300);
}

TEST_CASE("grid covers the interval") {
  const auto r = integrate(make_method(builtin_rkfd5()), problem_2(), 0.3);
  REQUIRE(r.states.size() == r.n_steps + 1);
  CHECK(r.states.front().x == 0.0);
  CHECK(r.states.back().x == 10.0);
  CHECK(r.n_steps == 34);

  RunOptions strided;
  strided.stride = 7;
  const auto s = integrate(make_method(builtin_rkfd5()), problem_2(), 0.1, strided);
  CHECK(s.states.front().x == 0.0);
  CHECK(s.states.back().x == 10.0);
  CHECK(s.states.size() == 100 / 7 + 2);
  CHECK(s.states[1].x == doctest::Approx(0.7).epsilon(1e-14));

  RunOptions bare;
  bare.record_states = false;
  bare.track_error = false;
  const auto b = integrate(make_method(builtin_rk4()), problem_2(), 0.1, bare);
  CHECK(b.states.empty());
  CHECK_FALSE(b.max_abs_error);
  CHECK_FALSE(b.wall_seconds);
}

TEST_CASE("step planning") {
  auto plan = plan_steps(0.0, 10.0, 0.1);
  CHECK(plan.n_steps == 100);
  CHECK(plan.last_h == doctest::Approx(0.1).epsilon(1e-12));
  plan = plan_steps(0.0, 1.0, 0.3);
  CHECK(plan.n_steps == 4);
  CHECK(plan.last_h == doctest::Approx(0.1).epsilon(1e-12));
  plan = plan_steps(0.0, 0.05, 0.1);
  CHECK(plan.n_steps == 1);
  CHECK(plan.last_h == doctest::Approx(0.05).epsilon(1e-12));
  CHECK_THROWS_AS(plan_steps(0.0, 1.0, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(plan_steps(1.0, 1.0, 0.1), std::invalid_argument);
}

TEST_CASE("single step against a brute-force reference") {
  auto p = problem_2();
  const State4 one = single_step(make_method(builtin_rkfd5()), p, p.initial_state(), 0.1);
  CHECK(one.x == 0.1);

  p.x_end = 0.1;
  RunOptions lean;
  lean.record_states = false;
  lean.track_error = false;
  const auto ref = rk_integrate_reduced(builtin_rk4(), p, 1e-5, lean);
  REQUIRE(ref.n_steps == 10000);
  // The final state is always kept.
  const auto fine = rk_integrate_reduced(builtin_rk4(), p, 1e-5);
  const double y_ref = fine.states.back().y[0];
  CHECK(std::abs(y_ref - std::sin(0.1)) < 1e-13);
  CHECK(std::abs(one.y[0] - y_ref) < 1e-9);
  CHECK(std::abs(one.y[0] - std::sin(0.1)) < 1e-9);
}

TEST_CASE("reduction equivalence for x-only right-hand sides") {
  const auto rk4 = builtin_rk4();
  CHECK(check_reduction_equivalence(rk4, cos_problem(), 0.1, 100) <= 1e-12);
  const auto zero = quadrature_problem("zero", [](double) { return 0.0; }, 1.0);
  CHECK(check_reduction_equivalence(rk4, zero, 0.1, 10) == 0.0);
  const auto lin = quadrature_problem("x", [](double x) { return x; }, 2.0);
  CHECK(check_reduction_equivalence(rk4, lin, 0.5, 4) <= 1e-14);

  CHECK_THROWS_AS(check_reduction_equivalence(rk4, problem_2(), 0.1, 10), std::invalid_argument);
}

TEST_CASE("converted RK4 matches RK4 on the reduction for quadrature") {
  const auto conv = make_method(convert_rk_to_rkfd(builtin_rk4()));
  const auto rk = make_method(builtin_rk4());
  const auto p = cos_problem();
  const auto a = integrate(conv, p, 0.1);
  const auto b = integrate(rk, p, 0.1);
  CHECK(a.n_fevals == b.n_fevals);
  CHECK(std::abs(*a.max_abs_error - *b.max_abs_error) <= 1e-12);
}

TEST_CASE("autonomous problems are shift invariant bitwise") {
  Ivp4 p;
  p.name = "cubic-decay";
  p.m = 2;
  p.f = [](double, std::span<const double> y, std::span<double> out) {
    out[0] = -y[0] * y[0] * y[0] + y[1];
    out[1] = -y[0];
  };
  p.x0 = 0.0;
  p.x_end = 1.0;
  p.y0 = {0.5, -0.25};
  p.dy0 = {1.0, 0.0};
  p.d2y0 = {0.0, 0.5};
  p.d3y0 = {-1.0, 0.25};
  Ivp4 shifted = p;
  shifted.x0 = 2.0;
  shifted.x_end = 3.0;
  for (const auto& m : builtin_methods()) {
    CAPTURE(m.name);
    const auto a = integrate(m, p, 0.1);
    const auto b = integrate(m, shifted, 0.1);
    REQUIRE(a.states.size() == b.states.size());
    for (std::size_t k = 0; k < a.states.size(); ++k) {
      CHECK(b.states[k].y == a.states[k].y);
      CHECK(b.states[k].d3y == a.states[k].d3y);
      CHECK(b.states[k].x == doctest::Approx(a.states[k].x + 2.0).epsilon(1e-15));
    }
  }
}

TEST_CASE("one step is linear in an x-only right-hand side") {
  const Rhs g = [](double x, std::span<const double>, std::span<double> out) {
    out[0] = std::exp(x) - 0.3;
  };
  const Rhs g2 = [](double x, std::span<const double>, std::span<double> out) {
    out[0] = 2 * (std::exp(x) - 0.3);
  };
  for (const auto& t : {builtin_rkfd4_corrected(), builtin_rkfd5()}) {
    // From a zero state the Taylor part vanishes, so doubling is exact.
    const State4 a = rkfd_step(t, g, State4::zeros(1, 0.2), 0.1);
    const State4 b = rkfd_step(t, g2, State4::zeros(1, 0.2), 0.1);
    CHECK(b.y[0] == 2 * a.y[0]);
    CHECK(b.dy[0] == 2 * a.dy[0]);
    CHECK(b.d2y[0] == 2 * a.d2y[0]);
    CHECK(b.d3y[0] == 2 * a.d3y[0]);

    const State4 s0(0.2, {1.0}, {-0.5}, {0.25}, {2.0});
    const State4 taylor = rkfd_step(t, zero_rhs, s0, 0.1);
    const State4 c = rkfd_step(t, g, s0, 0.1);
    const State4 d = rkfd_step(t, g2, s0, 0.1);
    CHECK(d.y[0] - taylor.y[0] == doctest::Approx(2 * (c.y[0] - taylor.y[0])).epsilon(1e-9));
    CHECK(d.d3y[0] - taylor.d3y[0] ==
          doctest::Approx(2 * (c.d3y[0] - taylor.d3y[0])).epsilon(1e-12));
  }
}

TEST_CASE("divergence is reported with the step") {
  Ivp4 blow;
  blow.name = "blowup";
  blow.f = [](double, std::span<const double> y, std::span<double> out) {
    out[0] = y[0] * y[0] * y[0] * y[0];
  };
  blow.x0 = 0.0;
  blow.x_end = 100.0;
  blow.y0 = {10.0};
  blow.dy0 = {0.0};
  blow.d2y0 = {0.0};
  blow.d3y0 = {0.0};
  for (const auto& m : builtin_methods()) {
    CAPTURE(m.name);
    try {
      integrate(m, blow, 1.0);
      FAIL("expected divergence");
    } catch (const DivergenceError& e) {
      CHECK(e.step() >= 1);
      CHECK(e.step() <= 100);
      CHECK(std::string(e.what()).find("blowup") != std::string::npos);
      CHECK(std::string(e.what()).find(m.name) != std::string::npos);
    }
  }

  // Past x = 1 the arcsine solution hits the pole of problem 3's rhs.
  auto p3 = problem_3();
  p3.x_end = 2.0;
  p3.exact = {};
  CHECK_THROWS_AS(integrate(make_method(builtin_rkfd4_corrected()), p3, 0.05), DivergenceError);

  const Rhs nan_rhs = [](double, std::span<const double>, std::span<double> out) {
    out[0] = std::numeric_limits<double>::quiet_NaN();
  };
  try {
    rkfd_step(builtin_rkfd5(), nan_rhs, State4::zeros(1), 0.1);
    FAIL("expected divergence");
  } catch (const DivergenceError& e) {
    CHECK(e.step() == 0);
  }
}

TEST_CASE("implicit tableaux are rejected by the stepper") {
  RkfdCoefficients k;
  k.name = "implicit";
  k.c = Eigen::Vector2d(0.0, 1.0);
  k.a_hat = Eigen::Matrix2d{{0.0, 0.1}, {0.0, 0.0}};
  k.b = Eigen::Vector2d(1.0 / 48, 1.0 / 48);
  k.bp = Eigen::Vector2d(1.0 / 12, 1.0 / 12);
  k.bpp = Eigen::Vector2d(0.25, 0.25);
  k.bppp = Eigen::Vector2d(0.5, 0.5);
  const auto t = make_rkfd_tableau(k);
  CHECK_FALSE(t.is_explicit());
  CHECK_THROWS_AS(RkfdStepper(t, 1), TableauError);
}

TEST_CASE("stepper counts evaluations") {
  RkfdStepper st(builtin_rkfd5(), 1);
  State4 s = problem_2().initial_state();
  for (int i = 0; i < 7; ++i) st.step(problem_2().f, s, 0.1);
  CHECK(st.fevals() == 21);
  CHECK(s.x == doctest::Approx(0.7).epsilon(1e-14));
  RkReducedStepper rs(builtin_rk4(), 1);
  State4 r = problem_2().initial_state();
  rs.step(problem_2().f, r, 0.1);
  CHECK(rs.fevals() == 4);
  CHECK_THROWS_AS(RkReducedStepper(builtin_rk4(), 0), std::invalid_argument);
}
