#include "rkfd/analysis.hpp"
#include "rkfd/error.hpp"

#include <doctest.h>

#include <cmath>
#include <cstdlib>

using namespace rkfd;

namespace {

// Independent single step in long double, written straight from the stage
// and update formulas, for the scalar sin x problem from x = 0.
struct LongState {
  long double y, dy, d2y, d3y;
};

long double p2_rhs(long double x, long double y) {
  const long double c = std::cos(x);
  return y * y + c * c + std::sin(x) - 1.0L;
}

LongState oracle_step(const RkfdTableau& t, long double h) {
  const LongState s0{0.0L, 1.0L, 0.0L, -1.0L};
  const auto n = static_cast<std::size_t>(t.stages());
  std::vector<long double> f(n);
  for (std::size_t i = 0; i < n; ++i) {
    const long double ch = static_cast<long double>(t.c()(static_cast<Eigen::Index>(i))) * h;
    long double yi = s0.y + ch * s0.dy + ch * ch / 2 * s0.d2y + ch * ch * ch / 6 * s0.d3y;
    for (std::size_t j = 0; j < i; ++j) {
      yi += h * h * h * h *
            static_cast<long double>(t.a_hat()(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j))) * f[j];
    }
    f[i] = p2_rhs(ch, yi);
  }
  long double sb = 0, sbp = 0, sbpp = 0, sbppp = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const auto ii = static_cast<Eigen::Index>(i);
    sb += static_cast<long double>(t.b()(ii)) * f[i];
    sbp += static_cast<long double>(t.bp()(ii)) * f[i];
    sbpp += static_cast<long double>(t.bpp()(ii)) * f[i];
    sbppp += static_cast<long double>(t.bppp()(ii)) * f[i];
  }
  return {s0.y + h * s0.dy + h * h / 2 * s0.d2y + h * h * h / 6 * s0.d3y + h * h * h * h * sb,
          s0.dy + h * s0.d2y + h * h / 2 * s0.d3y + h * h * h * sbp,
          s0.d2y + h * s0.d3y + h * h * sbpp, s0.d3y + h * sbppp};
}

double oracle_error(const RkfdTableau& t, double h, Slot slot) {
  const LongState s = oracle_step(t, h);
  const long double H = h;
  switch (slot) {
    case Slot::y: return static_cast<double>(std::fabs(s.y - std::sin(H)));
    case Slot::dy: return static_cast<double>(std::fabs(s.dy - std::cos(H)));
    case Slot::d2y: return static_cast<double>(std::fabs(s.d2y + std::sin(H)));
    case Slot::d3y: return static_cast<double>(std::fabs(s.d3y + std::cos(H)));
  }
  return 0.0;
}

const std::vector<double> kLocalH{0.2, 0.1, 0.05, 0.025};

Ivp4 exp_quadrature(bool with_exact) {
  ExactSolution exact;
  if (with_exact) {
    exact = [](double x) {
      const double e = std::exp(x);
      return State4(x, {e - 1 - x - x * x / 2 - x * x * x / 6}, {e - 1 - x - x * x / 2},
                    {e - 1 - x}, {e - 1});
    };
  }
  return quadrature_problem("exp", [](double x) { return std::exp(x); }, 1.0, exact);
}

}  // namespace

TEST_CASE("observed order") {
  CHECK(*observed_order(16e-6, 1e-6, 0.2, 0.1) == doctest::Approx(4.0).epsilon(1e-12));
  CHECK(*observed_order(7.66e-4, 7.78e-8, 0.1, 0.01) == doctest::Approx(3.993).epsilon(1e-3));
  CHECK(*observed_order(6.09e-4, 7.38e-9, 0.1, 0.01) == doctest::Approx(4.917).epsilon(1e-3));
  CHECK_FALSE(observed_order(1e-3, 1e-14, 0.1, 0.05));
  CHECK_FALSE(observed_order(1e-13, 1e-15, 0.1, 0.05));
  CHECK(observed_order(1e-14, 1e-15, 0.1, 0.05, 0.0));
  CHECK_THROWS_AS(observed_order(1e-3, 1e-4, 0.1, 0.1), std::invalid_argument);
  CHECK_THROWS_AS(observed_order(1e-3, 1e-4, -0.1, 0.1), std::invalid_argument);
}

TEST_CASE("least-squares slope") {
  const std::vector<double> h{0.4, 0.2, 0.1, 0.05};
  std::vector<double> e;
  for (double v : h) e.push_back(3.0 * std::pow(v, 5));
  CHECK(*fit_slope(h, e) == doctest::Approx(5.0).epsilon(1e-12));
  e.back() = 1e-16;
  CHECK(*fit_slope(h, e) == doctest::Approx(5.0).epsilon(1e-12));
  const std::vector<double> e2{1e-3, 1e-16, 1e-17, 1e-18};
  CHECK_FALSE(fit_slope(h, e2));
  CHECK_THROWS_AS(fit_slope(h, std::vector<double>{1.0}), std::invalid_argument);
}

TEST_CASE("local error study agrees with an independent long-double step") {
  const std::vector<Method> methods{make_method(builtin_rkfd4_corrected()),
                                    make_method(builtin_rkfd5()),
                                    make_method(builtin_rkfd4_printed())};
  for (const auto& m : methods) {
    const auto& t = std::get<RkfdTableau>(m.tableau);
    for (Slot slot : kAllSlots) {
      CAPTURE(m.name);
      CAPTURE(slot_name(slot));
      const auto report = local_error_study(m, problem_2(), kLocalH, slot);
      CHECK(report.local);
      CHECK(report.slot == slot);
      REQUIRE(report.points.size() == kLocalH.size());
      std::vector<double> oracle;
      for (std::size_t i = 0; i < kLocalH.size(); ++i) {
        const double want = oracle_error(t, kLocalH[i], slot);
        oracle.push_back(want);
        CHECK(report.points[i].h == kLocalH[i]);
        // Double rounding in the library step is about 1e-16 absolute.
        CHECK(std::abs(report.points[i].error - want) <= 1e-4 * want + 5e-16);
      }
      const auto want_slope = fit_slope(kLocalH, oracle);
      REQUIRE(want_slope);
      REQUIRE(report.slope);
      CHECK(*report.slope == doctest::Approx(*want_slope).epsilon(1e-3));
    }
  }
}

TEST_CASE("measured single-step slopes on the sine problem") {
  // Values fixed by the long-double oracle above.  The y slot of the
  // corrected fourth-order tableau does not show a clean local order 5.
  auto slope = [](const RkfdTableau& t, Slot slot) {
    std::vector<double> e;
    for (double h : kLocalH) e.push_back(oracle_error(t, h, slot));
    return *fit_slope(kLocalH, e);
  };
  CHECK(slope(builtin_rkfd4_corrected(), Slot::y) == doctest::Approx(4.42).epsilon(0.01));
  CHECK(slope(builtin_rkfd5(), Slot::y) == doctest::Approx(7.0).epsilon(0.01));
  CHECK(slope(builtin_rkfd4_corrected(), Slot::dy) == doctest::Approx(6.0).epsilon(0.01));
  // f vanishes at the initial point of this problem, lifting the y' defect
  // of the printed weights from h^3 to h^4.
  CHECK(slope(builtin_rkfd4_printed(), Slot::dy) == doctest::Approx(4.0).epsilon(0.01));
}

TEST_CASE("printed weights cap the local y' order at 3 when f(x0) != 0") {
  const auto r = local_error_study(make_method(builtin_rkfd4_printed()), problem_5(), kLocalH,
                                   Slot::dy);
  REQUIRE(r.slope);
  CHECK(*r.slope == doctest::Approx(3.0).epsilon(0.03));
  // The defect h^3/1926 times f(0) = 1 dominates.
  CHECK(r.points.back().error == doctest::Approx(std::pow(0.025, 3) / 1926).epsilon(0.05));
}

TEST_CASE("local study reference without an exact solution") {
  const auto m = make_method(builtin_rkfd4_corrected());
  const std::vector<double> hs{0.4, 0.2, 0.1};
  const auto with = local_error_study(m, exp_quadrature(true), hs);
  const auto without = local_error_study(m, exp_quadrature(false), hs);
  for (std::size_t i = 0; i < hs.size(); ++i) {
    CHECK(without.points[i].error == doctest::Approx(with.points[i].error).epsilon(1e-4));
  }
}

TEST_CASE("local study arguments") {
  const auto m = make_method(builtin_rkfd5());
  CHECK_THROWS_AS(local_error_study(m, problem_2(), std::vector<double>{0.1, 0.2}),
                  std::invalid_argument);
  CHECK_THROWS_AS(local_error_study(m, problem_2(), std::vector<double>{}), std::invalid_argument);
  CHECK_THROWS_AS(local_error_study(m, problem_3(), std::vector<double>{1.0, 0.5}),
                  std::invalid_argument);
}

TEST_CASE("global convergence on the sine problem") {
  const auto fd4 = convergence_study(make_method(builtin_rkfd4_corrected()), problem_2(), 0.1, 4);
  REQUIRE(fd4.points.size() == 4);
  CHECK_FALSE(fd4.points[0].observed_order);
  CHECK(fd4.points[3].h == 0.0125);
  const auto o4 = fd4.pairwise_orders();
  REQUIRE(o4.size() == 3);
  for (double o : o4) CHECK((o >= 3.5 && o <= 5.5));

  const auto rk = convergence_study(make_method(builtin_rk4()), problem_2(), 0.1, 4);
  for (double o : rk.pairwise_orders()) CHECK((o >= 3.6 && o <= 4.4));

  // From h = 0.05 the fifth-order tableau has left its pre-asymptotic range.
  const auto fd5 = convergence_study(make_method(builtin_rkfd5()), problem_2(), 0.05, 3);
  for (double o : fd5.pairwise_orders()) CHECK((o >= 4.5 && o <= 6.5));
}

TEST_CASE("global convergence of the fifth-order tableau on problem 5") {
  const auto r = convergence_study(make_method(builtin_rkfd5()), problem_5(), 0.1, 3);
  const auto o = r.pairwise_orders();
  REQUIRE(o.size() == 2);
  for (double v : o) CHECK((v >= 4.5 && v <= 6.5));
  REQUIRE(r.slope);
  CHECK(*r.slope == doctest::Approx(5.0).epsilon(0.02));
}

TEST_CASE("fifth-order tableau gains at least half an order on y'''' = cos x") {
  const auto a = convergence_study(make_method(builtin_rkfd4_corrected()), cos_problem(), 0.1, 4);
  const auto b = convergence_study(make_method(builtin_rkfd5()), cos_problem(), 0.1, 4);
  for (std::size_t i = 1; i < 4; ++i) {
    REQUIRE(a.points[i].observed_order);
    REQUIRE(b.points[i].observed_order);
    CHECK(*b.points[i].observed_order - *a.points[i].observed_order >= 0.5);
  }
}

TEST_CASE("convergence study arguments and divergence") {
  const auto m = make_method(builtin_rkfd5());
  CHECK_THROWS_AS(convergence_study(m, problem_2(), 0.1, 1), std::invalid_argument);
  CHECK_THROWS_AS(convergence_study(m, exp_quadrature(false), 0.1, 3), std::invalid_argument);

  auto p3 = problem_3();
  p3.x_end = 2.0;
  try {
    convergence_study(m, p3, 0.1, 2);
    FAIL("expected divergence");
  } catch (const DivergenceError& e) {
    CHECK(std::string(e.what()).find("h = ") != std::string::npos);
  }
}

TEST_CASE("efficiency curve") {
  const auto m = make_method(builtin_rkfd4_corrected());
  const std::vector<double> hs{0.01, 0.1, 0.05};
  const auto curve = efficiency_curve(m, problem_2(), hs);
  REQUIRE(curve.size() == 3);
  CHECK(curve[0].h == 0.1);
  CHECK(curve[0].n_fevals == 300);
  CHECK(*curve[0].max_abs_error <= 5 * 6.09e-4);
  CHECK(*curve[0].max_abs_error >= 6.09e-4 / 5);
  for (std::size_t i = 1; i < curve.size(); ++i) {
    CHECK(curve[i].h < curve[i - 1].h);
    CHECK(curve[i].n_fevals > curve[i - 1].n_fevals);
  }
  const auto rk = efficiency_curve(make_method(builtin_rk4()), problem_2(), std::vector{0.1});
  CHECK(rk[0].n_fevals == 400);
  CHECK(*rk[0].max_abs_error <= 5 * 7.66e-4);
  CHECK(*rk[0].max_abs_error >= 7.66e-4 / 5);

  for (const auto& meth : {make_method(builtin_rkfd4_corrected()), make_method(builtin_rkfd5()),
                           make_method(builtin_rk4())}) {
    for (const auto& pt : efficiency_curve(meth, poly_problem(0), std::vector{0.5, 0.1, 0.03})) {
      CHECK(*pt.max_abs_error <= 1e-13);
    }
  }

  auto p3 = problem_3();
  p3.x_end = 2.0;
  const auto bad = efficiency_curve(m, p3, std::vector{0.1});
  REQUIRE(bad.size() == 1);
  CHECK(bad[0].failure);
  CHECK_FALSE(bad[0].max_abs_error);
  CHECK_THROWS_AS(efficiency_curve(m, problem_2(), std::vector<double>{}), std::invalid_argument);
}

TEST_CASE("equal-step efficiency on problems 1, 2 and 5") {
  const auto fd4 = make_method(builtin_rkfd4_corrected());
  const auto rk = make_method(builtin_rk4());
  const std::vector<double> hs{0.1, 0.05, 0.025, 0.0125};
  for (const auto& p : {problem_1(), problem_2(), problem_5()}) {
    const auto a = efficiency_curve(fd4, p, hs);
    const auto b = efficiency_curve(rk, p, hs);
    for (std::size_t i = 0; i < hs.size(); ++i) {
      CAPTURE(p.name);
      CAPTURE(hs[i]);
      CHECK(*a[i].max_abs_error <= *b[i].max_abs_error);
      CHECK(4 * a[i].n_fevals == 3 * b[i].n_fevals);
    }
  }
}

TEST_CASE("bench") {
  const std::vector<Method> methods{make_method(builtin_rk4()),
                                    make_method(builtin_rkfd4_corrected())};
  const std::vector<Ivp4> problems{problem_2()};
  const std::vector<double> hs{0.01, 0.1};
  const auto rows = bench(methods, problems, hs, 3);
  REQUIRE(rows.size() == 4);
  CHECK(rows[0].method == "rk4");
  CHECK(rows[0].h == 0.1);
  CHECK(rows[1].h == 0.01);
  CHECK(rows[2].method == "rkfd4");
  const double table[4] = {7.66e-4, 7.78e-8, 6.09e-4, 7.38e-9};
  for (std::size_t i = 0; i < 4; ++i) {
    CAPTURE(i);
    REQUIRE(rows[i].max_abs_error);
    CHECK(*rows[i].max_abs_error <= 5 * table[i]);
    CHECK(*rows[i].max_abs_error >= table[i] / 5);
    REQUIRE(rows[i].wall_seconds);
    CHECK(*rows[i].wall_seconds >= 0.0);
  }
  CHECK(4 * rows[2].n_fevals == 3 * rows[0].n_fevals);
  CHECK(4 * rows[3].n_fevals == 3 * rows[1].n_fevals);

  const auto once = bench(methods, problems, hs, 1);
  REQUIRE(once.size() == rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    CHECK(once[i].method == rows[i].method);
    CHECK(once[i].problem == rows[i].problem);
    CHECK(once[i].h == rows[i].h);
    CHECK(once[i].n_steps == rows[i].n_steps);
    CHECK(once[i].n_fevals == rows[i].n_fevals);
    CHECK(*once[i].max_abs_error == *rows[i].max_abs_error);
  }
  CHECK_THROWS_AS(bench(methods, problems, hs, 0), std::invalid_argument);
}

TEST_CASE("thread count honours the environment") {
  ::setenv("RKFD_THREADS", "3", 1);
  CHECK(analysis_threads() == 3);
  ::setenv("RKFD_THREADS", "1", 1);
  CHECK(analysis_threads() == 1);
  // Serial execution gives the same numbers.
  const auto serial = convergence_study(make_method(builtin_rk4()), problem_2(), 0.1, 3);
  ::unsetenv("RKFD_THREADS");
  CHECK(analysis_threads() >= 1);
  const auto parallel = convergence_study(make_method(builtin_rk4()), problem_2(), 0.1, 3);
  for (std::size_t i = 0; i < 3; ++i) CHECK(serial.points[i].error == parallel.points[i].error);
}
