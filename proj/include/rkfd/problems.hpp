#pragma once

#include "rkfd/state.hpp"

#include <string>
#include <vector>

namespace rkfd {

/// Special fourth-order IVP y'''' = f(x, y) on [x0, x_end].
struct Ivp4 {
  std::string name;
  std::size_t m = 1;
  Rhs f;
  double x0 = 0.0;
  double x_end = 1.0;
  std::vector<double> y0, dy0, d2y0, d3y0;
  ExactSolution exact;  // empty when no closed form is known
  bool x_only = false;  // f ignores y (pure quadrature)

  bool has_exact() const noexcept { return static_cast<bool>(exact); }
  State4 initial_state() const;
  /// f(x, y) into a fresh vector.
  std::vector<double> eval(double x, std::span<const double> y) const;
};

/// Throws std::invalid_argument unless the interval is non-degenerate, the
/// initial data have length m, f is finite there, and exact(x0) matches y0.
void validate(const Ivp4& problem);

/// y'''' = -4y, y = e^x sin x on [0, 10].
Ivp4 problem_1();
/// y'''' = y^2 + cos^2 x + sin x - 1, y = sin x on [0, 10].
Ivp4 problem_2();
/// y'''' = 3 sin y (3 + 2 sin^2 y) / cos^7 y, y = arcsin x on [0, pi/4].
/// f throws DomainError for |y| >= pi/2.
Ivp4 problem_3();
/// Coupled four-component system with exact (e^-x, e^-2x, e^-3x, e^-4x) on [0, 2].
Ivp4 problem_4();
/// Beam on elastic foundation: y'''' = 1 - y, zero data on [0, 1],
/// y = 1 - cosh(x/sqrt2) cos(x/sqrt2).
Ivp4 problem_5();

/// y'''' = g(x) with zero initial data at x0 = 0.
Ivp4 quadrature_problem(std::string name, std::function<double(double)> g, double x_end,
                        ExactSolution exact = {});
/// y'''' = x^k (k <= 3), exact y = x^(k+4) k!/(k+4)! on [0, 1].
Ivp4 poly_problem(int k);
/// y'''' = cos x, exact y = cos x - 1 + x^2/2 on [0, 10].
Ivp4 cos_problem();

/// Benchmark problems keyed p1..p5 and quadrature fixtures poly0..poly3.
std::vector<std::string> problem_names();
/// Throws std::invalid_argument for an unknown key.
Ivp4 problem_by_name(const std::string& key);

}  // namespace rkfd
