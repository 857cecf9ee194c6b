#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace rkfd {

/// Integrator state: abscissa and y, y', y'', y''' for each of m components.
struct State4 {
  double x = 0.0;
  std::vector<double> y;
  std::vector<double> dy;
  std::vector<double> d2y;
  std::vector<double> d3y;

  State4() = default;
  State4(double x0, std::vector<double> y0, std::vector<double> dy0, std::vector<double> d2y0,
         std::vector<double> d3y0);

  /// Zero-initialised state with m components.
  static State4 zeros(std::size_t m, double x0 = 0.0);

  std::size_t size() const noexcept { return y.size(); }
  bool all_finite() const noexcept;

  friend bool operator==(const State4&, const State4&) = default;
};

/// Solution slot: 0 = y, 1 = y', 2 = y'', 3 = y'''.
enum class Slot : std::size_t { y = 0, dy = 1, d2y = 2, d3y = 3 };

inline constexpr std::array<Slot, 4> kAllSlots = {Slot::y, Slot::dy, Slot::d2y, Slot::d3y};

std::vector<double>& slot(State4& state, Slot s) noexcept;
const std::vector<double>& slot(const State4& state, Slot s) noexcept;
const char* slot_name(Slot s) noexcept;

/// Right-hand side f(x, y) of y'''' = f(x, y), written into `out` (length m).
using Rhs = std::function<void(double x, std::span<const double> y, std::span<double> out)>;

/// Exact solution with its first three derivatives.
using ExactSolution = std::function<State4(double x)>;

}  // namespace rkfd
