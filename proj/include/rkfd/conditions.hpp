#pragma once

#include "rkfd/tableau.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace rkfd {

/// Which weight row a condition constrains.
enum class WeightRow { b, bp, bpp, bppp };

const char* to_string(WeightRow row) noexcept;

struct Rational {
  std::int64_t num;
  std::int64_t den;

  double value() const noexcept { return static_cast<double>(num) / static_cast<double>(den); }
};

/// One algebraic order condition  w^T (c^p . (a_hat c^q)) = rhs.
///
/// `ahat_c_power` absent means the plain quadrature form w^T c^p.  A power of
/// zero stands for the ones vector e, so a bare a_hat factor is a_hat e.
struct ConditionDef {
  int order;
  std::string id;
  WeightRow row;
  int c_power;
  std::optional<int> ahat_c_power;
  Rational rhs;

  double lhs(const RkfdTableau& tableau) const;
};

struct ConditionResult {
  int order;
  std::string id;
  double lhs;
  double rhs;
  double residual;  // lhs - rhs
  bool pass;
};

struct OrderReport {
  std::string method;
  std::vector<ConditionResult> conditions;
  double tolerance;
  int max_order;
  int attained_order;
};

inline constexpr int kMaxConditionOrder = 7;
inline constexpr double kDefaultConditionTolerance = 1e-12;

/// All conditions of order <= max_order (1..7); 1, 2, 3, 4, 5, 7, 10 per order.
std::vector<ConditionDef> condition_catalog(int max_order = kMaxConditionOrder);

OrderReport evaluate_conditions(const RkfdTableau& tableau, int max_order = kMaxConditionOrder,
                                double tolerance = kDefaultConditionTolerance);

int attained_order(const RkfdTableau& tableau, double tolerance = kDefaultConditionTolerance);

}  // namespace rkfd
