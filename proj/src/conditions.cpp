#include "rkfd/conditions.hpp"

#include <cmath>
#include <stdexcept>

namespace rkfd {

namespace {

using enum WeightRow;

std::string power_label(int p) {
  if (p == 0) return "e";
  if (p == 1) return "c";
  return "c" + std::to_string(p);
}

std::string make_id(WeightRow row, int c_power, std::optional<int> ahat_c_power) {
  std::string id = std::string(to_string(row)) + ".";
  if (!ahat_c_power) return id + power_label(c_power);
  if (c_power == 0) return id + "Ahat." + power_label(*ahat_c_power);
  return id + "(" + power_label(c_power) + ".Ahat_" + power_label(*ahat_c_power) + ")";
}

ConditionDef quad(int order, WeightRow row, int p, std::int64_t den) {
  return {order, make_id(row, p, std::nullopt), row, p, std::nullopt, {1, den}};
}

ConditionDef stage(int order, WeightRow row, int p, int q, std::int64_t den) {
  return {order, make_id(row, p, q), row, p, q, {1, den}};
}

const std::vector<ConditionDef>& full_catalog() {
  static const std::vector<ConditionDef> catalog = {
      quad(1, bppp, 0, 1),

      quad(2, bppp, 1, 2),
      quad(2, bpp, 0, 2),

      quad(3, bppp, 2, 3),
      quad(3, bpp, 1, 6),
      quad(3, bp, 0, 6),

      quad(4, bppp, 3, 4),
      quad(4, bpp, 2, 12),
      quad(4, bp, 1, 24),
      quad(4, b, 0, 24),

      quad(5, bppp, 4, 5),
      stage(5, bppp, 0, 0, 120),
      quad(5, bpp, 3, 20),
      quad(5, bp, 2, 60),
      quad(5, b, 1, 120),

      quad(6, bppp, 5, 6),
      stage(6, bppp, 0, 1, 720),
      stage(6, bppp, 1, 0, 144),
      quad(6, bpp, 4, 30),
      stage(6, bpp, 0, 0, 720),
      quad(6, bp, 3, 120),
      quad(6, b, 2, 360),

      quad(7, bppp, 6, 7),
      stage(7, bppp, 1, 1, 840),
      stage(7, bppp, 2, 0, 168),
      stage(7, bppp, 0, 2, 2520),
      quad(7, bpp, 5, 42),
      stage(7, bpp, 0, 1, 5040),
      stage(7, bpp, 1, 0, 1008),
      quad(7, bp, 4, 210),
      stage(7, bp, 0, 0, 5040),
      quad(7, b, 3, 840),
  };
  return catalog;
}

const Eigen::VectorXd& weights(const RkfdTableau& t, WeightRow row) {
  switch (row) {
    case b: return t.b();
    case bp: return t.bp();
    case bpp: return t.bpp();
    case bppp: return t.bppp();
  }
  throw std::logic_error("unknown weight row");
}

// Elementwise c^p by repeated multiplication; p = 0 gives e.
Eigen::VectorXd c_power(const RkfdTableau& t, int p) {
  Eigen::VectorXd v = Eigen::VectorXd::Ones(t.stages());
  for (int k = 0; k < p; ++k) v = v.cwiseProduct(t.c());
  return v;
}

}  // namespace

const char* to_string(WeightRow row) noexcept {
  switch (row) {
    case b: return "b";
    case bp: return "bp";
    case bpp: return "bpp";
    case bppp: return "bppp";
  }
  return "?";
}

double ConditionDef::lhs(const RkfdTableau& tableau) const {
  Eigen::VectorXd v = rkfd::c_power(tableau, c_power);
  if (ahat_c_power) v = v.cwiseProduct(tableau.a_hat() * rkfd::c_power(tableau, *ahat_c_power));
  return weights(tableau, row).dot(v);
}

std::vector<ConditionDef> condition_catalog(int max_order) {
  if (max_order < 1 || max_order > kMaxConditionOrder) {
    throw std::invalid_argument("max_order must lie in 1.." + std::to_string(kMaxConditionOrder));
  }
  std::vector<ConditionDef> out;
  for (const auto& def : full_catalog()) {
    if (def.order <= max_order) out.push_back(def);
  }
  return out;
}

OrderReport evaluate_conditions(const RkfdTableau& tableau, int max_order, double tolerance) {
  if (!(tolerance > 0.0)) throw std::invalid_argument("tolerance must be positive");
  OrderReport report{tableau.name(), {}, tolerance, max_order, max_order};
  for (const auto& def : condition_catalog(max_order)) {
    const double lhs = def.lhs(tableau);
    const double rhs = def.rhs.value();
    const double residual = lhs - rhs;
    const bool pass = std::abs(residual) <= tolerance;
    report.conditions.push_back({def.order, def.id, lhs, rhs, residual, pass});
    if (!pass) report.attained_order = std::min(report.attained_order, def.order - 1);
  }
  return report;
}

int attained_order(const RkfdTableau& tableau, double tolerance) {
  return evaluate_conditions(tableau, kMaxConditionOrder, tolerance).attained_order;
}

}  // namespace rkfd
