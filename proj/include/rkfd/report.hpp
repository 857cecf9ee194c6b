#pragma once

#include "rkfd/analysis.hpp"
#include "rkfd/conditions.hpp"
#include "rkfd/integrate.hpp"

#include <iosfwd>
#include <span>
#include <string>

namespace rkfd {

/// Shortest decimal string that parses back to exactly `v`.
std::string format_shortest(double v);
/// Scientific notation with three significant digits, e.g. "6.09e-04".
std::string format_sci3(double v);

void write_order_report_table(std::ostream& out, const OrderReport& report);
/// Columns: order,condition_id,lhs,rhs,residual,pass
void write_order_report_csv(std::ostream& out, const OrderReport& report);

/// Columns: x, y_1..y_m, dy_1..dy_m, d2y_1..d2y_m, d3y_1..d3y_m
void write_trajectory_csv(std::ostream& out, std::span<const State4> states);
void write_run_summary(std::ostream& out, const RunResult& result);

/// Columns: method,problem,h,steps,fevals,max_error,wall_seconds
void write_bench_csv(std::ostream& out, std::span<const EfficiencyPoint> points);
void write_bench_table(std::ostream& out, std::span<const EfficiencyPoint> points);

/// Columns: method,problem,h,error,observed_order
void write_convergence_csv(std::ostream& out, const ConvergenceReport& report,
                           bool with_header = true);
void write_convergence_table(std::ostream& out, const ConvergenceReport& report);

/// gnuplot script with inline data plotting log10(error) against
/// log10(fevals), one series per method and problem.
void write_gnuplot_script(std::ostream& out, std::span<const EfficiencyPoint> points,
                          const std::string& title = "work-precision");

}  // namespace rkfd
