#include "rkfd/report.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <iomanip>
#include <map>
#include <ostream>

namespace rkfd {

namespace {

std::string opt_shortest(const std::optional<double>& v) { return v ? format_shortest(*v) : ""; }

}  // namespace

std::string format_shortest(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string format_sci3(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2e", v);
  return buf;
}

void write_order_report_table(std::ostream& out, const OrderReport& report) {
  out << "order conditions for " << report.method << " (tolerance "
      << format_sci3(report.tolerance) << ")\n";
  out << std::left << std::setw(6) << "order" << std::setw(18) << "condition" << std::right
      << std::setw(24) << "lhs" << std::setw(24) << "rhs" << std::setw(12) << "residual"
      << "  status\n";
  for (const auto& c : report.conditions) {
    out << std::left << std::setw(6) << c.order << std::setw(18) << c.id << std::right
        << std::setw(24) << format_shortest(c.lhs) << std::setw(24) << format_shortest(c.rhs)
        << std::setw(12) << format_sci3(c.residual) << "  " << (c.pass ? "ok" : "FAIL  <==") << "\n";
  }
  out << "attained order: " << report.attained_order << "\n";
}

void write_order_report_csv(std::ostream& out, const OrderReport& report) {
  out << "order,condition_id,lhs,rhs,residual,pass\n";
  for (const auto& c : report.conditions) {
    out << c.order << ',' << c.id << ',' << format_shortest(c.lhs) << ','
        << format_shortest(c.rhs) << ',' << format_shortest(c.residual) << ','
        << (c.pass ? "true" : "false") << '\n';
  }
}

void write_trajectory_csv(std::ostream& out, std::span<const State4> states) {
  const std::size_t m = states.empty() ? 1 : states.front().size();
  out << 'x';
  for (Slot s : kAllSlots) {
    for (std::size_t i = 1; i <= m; ++i) out << ',' << slot_name(s) << '_' << i;
  }
  out << '\n';
  for (const auto& st : states) {
    out << format_shortest(st.x);
    for (Slot s : kAllSlots) {
      for (double v : slot(st, s)) out << ',' << format_shortest(v);
    }
    out << '\n';
  }
}

void write_run_summary(std::ostream& out, const RunResult& r) {
  out << "method:  " << r.method << "\n"
      << "problem: " << r.problem << "\n"
      << "h:       " << format_shortest(r.h) << "\n"
      << "steps:   " << r.n_steps << "\n"
      << "fevals:  " << r.n_fevals << "\n";
  if (r.max_abs_error) out << "max |y error|: " << format_sci3(*r.max_abs_error) << "\n";
  if (r.max_slot_error) {
    out << "max error by slot:";
    for (std::size_t s = 0; s < 4; ++s) {
      out << ' ' << slot_name(kAllSlots[s]) << '=' << format_sci3((*r.max_slot_error)[s]);
    }
    out << "\n";
  }
  if (!r.states.empty()) {
    const State4& last = r.states.back();
    out << "final x = " << format_shortest(last.x) << ", y =";
    for (double v : last.y) out << ' ' << format_shortest(v);
    out << "\n";
  }
  if (r.wall_seconds) out << "wall:    " << *r.wall_seconds << " s\n";
}

void write_bench_csv(std::ostream& out, std::span<const EfficiencyPoint> points) {
  out << "method,problem,h,steps,fevals,max_error,wall_seconds\n";
  for (const auto& p : points) {
    out << p.method << ',' << p.problem << ',' << format_shortest(p.h) << ',' << p.n_steps << ','
        << (p.failure ? std::string() : std::to_string(p.n_fevals)) << ','
        << opt_shortest(p.max_abs_error) << ',' << opt_shortest(p.wall_seconds) << '\n';
  }
}

void write_bench_table(std::ostream& out, std::span<const EfficiencyPoint> points) {
  out << std::left << std::setw(16) << "method" << std::setw(8) << "problem" << std::right
      << std::setw(10) << "h" << std::setw(9) << "steps" << std::setw(10) << "fevals"
      << std::setw(11) << "max_error" << std::setw(13) << "wall_s" << "\n";
  for (const auto& p : points) {
    out << std::left << std::setw(16) << p.method << std::setw(8) << p.problem << std::right
        << std::setw(10) << format_shortest(p.h) << std::setw(9) << p.n_steps;
    if (p.failure) {
      out << "  diverged: " << *p.failure << "\n";
      continue;
    }
    out << std::setw(10) << p.n_fevals
        << std::setw(11) << (p.max_abs_error ? format_sci3(*p.max_abs_error) : "-")
        << std::setw(13) << (p.wall_seconds ? format_sci3(*p.wall_seconds) : "-") << "\n";
  }
}

void write_convergence_csv(std::ostream& out, const ConvergenceReport& report, bool with_header) {
  if (with_header) out << "method,problem,h,error,observed_order\n";
  for (const auto& p : report.points) {
    out << report.method << ',' << report.problem << ',' << format_shortest(p.h) << ','
        << format_shortest(p.error) << ',' << opt_shortest(p.observed_order) << '\n';
  }
}

void write_convergence_table(std::ostream& out, const ConvergenceReport& report) {
  out << (report.local ? "single-step" : "global") << " error of " << report.method << " on "
      << report.problem << " (" << slot_name(report.slot) << " slot)\n";
  out << std::setw(12) << "h" << std::setw(12) << "error" << std::setw(10) << "order" << "\n";
  for (const auto& p : report.points) {
    out << std::setw(12) << format_shortest(p.h) << std::setw(12) << format_sci3(p.error);
    if (p.observed_order) {
      char buf[16];
      std::snprintf(buf, sizeof buf, "%.3f", *p.observed_order);
      out << std::setw(10) << buf;
    }
    out << "\n";
  }
  if (report.slope) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "%.3f", *report.slope);
    out << "fitted slope: " << buf << "\n";
  }
}

void write_gnuplot_script(std::ostream& out, std::span<const EfficiencyPoint> points,
                          const std::string& title) {
  std::map<std::string, std::vector<const EfficiencyPoint*>> series;
  for (const auto& p : points) {
    if (p.failure || !p.max_abs_error || *p.max_abs_error <= 0.0) continue;
    series[p.method + " (" + p.problem + ")"].push_back(&p);
  }
  out << "set title \"" << title << "\"\n"
      << "set xlabel \"log10(function evaluations)\"\n"
      << "set ylabel \"log10(max error)\"\n"
      << "set grid\n"
      << "set key outside right\n";
  std::size_t k = 0;
  for (const auto& [label, pts] : series) {
    out << "$series" << k++ << " << EOD\n";
    for (const auto* p : pts) {
      out << p->n_fevals << ' ' << format_shortest(*p->max_abs_error) << '\n';
    }
    out << "EOD\n";
  }
  if (series.empty()) return;
  out << "plot ";
  k = 0;
  for (const auto& [label, pts] : series) {
    if (k > 0) out << ", \\\n     ";
    out << "$series" << k++ << " using (log10($1)):(log10($2)) with linespoints title \"" << label
        << "\"";
  }
  out << "\n";
}

}  // namespace rkfd
