#include "rkfd/cli.hpp"

#include "rkfd/analysis.hpp"
#include "rkfd/conditions.hpp"
#include "rkfd/error.hpp"
#include "rkfd/report.hpp"
#include "rkfd/tableau_io.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

namespace rkfd::cli {

namespace {

// Thrown for bad selectors or arguments discovered after CLI parsing.
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

enum class Format { table, csv };

const std::map<std::string, Format> kFormats = {{"table", Format::table}, {"csv", Format::csv}};

const std::map<std::string, Slot> kSlots = {
    {"y", Slot::y}, {"dy", Slot::dy}, {"d2y", Slot::d2y}, {"d3y", Slot::d3y}};

struct Config {
  std::string method;
  std::vector<std::string> methods = {"rkfd4", "rkfd5", "rk4"};
  std::vector<std::string> problems = {"p2"};
  std::string problem;
  double h = 0.1;
  std::vector<double> h_list;
  double h0 = 0.1;
  int levels = 4;
  bool local = false;
  Slot slot = Slot::y;
  double tolerance = kDefaultConditionTolerance;
  int max_order = kMaxConditionOrder;
  std::size_t stride = 1;
  int repeats = 5;
  Format format = Format::table;
  std::string out_path;
  std::string plot_path;
  std::string rk;
  std::string name;
};

// Writes to --out when given, otherwise to the command's stdout.
class Output {
 public:
  Output(const std::string& path, std::ostream& fallback) : stream_(&fallback) {
    if (!path.empty()) {
      file_.open(path, std::ios::binary | std::ios::trunc);
      if (!file_) throw InputError("cannot open output file '" + path + "'");
      stream_ = &file_;
    }
  }
  std::ostream& stream() { return *stream_; }

 private:
  std::ofstream file_;
  std::ostream* stream_;
};

RkfdTableau require_rkfd(const Method& m) {
  if (const auto* t = std::get_if<RkfdTableau>(&m.tableau)) return *t;
  throw InputError("method '" + m.name + "' is an RK tableau; an RKFD tableau is required");
}

int cmd_verify(const Config& cfg, std::ostream& out) {
  const RkfdTableau tableau = require_rkfd(resolve_method(cfg.method));
  const OrderReport report = evaluate_conditions(tableau, cfg.max_order, cfg.tolerance);
  Output o(cfg.out_path, out);
  if (cfg.format == Format::csv) {
    write_order_report_csv(o.stream(), report);
  } else {
    write_order_report_table(o.stream(), report);
  }
  const int required = tableau.declared_order().value_or(1);
  return report.attained_order >= std::min(required, cfg.max_order) ? kSuccess : kFailure;
}

int cmd_integrate(const Config& cfg, std::ostream& out) {
  const Method method = resolve_method(cfg.method);
  const Ivp4 problem = resolve_problems({cfg.problem}).front();
  RunOptions options;
  options.stride = cfg.stride;
  options.time = true;
  const RunResult result = integrate(method, problem, cfg.h, options);
  Output o(cfg.out_path, out);
  if (cfg.format == Format::csv) {
    write_trajectory_csv(o.stream(), result.states);
  } else {
    write_run_summary(o.stream(), result);
  }
  return kSuccess;
}

int cmd_converge(const Config& cfg, std::ostream& out) {
  const Method method = resolve_method(cfg.method);
  const std::vector<Ivp4> problems = resolve_problems(cfg.problems);
  std::vector<ConvergenceReport> reports;
  for (const auto& p : problems) {
    if (cfg.local) {
      std::vector<double> hs = cfg.h_list;
      if (hs.empty()) hs = {0.2, 0.1, 0.05, 0.025};
      reports.push_back(local_error_study(method, p, hs, cfg.slot));
    } else {
      reports.push_back(convergence_study(method, p, cfg.h0, cfg.levels));
    }
  }
  Output o(cfg.out_path, out);
  for (std::size_t i = 0; i < reports.size(); ++i) {
    if (cfg.format == Format::csv) {
      write_convergence_csv(o.stream(), reports[i], i == 0);
    } else {
      write_convergence_table(o.stream(), reports[i]);
    }
  }
  return kSuccess;
}

void report_time_ratios(std::ostream& out, const std::vector<EfficiencyPoint>& points,
                        const std::vector<Method>& methods) {
  const auto rk = std::find_if(methods.begin(), methods.end(), [](const Method& m) { return !m.is_rkfd(); });
  if (rk == methods.end()) return;
  for (const auto& p : points) {
    const Method& pm = *std::find_if(methods.begin(), methods.end(),
                                     [&](const Method& m) { return m.name == p.method; });
    if (!pm.is_rkfd() || !p.wall_seconds) continue;
    for (const auto& q : points) {
      if (q.method == rk->name && q.problem == p.problem && q.h == p.h && q.wall_seconds &&
          *q.wall_seconds > 0.0) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.2f", *p.wall_seconds / *q.wall_seconds);
        out << "wall-time ratio " << p.method << "/" << rk->name << " on " << p.problem
            << " at h=" << format_shortest(p.h) << ": " << buf << "\n";
      }
    }
  }
}

int cmd_bench(const Config& cfg, std::ostream& out, std::ostream& err) {
  std::vector<Method> methods;
  for (const auto& s : cfg.methods) methods.push_back(resolve_method(s));
  const std::vector<Ivp4> problems = resolve_problems(cfg.problems);
  std::vector<double> hs = cfg.h_list;
  if (hs.empty()) hs = {0.1, 0.01};

  const auto points = bench(methods, problems, hs, cfg.repeats);
  Output o(cfg.out_path, out);
  if (cfg.format == Format::csv) {
    write_bench_csv(o.stream(), points);
    report_time_ratios(err, points, methods);
  } else {
    write_bench_table(o.stream(), points);
    report_time_ratios(o.stream(), points, methods);
  }
  if (!cfg.plot_path.empty()) {
    Output plot(cfg.plot_path, out);
    write_gnuplot_script(plot.stream(), points);
  }
  const bool diverged = std::any_of(points.begin(), points.end(), [](const auto& p) { return p.failure.has_value(); });
  return diverged ? kFailure : kSuccess;
}

int cmd_convert(const Config& cfg, std::ostream& out) {
  const Method source = resolve_method(cfg.rk);
  const auto* rk = std::get_if<RkTableau>(&source.tableau);
  if (!rk) throw InputError("convert expects an RK tableau, '" + cfg.rk + "' is RKFD");
  RkfdTableau converted = convert_rk_to_rkfd(*rk);
  if (!cfg.name.empty()) {
    auto k = converted.coefficients();
    k.name = cfg.name;
    converted = make_rkfd_tableau(std::move(k));
  }
  try {
    save_tableau(converted, cfg.out_path);
  } catch (const std::runtime_error& e) {
    throw InputError(e.what());
  }
  out << "wrote " << converted.name() << " (" << converted.stages() << " stages, order "
      << attained_order(converted) << ") to " << cfg.out_path << "\n";
  return kSuccess;
}

int cmd_list_problems(std::ostream& out) {
  for (const auto& name : problem_names()) {
    const Ivp4 p = problem_by_name(name);
    out << p.name << " m=" << p.m << " interval=[" << format_shortest(p.x0) << ", "
        << format_shortest(p.x_end) << "] has_exact=" << (p.has_exact() ? "yes" : "no") << "\n";
  }
  return kSuccess;
}

}  // namespace

std::vector<std::string> builtin_method_names() {
  return {"rkfd4", "rkfd4-printed", "rkfd5", "rkfd5-printed", "rk4"};
}

Method resolve_method(const std::string& selector) {
  if (selector == "rkfd4") return make_method(builtin_rkfd4_corrected());
  if (selector == "rkfd4-printed") return make_method(builtin_rkfd4_printed());
  if (selector == "rkfd5") return make_method(builtin_rkfd5());
  if (selector == "rkfd5-printed") return make_method(builtin_rkfd5_printed());
  if (selector == "rk4") return make_method(builtin_rk4());
  if (!std::filesystem::is_regular_file(selector)) {
    throw InputError("unknown method '" + selector + "' (not a builtin and no such file)");
  }
  return std::visit([](auto t) { return make_method(std::move(t)); }, load_any_tableau(selector));
}

std::vector<Ivp4> resolve_problems(const std::vector<std::string>& selectors) {
  std::vector<Ivp4> out;
  for (const auto& s : selectors) {
    if (s == "all") {
      for (const char* k : {"p1", "p2", "p3", "p4", "p5"}) out.push_back(problem_by_name(k));
      continue;
    }
    try {
      out.push_back(problem_by_name(s));
    } catch (const std::invalid_argument& e) {
      throw InputError(e.what());
    }
  }
  if (out.empty()) throw InputError("no problem selected");
  return out;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Direct RKFD integrators for y'''' = f(x, y): order verification, integration, "
               "convergence and benchmarking"};
  app.name("rkfd");
  app.require_subcommand(1);
  Config cfg;

  auto* verify = app.add_subcommand("verify", "Evaluate the order conditions of an RKFD tableau");
  verify->add_option("--method", cfg.method, "Builtin name or tableau file")->required();
  verify->add_option("--tolerance", cfg.tolerance, "Absolute residual tolerance")
      ->check(CLI::PositiveNumber)->capture_default_str();
  verify->add_option("--max-order", cfg.max_order, "Highest order evaluated")
      ->check(CLI::Range(1, kMaxConditionOrder))->capture_default_str();
  verify->add_option("--out", cfg.out_path, "Write the report here instead of stdout");

  auto* integ = app.add_subcommand("integrate", "Integrate one problem and dump the trajectory");
  // -h would clash with the --h step option.
  integ->set_help_flag("--help", "Print this help message and exit");
  integ->add_option("--method", cfg.method, "Builtin name or tableau file")->required();
  integ->add_option("--problem", cfg.problem, "p1..p5 or poly0..poly3")->required();
  integ->add_option("--h", cfg.h, "Step size")->check(CLI::PositiveNumber)->required();
  integ->add_option("--stride", cfg.stride, "Keep every n-th grid point")
      ->check(CLI::PositiveNumber)->capture_default_str();
  integ->add_option("--out", cfg.out_path, "Output file");

  auto* conv = app.add_subcommand("converge", "Observed order from step halving or single steps");
  conv->add_option("--method", cfg.method, "Builtin name or tableau file")->required();
  conv->add_option("--problem,--problems", cfg.problems, "Problem selectors (comma separated)")
      ->delimiter(',')->capture_default_str();
  conv->add_option("--h0", cfg.h0, "Coarsest step")->check(CLI::PositiveNumber)->capture_default_str();
  conv->add_option("--levels", cfg.levels, "Number of halvings + 1")
      ->check(CLI::Range(2, 40))->capture_default_str();
  conv->add_flag("--local", cfg.local, "Single-step errors from the initial state");
  conv->add_option("--h-list", cfg.h_list, "Step sizes for --local (decreasing)")
      ->delimiter(',')->check(CLI::PositiveNumber);
  conv->add_option("--slot", cfg.slot, "Slot measured by --local: y, dy, d2y, d3y")
      ->transform(CLI::CheckedTransformer(kSlots));
  conv->add_option("--out", cfg.out_path, "Output file");

  auto* benchc = app.add_subcommand("bench", "Error, fevals and wall time over a method/problem/h grid");
  benchc->add_option("--methods", cfg.methods, "Method selectors (comma separated)")
      ->delimiter(',')->capture_default_str();
  benchc->add_option("--problems", cfg.problems, "Problem selectors (comma separated)")
      ->delimiter(',')->capture_default_str();
  benchc->add_option("--h-list", cfg.h_list, "Step sizes (default 0.1,0.01)")
      ->delimiter(',')->check(CLI::PositiveNumber);
  benchc->add_option("--repeats", cfg.repeats, "Timed repetitions per cell (median reported)")
      ->check(CLI::Range(1, 1000))->capture_default_str();
  benchc->add_option("--out", cfg.out_path, "Output file");
  benchc->add_option("--plot", cfg.plot_path, "Also write a gnuplot work-precision script");

  auto* convert = app.add_subcommand("convert", "Convert an RK tableau to RKFD form");
  convert->add_option("--rk", cfg.rk, "rk4 or an RK tableau file")->required();
  convert->add_option("--out", cfg.out_path, "Destination tableau file")->required();
  convert->add_option("--name", cfg.name, "Name stored in the converted tableau");

  auto* list = app.add_subcommand("list-problems", "List the builtin problems");

  verify->add_option("--format", cfg.format, "table or csv")
      ->transform(CLI::CheckedTransformer(kFormats, CLI::ignore_case));
  integ->add_option("--format", cfg.format, "csv (trajectory) or table (summary)")
      ->transform(CLI::CheckedTransformer(kFormats, CLI::ignore_case));
  conv->add_option("--format", cfg.format, "table or csv")
      ->transform(CLI::CheckedTransformer(kFormats, CLI::ignore_case));
  benchc->add_option("--format", cfg.format, "csv or table")
      ->transform(CLI::CheckedTransformer(kFormats, CLI::ignore_case));

  std::vector<const char*> argv{"rkfd"};
  for (const auto& a : args) argv.push_back(a.c_str());

  // CSV is the natural default for integrate and bench.
  const bool csv_default = !args.empty() && (args.front() == "integrate" || args.front() == "bench");
  cfg.format = csv_default ? Format::csv : Format::table;

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kSuccess : kUsage;
  }

  try {
    if (verify->parsed()) return cmd_verify(cfg, out);
    if (integ->parsed()) return cmd_integrate(cfg, out);
    if (conv->parsed()) return cmd_converge(cfg, out);
    if (benchc->parsed()) return cmd_bench(cfg, out, err);
    if (convert->parsed()) return cmd_convert(cfg, out);
    if (list->parsed()) return cmd_list_problems(out);
  } catch (const DivergenceError& e) {
    err << "error: " << e.what() << "\n";
    return kFailure;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}

}  // namespace rkfd::cli
