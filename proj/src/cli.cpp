#include "lapmeas/cli.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <functional>
#include <optional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "lapmeas/approximant.hpp"
#include "lapmeas/error.hpp"
#include "lapmeas/experiments.hpp"
#include "lapmeas/io.hpp"
#include "lapmeas/measure.hpp"
#include "lapmeas/norms.hpp"
#include "lapmeas/verify.hpp"

namespace lapmeas::cli {

namespace {

using io::format_double;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct MeasureArgs {
  std::string a_path;
  std::string b_path;
  int N = 0;
  std::string method = "dp";
  double cluster_tol = 1e-8;
  double merge_tol = 1e-9;
  std::uint64_t enumeration_guard = 1'000'000;
  std::uint64_t dp_guard = 5'000'000;
  std::string out;
  std::string trace_csv;
};

struct TransformArgs {
  std::string measure_path;
  std::string a_path;
  std::string b_path;
  std::vector<std::string> t_grid;
  std::string out;
};

struct VerifyArgs {
  VerifyOptions options;
  std::string replay_out;
};

struct ConvergeArgs {
  std::string a_path;
  std::string b_path;
  std::string schedule = "4,8,16,32,64,128,256,512";
  std::vector<std::string> t_grid;
  std::string format = "csv";
  std::string out;
  bool transform_only = false;
};

struct CounterexampleArgs {
  std::string schedule = "16,32,64,128,256,512";
  std::string format = "text";
  std::string out;
};

struct PlotArgs {
  std::string measure_path;
  std::string out;
};

// Writes to the file when a path is given, otherwise to the stream.
void emit(const std::string& path, const std::string& contents, std::ostream& out) {
  if (path.empty()) {
    out << contents;
  } else {
    io::write_file(path, contents);
  }
}

std::vector<Complex> grid_or_default(const std::vector<std::string>& specs) {
  return specs.empty() ? default_t_grid() : io::parse_t_grids(specs);
}

std::string summary_line(const DiscreteMatrixMeasure& m) {
  std::ostringstream s;
  s << "atoms=" << m.size();
  if (!m.empty()) {
    const auto [lo, hi] = support_interval(m);
    s << " support=[" << format_double(lo) << "," << format_double(hi) << "]";
  }
  s << " total_variation=" << format_double(total_variation(m));
  return s.str();
}

std::vector<int> read_schedule(const std::string& text, const std::string& command) {
  const auto schedule = io::parse_schedule(text);
  if (schedule.empty()) throw UsageError(command + ": empty --schedule");
  if (std::adjacent_find(schedule.begin(), schedule.end(), std::greater_equal<>()) != schedule.end()) {
    throw UsageError(command + ": --schedule must be strictly increasing");
  }
  return schedule;
}

int cmd_measure(const MeasureArgs& args, std::ostream& out, std::ostream& err) {
  const Matrix a = io::read_matrix(args.a_path);
  const Matrix b = io::read_matrix(args.b_path);
  if (a.dim() != b.dim()) throw InputError("measure: A and B must have the same dimension");

  ApproximantConfig cfg;
  cfg.N = args.N;
  cfg.cluster_tol = args.cluster_tol;
  cfg.merge_tol = args.merge_tol;
  cfg.enumeration_guard = args.enumeration_guard;
  cfg.dp_state_guard = args.dp_guard;

  const auto m = args.method == "bruteforce" ? build_measure_bruteforce(a, b, cfg) : build_measure_dp(a, b, cfg);
  emit(args.out, io::dump_json(io::measure_to_json(m)), out);
  if (!args.trace_csv.empty()) io::write_file(args.trace_csv, io::trace_measure_to_csv(trace_measure(m)));

  std::ostream& summary = args.out.empty() ? err : out;
  summary << summary_line(m) << " tv_bound=" << format_double(tv_bound(a.dim(), b)) << '\n';
  return kSuccess;
}

int cmd_transform(const TransformArgs& args, std::ostream& out, std::ostream& err) {
  const auto m = io::read_measure(args.measure_path);
  if (args.a_path.empty() != args.b_path.empty()) throw UsageError("transform: give both --a and --b or neither");
  std::optional<Matrix> a, b;
  if (!args.a_path.empty()) {
    a = io::read_matrix(args.a_path);
    b = io::read_matrix(args.b_path);
    if (a->dim() != m.dim() || b->dim() != m.dim()) throw InputError("transform: A, B and the measure differ in dimension");
  }
  const auto grid = grid_or_default(args.t_grid);

  std::ostringstream csv;
  csv << "t_re,t_im,err_vs_LN,err_vs_truth\n";
  for (const auto& t : grid) {
    const Matrix value = laplace_transform(m, t);
    double err_ln = std::nan("");
    double err_truth = std::nan("");
    if (a) {
      if (m.meta().N) err_ln = operator_norm(value - lie_approximant(*a, *b, t, *m.meta().N));
      err_truth = operator_norm(value - matrix_exp(*a * t + *b));
    }
    csv << format_double(t.real()) << ',' << format_double(t.imag()) << ',' << format_double(err_ln) << ','
        << format_double(err_truth) << '\n';
  }
  emit(args.out, csv.str(), out);
  std::ostream& summary = args.out.empty() ? err : out;
  summary << summary_line(m);
  if (b) summary << " tv_bound=" << format_double(tv_bound(b->dim(), *b));
  summary << '\n';
  return kSuccess;
}

int cmd_verify(const VerifyArgs& args, std::ostream& out, std::ostream& err) {
  const auto results = run_verify(args.options);
  io::Json failures = io::Json::array();
  for (const auto& r : results) {
    out << (r.passed() ? "PASS" : "FAIL") << "  [" << r.suite << "] " << r.name << "  trials=" << r.trials
        << " failures=" << r.failures << " worst_margin=" << format_double(r.worst_margin) << '\n';
    if (r.failing_instance) failures.push_back(*r.failing_instance);
  }
  if (failures.empty()) {
    out << "all " << results.size() << " properties passed\n";
    return kSuccess;
  }
  if (args.replay_out.empty()) {
    err << io::dump_json(failures);
  } else {
    io::write_file(args.replay_out, io::dump_json(failures));
    err << "failing instances written to " << args.replay_out << '\n';
  }
  return kVerificationFailed;
}

int cmd_converge(const ConvergeArgs& args, std::ostream& out, std::ostream&) {
  const auto schedule = read_schedule(args.schedule, "converge");
  const Matrix a = io::read_matrix(args.a_path);
  const Matrix b = io::read_matrix(args.b_path);
  ConvergenceOptions options;
  options.with_measure = !args.transform_only;
  const auto report = convergence_study(a, b, schedule, grid_or_default(args.t_grid), options);
  emit(args.out, args.format == "json" ? io::dump_json(io::report_to_json(report)) : io::report_to_csv(report), out);
  return kSuccess;
}

std::string matrix_text(const Matrix& m) {
  std::ostringstream s;
  for (std::size_t i = 0; i < m.dim(); ++i) {
    s << "  [";
    for (std::size_t j = 0; j < m.dim(); ++j) {
      if (j) s << ", ";
      s << format_double(m(i, j).real());
      if (m(i, j).imag() != 0.0) s << (m(i, j).imag() < 0 ? "" : "+") << format_double(m(i, j).imag()) << "i";
    }
    s << "]\n";
  }
  return s.str();
}

int cmd_counterexample(const CounterexampleArgs& args, std::ostream& out, std::ostream&) {
  const auto schedule = read_schedule(args.schedule, "counterexample");
  const auto res = counterexample_demo(schedule);

  std::ostringstream s;
  if (args.format == "json") {
    io::Json j = io::Json::object();
    j["D"] = io::matrix_to_json(res.D);
    j["detD"] = res.detD;
    j["detD_closed_form"] = counterexample_detD();
    j["eigs_of_D"] = {res.eigs_of_D.first, res.eigs_of_D.second};
    j["psd_verdict"] = res.psd_verdict;
    j["derivative_mismatch"] = res.derivative_mismatch;
    j["eigensystem_residual"] = res.eigensystem_residual;
    j["negative_det_onset"] = res.negative_det_onset ? io::Json(*res.negative_det_onset) : io::Json(nullptr);
    io::Json rows = io::Json::array();
    for (const auto& r : res.moment1_by_N) {
      io::Json row = io::Json::object();
      row["N"] = r.N;
      row["error"] = r.error;
      row["det_moment1_re"] = determinant(r.moment1).real();
      row["moment1"] = io::matrix_to_json(r.moment1);
      rows.push_back(std::move(row));
    }
    j["moment1_by_N"] = std::move(rows);
    s << io::dump_json(j);
  } else {
    s << "A = diag(2, 0), B = [[0, 1], [1, 0]]\n";
    s << "D = d/dt e^{tA+B} at t = 0:\n" << matrix_text(res.D);
    s << "detD = " << format_double(res.detD) << "  (closed form " << format_double(counterexample_detD()) << ")\n";
    s << "eigenvalues of D = " << format_double(res.eigs_of_D.first) << ", " << format_double(res.eigs_of_D.second) << '\n';
    s << "D positive semidefinite: " << (res.psd_verdict ? "true" : "false") << '\n';
    s << "derivative mismatch = " << format_double(res.derivative_mismatch) << '\n';
    s << "closed-form eigensystem residual = " << format_double(res.eigensystem_residual) << '\n';
    s << "first N with det(moment1(M_N)) < 0: "
      << (res.negative_det_onset ? std::to_string(*res.negative_det_onset) : std::string("none up to 64")) << '\n';
    s << "N,moment1_err,det_moment1_re\n";
    for (const auto& r : res.moment1_by_N) {
      s << r.N << ',' << format_double(r.error) << ',' << format_double(determinant(r.moment1).real()) << '\n';
    }
  }
  emit(args.out, s.str(), out);
  return res.detD < 0.0 ? kSuccess : kVerificationFailed;
}

int cmd_plot(const PlotArgs& args, std::ostream& out, std::ostream&) {
  const auto m = io::read_measure(args.measure_path);
  const std::filesystem::path prefix(args.out);
  const std::filesystem::path dat_path = prefix.string() + ".dat";
  const std::filesystem::path gp_path = prefix.string() + ".gp";

  std::ostringstream dat;
  dat << "# lambda norm trace_re trace_im\n";
  for (const auto& atom : m.atoms()) {
    const Complex tr = atom.weight.trace();
    dat << format_double(atom.location) << ' ' << format_double(operator_norm(atom.weight)) << ' '
        << format_double(tr.real()) << ' ' << format_double(tr.imag()) << '\n';
  }

  double lo = 0.0, hi = 1.0;
  if (!m.empty()) std::tie(lo, hi) = support_interval(m);
  const double pad = std::max(0.05 * (hi - lo), 0.05);
  const std::string dat_name = dat_path.filename().string();

  std::ostringstream gp;
  gp << "# stems of the discrete matrix measure: operator norm and trace of each atom\n";
  gp << "set xlabel 'lambda'\n";
  gp << "set ylabel 'atom weight'\n";
  gp << "set xrange [" << format_double(lo - pad) << ":" << format_double(hi + pad) << "]\n";
  gp << "set xzeroaxis\n";
  gp << "set key top left\n";
  gp << "plot '" << dat_name << "' using 1:2 with impulses lw 2 title 'norm', \\\n";
  gp << "     '" << dat_name << "' using 1:2 with points pt 7 notitle, \\\n";
  gp << "     '" << dat_name << "' using 1:3 with points pt 6 title 'trace (re)'\n";

  io::write_file(dat_path, dat.str());
  io::write_file(gp_path, gp.str());
  out << "wrote " << dat_path.string() << " and " << gp_path.string() << " (" << m.size() << " stems)\n";
  return kSuccess;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Discrete matrix measures for Lie approximants of e^{tA+B}", "lapmeas"};
  app.require_subcommand(1);

  MeasureArgs measure_args;
  auto* measure = app.add_subcommand("measure", "Build the measure M_N and write it as JSON");
  measure->add_option("--a", measure_args.a_path, "Hermitian matrix A (Matrix JSON)")->required();
  measure->add_option("--b", measure_args.b_path, "Matrix B (Matrix JSON)")->required();
  measure->add_option("--n", measure_args.N, "Approximant order N")->required()->check(CLI::PositiveNumber);
  measure->add_option("--method", measure_args.method, "dp or bruteforce")
      ->check(CLI::IsMember({"dp", "bruteforce"}));
  measure->add_option("--cluster-tol", measure_args.cluster_tol, "Eigenvalue clustering tolerance");
  measure->add_option("--merge-tol", measure_args.merge_tol, "Atom location merge tolerance");
  measure->add_option("--guard", measure_args.enumeration_guard, "Brute-force tuple guard");
  measure->add_option("--dp-guard", measure_args.dp_guard, "DP state guard");
  measure->add_option("--out", measure_args.out, "Output Measure JSON (default: stdout)");
  measure->add_option("--trace-csv", measure_args.trace_csv, "Also write the trace measure as CSV");

  TransformArgs transform_args;
  auto* transform = app.add_subcommand("transform", "Evaluate the Laplace transform of a measure on a t grid");
  transform->add_option("--measure", transform_args.measure_path, "Measure JSON")->required();
  transform->add_option("--a", transform_args.a_path, "A for comparison with L_N and e^{tA+B}");
  transform->add_option("--b", transform_args.b_path, "B for comparison with L_N and e^{tA+B}");
  transform->add_option("--t-grid", transform_args.t_grid, "start:stop:step[+ci] (repeatable)");
  transform->add_option("--out", transform_args.out, "Output CSV (default: stdout)");

  VerifyArgs verify_args;
  auto* verify = app.add_subcommand("verify", "Run randomized property suites");
  verify->add_option("--suite", verify_args.options.suite, "norms|subordination|bounds|spectral|approximant|all")
      ->check(CLI::IsMember(suite_names()));
  verify->add_option("--trials", verify_args.options.trials, "Trials per property")->check(CLI::PositiveNumber);
  verify->add_option("--seed", verify_args.options.seed, "Random seed");
  verify->add_option("--dim", verify_args.options.max_dim, "Largest matrix dimension")->check(CLI::Range(1, 16));
  verify->add_option("--min-gap", verify_args.options.min_gap, "Minimum eigenvalue gap of random Hermitian inputs");
  verify->add_option("--replay-out", verify_args.replay_out, "Write failing instances here as JSON");

  ConvergeArgs converge_args;
  auto* converge = app.add_subcommand("converge", "Convergence study of L_N(t) and M_N");
  converge->add_option("--a", converge_args.a_path, "Hermitian matrix A")->required();
  converge->add_option("--b", converge_args.b_path, "Matrix B")->required();
  converge->add_option("--schedule", converge_args.schedule, "Comma-separated increasing N values");
  converge->add_option("--t-grid", converge_args.t_grid, "start:stop:step[+ci] (repeatable)");
  converge->add_option("--format", converge_args.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  converge->add_option("--out", converge_args.out, "Output file (default: stdout)");
  converge->add_flag("--transform-only", converge_args.transform_only, "Skip measure construction");

  CounterexampleArgs counter_args;
  auto* counter = app.add_subcommand("counterexample", "The 2x2 pair whose limit measure is not non-negative");
  counter->add_option("--schedule", counter_args.schedule, "Comma-separated N values");
  counter->add_option("--format", counter_args.format, "text or json")->check(CLI::IsMember({"text", "json"}));
  counter->add_option("--out", counter_args.out, "Output file (default: stdout)");

  PlotArgs plot_args;
  auto* plot = app.add_subcommand("plot", "Write gnuplot data and script for a measure");
  plot->add_option("--measure", plot_args.measure_path, "Measure JSON")->required();
  plot->add_option("--out", plot_args.out, "Output prefix for <out>.dat and <out>.gp")->required();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kSuccess;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }

  try {
    if (*measure) return cmd_measure(measure_args, out, err);
    if (*transform) return cmd_transform(transform_args, out, err);
    if (*verify) return cmd_verify(verify_args, out, err);
    if (*converge) return cmd_converge(converge_args, out, err);
    if (*counter) return cmd_counterexample(counter_args, out, err);
    if (*plot) return cmd_plot(plot_args, out, err);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const ResourceError& e) {
    err << "resource guard: " << e.what() << '\n';
    return kResourceGuard;
  } catch (const InputError& e) {
    err << "invalid input: " << e.what() << '\n';
    return kInvalidInput;
  } catch (const RangeError& e) {
    err << "invalid input: " << e.what() << '\n';
    return kInvalidInput;
  }
  return kUsage;
}

}  // namespace lapmeas::cli
