#include "lapmeas/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>

#include "lapmeas/error.hpp"
#include "lapmeas/spectral.hpp"

namespace lapmeas {

std::vector<Complex> default_t_grid() {
  std::vector<Complex> grid;
  for (int k = 0; k <= 20; ++k) grid.emplace_back(-1.0 + 0.1 * k, 0.0);
  grid.emplace_back(0.0, 1.0);
  grid.emplace_back(0.0, -1.0);
  return grid;
}

std::vector<int> default_n_schedule() { return {4, 8, 16, 32, 64, 128, 256, 512}; }

ExactExponential exact_exponential(const Matrix& a, const Matrix& b, Complex t) {
  require_same_dim(a, b, "exact_exponential");
  const Matrix x = a * t + b;
  ExactExponential out{matrix_exp(x), 0.0};
  if (t.imag() == 0.0 && is_hermitian(b, 1e-12) && is_hermitian(a, 1e-12)) {
    const auto spec = decompose(x);
    const Matrix spectral = apply_function(spec, [](double lambda) { return Complex{std::exp(lambda), 0.0}; });
    out.crosscheck = operator_norm(spectral - out.value) / std::max(1.0, operator_norm(out.value));
  }
  return out;
}

std::array<Matrix, 3> exponential_derivatives(const Matrix& a, const Matrix& b) {
  require_same_dim(a, b, "exponential_derivatives");
  const std::size_t n = a.dim();
  Matrix block(3 * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      for (std::size_t d = 0; d < 3; ++d) block(d * n + i, d * n + j) = b(i, j);
      block(i, n + j) = a(i, j);
      block(n + i, 2 * n + j) = a(i, j);
    }
  }
  const Matrix e = matrix_exp(block);
  std::array<Matrix, 3> out{Matrix(n), Matrix(n), Matrix(n)};
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      out[0](i, j) = e(i, j);
      out[1](i, j) = e(i, n + j);
      out[2](i, j) = 2.0 * e(i, 2 * n + j);
    }
  }
  return out;
}

double least_squares_log_slope(const std::vector<int>& ns, const std::vector<double>& errors) {
  std::vector<double> xs;
  std::vector<double> ys;
  for (std::size_t k = 0; k < ns.size() && k < errors.size(); ++k) {
    if (errors[k] > 0.0 && std::isfinite(errors[k])) {
      xs.push_back(std::log(static_cast<double>(ns[k])));
      ys.push_back(std::log(errors[k]));
    }
  }
  if (xs.size() < 2) return std::numeric_limits<double>::quiet_NaN();
  const double m = static_cast<double>(xs.size());
  double sx = 0.0, sy = 0.0;
  for (std::size_t k = 0; k < xs.size(); ++k) {
    sx += xs[k];
    sy += ys[k];
  }
  const double mx = sx / m, my = sy / m;
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t k = 0; k < xs.size(); ++k) {
    sxy += (xs[k] - mx) * (ys[k] - my);
    sxx += (xs[k] - mx) * (xs[k] - mx);
  }
  return sxy / sxx;
}

namespace {

void require_schedule(const std::vector<int>& n_schedule) {
  if (n_schedule.empty()) throw InputError("schedule must not be empty");
  for (std::size_t k = 0; k < n_schedule.size(); ++k) {
    if (n_schedule[k] <= 0) throw InputError("schedule entries must be positive");
    if (k > 0 && n_schedule[k] <= n_schedule[k - 1]) {
      throw InputError("schedule must be strictly increasing");
    }
  }
}

}  // namespace

ConvergenceReport convergence_study(const Matrix& a, const Matrix& b,
                                    const std::vector<int>& n_schedule,
                                    const std::vector<Complex>& t_grid,
                                    const ConvergenceOptions& options) {
  require_same_dim(a, b, "convergence_study");
  require_schedule(n_schedule);
  if (t_grid.empty()) throw InputError("convergence_study: empty t grid");
  if (!is_hermitian(a, 1e-9)) throw InputError("convergence_study: a must be Hermitian");

  ConvergenceReport report;
  report.n_schedule = n_schedule;

  std::vector<Matrix> truth;
  for (const auto& t : t_grid) {
    auto exact = exact_exponential(a, b, t);
    report.truth_crosscheck = std::max(report.truth_crosscheck, exact.crosscheck);
    truth.push_back(std::move(exact.value));
  }

  std::optional<SpectralDecomposition> spec;
  std::array<Matrix, 3> derivatives{Matrix(a.dim()), Matrix(a.dim()), Matrix(a.dim())};
  if (options.with_measure) {
    spec = decompose(a, {.cluster_tol = options.approximant.cluster_tol});
    derivatives = exponential_derivatives(a, b);
  }
  std::map<int, DiscreteMatrixMeasure> measures;

  std::vector<double> errors;
  for (int N : n_schedule) {
    ConvergenceRecord rec;
    rec.N = N;
    for (std::size_t k = 0; k < t_grid.size(); ++k) {
      const Matrix approx = lie_approximant(a, b, t_grid[k], N);
      rec.max_transform_err = std::max(rec.max_transform_err, operator_norm(approx - truth[k]));
    }
    if (options.with_measure) {
      ApproximantConfig cfg = options.approximant;
      cfg.N = N;
      auto measure = build_measure_dp(*spec, b, cfg);
      rec.total_variation = total_variation(measure);
      rec.hermitian_dev = hermitian_deviation(measure);
      for (int order = 0; order < 3; ++order) {
        rec.moment_err[order] = operator_norm(moment(measure, order) - derivatives[order]);
      }
      measures.emplace(N, std::move(measure));
    }
    errors.push_back(rec.max_transform_err);
    report.per_N.push_back(rec);
  }

  for (auto& rec : report.per_N) {
    const auto fine = measures.find(2 * rec.N);
    if (fine != measures.end()) {
      rec.cauchy_distance = transform_distance(measures.at(rec.N), fine->second, t_grid);
    }
  }
  report.rate_estimate = least_squares_log_slope(n_schedule, errors);
  return report;
}

StahlReport stahl_trace_study(const Matrix& a, const Matrix& b, const std::vector<int>& n_schedule,
                              const std::vector<Complex>& t_grid, const ApproximantConfig& cfg) {
  require_same_dim(a, b, "stahl_trace_study");
  require_schedule(n_schedule);
  if (t_grid.empty()) throw InputError("stahl_trace_study: empty t grid");
  if (!is_hermitian(b, 1e-9)) throw InputError("stahl_trace_study: b must be Hermitian");
  const auto spec = decompose(a, {.cluster_tol = cfg.cluster_tol});

  std::vector<Complex> truth_traces;
  for (const auto& t : t_grid) truth_traces.push_back(exact_exponential(a, b, t).value.trace());

  StahlReport report;
  for (int N : n_schedule) {
    ApproximantConfig local = cfg;
    local.N = N;
    auto trace = trace_measure(build_measure_dp(spec, b, local));
    double err = 0.0;
    for (std::size_t k = 0; k < t_grid.size(); ++k)
      err = std::max(err, std::abs(trace.laplace_transform(t_grid[k]) - truth_traces[k]));
    const double min_real = trace.min_real_weight();
    report.per_N.push_back({N, std::move(trace), err, min_real});
  }
  return report;
}

Matrix finite_difference_derivative(const Matrix& a, const Matrix& b, double h) {
  if (!(h > 0.0)) throw InputError("finite_difference_derivative: h must be positive");
  const Matrix forward = matrix_exp(a * Complex{h, 0.0} + b);
  const Matrix backward = matrix_exp(a * Complex{-h, 0.0} + b);
  return (forward - backward) * Complex{0.5 / h, 0.0};
}

std::pair<Matrix, Matrix> counterexample_pair() {
  return {Matrix::from_rows({{2.0, 0.0}, {0.0, 0.0}}), Matrix::from_rows({{0.0, 1.0}, {1.0, 0.0}})};
}

std::pair<double, double> counterexample_eigenvalues(double t) {
  const double root = std::sqrt(t * t + 1.0);
  return {t + root, t - root};
}

std::pair<Matrix, Matrix> counterexample_projectors(double t) {
  const double root = std::sqrt(t * t + 1.0);
  const double denom = 2.0 * root;
  const Matrix e1 = Matrix::from_rows({{(root + t) / denom, 1.0 / denom},
                                       {1.0 / denom, (root - t) / denom}});
  const Matrix e2 = Matrix::from_rows({{(root - t) / denom, -1.0 / denom},
                                       {-1.0 / denom, (root + t) / denom}});
  return {e1, e2};
}

Matrix counterexample_D() {
  const double e = std::numbers::e;
  const double off = (e - 1.0 / e) / 2.0;
  return Matrix::from_rows({{e, off}, {off, 1.0 / e}});
}

double counterexample_detD() {
  const double e = std::numbers::e;
  return (6.0 - e * e - 1.0 / (e * e)) / 4.0;
}

namespace {

double eigensystem_residual(const Matrix& a, const Matrix& b) {
  double worst = 0.0;
  const Matrix eye = Matrix::identity(2);
  for (double t : {-2.0, -1.0, -0.5, 0.0, 0.5, 1.0, 2.0}) {
    const Matrix x = a * Complex{t, 0.0} + b;
    const auto [l1, l2] = counterexample_eigenvalues(t);
    const auto [e1, e2] = counterexample_projectors(t);
    const auto spec = decompose(x);
    if (spec.size() != 2) return std::numeric_limits<double>::infinity();

    worst = std::max({worst, std::abs(spec.eigenvalues[1] - l1), std::abs(spec.eigenvalues[0] - l2),
                      operator_norm(spec.projectors[1] - e1), operator_norm(spec.projectors[0] - e2),
                      operator_norm(e1 + e2 - eye), operator_norm(e1 * e2),
                      operator_norm(x * e1 - e1 * Complex{l1, 0.0}),
                      operator_norm(x * e2 - e2 * Complex{l2, 0.0})});
    const Matrix closed = e1 * Complex{std::exp(l1), 0.0} + e2 * Complex{std::exp(l2), 0.0};
    const Matrix series = matrix_exp(x);
    worst = std::max(worst, operator_norm(closed - series) / std::max(1.0, operator_norm(series)));
  }
  return worst;
}

}  // namespace

CounterexampleResult counterexample_demo(const std::vector<int>& n_schedule) {
  require_schedule(n_schedule);
  const auto [a, b] = counterexample_pair();
  const auto spec = decompose(a);

  CounterexampleResult out{counterexample_D(), 0.0, {0.0, 0.0}, {}, true, 0.0, 0.0, std::nullopt};
  out.detD = determinant(out.D).real();
  const auto eig = hermitian_eigen(out.D);
  out.eigs_of_D = {eig.values.front(), eig.values.back()};
  out.psd_verdict = is_psd(out.D);
  out.derivative_mismatch = operator_norm(out.D - exponential_derivatives(a, b)[1]);
  out.eigensystem_residual = eigensystem_residual(a, b);

  ApproximantConfig cfg;
  for (int N : n_schedule) {
    cfg.N = N;
    Matrix m1 = moment(build_measure_dp(spec, b, cfg), 1);
    const double err = operator_norm(m1 - out.D);
    out.moment1_by_N.push_back({N, std::move(m1), err});
  }
  for (int N = 1; N <= 64; ++N) {
    cfg.N = N;
    if (determinant(moment(build_measure_dp(spec, b, cfg), 1)).real() < 0.0) {
      out.negative_det_onset = N;
      break;
    }
  }
  return out;
}

}  // namespace lapmeas
