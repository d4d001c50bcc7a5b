#pragma once

// Numerical studies on top of the approximant: convergence of L_N(t) and of
// the moments of M_N toward e^{tA+B}, the trace-measure study for Hermitian
// pairs, and the 2x2 example whose limit measure has a first moment that is
// not positive semidefinite.

#include <array>
#include <optional>
#include <utility>
#include <vector>

#include "lapmeas/approximant.hpp"
#include "lapmeas/matrix.hpp"
#include "lapmeas/measure.hpp"

namespace lapmeas {

// 21 real points on [-1, 1] plus t = i and t = -i.
std::vector<Complex> default_t_grid();
// {4, 8, ..., 512}
std::vector<int> default_n_schedule();

struct ExactExponential {
  Matrix value;
  // Distance between the series and spectral routes (0 when only one applies).
  double crosscheck = 0.0;
};

// e^{ta+b} by the series route; when b is Hermitian and t is real also via
// the spectral decomposition of ta+b, recording the discrepancy.
ExactExponential exact_exponential(const Matrix& a, const Matrix& b, Complex t);

// {e^b, d/dt e^{ta+b}|_0, d^2/dt^2 e^{ta+b}|_0} from the exponential of the
// block upper-triangular matrix [[b, a, 0], [0, b, a], [0, 0, b]].
std::array<Matrix, 3> exponential_derivatives(const Matrix& a, const Matrix& b);

struct ConvergenceRecord {
  int N = 0;
  double max_transform_err = 0.0;  // max_t ||L_N(t) - e^{tA+B}||
  double total_variation = 0.0;
  double hermitian_dev = 0.0;
  std::array<double, 3> moment_err{};  // ||moment_k(M_N) - d^k/dt^k e^{tA+B}|_0||
  std::optional<double> cauchy_distance;  // transform_distance(M_N, M_2N) when 2N is scheduled
};

struct ConvergenceReport {
  std::vector<int> n_schedule;
  std::vector<ConvergenceRecord> per_N;
  // Least-squares slope of log(max_transform_err) against log N; NaN with
  // fewer than two positive errors.
  double rate_estimate = 0.0;
  double truth_crosscheck = 0.0;
};

struct ConvergenceOptions {
  ApproximantConfig approximant;  // N is overwritten per schedule entry
  // Without the measure only max_transform_err is filled in.
  bool with_measure = true;
};

// Schedule must be non-empty and strictly increasing; a Hermitian.
ConvergenceReport convergence_study(const Matrix& a, const Matrix& b,
                                    const std::vector<int>& n_schedule,
                                    const std::vector<Complex>& t_grid,
                                    const ConvergenceOptions& options = {});

double least_squares_log_slope(const std::vector<int>& ns, const std::vector<double>& errors);

struct StahlRecord {
  int N = 0;
  TraceMeasure trace;
  double max_scalar_err = 0.0;  // max_t |sum e^{t lambda} mu_N - tr e^{tA+B}|
  double min_atom_real = 0.0;
};

struct StahlReport {
  std::vector<StahlRecord> per_N;
};

// a and b must both be Hermitian.
StahlReport stahl_trace_study(const Matrix& a, const Matrix& b, const std::vector<int>& n_schedule,
                              const std::vector<Complex>& t_grid,
                              const ApproximantConfig& cfg = {});

// Central difference (e^{ha+b} - e^{-ha+b}) / (2h).
Matrix finite_difference_derivative(const Matrix& a, const Matrix& b, double h);

// The 2x2 example: A = diag(2, 0), B = [[0, 1], [1, 0]].
std::pair<Matrix, Matrix> counterexample_pair();
// Closed forms for the eigenvalues t +- sqrt(t^2+1) of tA + B (first is the
// larger) and their spectral projectors.
std::pair<double, double> counterexample_eigenvalues(double t);
std::pair<Matrix, Matrix> counterexample_projectors(double t);
// D = [[e, sinh 1], [sinh 1, 1/e]]
Matrix counterexample_D();
// (6 - e^2 - e^{-2}) / 4
double counterexample_detD();

struct MomentRecord {
  int N = 0;
  Matrix moment1;
  double error = 0.0;  // ||moment1 - D||
};

struct CounterexampleResult {
  Matrix D;
  double detD = 0.0;
  std::pair<double, double> eigs_of_D;  // ascending
  std::vector<MomentRecord> moment1_by_N;
  bool psd_verdict = true;
  // ||D - derivative of e^{tA+B} at 0|| with the derivative from the block exponential.
  double derivative_mismatch = 0.0;
  // Largest residual of the closed-form eigen system against the numeric one
  // at sampled t (eigenvalues, projectors, projector algebra, e^{tA+B}).
  double eigensystem_residual = 0.0;
  // Smallest N >= 1 for which Re det(moment1(M_N)) < 0; nullopt if none up to 64.
  std::optional<int> negative_det_onset;
};

CounterexampleResult counterexample_demo(const std::vector<int>& n_schedule);

}  // namespace lapmeas
