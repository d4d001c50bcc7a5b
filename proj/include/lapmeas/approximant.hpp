#pragma once

// The N-approximant L_N(t) = (e^{tA/N} e^{B/N})^N for Hermitian A, and the
// discrete matrix measure M_N whose Laplace transform it is.
//
// Substituting e^{tA/N} = sum_j e^{t lambda_j/N} E_j into the product gives
// one term per index tuple (k_1..k_N); the term's exponent only depends on
// how often each eigenvalue index occurs. Two builders are provided:
//   - build_measure_bruteforce walks all l^N tuples (test oracle);
//   - build_measure_dp runs a layered recurrence over composition counts.

#include <cstddef>
#include <cstdint>
#include <vector>

#include "lapmeas/matrix.hpp"
#include "lapmeas/measure.hpp"
#include "lapmeas/spectral.hpp"

namespace lapmeas {

// Occurrence counts (n_1..n_l) of each eigenvalue index; they sum to N.
struct CompositionKey {
  std::vector<int> counts;

  int total() const;
  // sum_j n_j lambda_j / N, accumulated over j ascending.
  double location(const std::vector<double>& eigenvalues) const;

  friend auto operator<=>(const CompositionKey&, const CompositionKey&) = default;
};

struct ApproximantConfig {
  int N = 1;
  double cluster_tol = 1e-8;
  double merge_tol = 1e-9;
  std::uint64_t enumeration_guard = 1'000'000;
  std::uint64_t dp_state_guard = 5'000'000;
};

// Throws InputError for non-positive N or non-positive tolerances.
void validate(const ApproximantConfig& cfg);

// (e^{ta/N} e^{b/N})^N by N-fold sequential multiplication. The exponentials
// come from the series route, not from a spectral decomposition of a.
Matrix lie_approximant(const Matrix& a, const Matrix& b, Complex t, int N);

// Sorted, de-duplicated {sum_j (n_j/N) lambda_j : sum_j n_j = N}.
std::vector<double> n_convex_hull(const std::vector<double>& eigenvalues, int N,
                                  double merge_tol = 1e-9);

// All compositions of N into `parts` non-negative parts, lexicographic order.
std::vector<CompositionKey> compositions(std::size_t parts, int N);

// C(N + l - 1, l - 1), saturating.
std::uint64_t composition_count(std::size_t parts, int N);

struct BruteForceResult {
  DiscreteMatrixMeasure measure;
  double tuple_norm_sum = 0.0;  // sum over tuples of ||M_{k_1..k_N}||
  std::uint64_t tuples = 0;
};

// Requires l^N <= cfg.enumeration_guard (ResourceError otherwise).
DiscreteMatrixMeasure build_measure_bruteforce(const Matrix& a, const Matrix& b,
                                               const ApproximantConfig& cfg);
// Also accumulates the per-tuple operator norms.
BruteForceResult build_measure_bruteforce_with_norms(const Matrix& a, const Matrix& b,
                                                     const ApproximantConfig& cfg);

// Requires C(N + l - 1, l - 1) <= cfg.dp_state_guard (ResourceError otherwise).
DiscreteMatrixMeasure build_measure_dp(const Matrix& a, const Matrix& b,
                                       const ApproximantConfig& cfg);

// Same as build_measure_dp for an already decomposed a.
DiscreteMatrixMeasure build_measure_dp(const SpectralDecomposition& spec, const Matrix& b,
                                       const ApproximantConfig& cfg);

struct TransformIdentityError {
  double max_abs = 0.0;     // max_t ||laplace_transform(M_N, t) - L_N(t)||
  double max_scaled = 0.0;  // max_t of the same divided by max(1, ||L_N(t)||)
};

// Builds M_N with the DP and compares its transform with L_N over the grid.
TransformIdentityError verify_transform_identity(const Matrix& a, const Matrix& b, const ApproximantConfig& cfg,
                                 const std::vector<Complex>& t_grid);

}  // namespace lapmeas
