#pragma once

// Entrywise subordination M <= S (|m_pq| <= s_pq for a non-negative S) and
// the inequalities that bound the total variation of the approximating
// measures: the rank-one majorant R(B), the inverse triangle inequality for
// non-negative matrices and the partition-of-unity product bound.

#include <cstddef>
#include <cstdint>
#include <utility>
#include <vector>

#include "lapmeas/matrix.hpp"

namespace lapmeas {

struct SubordinationWitness {
  bool holds = false;
  std::pair<std::size_t, std::size_t> worst_pair{0, 0};
  // min over entries of s_pq - |m_pq|
  double slack = 0.0;
};

// Default relative slack for subordination: 1e-12 * max(1, ||S||).
inline constexpr double kSubordinationTol = 1e-12;

// Throws InputError unless every entry of s is real and >= 0.
void require_nonnegative(const Matrix& s, const char* what);
bool is_nonnegative_entrywise(const Matrix& s);

SubordinationWitness is_subordinate(const Matrix& m, const Matrix& s,
                                    double tol = kSubordinationTol);

// n x n matrix with every entry ||b||.
Matrix majorant_R(const Matrix& b);

// Closed-form exponential of a constant-entry matrix r (entries c >= 0):
// e^r = I + (e^{nc} - 1)/(nc) * r.
Matrix rank_one_exp(const Matrix& r);

// Requires x >= 0 entrywise and y <= x; returns the witness for e^y <= e^x.
// Both exponentials use the series parameters chosen for x.
SubordinationWitness check_exp_monotone(const Matrix& x, const Matrix& y,
                                        double tol = kSubordinationTol);

struct InverseTriangle {
  double lhs = 0.0;  // sum_r ||S_r||
  double rhs = 0.0;  // n * ||sum_r S_r||
};

InverseTriangle inverse_triangle_sum(const std::vector<Matrix>& parts);

struct PartitionProductBound {
  double sum_of_norms = 0.0;  // sum over index tuples of ||F_k1 e^{R/N} ... F_kN e^{R/N}||
  double bound = 0.0;         // n * ||e^R||
  Matrix product_sum;         // sum over tuples of the products themselves (telescopes to e^R)
  std::uint64_t tuples = 0;
};

inline constexpr std::uint64_t kDefaultEnumerationGuard = 1'000'000;

// Enumerates all l^N tuples. Requires each F_j >= 0 entrywise with
// sum_j F_j = I within 1e-10, r >= 0 entrywise. ResourceError if
// l^N > guard.
PartitionProductBound partition_product_bound(const std::vector<Matrix>& projectors,
                                              const Matrix& r, int N,
                                              std::uint64_t guard = kDefaultEnumerationGuard);

// n * e^{n ||b||}
double tv_bound(std::size_t n, const Matrix& b);

// l^N with saturation at UINT64_MAX.
std::uint64_t saturating_pow(std::uint64_t base, int exponent);

}  // namespace lapmeas
