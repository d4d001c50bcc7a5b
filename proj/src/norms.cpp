#include "lapmeas/norms.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "lapmeas/error.hpp"

namespace lapmeas {

bool is_nonnegative_entrywise(const Matrix& s) {
  for (const auto& z : s.entries())
    if (z.imag() != 0.0 || z.real() < 0.0) return false;
  return true;
}

void require_nonnegative(const Matrix& s, const char* what) {
  if (!is_nonnegative_entrywise(s)) {
    throw InputError(std::string(what) + ": matrix must have real non-negative entries");
  }
}

SubordinationWitness is_subordinate(const Matrix& m, const Matrix& s, double tol) {
  require_same_dim(m, s, "is_subordinate");
  require_nonnegative(s, "is_subordinate");
  SubordinationWitness w;
  w.slack = std::numeric_limits<double>::infinity();
  for (std::size_t p = 0; p < m.dim(); ++p) {
    for (std::size_t q = 0; q < m.dim(); ++q) {
      const double slack = s(p, q).real() - std::abs(m(p, q));
      if (slack < w.slack) {
        w.slack = slack;
        w.worst_pair = {p, q};
      }
    }
  }
  w.holds = w.slack >= -tol * std::max(1.0, operator_norm(s));
  return w;
}

Matrix majorant_R(const Matrix& b) {
  const std::size_t n = b.dim();
  const double norm = operator_norm(b);
  return Matrix(n, std::vector<Complex>(n * n, Complex{norm, 0.0}));
}

Matrix rank_one_exp(const Matrix& r) {
  const std::size_t n = r.dim();
  const Complex c = r(0, 0);
  if (c.imag() != 0.0 || c.real() < 0.0) {
    throw InputError("rank_one_exp: entries must be real and non-negative");
  }
  for (const auto& z : r.entries())
    if (z != c) throw InputError("rank_one_exp: matrix must have constant entries");

  const double nc = static_cast<double>(n) * c.real();
  if (nc == 0.0) return Matrix::identity(n);
  // (e^{nc} - 1)/(nc) via expm1 to stay accurate for small nc.
  const double factor = std::expm1(nc) / nc;
  return Matrix::identity(n) + r * Complex{factor, 0.0};
}

SubordinationWitness check_exp_monotone(const Matrix& x, const Matrix& y, double tol) {
  require_nonnegative(x, "check_exp_monotone");
  if (!is_subordinate(y, x, tol).holds) {
    throw InputError("check_exp_monotone: y is not subordinate to x");
  }
  const ExpParams params = exp_params_for(x);
  return is_subordinate(matrix_exp(y, params), matrix_exp(x, params), tol);
}

InverseTriangle inverse_triangle_sum(const std::vector<Matrix>& parts) {
  if (parts.empty()) throw InputError("inverse_triangle_sum: no parts");
  InverseTriangle out;
  Matrix total(parts.front().dim());
  for (const auto& s : parts) {
    require_nonnegative(s, "inverse_triangle_sum");
    total += s;
    out.lhs += operator_norm(s);
  }
  out.rhs = static_cast<double>(total.dim()) * operator_norm(total);
  return out;
}

std::uint64_t saturating_pow(std::uint64_t base, int exponent) {
  std::uint64_t acc = 1;
  for (int i = 0; i < exponent; ++i) {
    if (base != 0 && acc > std::numeric_limits<std::uint64_t>::max() / base) {
      return std::numeric_limits<std::uint64_t>::max();
    }
    acc *= base;
  }
  return acc;
}

namespace {

struct TupleWalk {
  const std::vector<Matrix>& steps;  // F_j e^{R/N}
  int depth;
  PartitionProductBound& out;

  void descend(const Matrix& prefix, int level) {
    for (const auto& step : steps) {
      Matrix next = prefix * step;
      if (level + 1 == depth) {
        out.sum_of_norms += operator_norm(next);
        out.product_sum += next;
        ++out.tuples;
      } else {
        descend(next, level + 1);
      }
    }
  }
};

}  // namespace

PartitionProductBound partition_product_bound(const std::vector<Matrix>& projectors,
                                              const Matrix& r, int N, std::uint64_t guard) {
  if (projectors.empty()) throw InputError("partition_product_bound: no projectors");
  if (N <= 0) throw InputError("partition_product_bound: N must be positive");
  const std::size_t n = r.dim();
  require_nonnegative(r, "partition_product_bound");
  Matrix total(n);
  for (const auto& f : projectors) {
    require_same_dim(f, r, "partition_product_bound");
    require_nonnegative(f, "partition_product_bound");
    total += f;
  }
  if (max_abs_diff(total, Matrix::identity(n)) > 1e-10) {
    throw InputError("partition_product_bound: projectors must sum to the identity");
  }
  const std::uint64_t count = saturating_pow(projectors.size(), N);
  if (count > guard) {
    throw ResourceError("partition_product_bound: " + std::to_string(projectors.size()) + "^" +
                        std::to_string(N) + " tuples exceeds guard " + std::to_string(guard));
  }

  const Matrix step_exp = matrix_exp(r * Complex{1.0 / N, 0.0});
  std::vector<Matrix> steps;
  steps.reserve(projectors.size());
  for (const auto& f : projectors) steps.push_back(f * step_exp);

  PartitionProductBound out{0.0, 0.0, Matrix(n), 0};
  TupleWalk{steps, N, out}.descend(Matrix::identity(n), 0);
  out.bound = static_cast<double>(n) * operator_norm(matrix_exp(r));
  return out;
}

double tv_bound(std::size_t n, const Matrix& b) {
  const double nd = static_cast<double>(n);
  return nd * std::exp(nd * operator_norm(b));
}

}  // namespace lapmeas
