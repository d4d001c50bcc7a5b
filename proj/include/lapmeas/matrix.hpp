#pragma once

// Dense complex square matrices and the numeric kernels everything else is
// built on: arithmetic, a cyclic Jacobi Hermitian eigensolver, the operator
// norm, the matrix exponential, PSD test and determinant.
//
// Matrices are small (n <= ~64) and stored row-major. All reductions run in
// a fixed left-to-right order so results are bitwise reproducible.

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace lapmeas {

using Complex = std::complex<double>;

class Matrix {
 public:
  // Zero matrix of size n x n; n must be >= 1.
  explicit Matrix(std::size_t n);
  // Row-major entries; entries.size() must equal n*n and all entries finite.
  Matrix(std::size_t n, std::vector<Complex> entries);

  static Matrix zero(std::size_t n) { return Matrix(n); }
  static Matrix identity(std::size_t n);
  static Matrix diagonal(std::span<const double> diag);
  static Matrix from_rows(std::initializer_list<std::initializer_list<Complex>> rows);

  std::size_t dim() const { return n_; }

  const Complex& operator()(std::size_t row, std::size_t col) const {
    return data_[row * n_ + col];
  }
  Complex& operator()(std::size_t row, std::size_t col) { return data_[row * n_ + col]; }

  std::span<const Complex> entries() const { return data_; }

  Matrix adjoint() const;
  Complex trace() const;
  // Largest |entry|; cheap scale for tolerances.
  double max_abs() const;
  bool is_finite() const;
  // (M + M*)/2
  Matrix hermitian_part() const;

  Matrix& operator+=(const Matrix& rhs);
  Matrix& operator-=(const Matrix& rhs);
  Matrix& operator*=(Complex c);

  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  std::size_t n_;
  std::vector<Complex> data_;
};

Matrix operator+(Matrix lhs, const Matrix& rhs);
Matrix operator-(Matrix lhs, const Matrix& rhs);
Matrix operator-(Matrix m);
Matrix operator*(const Matrix& lhs, const Matrix& rhs);
Matrix operator*(Matrix m, Complex c);
Matrix operator*(Complex c, Matrix m);

// Throws InputError unless a and b have the same dimension.
void require_same_dim(const Matrix& a, const Matrix& b, const char* what);

// Largest |entry difference|.
double max_abs_diff(const Matrix& a, const Matrix& b);

double frobenius_norm(const Matrix& s);

// Sum over all entries of |s_pq|.
double entry_abs_sum(const Matrix& s);

struct HermitianEigen {
  std::vector<double> values;  // ascending
  Matrix vectors;              // column k is the eigenvector for values[k]
  int sweeps = 0;
};

// Cyclic complex Jacobi. The input is symmetrized to (h + h*)/2 first; the
// caller is responsible for checking that h is Hermitian enough to mean it.
// Iterates until the off-diagonal Frobenius mass is <= off_tol * ||h||_F.
HermitianEigen hermitian_eigen(const Matrix& h, double off_tol = 1e-14);

// Largest singular value, as sqrt of the top eigenvalue of s* s.
double operator_norm(const Matrix& s);

// Parameters of a scaling-and-squaring evaluation: e^x = (T_k(x / 2^s))^(2^s)
// with T_k the degree-k Taylor polynomial.
struct ExpParams {
  int squarings = 0;
  int terms = 0;
};

// Picks s so that ||x||_F / 2^s <= 0.5 and k so that the Taylor remainder
// after scaling is <= 1e-16.
ExpParams exp_params_for(const Matrix& x);
Matrix matrix_exp(const Matrix& x);
Matrix matrix_exp(const Matrix& x, const ExpParams& params);

// Hermitian within tol * ||s|| in operator norm.
bool is_hermitian(const Matrix& s, double tol);

// Non-negative (positive semidefinite) test. s must be Hermitian within
// tol * ||s|| (InputError otherwise); true iff the smallest eigenvalue of the
// Hermitian part is >= -tol * max(1, ||s||).
bool is_psd(const Matrix& s, double tol = 1e-9);

// Smallest eigenvalue of the Hermitian part of s.
double min_eigenvalue(const Matrix& s);

// LU with partial pivoting; closed form for n <= 2.
Complex determinant(const Matrix& s);

}  // namespace lapmeas
