#include "lapmeas/matrix.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "lapmeas/error.hpp"

namespace lapmeas {

Matrix::Matrix(std::size_t n) : n_(n), data_(n * n, Complex{0.0, 0.0}) {
  if (n == 0) throw InputError("matrix dimension must be >= 1");
}

Matrix::Matrix(std::size_t n, std::vector<Complex> entries) : n_(n), data_(std::move(entries)) {
  if (n == 0) throw InputError("matrix dimension must be >= 1");
  if (data_.size() != n * n) {
    throw InputError("matrix of dimension " + std::to_string(n) + " needs " +
                     std::to_string(n * n) + " entries, got " + std::to_string(data_.size()));
  }
  if (!is_finite()) throw InputError("matrix entries must be finite");
}

Matrix Matrix::identity(std::size_t n) {
  Matrix m(n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

Matrix Matrix::diagonal(std::span<const double> diag) {
  Matrix m(diag.size());
  for (std::size_t i = 0; i < diag.size(); ++i) m(i, i) = diag[i];
  if (!m.is_finite()) throw InputError("matrix entries must be finite");
  return m;
}

Matrix Matrix::from_rows(std::initializer_list<std::initializer_list<Complex>> rows) {
  const std::size_t n = rows.size();
  std::vector<Complex> entries;
  entries.reserve(n * n);
  for (const auto& row : rows) {
    if (row.size() != n) throw InputError("from_rows: matrix must be square");
    entries.insert(entries.end(), row.begin(), row.end());
  }
  return Matrix(n, std::move(entries));
}

Matrix Matrix::adjoint() const {
  Matrix out(n_);
  for (std::size_t i = 0; i < n_; ++i)
    for (std::size_t j = 0; j < n_; ++j) out(j, i) = std::conj((*this)(i, j));
  return out;
}

Complex Matrix::trace() const {
  Complex acc{0.0, 0.0};
  for (std::size_t i = 0; i < n_; ++i) acc += (*this)(i, i);
  return acc;
}

double Matrix::max_abs() const {
  double m = 0.0;
  for (const auto& z : data_) m = std::max(m, std::abs(z));
  return m;
}

bool Matrix::is_finite() const {
  return std::all_of(data_.begin(), data_.end(),
                     [](const Complex& z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); });
}

Matrix Matrix::hermitian_part() const {
  Matrix out(n_);
  for (std::size_t i = 0; i < n_; ++i)
    for (std::size_t j = 0; j < n_; ++j)
      out(i, j) = 0.5 * ((*this)(i, j) + std::conj((*this)(j, i)));
  return out;
}

Matrix& Matrix::operator+=(const Matrix& rhs) {
  require_same_dim(*this, rhs, "add");
  for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += rhs.data_[k];
  return *this;
}

Matrix& Matrix::operator-=(const Matrix& rhs) {
  require_same_dim(*this, rhs, "sub");
  for (std::size_t k = 0; k < data_.size(); ++k) data_[k] -= rhs.data_[k];
  return *this;
}

Matrix& Matrix::operator*=(Complex c) {
  for (auto& z : data_) z *= c;
  return *this;
}

Matrix operator+(Matrix lhs, const Matrix& rhs) { return lhs += rhs; }
Matrix operator-(Matrix lhs, const Matrix& rhs) { return lhs -= rhs; }
Matrix operator-(Matrix m) { return m *= -1.0; }
Matrix operator*(Matrix m, Complex c) { return m *= c; }
Matrix operator*(Complex c, Matrix m) { return m *= c; }

Matrix operator*(const Matrix& lhs, const Matrix& rhs) {
  require_same_dim(lhs, rhs, "mul");
  const std::size_t n = lhs.dim();
  Matrix out(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      Complex acc{0.0, 0.0};
      for (std::size_t k = 0; k < n; ++k) acc += lhs(i, k) * rhs(k, j);
      out(i, j) = acc;
    }
  }
  return out;
}

void require_same_dim(const Matrix& a, const Matrix& b, const char* what) {
  if (a.dim() != b.dim()) {
    throw InputError(std::string(what) + ": dimension mismatch (" + std::to_string(a.dim()) +
                     " vs " + std::to_string(b.dim()) + ")");
  }
}

double max_abs_diff(const Matrix& a, const Matrix& b) {
  require_same_dim(a, b, "max_abs_diff");
  double m = 0.0;
  for (std::size_t k = 0; k < a.entries().size(); ++k)
    m = std::max(m, std::abs(a.entries()[k] - b.entries()[k]));
  return m;
}

double frobenius_norm(const Matrix& s) {
  double acc = 0.0;
  for (const auto& z : s.entries()) acc += std::norm(z);
  return std::sqrt(acc);
}

double entry_abs_sum(const Matrix& s) {
  double acc = 0.0;
  for (const auto& z : s.entries()) acc += std::abs(z);
  return acc;
}

namespace {

double off_diagonal_mass(const Matrix& a) {
  double acc = 0.0;
  for (std::size_t i = 0; i < a.dim(); ++i)
    for (std::size_t j = 0; j < a.dim(); ++j)
      if (i != j) acc += std::norm(a(i, j));
  return std::sqrt(acc);
}

// One complex Jacobi rotation annihilating a(p,q). The rotation is
// U = diag(1, conj(phase)) * [[c, s], [-s, c]] on coordinates (p, q), where
// phase = a_pq / |a_pq|; a <- U* a U and v <- v U.
void jacobi_rotate(Matrix& a, Matrix& v, std::size_t p, std::size_t q) {
  const Complex apq = a(p, q);
  const double beta = std::abs(apq);
  if (beta == 0.0) return;
  const Complex phase = apq / beta;
  const Complex conj_phase = std::conj(phase);
  const double app = a(p, p).real();
  const double aqq = a(q, q).real();

  const double tau = (aqq - app) / (2.0 * beta);
  const double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
  const double c = 1.0 / std::sqrt(1.0 + t * t);
  const double s = t * c;

  const std::size_t n = a.dim();
  for (std::size_t k = 0; k < n; ++k) {
    const Complex akp = a(k, p);
    const Complex akq = a(k, q);
    a(k, p) = c * akp - s * conj_phase * akq;
    a(k, q) = s * akp + c * conj_phase * akq;
  }
  for (std::size_t k = 0; k < n; ++k) {
    const Complex apk = a(p, k);
    const Complex aqk = a(q, k);
    a(p, k) = c * apk - s * phase * aqk;
    a(q, k) = s * apk + c * phase * aqk;
  }
  for (std::size_t k = 0; k < n; ++k) {
    const Complex vkp = v(k, p);
    const Complex vkq = v(k, q);
    v(k, p) = c * vkp - s * conj_phase * vkq;
    v(k, q) = s * vkp + c * conj_phase * vkq;
  }
  a(p, q) = 0.0;
  a(q, p) = 0.0;
  a(p, p) = a(p, p).real();
  a(q, q) = a(q, q).real();
}

}  // namespace

HermitianEigen hermitian_eigen(const Matrix& h, double off_tol) {
  constexpr int kMaxSweeps = 100;
  const std::size_t n = h.dim();
  Matrix a = h.hermitian_part();
  Matrix v = Matrix::identity(n);
  const double scale = frobenius_norm(a);

  int sweeps = 0;
  while (sweeps < kMaxSweeps && off_diagonal_mass(a) > off_tol * scale) {
    for (std::size_t p = 0; p + 1 < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) jacobi_rotate(a, v, p, q);
    ++sweeps;
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t i, std::size_t j) { return a(i, i).real() < a(j, j).real(); });

  HermitianEigen out{std::vector<double>(n), Matrix(n), sweeps};
  for (std::size_t k = 0; k < n; ++k) {
    out.values[k] = a(order[k], order[k]).real();
    for (std::size_t r = 0; r < n; ++r) out.vectors(r, k) = v(r, order[k]);
  }
  return out;
}

double operator_norm(const Matrix& s) {
  if (s.max_abs() == 0.0) return 0.0;
  const auto eig = hermitian_eigen(s.adjoint() * s);
  return std::sqrt(std::max(0.0, eig.values.back()));
}

ExpParams exp_params_for(const Matrix& x) {
  ExpParams params;
  double r = frobenius_norm(x);
  while (r > 0.5) {
    r *= 0.5;
    ++params.squarings;
  }
  // Remainder of the degree-k Taylor polynomial for ||y|| = r <= 0.5 is
  // bounded by r^{k+1}/(k+1)! * 1/(1 - r/(k+2)).
  int k = 1;
  double term = r * r / 2.0;  // r^{k+1}/(k+1)!
  while (term / (1.0 - r / (k + 2)) > 1e-16 && k < 30) {
    ++k;
    term *= r / (k + 1);
  }
  params.terms = k;
  return params;
}

Matrix matrix_exp(const Matrix& x) { return matrix_exp(x, exp_params_for(x)); }

Matrix matrix_exp(const Matrix& x, const ExpParams& params) {
  const std::size_t n = x.dim();
  const Matrix y = x * Complex{std::ldexp(1.0, -params.squarings), 0.0};
  const Matrix eye = Matrix::identity(n);

  // Horner: I + y(I + y/2(I + y/3(...)))
  Matrix p = eye;
  for (int j = params.terms; j >= 1; --j) {
    p = eye + (y * p) * Complex{1.0 / j, 0.0};
  }
  for (int s = 0; s < params.squarings; ++s) p = p * p;
  if (!p.is_finite()) throw RangeError("matrix_exp: result overflows binary64");
  return p;
}

bool is_hermitian(const Matrix& s, double tol) {
  return operator_norm(s - s.adjoint()) <= tol * operator_norm(s);
}

double min_eigenvalue(const Matrix& s) { return hermitian_eigen(s).values.front(); }

bool is_psd(const Matrix& s, double tol) {
  const double norm = operator_norm(s);
  if (operator_norm(s - s.adjoint()) > tol * norm) {
    throw InputError("is_psd: matrix is not Hermitian within tolerance");
  }
  return min_eigenvalue(s) >= -tol * std::max(1.0, norm);
}

Complex determinant(const Matrix& s) {
  const std::size_t n = s.dim();
  if (n == 1) return s(0, 0);
  if (n == 2) return s(0, 0) * s(1, 1) - s(0, 1) * s(1, 0);

  Matrix lu = s;
  Complex det{1.0, 0.0};
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    for (std::size_t r = col + 1; r < n; ++r)
      if (std::abs(lu(r, col)) > std::abs(lu(pivot, col))) pivot = r;
    if (lu(pivot, col) == Complex{0.0, 0.0}) return {0.0, 0.0};
    if (pivot != col) {
      for (std::size_t k = 0; k < n; ++k) std::swap(lu(pivot, k), lu(col, k));
      det = -det;
    }
    det *= lu(col, col);
    for (std::size_t r = col + 1; r < n; ++r) {
      const Complex factor = lu(r, col) / lu(col, col);
      for (std::size_t k = col; k < n; ++k) lu(r, k) -= factor * lu(col, k);
    }
  }
  return det;
}

}  // namespace lapmeas
