#include "lapmeas/random.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "lapmeas/error.hpp"

namespace lapmeas {

int Rng::integer(int lo, int hi) {
  const auto span = static_cast<std::uint64_t>(hi - lo) + 1;
  return lo + static_cast<int>(engine_() % span);
}

Complex Rng::unit_disc() {
  const double r = std::sqrt(uniform());
  const double theta = 2.0 * std::numbers::pi * uniform();
  return std::polar(r, theta);
}

Matrix random_matrix(std::size_t n, Rng& rng) {
  std::vector<Complex> entries(n * n);
  for (auto& z : entries) z = rng.unit_disc();
  return Matrix(n, std::move(entries));
}

Matrix random_hermitian(std::size_t n, Rng& rng) { return random_matrix(n, rng).hermitian_part(); }

Matrix random_unitary(std::size_t n, Rng& rng) {
  Matrix q = random_matrix(n, rng);
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t j = 0; j < k; ++j) {
      Complex dot{0.0, 0.0};
      for (std::size_t r = 0; r < n; ++r) dot += std::conj(q(r, j)) * q(r, k);
      for (std::size_t r = 0; r < n; ++r) q(r, k) -= dot * q(r, j);
    }
    double norm = 0.0;
    for (std::size_t r = 0; r < n; ++r) norm += std::norm(q(r, k));
    norm = std::sqrt(norm);
    if (norm < 1e-8) return random_unitary(n, rng);  // degenerate draw
    for (std::size_t r = 0; r < n; ++r) q(r, k) /= norm;
  }
  return q;
}

Matrix random_hermitian_with_spectrum(const std::vector<double>& eigenvalues, Rng& rng) {
  const Matrix u = random_unitary(eigenvalues.size(), rng);
  return (u * Matrix::diagonal(eigenvalues) * u.adjoint()).hermitian_part();
}

std::vector<double> random_spectrum(std::size_t n, std::size_t distinct, double lo, double hi,
                                    double min_gap, Rng& rng) {
  if (distinct == 0 || distinct > n) throw InputError("random_spectrum: need 1 <= distinct <= n");
  if (min_gap * static_cast<double>(distinct - 1) > hi - lo) {
    throw InputError("random_spectrum: interval too short for the requested gap");
  }
  // Draw sorted points in the shortened interval, then spread them by the gap.
  const double slack = (hi - lo) - min_gap * static_cast<double>(distinct - 1);
  std::vector<double> values(distinct);
  for (auto& v : values) v = rng.uniform() * slack;
  std::sort(values.begin(), values.end());
  for (std::size_t k = 0; k < distinct; ++k) values[k] += lo + min_gap * static_cast<double>(k);

  std::vector<double> spectrum(values);
  while (spectrum.size() < n)
    spectrum.push_back(values[static_cast<std::size_t>(rng.integer(0, static_cast<int>(distinct) - 1))]);
  return spectrum;
}

Matrix random_nonnegative(std::size_t n, Rng& rng, double scale) {
  std::vector<Complex> entries(n * n);
  for (auto& z : entries) z = scale * rng.uniform();
  return Matrix(n, std::move(entries));
}

std::vector<Matrix> random_partition_of_unity(std::size_t n, std::size_t parts, Rng& rng) {
  std::vector<Matrix> out(parts, Matrix(n));
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<double> w(parts);
    double total = 0.0;
    for (auto& x : w) total += (x = rng.uniform() + 1e-3);
    // The last part takes the remainder so each diagonal sums to exactly 1.
    double used = 0.0;
    for (std::size_t j = 0; j + 1 < parts; ++j) {
      out[j](i, i) = w[j] / total;
      used += w[j] / total;
    }
    out[parts - 1](i, i) = std::max(0.0, 1.0 - used);
  }
  return out;
}

Matrix with_norm(const Matrix& m, double norm) {
  const double current = operator_norm(m);
  if (current == 0.0) return m;
  return m * Complex{norm / current, 0.0};
}

}  // namespace lapmeas
