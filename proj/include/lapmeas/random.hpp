#pragma once

// Seeded random instances for the property suites. Uses mt19937_64 (output
// fully specified by the standard) and its own conversion to doubles so a
// seed produces the same instances on every platform.

#include <cstddef>
#include <cstdint>
#include <random>
#include <vector>

#include "lapmeas/matrix.hpp"

namespace lapmeas {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  // Uniform on [0, 1).
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  // Uniform on {lo, ..., hi}.
  int integer(int lo, int hi);
  // Uniform on the closed unit disc.
  Complex unit_disc();

 private:
  std::mt19937_64 engine_;
};

// Entries uniform on the unit disc.
Matrix random_matrix(std::size_t n, Rng& rng);
// (M + M*)/2 of random_matrix.
Matrix random_hermitian(std::size_t n, Rng& rng);
// Haar-like unitary from Gram-Schmidt on a random complex matrix.
Matrix random_unitary(std::size_t n, Rng& rng);
// U diag(eigenvalues) U* for a random unitary U.
Matrix random_hermitian_with_spectrum(const std::vector<double>& eigenvalues, Rng& rng);
// n eigenvalues in [lo, hi] with exactly `distinct` distinct values, pairwise
// at least min_gap apart; multiplicities are random.
std::vector<double> random_spectrum(std::size_t n, std::size_t distinct, double lo, double hi,
                                    double min_gap, Rng& rng);
// Entries uniform on [0, scale).
Matrix random_nonnegative(std::size_t n, Rng& rng, double scale = 1.0);
// `parts` diagonal matrices with entries in [0, 1] summing to I.
std::vector<Matrix> random_partition_of_unity(std::size_t n, std::size_t parts, Rng& rng);
// Rescale so that the operator norm equals `norm` (zero stays zero).
Matrix with_norm(const Matrix& m, double norm);

}  // namespace lapmeas
