#include "lapmeas/spectral.hpp"

#include <algorithm>
#include <cmath>

#include "lapmeas/error.hpp"

namespace lapmeas {

SpectralDecomposition decompose(const Matrix& a, const SpectralOptions& options) {
  const std::size_t n = a.dim();
  if (!is_hermitian(a, options.hermitian_tol)) {
    throw InputError("decompose: matrix is not Hermitian within tolerance");
  }
  const auto eig = hermitian_eigen(a);
  const double norm = std::max(std::abs(eig.values.front()), std::abs(eig.values.back()));
  const double gap = options.cluster_tol * std::max(1.0, norm);

  SpectralDecomposition d;
  d.source_dim = n;
  std::size_t start = 0;
  while (start < n) {
    std::size_t stop = start + 1;
    while (stop < n && eig.values[stop] - eig.values[stop - 1] <= gap) ++stop;

    double mean = 0.0;
    Matrix projector(n);
    for (std::size_t k = start; k < stop; ++k) {
      mean += eig.values[k];
      for (std::size_t r = 0; r < n; ++r)
        for (std::size_t c = 0; c < n; ++c)
          projector(r, c) += eig.vectors(r, k) * std::conj(eig.vectors(c, k));
    }
    d.eigenvalues.push_back(mean / static_cast<double>(stop - start));
    d.projectors.push_back(projector.hermitian_part());
    start = stop;
  }
  return d;
}

Matrix apply_function(const SpectralDecomposition& d, const std::function<Complex(double)>& f) {
  Matrix out(d.source_dim);
  for (std::size_t j = 0; j < d.size(); ++j) {
    const Complex value = f(d.eigenvalues[j]);
    if (!std::isfinite(value.real()) || !std::isfinite(value.imag())) {
      throw RangeError("apply_function: f is not finite on the spectrum");
    }
    out += d.projectors[j] * value;
  }
  return out;
}

Matrix scaled_exp(const SpectralDecomposition& d, Complex t, int scale) {
  if (scale <= 0) throw InputError("scaled_exp: scale must be positive");
  const double inv = 1.0 / static_cast<double>(scale);
  return apply_function(d, [&](double lambda) { return std::exp(t * lambda * inv); });
}

}  // namespace lapmeas
