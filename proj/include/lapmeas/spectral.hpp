#pragma once

// Spectral decomposition of a Hermitian matrix into its distinct eigenvalues
// and orthogonal spectral projectors, and the functional calculus built on it:
// f(A) = sum_j f(lambda_j) E_j.

#include <cstddef>
#include <functional>
#include <vector>

#include "lapmeas/matrix.hpp"

namespace lapmeas {

struct SpectralDecomposition {
  std::vector<double> eigenvalues;  // distinct, strictly increasing
  std::vector<Matrix> projectors;   // projectors[j] belongs to eigenvalues[j]
  std::size_t source_dim = 0;

  std::size_t size() const { return eigenvalues.size(); }
  double lambda_min() const { return eigenvalues.front(); }
  double lambda_max() const { return eigenvalues.back(); }
};

struct SpectralOptions {
  // Eigenvalues closer than cluster_tol * max(1, ||a||) are one eigenvalue.
  double cluster_tol = 1e-8;
  // Admitted ||a - a*|| relative to ||a||.
  double hermitian_tol = 1e-9;
};

// Throws InputError if a is not Hermitian within options.hermitian_tol.
SpectralDecomposition decompose(const Matrix& a, const SpectralOptions& options = {});

Matrix apply_function(const SpectralDecomposition& d, const std::function<Complex(double)>& f);

// e^{t A / scale} = sum_j e^{t lambda_j / scale} E_j
Matrix scaled_exp(const SpectralDecomposition& d, Complex t, int scale);

}  // namespace lapmeas
