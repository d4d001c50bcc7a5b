#include <doctest.h>

#include <cmath>
#include <numbers>

#include "lapmeas/error.hpp"
#include "lapmeas/matrix.hpp"
#include "lapmeas/random.hpp"
#include "oracles.hpp"

using namespace lapmeas;

namespace {

const double e = std::numbers::e;

Matrix swap2() { return Matrix::from_rows({{0.0, 1.0}, {1.0, 0.0}}); }

}  // namespace

TEST_CASE("construction validates its input") {
  CHECK_THROWS_AS(Matrix(0), InputError);
  CHECK_THROWS_AS(Matrix(2, std::vector<Complex>(3)), InputError);
  CHECK_THROWS_AS(Matrix(1, {Complex{std::nan(""), 0.0}}), InputError);
  CHECK_THROWS_AS(Matrix::from_rows({{1.0, 2.0}, {3.0}}), InputError);
}

TEST_CASE("arithmetic") {
  CHECK(Matrix::identity(2) * Matrix::identity(2) == Matrix::identity(2));
  CHECK(swap2().adjoint() == swap2());
  CHECK_THROWS_AS(Matrix::identity(2) + Matrix::identity(3), InputError);
  CHECK_THROWS_AS(Matrix::identity(2) * Matrix::identity(3), InputError);

  Rng rng(7);
  for (int k = 0; k < 20; ++k) {
    const Matrix m = random_matrix(4, rng);
    CHECK(m.adjoint().adjoint() == m);
    CHECK(max_abs_diff(m * Matrix::identity(4), m) == 0.0);
    CHECK(oracle::max_entry_diff(m * m.adjoint(), oracle::product(m, m.adjoint())) < 1e-14);
  }
  const Matrix z = Matrix::from_rows({{Complex{1, 2}, 0.0}, {0.0, 0.0}});
  CHECK(z.adjoint()(0, 0) == Complex{1, -2});
  CHECK((Complex{0, 1} * z)(0, 0) == Complex{-2, 1});
}

TEST_CASE("operator norm") {
  for (std::size_t n = 1; n <= 5; ++n) CHECK(operator_norm(Matrix::identity(n)) == doctest::Approx(1.0).epsilon(1e-14));
  Matrix r(2);
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 2; ++j) r(i, j) = 1.0;
  CHECK(operator_norm(r) == doctest::Approx(2.0).epsilon(1e-14));

  Rng rng(11);
  for (int k = 0; k < 25; ++k) {
    const Matrix m = random_matrix(4, rng);
    const double expected = oracle::spectral_norm(m);
    CHECK(std::abs(operator_norm(m) - expected) <= 1e-9 * expected);
  }
}

TEST_CASE("entry_abs_sum bounds the operator norm") {
  CHECK(entry_abs_sum(Matrix::identity(2)) == 2.0);
  CHECK(entry_abs_sum(swap2()) == 2.0);
  Rng rng(3);
  for (int k = 0; k < 200; ++k) {
    const Matrix m = random_matrix(static_cast<std::size_t>(rng.integer(1, 8)), rng);
    CHECK(operator_norm(m) <= entry_abs_sum(m) + 1e-12);
  }
}

TEST_CASE("matrix exponential") {
  CHECK(matrix_exp(Matrix::zero(3)) == Matrix::identity(3));

  const double d[] = {2.0, 0.0};
  const Matrix expd = matrix_exp(Matrix::diagonal(d));
  CHECK(std::abs(expd(0, 0) - e * e) < 1e-13 * e * e);
  CHECK(std::abs(expd(1, 1) - 1.0) < 1e-15);
  CHECK(std::abs(expd(0, 1)) == 0.0);

  const Matrix hyper = Matrix::from_rows({{std::cosh(1.0), std::sinh(1.0)}, {std::sinh(1.0), std::cosh(1.0)}});
  CHECK(operator_norm(matrix_exp(swap2()) - hyper) < 1e-13 * e);

  Rng rng(5);
  for (int k = 0; k < 30; ++k) {
    const Matrix x = with_norm(random_matrix(static_cast<std::size_t>(rng.integer(1, 5)), rng), rng.uniform(0.0, 2.5));
    const Matrix ref = oracle::taylor_exp(x);
    CHECK(operator_norm(matrix_exp(x) - ref) <= 1e-13 * std::exp(operator_norm(x)));
  }
}

TEST_CASE("exponential consistency") {
  Rng rng(17);
  for (int k = 0; k < 100; ++k) {
    const std::size_t n = static_cast<std::size_t>(rng.integer(1, 6));
    const Matrix x = with_norm(random_matrix(n, rng), rng.uniform(0.0, 5.0));
    CHECK(operator_norm(matrix_exp(x) * matrix_exp(-x) - Matrix::identity(n)) <= 1e-10);

    const Matrix h = with_norm(random_hermitian(n, rng), rng.uniform(0.0, 5.0));
    const Matrix eh = matrix_exp(h);
    CHECK(operator_norm(eh - eh.adjoint()) <= 1e-12 * operator_norm(eh));
    CHECK(is_psd(eh.hermitian_part()));
  }
}

TEST_CASE("exponential overflow is a range error") {
  const double d[] = {800.0};
  CHECK_THROWS_AS(matrix_exp(Matrix::diagonal(d)), RangeError);
}

TEST_CASE("is_psd") {
  CHECK(is_psd(Matrix::identity(2)));
  const double s = std::sinh(1.0);
  CHECK_FALSE(is_psd(Matrix::from_rows({{e, s}, {s, 1.0 / e}})));
  const double root = std::sqrt(2.0);
  const Matrix e1 = Matrix::from_rows({{(root + 1) / (2 * root), 1 / (2 * root)}, {1 / (2 * root), (root - 1) / (2 * root)}});
  CHECK(is_psd(e1));
  CHECK_THROWS_AS(is_psd(Matrix::from_rows({{0.0, 1.0}, {0.0, 0.0}})), InputError);
}

TEST_CASE("determinant") {
  CHECK(determinant(Matrix::identity(3)) == Complex{1.0, 0.0});
  const double s = std::sinh(1.0);
  const Complex det = determinant(Matrix::from_rows({{e, s}, {s, 1.0 / e}}));
  CHECK(std::abs(det.real() - (6.0 - e * e - 1.0 / (e * e)) / 4.0) < 1e-15);
  CHECK(det.real() == doctest::Approx(-0.3810978).epsilon(1e-6));
  CHECK(determinant(Matrix::from_rows({{1.0, 1.0}, {1.0, 1.0}})) == Complex{0.0, 0.0});

  Rng rng(23);
  for (int k = 0; k < 20; ++k) {
    const Matrix m = random_matrix(4, rng);
    const auto c = oracle::characteristic_polynomial(m);
    CHECK(std::abs(determinant(m) - c[0]) < 1e-12);  // det(-m) = det(m) for even n
  }
}

TEST_CASE("Hermitian eigensolver") {
  Rng rng(29);
  for (int k = 0; k < 50; ++k) {
    const std::size_t n = static_cast<std::size_t>(rng.integer(1, 7));
    const Matrix h = random_hermitian(n, rng);
    const auto eig = hermitian_eigen(h);
    for (std::size_t j = 0; j < n; ++j) {
      Matrix v(n);
      for (std::size_t i = 0; i < n; ++i) v(i, 0) = eig.vectors(i, j);
      const Matrix residual = h * v - v * Complex{eig.values[j], 0.0};
      CHECK(operator_norm(residual) < 1e-12 * std::max(1.0, operator_norm(h)));
    }
    CHECK(std::is_sorted(eig.values.begin(), eig.values.end()));
    CHECK(std::abs(eig.values.back() - oracle::largest_eigenvalue(h)) < 1e-9 * std::max(1.0, operator_norm(h)));
  }
}
