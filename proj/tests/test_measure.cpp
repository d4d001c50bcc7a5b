#include <doctest.h>

#include <cmath>
#include <numbers>

#include "lapmeas/approximant.hpp"
#include "lapmeas/error.hpp"
#include "lapmeas/experiments.hpp"
#include "lapmeas/measure.hpp"
#include "lapmeas/norms.hpp"
#include "lapmeas/random.hpp"
#include "lapmeas/spectral.hpp"
#include "oracles.hpp"

using namespace lapmeas;

namespace {

const double e = std::numbers::e;

// {(lambda_j, E_j w E_j)} for diagonal a, b.
DiscreteMatrixMeasure commuting_measure(const std::vector<double>& a_diag, const Matrix& b) {
  const auto d = decompose(Matrix::diagonal(a_diag));
  std::vector<Atom> atoms;
  const Matrix eb = matrix_exp(b);
  for (std::size_t j = 0; j < d.size(); ++j) atoms.push_back({d.eigenvalues[j], d.projectors[j] * eb * d.projectors[j]});
  return DiscreteMatrixMeasure(a_diag.size(), std::move(atoms));
}

DiscreteMatrixMeasure projector_measure(const Matrix& a) {
  const auto d = decompose(a);
  std::vector<Atom> atoms;
  for (std::size_t j = 0; j < d.size(); ++j) atoms.push_back({d.eigenvalues[j], d.projectors[j]});
  return DiscreteMatrixMeasure(a.dim(), std::move(atoms));
}

}  // namespace

TEST_CASE("construction enforces ordering and dimensions") {
  CHECK_THROWS_AS(DiscreteMatrixMeasure(2, {{1.0, Matrix::identity(2)}, {0.0, Matrix::identity(2)}}), InputError);
  CHECK_THROWS_AS(DiscreteMatrixMeasure(2, {{1.0, Matrix::identity(2)}, {1.0, Matrix::identity(2)}}), InputError);
  CHECK_THROWS_AS(DiscreteMatrixMeasure(2, {{1.0, Matrix::identity(3)}}), InputError);
  CHECK_THROWS_AS(DiscreteMatrixMeasure(2, {{std::nan(""), Matrix::identity(2)}}), InputError);
  CHECK_NOTHROW(DiscreteMatrixMeasure(2, {}));
}

TEST_CASE("from_unsorted merges close locations") {
  const auto m = DiscreteMatrixMeasure::from_unsorted(
      1, {{1.0, Matrix::identity(1)}, {0.0, Matrix::identity(1)}, {1.0 + 1e-12, Matrix::identity(1)}}, 1e-9);
  REQUIRE(m.size() == 2);
  CHECK(m.atoms()[0].location == 0.0);
  CHECK(m.atoms()[1].location == doctest::Approx(1.0));
  CHECK(m.atoms()[1].weight(0, 0) == Complex{2.0, 0.0});
}

TEST_CASE("laplace_transform") {
  Rng rng(83);
  const Matrix w1 = random_matrix(2, rng), w2 = random_matrix(2, rng);
  const DiscreteMatrixMeasure m(2, {{-0.5, w1}, {1.25, w2}});
  CHECK(laplace_transform(m, 0.0) == w1 + w2);
  const Complex t{0.3, -0.7};
  CHECK(max_abs_diff(laplace_transform(m, t), w1 * std::exp(-0.5 * t) + w2 * std::exp(1.25 * t)) < 1e-15);

  // commuting case: transform equals e^{tA} e^{B}
  const std::vector<double> a{1.0, -0.5, 2.0};
  const double bd[] = {0.3, -0.2, 0.7};
  const Matrix b = Matrix::diagonal(bd);
  const auto cm = commuting_measure(a, b);
  for (const auto& tt : default_t_grid()) {
    CHECK(max_abs_diff(laplace_transform(cm, tt), matrix_exp(Matrix::diagonal(a) * tt) * matrix_exp(b)) < 1e-12);
  }

  // M_N at t=1 against the direct product
  const Matrix ha = random_hermitian(3, rng), hb = random_matrix(3, rng);
  for (int N : {1, 3, 7}) {
    const auto mn = build_measure_dp(ha, hb, {.N = N});
    Matrix direct = Matrix::identity(3);
    const Matrix step = oracle::taylor_exp(ha * (1.0 / N)) * oracle::taylor_exp(hb * (1.0 / N));
    for (int k = 0; k < N; ++k) direct = direct * step;
    CHECK(operator_norm(laplace_transform(mn, 1.0) - direct) <= 1e-9);
  }
}

TEST_CASE("laplace_transform overflow guard") {
  const DiscreteMatrixMeasure m(1, {{-10.0, Matrix::identity(1)}, {10.0, Matrix::identity(1)}});
  CHECK_THROWS_AS(laplace_transform(m, 71.0), RangeError);
  CHECK_THROWS_AS(laplace_transform(m, -71.0), RangeError);
  CHECK_NOTHROW(laplace_transform(m, Complex{0.0, 1e3}));
  CHECK_NOTHROW(laplace_transform(m, 69.0));
}

TEST_CASE("total_variation") {
  CHECK(total_variation(DiscreteMatrixMeasure(3, {{0.0, Matrix::identity(3)}})) == doctest::Approx(1.0));
  const std::vector<double> diag{2.0, 0.0, 0.0, -1.0};
  const auto pm = projector_measure(Matrix::diagonal(diag));
  CHECK(total_variation(pm) == doctest::Approx(3.0));
  CHECK(total_variation(pm) <= 4.0);

  Rng rng(89);
  for (int k = 0; k < 20; ++k) {
    const std::size_t n = static_cast<std::size_t>(rng.integer(1, 4));
    const Matrix a = random_hermitian(n, rng), b = random_matrix(n, rng);
    const auto m = build_measure_dp(a, b, {.N = rng.integer(1, 12)});
    CHECK(total_variation(m) <= tv_bound(n, b) + 1e-8);
    for (double s = -3.0; s <= 3.0; s += 0.5) CHECK(operator_norm(laplace_transform(m, Complex{0.0, s})) <= total_variation(m) + 1e-9);
  }
}

TEST_CASE("support_interval") {
  CHECK_THROWS_AS(support_interval(DiscreteMatrixMeasure(2, {})), InputError);
  const DiscreteMatrixMeasure single(1, {{1.5, Matrix::identity(1)}});
  CHECK(support_interval(single) == std::pair{1.5, 1.5});

  const std::vector<double> diag{2.0, 0.0};
  const Matrix b = Matrix::from_rows({{0.0, 1.0}, {1.0, 0.0}});
  const auto m = build_measure_dp(Matrix::diagonal(diag), b, {.N = 9});
  const auto [lo, hi] = support_interval(m);
  CHECK(lo >= 0.0);
  CHECK(hi <= 2.0);
  for (const auto& atom : m.atoms()) {
    const double scaled = atom.location * 9.0 / 2.0;
    CHECK(std::abs(scaled - std::round(scaled)) < 1e-12);
  }
}

TEST_CASE("moments") {
  Rng rng(97);
  const Matrix a = random_hermitian(3, rng), b = random_matrix(3, rng);
  const auto m = build_measure_dp(a, b, {.N = 6});
  CHECK(moment(m, 0) == laplace_transform(m, 0.0));
  CHECK(max_abs_diff(moment(m, 0), matrix_exp(b)) <= 1e-10);

  const DiscreteMatrixMeasure two(1, {{-1.0, Matrix::identity(1) * 2.0}, {3.0, Matrix::identity(1)}});
  CHECK(moment(two, 1)(0, 0) == Complex{1.0, 0.0});
  CHECK(moment(two, 2)(0, 0) == Complex{11.0, 0.0});
  CHECK_THROWS_AS(moment(two, -1), InputError);

  const std::vector<double> ad{1.0, 2.0};
  const Matrix bd = Matrix::diagonal(std::vector<double>{0.5, -0.5});
  CHECK(max_abs_diff(moment(commuting_measure(ad, bd), 0), matrix_exp(bd)) < 1e-14);

  // first moment of the 2x2 example approaches D
  const auto [ca, cb] = counterexample_pair();
  const double e1 = operator_norm(moment(build_measure_dp(ca, cb, {.N = 32}), 1) - counterexample_D());
  const double e2 = operator_norm(moment(build_measure_dp(ca, cb, {.N = 64}), 1) - counterexample_D());
  CHECK(e2 < e1);
}

TEST_CASE("trace_measure") {
  const auto tm = trace_measure(DiscreteMatrixMeasure(3, {{0.0, Matrix::identity(3)}}));
  REQUIRE(tm.size() == 1);
  CHECK(tm.atoms()[0].weight == Complex{3.0, 0.0});

  Rng rng(101);
  for (int k = 0; k < 10; ++k) {
    const Matrix a = random_hermitian(3, rng), b = random_matrix(3, rng);
    const int N = rng.integer(1, 10);
    const auto m = build_measure_dp(a, b, {.N = N});
    const auto mu = trace_measure(m);
    CHECK(std::abs(mu.total_mass() - matrix_exp(b).trace()) <= 1e-10);
    for (const auto& t : default_t_grid()) {
      CHECK(std::abs(mu.laplace_transform(t) - lie_approximant(a, b, t, N).trace()) <= 1e-9);
      CHECK(std::abs(mu.laplace_transform(t) - laplace_transform(m, t).trace()) <= 1e-12);
    }
  }

  const auto [ca, cb] = counterexample_pair();
  const auto coarse = trace_measure(build_measure_dp(ca, cb, {.N = 8}));
  const auto fine = trace_measure(build_measure_dp(ca, cb, {.N = 128}));
  const Complex truth = matrix_exp(ca * 0.5 + cb).trace();
  CHECK(std::abs(fine.laplace_transform(0.5) - truth) < std::abs(coarse.laplace_transform(0.5) - truth));
}

TEST_CASE("non-negativity") {
  const Matrix a = Matrix::diagonal(std::vector<double>{1.0, 2.0, 3.0});
  CHECK(is_nonnegative_measure(projector_measure(a)));
  CHECK_FALSE(is_nonnegative_measure(DiscreteMatrixMeasure(2, {{0.0, counterexample_D()}})));
  Rng rng(103);
  const Matrix bh = random_hermitian(3, rng);
  const Matrix eb = matrix_exp(bh);
  const auto d = decompose(a);
  std::vector<Atom> atoms;
  for (std::size_t j = 0; j < d.size(); ++j) atoms.push_back({d.eigenvalues[j], d.projectors[j] * eb * d.projectors[j]});
  const DiscreteMatrixMeasure cm(3, atoms);
  CHECK(is_nonnegative_measure(cm));
  CHECK(hermitian_deviation(cm) <= 1e-12);
  CHECK_FALSE(is_nonnegative_measure(DiscreteMatrixMeasure(2, {{0.0, Matrix::from_rows({{0.0, 1.0}, {0.0, 0.0}})}})));
}

TEST_CASE("hermitian_deviation") {
  CHECK(hermitian_deviation(projector_measure(Matrix::diagonal(std::vector<double>{0.0, 2.0}))) == 0.0);
  const DiscreteMatrixMeasure m(2, {{0.0, Matrix::from_rows({{0.0, 1.0}, {0.0, 0.0}})}});
  CHECK(hermitian_deviation(m) == doctest::Approx(1.0));
}

TEST_CASE("transform_distance") {
  Rng rng(107);
  const Matrix a = random_hermitian(2, rng), b = random_matrix(2, rng);
  const auto m = build_measure_dp(a, b, {.N = 4});
  CHECK(transform_distance(m, m, default_t_grid()) == 0.0);
  CHECK_THROWS_AS(transform_distance(m, m, {}), InputError);

  const auto m1 = commuting_measure({1.0, -1.0, 0.5}, Matrix::diagonal(std::vector<double>{0.2, 0.1, -0.3}));
  const Matrix ad = Matrix::diagonal(std::vector<double>{1.0, -1.0, 0.5});
  const Matrix bd = Matrix::diagonal(std::vector<double>{0.2, 0.1, -0.3});
  for (int N : {1, 2, 5, 11}) CHECK(transform_distance(m1, build_measure_dp(ad, bd, {.N = N}), default_t_grid()) <= 1e-10);

  const auto [ca, cb] = counterexample_pair();
  std::vector<Complex> real_grid;
  for (int k = 0; k <= 20; ++k) real_grid.emplace_back(-1.0 + 0.1 * k, 0.0);
  double previous = INFINITY;
  for (int N : {8, 16, 32, 64}) {
    const double dist = transform_distance(build_measure_dp(ca, cb, {.N = N}), build_measure_dp(ca, cb, {.N = 2 * N}), real_grid);
    CHECK(dist < previous);
    previous = dist;
  }
}

TEST_CASE("measure identity e^{1.0} for a scalar") {
  const auto m = build_measure_dp(Matrix::from_rows({{1.0}}), Matrix::from_rows({{0.0}}), {.N = 5});
  REQUIRE(m.size() == 1);
  CHECK(std::abs(laplace_transform(m, 1.0)(0, 0) - e) < 1e-15);
}
