#include "lapmeas/verify.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>

#include "lapmeas/approximant.hpp"
#include "lapmeas/error.hpp"
#include "lapmeas/experiments.hpp"
#include "lapmeas/measure.hpp"
#include "lapmeas/norms.hpp"
#include "lapmeas/random.hpp"
#include "lapmeas/spectral.hpp"

namespace lapmeas {

namespace {

using io::Json;

struct Outcome {
  double margin;
  Json instance;
};

struct Context {
  const VerifyOptions& options;
  Rng& rng;

  std::size_t dim(std::size_t lo = 1) {
    const auto hi = std::max(lo, options.max_dim);
    return static_cast<std::size_t>(rng.integer(static_cast<int>(lo), static_cast<int>(hi)));
  }

  // Hermitian matrix; spectrum gapped by min_gap when requested.
  Matrix hermitian(std::size_t n) {
    if (options.min_gap > 0.0) {
      const double half = std::max(2.0, options.min_gap * static_cast<double>(n));
      return random_hermitian_with_spectrum(random_spectrum(n, n, -half, half, options.min_gap, rng), rng);
    }
    return random_hermitian(n, rng);
  }

  // Hermitian matrix with exactly `distinct` distinct eigenvalues in [-2, 2].
  Matrix hermitian_with_distinct(std::size_t n, std::size_t distinct) {
    const double gap = std::max(0.25, options.min_gap);
    const double half = std::max(2.0, gap * static_cast<double>(distinct));
    return random_hermitian_with_spectrum(random_spectrum(n, distinct, -half, half, gap, rng), rng);
  }

  // Matrix subordinate to the non-negative s: entries s_pq * u * e^{i theta}.
  Matrix subordinate_to(const Matrix& s) {
    Matrix m(s.dim());
    for (std::size_t p = 0; p < s.dim(); ++p)
      for (std::size_t q = 0; q < s.dim(); ++q)
        m(p, q) = s(p, q).real() * rng.uniform() * std::polar(1.0, 2.0 * std::numbers::pi * rng.uniform());
    return m;
  }
};

using LemmaFn = std::function<Outcome(Context&)>;

struct Lemma {
  const char* suite;
  const char* name;
  LemmaFn run;
};

Json mat(const Matrix& m) { return io::matrix_to_json(m); }

double witness_margin(const SubordinationWitness& w, const Matrix& s) {
  return w.slack + kSubordinationTol * std::max(1.0, operator_norm(s));
}

// ---------------------------------------------------------------- norms

Outcome entry_sum_bound(Context& cx) {
  const Matrix s = random_matrix(cx.dim(), cx.rng) * Complex{cx.rng.uniform(0.1, 10.0), 0.0};
  return {entry_abs_sum(s) + 1e-12 - operator_norm(s), {{"S", mat(s)}}};
}

Outcome nonneg_entry_sum(Context& cx) {
  const Matrix s = random_nonnegative(cx.dim(), cx.rng, cx.rng.uniform(0.1, 10.0));
  double sum = 0.0;
  for (const auto& z : s.entries()) sum += z.real();
  return {static_cast<double>(s.dim()) * operator_norm(s) + 1e-10 - sum, {{"S", mat(s)}}};
}

Outcome submultiplicative(Context& cx) {
  const std::size_t n = cx.dim();
  const Matrix a = random_matrix(n, cx.rng);
  const Matrix b = random_matrix(n, cx.rng);
  return {operator_norm(a) * operator_norm(b) + 1e-10 - operator_norm(a * b),
          {{"A", mat(a)}, {"B", mat(b)}}};
}

Outcome inverse_triangle(Context& cx) {
  const std::size_t n = cx.dim();
  const int count = cx.rng.integer(1, 8);
  std::vector<Matrix> parts;
  Json inst = Json::array();
  for (int r = 0; r < count; ++r) {
    parts.push_back(random_nonnegative(n, cx.rng));
    inst.push_back(mat(parts.back()));
  }
  const auto res = inverse_triangle_sum(parts);
  return {res.rhs + 1e-10 - res.lhs, {{"parts", inst}}};
}

Outcome norm_monotone(Context& cx) {
  const Matrix s = random_nonnegative(cx.dim(), cx.rng);
  const Matrix m = cx.subordinate_to(s);
  return {operator_norm(s) + 1e-10 - operator_norm(m), {{"M", mat(m)}, {"S", mat(s)}}};
}

Outcome majorant_norms(Context& cx) {
  const std::size_t n = cx.dim();
  const Matrix b = with_norm(random_matrix(n, cx.rng), cx.rng.uniform(0.0, 2.0));
  const double nb = static_cast<double>(n) * operator_norm(b);
  const Matrix r = majorant_R(b);
  const Matrix closed = rank_one_exp(r);
  const Matrix series = matrix_exp(r);
  const double exp_norm = std::exp(nb);
  const double margin = std::min(
      {1e-12 * std::max(1.0, nb) - std::abs(operator_norm(r) - nb),
       1e-11 * exp_norm - std::abs(operator_norm(closed) - exp_norm),
       1e-11 * operator_norm(series) - operator_norm(closed - series)});
  return {margin, {{"B", mat(b)}}};
}

// -------------------------------------------------------- subordination

Outcome majorant_dominates(Context& cx) {
  const Matrix b = random_matrix(cx.dim(), cx.rng) * Complex{cx.rng.uniform(0.1, 5.0), 0.0};
  const Matrix r = majorant_R(b);
  return {witness_margin(is_subordinate(b, r), r), {{"B", mat(b)}}};
}

Outcome chain_preserves(Context& cx, bool product) {
  const std::size_t n = cx.dim();
  const int count = cx.rng.integer(1, product ? 4 : 5);
  Json psi = Json::array(), phi = Json::array();
  Matrix psi_acc = product ? Matrix::identity(n) : Matrix(n);
  Matrix phi_acc = psi_acc;
  for (int k = 0; k < count; ++k) {
    const Matrix f = random_nonnegative(n, cx.rng);
    const Matrix p = cx.subordinate_to(f);
    if (product) {
      psi_acc = psi_acc * p;
      phi_acc = phi_acc * f;
    } else {
      psi_acc += p;
      phi_acc += f;
    }
    psi.push_back(mat(p));
    phi.push_back(mat(f));
  }
  return {witness_margin(is_subordinate(psi_acc, phi_acc), phi_acc), {{"Psi", psi}, {"Phi", phi}}};
}

Outcome exp_monotone(Context& cx) {
  const Matrix x = random_nonnegative(cx.dim(), cx.rng, cx.rng.uniform(0.1, 1.5));
  const Matrix y = cx.subordinate_to(x);
  const auto w = check_exp_monotone(x, y);
  return {witness_margin(w, matrix_exp(x)), {{"X", mat(x)}, {"Y", mat(y)}}};
}

Outcome sue_majorant(Context& cx) {
  const Matrix b = random_matrix(cx.dim(), cx.rng);
  const int N = cx.rng.integer(1, 16);
  const Complex inv{1.0 / N, 0.0};
  const Matrix x = majorant_R(b) * inv;
  const auto w = check_exp_monotone(x, b * inv);
  return {witness_margin(w, matrix_exp(x)), {{"B", mat(b)}, {"N", N}}};
}

// ---------------------------------------------------------------- bounds

struct FmiInstance {
  std::vector<Matrix> parts;
  Matrix r;
  int N;
  Json json;
};

FmiInstance fmi_instance(Context& cx) {
  const std::size_t n = cx.dim();
  const auto l = static_cast<std::size_t>(cx.rng.integer(1, 3));
  const int N = cx.rng.integer(1, 6);
  auto parts = random_partition_of_unity(n, l, cx.rng);
  Matrix r = random_nonnegative(n, cx.rng);
  Json p = Json::array();
  for (const auto& f : parts) p.push_back(mat(f));
  Json json = {{"F", p}, {"R", mat(r)}, {"N", N}};
  return {std::move(parts), std::move(r), N, std::move(json)};
}

Outcome partition_products(Context& cx) {
  auto inst = fmi_instance(cx);
  const auto res = partition_product_bound(inst.parts, inst.r, inst.N);
  return {res.bound + 1e-8 - res.sum_of_norms, inst.json};
}

Outcome partition_telescoping(Context& cx) {
  auto inst = fmi_instance(cx);
  const auto res = partition_product_bound(inst.parts, inst.r, inst.N);
  return {1e-9 - max_abs_diff(res.product_sum, matrix_exp(inst.r)), inst.json};
}

struct PairInstance {
  Matrix a;
  Matrix b;
  int N;
  Json json;
};

PairInstance pair_instance(Context& cx, int max_N, std::size_t max_distinct) {
  const std::size_t n = cx.dim();
  const auto l = static_cast<std::size_t>(
      cx.rng.integer(1, static_cast<int>(std::min(n, max_distinct))));
  Matrix a = cx.hermitian_with_distinct(n, l);
  Matrix b = random_matrix(n, cx.rng) * Complex{cx.rng.uniform(0.1, 1.5), 0.0};
  const int N = cx.rng.integer(1, max_N);
  Json json = {{"A", mat(a)}, {"B", mat(b)}, {"N", N}};
  return {std::move(a), std::move(b), N, std::move(json)};
}

Outcome tuple_norm_sum(Context& cx) {
  auto inst = pair_instance(cx, 6, 3);
  ApproximantConfig cfg;
  cfg.N = inst.N;
  const auto res = build_measure_bruteforce_with_norms(inst.a, inst.b, cfg);
  return {tv_bound(inst.a.dim(), inst.b) + 1e-8 - res.tuple_norm_sum, inst.json};
}

Outcome variation_below_tuples(Context& cx) {
  auto inst = pair_instance(cx, 6, 3);
  ApproximantConfig cfg;
  cfg.N = inst.N;
  const auto res = build_measure_bruteforce_with_norms(inst.a, inst.b, cfg);
  return {res.tuple_norm_sum + 1e-8 - total_variation(res.measure), inst.json};
}

Outcome variation_bound(Context& cx) {
  auto inst = pair_instance(cx, 32, 3);
  ApproximantConfig cfg;
  cfg.N = inst.N;
  const auto m = build_measure_dp(inst.a, inst.b, cfg);
  return {tv_bound(inst.a.dim(), inst.b) + 1e-8 - total_variation(m), inst.json};
}

// -------------------------------------------------------------- spectral

Outcome projector_algebra(Context& cx) {
  const Matrix a = cx.hermitian(cx.dim());
  const auto d = decompose(a);
  const std::size_t n = a.dim();
  double err = 0.0;
  Matrix total(n);
  for (std::size_t j = 0; j < d.size(); ++j) {
    const Matrix& e = d.projectors[j];
    total += e;
    err = std::max({err, operator_norm(e * e - e), operator_norm(e.adjoint() - e)});
    for (std::size_t k = j + 1; k < d.size(); ++k) err = std::max(err, operator_norm(e * d.projectors[k]));
  }
  err = std::max(err, operator_norm(total - Matrix::identity(n)));
  return {1e-10 - err, {{"A", mat(a)}}};
}

Outcome reconstruction(Context& cx) {
  const Matrix a = cx.hermitian(cx.dim());
  const auto d = decompose(a);
  const Matrix back = apply_function(d, [](double x) { return Complex{x, 0.0}; });
  double eig_err = 0.0;
  for (std::size_t j = 0; j < d.size(); ++j) {
    eig_err = std::max(eig_err, operator_norm(a * d.projectors[j] - d.projectors[j] * Complex{d.eigenvalues[j], 0.0}));
  }
  return {std::min(1e-10 - operator_norm(back - a), 1e-9 * std::max(1.0, operator_norm(a)) - eig_err),
          {{"A", mat(a)}}};
}

Outcome rayleigh(Context& cx) {
  const std::size_t n = cx.dim();
  const Matrix a = cx.hermitian(n);
  const auto d = decompose(a);
  const double slack = 1e-12 * std::max(1.0, operator_norm(a));
  double margin = std::numeric_limits<double>::infinity();
  for (int k = 0; k < 8; ++k) {
    std::vector<Complex> v(n);
    double norm = 0.0;
    for (auto& z : v) norm += std::norm(z = cx.rng.unit_disc());
    if (norm == 0.0) continue;
    Complex q{0.0, 0.0};
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) q += std::conj(v[i]) * a(i, j) * v[j];
    const double rq = q.real() / norm;
    margin = std::min({margin, rq - d.lambda_min() + slack, d.lambda_max() - rq + slack});
  }
  return {margin, {{"A", mat(a)}}};
}

Outcome scaled_exp_check(Context& cx) {
  const Matrix a = cx.hermitian(cx.dim());
  const Complex t = 2.0 * cx.rng.unit_disc();
  const int N = cx.rng.integer(1, 16);
  const Matrix spectral = scaled_exp(decompose(a), t, N);
  const Matrix series = matrix_exp(a * (t / static_cast<double>(N)));
  return {1e-11 - operator_norm(spectral - series),
          {{"A", mat(a)}, {"t", {t.real(), t.imag()}}, {"N", N}}};
}

Outcome exp_inverse(Context& cx) {
  const Matrix x = with_norm(random_matrix(cx.dim(), cx.rng), cx.rng.uniform(0.0, 5.0));
  const Matrix prod = matrix_exp(x) * matrix_exp(-x);
  return {1e-10 - operator_norm(prod - Matrix::identity(x.dim())), {{"X", mat(x)}}};
}

Outcome hermitian_exp(Context& cx) {
  const Matrix x = cx.hermitian(cx.dim());
  const Matrix e = matrix_exp(x);
  const double herm = operator_norm(e - e.adjoint());
  const double margin = 1e-12 * std::max(1.0, operator_norm(e)) - herm;
  return {is_psd(e) ? margin : -1.0, {{"X", mat(x)}}};
}

// ----------------------------------------------------------- approximant

Outcome dp_vs_bruteforce(Context& cx) {
  auto inst = pair_instance(cx, 8, 3);
  ApproximantConfig cfg;
  cfg.N = inst.N;
  const auto dp = build_measure_dp(inst.a, inst.b, cfg);
  const auto bf = build_measure_bruteforce(inst.a, inst.b, cfg);
  if (dp.size() != bf.size()) return {-1.0, inst.json};
  double margin = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < dp.size(); ++k) {
    margin = std::min({margin, 1e-12 - std::abs(dp.atoms()[k].location - bf.atoms()[k].location),
                       1e-10 - max_abs_diff(dp.atoms()[k].weight, bf.atoms()[k].weight)});
  }
  return {margin, inst.json};
}

Outcome transform_identity(Context& cx) {
  auto inst = pair_instance(cx, 32, 3);
  ApproximantConfig cfg;
  cfg.N = inst.N;
  const auto err = verify_transform_identity(inst.a, inst.b, cfg, default_t_grid());
  return {1e-9 - err.max_scaled, inst.json};
}

Outcome support(Context& cx) {
  auto inst = pair_instance(cx, 32, 3);
  ApproximantConfig cfg;
  cfg.N = inst.N;
  const auto spec = decompose(inst.a);
  const auto m = build_measure_dp(spec, inst.b, cfg);
  const auto hull = n_convex_hull(spec.eigenvalues, cfg.N);
  double margin = std::numeric_limits<double>::infinity();
  for (const auto& atom : m.atoms()) {
    const double x = atom.location;
    const auto it = std::lower_bound(hull.begin(), hull.end(), x);
    double nearest = std::numeric_limits<double>::infinity();
    if (it != hull.end()) nearest = std::min(nearest, *it - x);
    if (it != hull.begin()) nearest = std::min(nearest, x - *std::prev(it));
    margin = std::min({margin, 1e-12 - nearest, x - spec.lambda_min() + 1e-12,
                       spec.lambda_max() - x + 1e-12});
  }
  return {margin, inst.json};
}

Outcome total_mass(Context& cx) {
  auto inst = pair_instance(cx, 32, 3);
  ApproximantConfig cfg;
  cfg.N = inst.N;
  const auto m = build_measure_dp(inst.a, inst.b, cfg);
  return {1e-10 - max_abs_diff(moment(m, 0), matrix_exp(inst.b)), inst.json};
}

Outcome commuting(Context& cx) {
  const std::size_t n = cx.dim();
  const auto l = static_cast<std::size_t>(cx.rng.integer(1, static_cast<int>(n)));
  const auto a_spec = random_spectrum(n, l, -1.0, 1.0, 0.1, cx.rng);
  std::vector<double> b_spec(n);
  for (auto& x : b_spec) x = cx.rng.uniform(-1.0, 1.0);
  const Matrix u = random_unitary(n, cx.rng);
  const Matrix a = (u * Matrix::diagonal(a_spec) * u.adjoint()).hermitian_part();
  const Matrix b = (u * Matrix::diagonal(b_spec) * u.adjoint()).hermitian_part();
  const int N = cx.rng.integer(1, 17);
  ApproximantConfig cfg;
  cfg.N = N;
  const auto spec = decompose(a);
  const auto m = build_measure_dp(spec, b, cfg);
  const Matrix eb = matrix_exp(b);

  double err = 0.0;
  for (const auto& atom : m.atoms()) {
    Matrix expected(n);
    for (std::size_t j = 0; j < spec.size(); ++j) {
      if (std::abs(atom.location - spec.eigenvalues[j]) <= 1e-12) {
        expected = spec.projectors[j] * eb * spec.projectors[j];
      }
    }
    err = std::max(err, max_abs_diff(atom.weight, expected));
  }
  for (const auto& t : default_t_grid()) {
    err = std::max(err, operator_norm(laplace_transform(m, t) - matrix_exp(a * t + b)));
  }
  return {1e-10 - err, {{"A", mat(a)}, {"B", mat(b)}, {"N", N}}};
}

const std::vector<Lemma>& lemmas() {
  static const std::vector<Lemma> all = {
      {"norms", "entry-sum bound: ||S|| <= sum |s_pq|", entry_sum_bound},
      {"norms", "non-negative entry sum: sum s_pq <= n ||S||", nonneg_entry_sum},
      {"norms", "submultiplicativity: ||AB|| <= ||A|| ||B||", submultiplicative},
      {"norms", "inverse triangle: sum ||S_r|| <= n ||sum S_r||", inverse_triangle},
      {"norms", "norm monotonicity: M <= S implies ||M|| <= ||S||", norm_monotone},
      {"norms", "majorant norms: ||R(B)|| = n||B||, ||e^R(B)|| = e^(n||B||)", majorant_norms},
      {"subordination", "majorant dominates: B <= R(B)", majorant_dominates},
      {"subordination", "sums preserve subordination", [](Context& cx) { return chain_preserves(cx, false); }},
      {"subordination", "products preserve subordination", [](Context& cx) { return chain_preserves(cx, true); }},
      {"subordination", "exponential monotonicity: Y <= X implies e^Y <= e^X", exp_monotone},
      {"subordination", "step exponential: e^(B/N) <= e^(R(B)/N)", sue_majorant},
      {"bounds", "partition products: sum ||F e^(R/N) ... || <= n ||e^R||", partition_products},
      {"bounds", "partition telescoping: sum of products = e^R", partition_telescoping},
      {"bounds", "tuple norm sum: sum over tuples ||M_k|| <= n e^(n||B||)", tuple_norm_sum},
      {"bounds", "variation below tuple sum: TV(M_N) <= sum over tuples ||M_k||", variation_below_tuples},
      {"bounds", "variation bound: TV(M_N) <= n e^(n||B||)", variation_bound},
      {"spectral", "projector algebra", projector_algebra},
      {"spectral", "reconstruction and A E_j = lambda_j E_j", reconstruction},
      {"spectral", "Rayleigh quotients inside [lambda_min, lambda_max]", rayleigh},
      {"spectral", "scaled_exp agrees with series exponential", scaled_exp_check},
      {"spectral", "e^X e^-X = I", exp_inverse},
      {"spectral", "Hermitian exponential is Hermitian PSD", hermitian_exp},
      {"approximant", "DP equals brute force", dp_vs_bruteforce},
      {"approximant", "transform identity L_N(t) = int e^(t lambda) M_N", transform_identity},
      {"approximant", "support inside the N-convex hull", support},
      {"approximant", "total mass equals e^B", total_mass},
      {"approximant", "commuting exactness", commuting},
  };
  return all;
}

// splitmix64 step: decorrelates per-lemma streams derived from one seed.
std::uint64_t mix(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

}  // namespace

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names = {"norms", "subordination", "bounds", "spectral",
                                                 "approximant", "all"};
  return names;
}

std::vector<LemmaResult> run_verify(const VerifyOptions& options) {
  const auto& names = suite_names();
  if (std::find(names.begin(), names.end(), options.suite) == names.end()) {
    throw InputError("verify: unknown suite \"" + options.suite + "\"");
  }
  if (options.trials <= 0) throw InputError("verify: trials must be positive");
  if (options.max_dim == 0 || options.max_dim > 16) throw InputError("verify: dim must be in [1, 16]");
  if (options.min_gap < 0.0) throw InputError("verify: min-gap must be non-negative");

  std::vector<LemmaResult> results;
  const auto& all = lemmas();
  for (std::size_t index = 0; index < all.size(); ++index) {
    const Lemma& lemma = all[index];
    if (options.suite != "all" && options.suite != lemma.suite) continue;

    Rng rng(mix(options.seed ^ mix(index + 1)));
    Context cx{options, rng};
    LemmaResult res{lemma.suite, lemma.name, options.trials, 0,
                    std::numeric_limits<double>::infinity(), std::nullopt};
    for (int trial = 0; trial < options.trials; ++trial) {
      Outcome out = lemma.run(cx);
      res.worst_margin = std::min(res.worst_margin, out.margin);
      if (!(out.margin >= 0.0)) {
        ++res.failures;
        if (!res.failing_instance) {
          Json inst = Json::object();
          inst["suite"] = lemma.suite;
          inst["lemma"] = lemma.name;
          inst["seed"] = options.seed;
          inst["trial"] = trial;
          inst["margin"] = out.margin;
          inst["instance"] = std::move(out.instance);
          res.failing_instance = std::move(inst);
        }
      }
    }
    results.push_back(std::move(res));
  }
  return results;
}

}  // namespace lapmeas
