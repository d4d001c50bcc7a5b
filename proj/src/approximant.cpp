#include "lapmeas/approximant.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <string>

#include "lapmeas/error.hpp"
#include "lapmeas/norms.hpp"

namespace lapmeas {

int CompositionKey::total() const {
  int acc = 0;
  for (int c : counts) acc += c;
  return acc;
}

double CompositionKey::location(const std::vector<double>& eigenvalues) const {
  double acc = 0.0;
  for (std::size_t j = 0; j < counts.size(); ++j) acc += counts[j] * eigenvalues[j];
  return acc / static_cast<double>(total());
}

void validate(const ApproximantConfig& cfg) {
  if (cfg.N <= 0) throw InputError("approximant: N must be positive");
  if (!(cfg.cluster_tol > 0.0) || !(cfg.merge_tol > 0.0)) {
    throw InputError("approximant: tolerances must be positive");
  }
  if (cfg.enumeration_guard == 0 || cfg.dp_state_guard == 0) {
    throw InputError("approximant: guards must be positive");
  }
}

Matrix lie_approximant(const Matrix& a, const Matrix& b, Complex t, int N) {
  require_same_dim(a, b, "lie_approximant");
  if (N <= 0) throw InputError("lie_approximant: N must be positive");
  if (!is_hermitian(a, 1e-9)) throw InputError("lie_approximant: a must be Hermitian");
  const Complex inv{1.0 / N, 0.0};
  const Matrix step = matrix_exp(a * (t * inv)) * matrix_exp(b * inv);
  Matrix acc = step;
  for (int p = 1; p < N; ++p) acc = acc * step;
  return acc;
}

namespace {

void compositions_into(std::vector<int>& counts, std::size_t slot, int remaining,
                       std::vector<CompositionKey>& out) {
  if (slot + 1 == counts.size()) {
    counts[slot] = remaining;
    out.push_back({counts});
    return;
  }
  for (int c = 0; c <= remaining; ++c) {
    counts[slot] = c;
    compositions_into(counts, slot + 1, remaining - c, out);
  }
}

}  // namespace

std::vector<CompositionKey> compositions(std::size_t parts, int N) {
  if (parts == 0) throw InputError("compositions: need at least one part");
  if (N < 0) throw InputError("compositions: N must be non-negative");
  std::vector<CompositionKey> out;
  std::vector<int> counts(parts, 0);
  compositions_into(counts, 0, N, out);
  return out;
}

std::uint64_t composition_count(std::size_t parts, int N) {
  // C(N + parts - 1, parts - 1) built incrementally; each partial product is
  // itself a binomial coefficient so the division is exact.
  std::uint64_t acc = 1;
  for (std::uint64_t i = 1; i < parts; ++i) {
    const std::uint64_t factor = static_cast<std::uint64_t>(N) + i;
    if (acc > std::numeric_limits<std::uint64_t>::max() / factor) {
      return std::numeric_limits<std::uint64_t>::max();
    }
    acc = acc * factor / i;
  }
  return acc;
}

std::vector<double> n_convex_hull(const std::vector<double>& eigenvalues, int N, double merge_tol) {
  if (eigenvalues.empty()) throw InputError("n_convex_hull: empty spectrum");
  if (N <= 0) throw InputError("n_convex_hull: N must be positive");
  std::vector<double> points;
  for (const auto& key : compositions(eigenvalues.size(), N))
    points.push_back(key.location(eigenvalues));
  std::sort(points.begin(), points.end());

  const double gap = merge_tol * std::max(1.0, points.back() - points.front());
  std::vector<double> hull;
  std::size_t start = 0;
  while (start < points.size()) {
    std::size_t stop = start + 1;
    while (stop < points.size() && points[stop] - points[start] <= gap) ++stop;
    double mean = 0.0;
    for (std::size_t k = start; k < stop; ++k) mean += points[k];
    hull.push_back(mean / static_cast<double>(stop - start));
    start = stop;
  }
  return hull;
}

namespace {

struct Factors {
  SpectralDecomposition spec;
  std::vector<Matrix> steps;  // E_j e^{b/N}
};

Factors make_factors(const SpectralDecomposition& spec, const Matrix& b, int N) {
  require_same_dim(spec.projectors.front(), b, "approximant");
  const Matrix step_exp = matrix_exp(b * Complex{1.0 / N, 0.0});
  Factors f{spec, {}};
  for (const auto& e : spec.projectors) f.steps.push_back(e * step_exp);
  return f;
}

struct TupleEnumerator {
  const Factors& factors;
  int N;
  bool with_norms;
  std::map<double, Matrix> by_location;
  double norm_sum = 0.0;
  std::uint64_t tuples = 0;

  void descend(const Matrix& prefix, double lambda_sum, int level) {
    const auto& lambdas = factors.spec.eigenvalues;
    for (std::size_t j = 0; j < factors.steps.size(); ++j) {
      Matrix next = prefix * factors.steps[j];
      const double sum = lambda_sum + lambdas[j];
      if (level + 1 == N) {
        const double location = sum / static_cast<double>(N);
        if (with_norms) norm_sum += operator_norm(next);
        auto [it, inserted] = by_location.try_emplace(location, next);
        if (!inserted) it->second += next;
        ++tuples;
      } else {
        descend(next, sum, level + 1);
      }
    }
  }
};

}  // namespace

namespace {

BruteForceResult run_bruteforce(const Matrix& a, const Matrix& b, const ApproximantConfig& cfg,
                                bool with_norms) {
  validate(cfg);
  require_same_dim(a, b, "build_measure_bruteforce");
  const auto spec = decompose(a, {.cluster_tol = cfg.cluster_tol});
  const std::uint64_t count = saturating_pow(spec.size(), cfg.N);
  if (count > cfg.enumeration_guard) {
    throw ResourceError("build_measure_bruteforce: " + std::to_string(spec.size()) + "^" +
                        std::to_string(cfg.N) + " tuples exceeds guard " +
                        std::to_string(cfg.enumeration_guard));
  }
  const Factors factors = make_factors(spec, b, cfg.N);
  TupleEnumerator walk{factors, cfg.N, with_norms, {}, 0.0, 0};
  walk.descend(Matrix::identity(a.dim()), 0.0, 0);

  std::vector<Atom> atoms;
  atoms.reserve(walk.by_location.size());
  for (auto& [location, weight] : walk.by_location) atoms.push_back({location, std::move(weight)});
  return {DiscreteMatrixMeasure::from_unsorted(a.dim(), std::move(atoms), cfg.merge_tol,
                                               {cfg.N, "bruteforce"}),
          walk.norm_sum, walk.tuples};
}

}  // namespace

BruteForceResult build_measure_bruteforce_with_norms(const Matrix& a, const Matrix& b,
                                                     const ApproximantConfig& cfg) {
  return run_bruteforce(a, b, cfg, true);
}

DiscreteMatrixMeasure build_measure_bruteforce(const Matrix& a, const Matrix& b,
                                               const ApproximantConfig& cfg) {
  return run_bruteforce(a, b, cfg, false).measure;
}

DiscreteMatrixMeasure build_measure_dp(const SpectralDecomposition& spec, const Matrix& b,
                                       const ApproximantConfig& cfg) {
  validate(cfg);
  const std::size_t n = b.dim();
  const std::size_t l = spec.size();
  const std::uint64_t states = composition_count(l, cfg.N);
  if (states > cfg.dp_state_guard) {
    throw ResourceError("build_measure_dp: " + std::to_string(states) +
                        " composition states exceeds guard " + std::to_string(cfg.dp_state_guard));
  }
  const Factors factors = make_factors(spec, b, cfg.N);

  // Layer p maps each composition of p to the sum of all length-p products
  // E_{k_1} e^{b/N} ... E_{k_p} e^{b/N} with those occurrence counts.
  std::map<CompositionKey, Matrix> previous;
  previous.emplace(CompositionKey{std::vector<int>(l, 0)}, Matrix::identity(n));
  for (int p = 1; p <= cfg.N; ++p) {
    std::map<CompositionKey, Matrix> current;
    for (auto& key : compositions(l, p)) {
      Matrix acc(n);
      CompositionKey pred = key;
      for (std::size_t j = 0; j < l; ++j) {
        if (key.counts[j] == 0) continue;
        --pred.counts[j];
        acc += previous.at(pred) * factors.steps[j];
        ++pred.counts[j];
      }
      current.emplace(std::move(key), std::move(acc));
    }
    previous = std::move(current);
  }

  std::vector<Atom> atoms;
  atoms.reserve(previous.size());
  for (auto& [key, weight] : previous) atoms.push_back({key.location(spec.eigenvalues), weight});
  return DiscreteMatrixMeasure::from_unsorted(n, std::move(atoms), cfg.merge_tol,
                                              {cfg.N, "dp"});
}

DiscreteMatrixMeasure build_measure_dp(const Matrix& a, const Matrix& b,
                                       const ApproximantConfig& cfg) {
  validate(cfg);
  require_same_dim(a, b, "build_measure_dp");
  return build_measure_dp(decompose(a, {.cluster_tol = cfg.cluster_tol}), b, cfg);
}

TransformIdentityError verify_transform_identity(const Matrix& a, const Matrix& b,
                                                 const ApproximantConfig& cfg,
                                                 const std::vector<Complex>& t_grid) {
  if (t_grid.empty()) throw InputError("verify_transform_identity: empty t grid");
  const auto measure = build_measure_dp(a, b, cfg);
  TransformIdentityError err;
  for (const auto& t : t_grid) {
    const Matrix direct = lie_approximant(a, b, t, cfg.N);
    const double diff = operator_norm(laplace_transform(measure, t) - direct);
    err.max_abs = std::max(err.max_abs, diff);
    err.max_scaled = std::max(err.max_scaled, diff / std::max(1.0, operator_norm(direct)));
  }
  return err;
}

}  // namespace lapmeas
