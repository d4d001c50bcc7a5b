#pragma once

// Discrete matrix-valued measures on the real line: a finite list of atoms
// (location, matrix weight) sorted by location. Provides the bilateral
// Laplace transform sum e^{t lambda} W, total variation (sum of operator
// norms), moments, the scalar trace measure and positivity diagnostics.

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "lapmeas/matrix.hpp"

namespace lapmeas {

struct Atom {
  double location;
  Matrix weight;
};

struct ScalarAtom {
  double location;
  Complex weight;
};

struct MeasureMeta {
  std::optional<int> N;
  std::string source;
};

class DiscreteMatrixMeasure {
 public:
  // Atoms must be sorted strictly increasing by location, all of dimension n.
  DiscreteMatrixMeasure(std::size_t n, std::vector<Atom> atoms, MeasureMeta meta = {});

  // Sorts atoms and merges locations within merge_tol * max(1, span); each
  // merged group sits at the mean of its member locations and carries the
  // sum of their weights, accumulated in ascending-location order.
  static DiscreteMatrixMeasure from_unsorted(std::size_t n, std::vector<Atom> atoms,
                                             double merge_tol, MeasureMeta meta = {});

  std::size_t dim() const { return n_; }
  std::size_t size() const { return atoms_.size(); }
  bool empty() const { return atoms_.empty(); }
  const std::vector<Atom>& atoms() const { return atoms_; }
  const MeasureMeta& meta() const { return meta_; }

 private:
  std::size_t n_;
  std::vector<Atom> atoms_;
  MeasureMeta meta_;
};

class TraceMeasure {
 public:
  explicit TraceMeasure(std::vector<ScalarAtom> atoms);

  const std::vector<ScalarAtom>& atoms() const { return atoms_; }
  std::size_t size() const { return atoms_.size(); }
  Complex total_mass() const;
  // sum e^{t lambda} mu({lambda})
  Complex laplace_transform(Complex t) const;
  double min_real_weight() const;

 private:
  std::vector<ScalarAtom> atoms_;
};

// Exponents Re(t)*lambda above this overflow binary64.
inline constexpr double kExpOverflowLimit = 700.0;

// RangeError when Re(t)*lambda > kExpOverflowLimit for some atom.
Matrix laplace_transform(const DiscreteMatrixMeasure& m, Complex t);

double total_variation(const DiscreteMatrixMeasure& m);

// (min location, max location); InputError on an empty measure.
std::pair<double, double> support_interval(const DiscreteMatrixMeasure& m);

// sum lambda^k W
Matrix moment(const DiscreteMatrixMeasure& m, int k);

TraceMeasure trace_measure(const DiscreteMatrixMeasure& m);

// Every atom weight is Hermitian and PSD within tol. A weight that is not
// Hermitian is not non-negative.
bool is_nonnegative_measure(const DiscreteMatrixMeasure& m, double tol = 1e-9);

// max over atoms of ||W - W*||
double hermitian_deviation(const DiscreteMatrixMeasure& m);

// max over t_grid of ||L1(t) - L2(t)||
double transform_distance(const DiscreteMatrixMeasure& m1, const DiscreteMatrixMeasure& m2,
                          const std::vector<Complex>& t_grid);

}  // namespace lapmeas
