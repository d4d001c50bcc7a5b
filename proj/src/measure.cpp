#include "lapmeas/measure.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "lapmeas/error.hpp"

namespace lapmeas {

DiscreteMatrixMeasure::DiscreteMatrixMeasure(std::size_t n, std::vector<Atom> atoms,
                                             MeasureMeta meta)
    : n_(n), atoms_(std::move(atoms)), meta_(std::move(meta)) {
  if (n == 0) throw InputError("measure dimension must be >= 1");
  for (std::size_t k = 0; k < atoms_.size(); ++k) {
    const Atom& atom = atoms_[k];
    if (!std::isfinite(atom.location)) throw InputError("measure: atom location not finite");
    if (atom.weight.dim() != n) throw InputError("measure: atom weight has wrong dimension");
    if (!atom.weight.is_finite()) throw InputError("measure: atom weight not finite");
    if (k > 0 && !(atoms_[k - 1].location < atom.location)) {
      throw InputError("measure: atom locations must be strictly increasing");
    }
  }
}

DiscreteMatrixMeasure DiscreteMatrixMeasure::from_unsorted(std::size_t n, std::vector<Atom> atoms,
                                                           double merge_tol, MeasureMeta meta) {
  std::stable_sort(atoms.begin(), atoms.end(),
                   [](const Atom& a, const Atom& b) { return a.location < b.location; });
  if (atoms.empty()) return DiscreteMatrixMeasure(n, {}, std::move(meta));

  const double span = atoms.back().location - atoms.front().location;
  const double gap = merge_tol * std::max(1.0, span);

  std::vector<Atom> merged;
  std::size_t start = 0;
  while (start < atoms.size()) {
    std::size_t stop = start + 1;
    while (stop < atoms.size() && atoms[stop].location - atoms[start].location <= gap) ++stop;
    double location = 0.0;
    Matrix weight(n);
    for (std::size_t k = start; k < stop; ++k) {
      location += atoms[k].location;
      weight += atoms[k].weight;
    }
    location /= static_cast<double>(stop - start);
    if (!merged.empty() && !(merged.back().location < location)) {
      // Only reachable when two adjacent groups round to the same mean.
      merged.back().weight += weight;
    } else {
      merged.push_back({location, std::move(weight)});
    }
    start = stop;
  }
  return DiscreteMatrixMeasure(n, std::move(merged), std::move(meta));
}

TraceMeasure::TraceMeasure(std::vector<ScalarAtom> atoms) : atoms_(std::move(atoms)) {
  for (std::size_t k = 0; k < atoms_.size(); ++k) {
    const auto& a = atoms_[k];
    if (!std::isfinite(a.location) || !std::isfinite(a.weight.real()) ||
        !std::isfinite(a.weight.imag())) {
      throw InputError("trace measure: non-finite atom");
    }
    if (k > 0 && !(atoms_[k - 1].location < a.location)) {
      throw InputError("trace measure: atom locations must be strictly increasing");
    }
  }
}

Complex TraceMeasure::total_mass() const {
  Complex acc{0.0, 0.0};
  for (const auto& a : atoms_) acc += a.weight;
  return acc;
}

namespace {

void check_exponent(Complex t, double location) {
  if (t.real() * location > kExpOverflowLimit) {
    std::ostringstream msg;
    msg << "laplace_transform: Re(t)*lambda = " << t.real() * location << " at t = (" << t.real()
        << "," << t.imag() << "), lambda = " << location << " exceeds " << kExpOverflowLimit;
    throw RangeError(msg.str());
  }
}

}  // namespace

Complex TraceMeasure::laplace_transform(Complex t) const {
  Complex acc{0.0, 0.0};
  for (const auto& a : atoms_) {
    check_exponent(t, a.location);
    acc += std::exp(t * a.location) * a.weight;
  }
  return acc;
}

double TraceMeasure::min_real_weight() const {
  double m = std::numeric_limits<double>::infinity();
  for (const auto& a : atoms_) m = std::min(m, a.weight.real());
  return m;
}

Matrix laplace_transform(const DiscreteMatrixMeasure& m, Complex t) {
  Matrix acc(m.dim());
  for (const auto& atom : m.atoms()) {
    check_exponent(t, atom.location);
    acc += atom.weight * std::exp(t * atom.location);
  }
  return acc;
}

double total_variation(const DiscreteMatrixMeasure& m) {
  double acc = 0.0;
  for (const auto& atom : m.atoms()) acc += operator_norm(atom.weight);
  return acc;
}

std::pair<double, double> support_interval(const DiscreteMatrixMeasure& m) {
  if (m.empty()) throw InputError("support_interval: empty measure");
  return {m.atoms().front().location, m.atoms().back().location};
}

Matrix moment(const DiscreteMatrixMeasure& m, int k) {
  if (k < 0) throw InputError("moment: order must be non-negative");
  Matrix acc(m.dim());
  for (const auto& atom : m.atoms()) {
    double power = 1.0;
    for (int i = 0; i < k; ++i) power *= atom.location;
    acc += atom.weight * Complex{power, 0.0};
  }
  return acc;
}

TraceMeasure trace_measure(const DiscreteMatrixMeasure& m) {
  std::vector<ScalarAtom> atoms;
  atoms.reserve(m.size());
  for (const auto& atom : m.atoms()) atoms.push_back({atom.location, atom.weight.trace()});
  return TraceMeasure(std::move(atoms));
}

bool is_nonnegative_measure(const DiscreteMatrixMeasure& m, double tol) {
  for (const auto& atom : m.atoms()) {
    if (!is_hermitian(atom.weight, tol)) return false;
    if (!is_psd(atom.weight, tol)) return false;
  }
  return true;
}

double hermitian_deviation(const DiscreteMatrixMeasure& m) {
  double dev = 0.0;
  for (const auto& atom : m.atoms())
    dev = std::max(dev, operator_norm(atom.weight - atom.weight.adjoint()));
  return dev;
}

double transform_distance(const DiscreteMatrixMeasure& m1, const DiscreteMatrixMeasure& m2,
                          const std::vector<Complex>& t_grid) {
  if (t_grid.empty()) throw InputError("transform_distance: empty t grid");
  if (m1.dim() != m2.dim()) throw InputError("transform_distance: dimension mismatch");
  double dist = 0.0;
  for (const auto& t : t_grid)
    dist = std::max(dist, operator_norm(laplace_transform(m1, t) - laplace_transform(m2, t)));
  return dist;
}

}  // namespace lapmeas
