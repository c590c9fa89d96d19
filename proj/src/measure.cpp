#include "conformal/measure.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

namespace conformal {

double RealMeasure::total_weight() const {
  double s = 0.0;
  for (const auto& a : atoms) s += a.weight;
  return s;
}

RealMeasure make_measure(std::vector<RealMeasure::Atom> atoms, bool require_normalized) {
  for (const auto& a : atoms) {
    if (!std::isfinite(a.position)) fail(Err::InvalidDistribution, "non-finite atom position");
    if (!(a.weight > 0.0)) fail(Err::InvalidDistribution, "atom weights must be positive");
  }
  std::sort(atoms.begin(), atoms.end(), [](const auto& a, const auto& b) {
    if (a.position != b.position) return a.position < b.position;
    return a.weight < b.weight;
  });
  RealMeasure m;
  m.atoms.reserve(atoms.size());
  for (const auto& a : atoms) {
    if (!m.atoms.empty() && a.position - m.atoms.back().position <= kMergeTol) {
      auto& last = m.atoms.back();
      const double w = last.weight + a.weight;
      last.position = (last.position * last.weight + a.position * a.weight) / w;
      last.weight = w;
    } else {
      m.atoms.push_back(a);
    }
  }
  if (require_normalized) {
    const double w = m.total_weight();
    if (std::abs(w - 1.0) > 1e-10)
      fail(Err::InvalidDistribution,
           "measure weights sum to " + std::to_string(w) + ", expected 1");
  }
  return m;
}

RealMeasure dirac(double x) { return make_measure({{x, 1.0}}); }

int discretization_guard(const IFS& ifs) {
  return static_cast<int>(std::ceil(std::log2(ifs.c_bound))) + 2;
}

RealMeasure discretize_self_conformal(const IFS& ifs, int resolution, std::size_t budget) {
  if (resolution < 1) fail(Err::OutOfRange, "resolution must be at least 1");
  const CutSet cs = cut_set(ifs, resolution + discretization_guard(ifs), budget);
  std::vector<RealMeasure::Atom> atoms;
  atoms.reserve(cs.entries.size());
  for (const auto& e : cs.entries) atoms.push_back({e.value_at_zero, e.weight});
  return make_measure(std::move(atoms));
}

std::int64_t dyadic_cell(double x, int n) {
  const double scaled = std::floor(std::ldexp(x, n));
  if (!(std::abs(scaled) < 9.0e18)) fail(Err::OutOfRange, "dyadic cell index overflow");
  return static_cast<std::int64_t>(scaled);
}

std::map<std::int64_t, double> dyadic_histogram(const RealMeasure& m, int n) {
  std::map<std::int64_t, double> h;
  for (const auto& a : m.atoms) h[dyadic_cell(a.position, n)] += a.weight;
  return h;
}

double entropy_from_masses(std::vector<double> masses) {
  double total = 0.0;
  std::sort(masses.begin(), masses.end(), std::greater<double>());
  for (double w : masses) total += w;
  if (total <= 0.0) return 0.0;
  double h = 0.0;
  for (double w : masses) {
    if (w <= 0.0) continue;
    const double p = w / total;
    h -= p * std::log2(p);
  }
  return h;
}

double dyadic_entropy(const RealMeasure& m, int n) {
  if (n < 0) fail(Err::OutOfRange, "level must be nonnegative");
  const auto h = dyadic_histogram(m, n);
  std::vector<double> masses;
  masses.reserve(h.size());
  for (const auto& [cell, w] : h) masses.push_back(w);
  return entropy_from_masses(std::move(masses));
}

double conditional_dyadic_entropy(const RealMeasure& m, int fine, int coarse) {
  if (coarse < 0 || fine < coarse)
    fail(Err::OutOfRange, "need fine >= coarse >= 0");
  return dyadic_entropy(m, fine) - dyadic_entropy(m, coarse);
}

RealMeasure component(const RealMeasure& m, double x, int n) {
  const std::int64_t cell = dyadic_cell(x, n);
  std::vector<RealMeasure::Atom> atoms;
  for (const auto& a : m.atoms)
    if (dyadic_cell(a.position, n) == cell) atoms.push_back(a);
  if (atoms.empty())
    fail(Err::EmptyCell, "level-" + std::to_string(n) + " cell of x has no mass");
  double w = 0.0;
  for (const auto& a : atoms) w += a.weight;
  for (auto& a : atoms) a.weight /= w;
  return make_measure(std::move(atoms));
}

namespace {

std::vector<std::int64_t> poly_cell(const Polynomial& p, int order, int n) {
  std::vector<std::int64_t> key(static_cast<std::size_t>(order) + 1, 0);
  for (std::size_t j = 0; j < key.size(); ++j) {
    const double c = j < p.coeffs.size() ? p.coeffs[j] : 0.0;
    key[j] = dyadic_cell(c, n);
  }
  return key;
}

}  // namespace

double poly_dyadic_entropy(const PolyMeasure& nu, int n) {
  if (n < 0) fail(Err::OutOfRange, "level must be nonnegative");
  std::map<std::vector<std::int64_t>, double> h;
  for (const auto& a : nu.atoms) h[poly_cell(a.poly, nu.order, n)] += a.weight;
  std::vector<double> masses;
  masses.reserve(h.size());
  for (const auto& [cell, w] : h) masses.push_back(w);
  return entropy_from_masses(std::move(masses));
}

PolyMeasure poly_component(const PolyMeasure& nu, const Polynomial& p, int n) {
  const auto key = poly_cell(p, nu.order, n);
  PolyMeasure out;
  out.order = nu.order;
  double w = 0.0;
  for (const auto& a : nu.atoms) {
    if (poly_cell(a.poly, nu.order, n) == key) {
      out.atoms.push_back(a);
      w += a.weight;
    }
  }
  if (out.atoms.empty()) fail(Err::EmptyCell, "polynomial cell has no mass");
  for (auto& a : out.atoms) a.weight /= w;
  return out;
}

RealMeasure convolve(const PolyMeasure& nu, const RealMeasure& theta, std::size_t budget) {
  const std::size_t count = nu.atoms.size() * theta.atoms.size();
  if (count > budget)
    fail(Err::BudgetExceeded,
         "convolution of " + std::to_string(count) + " atom pairs exceeds budget");
  std::vector<RealMeasure::Atom> atoms;
  atoms.reserve(count);
  for (const auto& pa : nu.atoms)
    for (const auto& ta : theta.atoms)
      atoms.push_back({pa.poly(ta.position), pa.weight * ta.weight});
  return make_measure(std::move(atoms));
}

RealMeasure real_convolve(const RealMeasure& a, const RealMeasure& b, std::size_t budget) {
  const std::size_t count = a.atoms.size() * b.atoms.size();
  if (count > budget) fail(Err::BudgetExceeded, "convolution atom count exceeds budget");
  std::vector<RealMeasure::Atom> atoms;
  atoms.reserve(count);
  for (const auto& aa : a.atoms)
    for (const auto& ba : b.atoms)
      atoms.push_back({aa.position + ba.position, aa.weight * ba.weight});
  return make_measure(std::move(atoms));
}

RealMeasure scale_translate(const RealMeasure& m, double c, double w) {
  if (c == 0.0) fail(Err::ZeroScale, "scale factor must be nonzero");
  std::vector<RealMeasure::Atom> atoms;
  atoms.reserve(m.atoms.size());
  for (const auto& a : m.atoms) atoms.push_back({c * a.position + w, a.weight});
  return make_measure(std::move(atoms));
}

RealMeasure pushforward(const RealMeasure& m, const AnalyticExpr& f) {
  std::vector<RealMeasure::Atom> atoms;
  atoms.reserve(m.atoms.size());
  for (const auto& a : m.atoms) atoms.push_back({eval(f, a.position), a.weight});
  return make_measure(std::move(atoms));
}

RealMeasure pushforward(const RealMeasure& m, const Polynomial& p) {
  std::vector<RealMeasure::Atom> atoms;
  atoms.reserve(m.atoms.size());
  for (const auto& a : m.atoms) atoms.push_back({p(a.position), a.weight});
  return make_measure(std::move(atoms));
}

double ball_mass(const RealMeasure& m, double x, double r) {
  if (r < 0.0) fail(Err::OutOfRange, "radius must be nonnegative");
  const auto begin = std::lower_bound(
      m.atoms.begin(), m.atoms.end(), x - r,
      [](const RealMeasure::Atom& a, double v) { return a.position < v; });
  double s = 0.0;
  for (auto it = begin; it != m.atoms.end() && it->position <= x + r; ++it) s += it->weight;
  return s;
}

}  // namespace conformal
