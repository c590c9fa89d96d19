#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "conformal/ifs.hpp"
#include "conformal/polynomial.hpp"

namespace conformal {

// Finitely supported probability measure on the line. Atoms are kept sorted
// by position; construction merges positions that coincide within 1e-14 (the
// only lossy step, bounding growth under repeated convolution).
struct RealMeasure {
  struct Atom {
    double position;
    double weight;
  };
  std::vector<Atom> atoms;

  double total_weight() const;
};

inline constexpr double kMergeTol = 1e-14;

RealMeasure make_measure(std::vector<RealMeasure::Atom> atoms, bool require_normalized = true);
RealMeasure dirac(double x);

// Finitely supported measure on polynomials of degree <= order.
struct PolyMeasure {
  int order = 1;
  struct Atom {
    Polynomial poly;
    double weight;
  };
  std::vector<Atom> atoms;
};

// Atoms (phi_u(0), p_u) over the cut-set at level resolution+guard, where the
// guard ceil(log2 c_bound)+2 keeps each atom within 2^-(resolution+2) of the
// true conditional support.
RealMeasure discretize_self_conformal(const IFS& ifs, int resolution,
                                      std::size_t budget = kDefaultAtomBudget);
int discretization_guard(const IFS& ifs);

// Base-2 Shannon entropy over half-open level-n dyadic cells [m/2^n, (m+1)/2^n).
double dyadic_entropy(const RealMeasure& m, int n);
// H(fine) - H(coarse); for the nested dyadic partitions this equals the sum
// over coarse cells of mass times entropy of the conditioned measure.
double conditional_dyadic_entropy(const RealMeasure& m, int fine, int coarse);

std::int64_t dyadic_cell(double x, int n);
std::map<std::int64_t, double> dyadic_histogram(const RealMeasure& m, int n);

// m conditioned on the level-n dyadic cell of x, renormalized.
RealMeasure component(const RealMeasure& m, double x, int n);

double poly_dyadic_entropy(const PolyMeasure& nu, int n);
PolyMeasure poly_component(const PolyMeasure& nu, const Polynomial& p, int n);

// Push-forward of nu x theta under (f, x) -> f(x).
RealMeasure convolve(const PolyMeasure& nu, const RealMeasure& theta,
                     std::size_t budget = kDefaultAtomBudget);
// Ordinary convolution: push-forward of the product under addition.
RealMeasure real_convolve(const RealMeasure& a, const RealMeasure& b,
                          std::size_t budget = kDefaultAtomBudget);

RealMeasure scale_translate(const RealMeasure& m, double c, double w);
RealMeasure pushforward(const RealMeasure& m, const AnalyticExpr& f);
RealMeasure pushforward(const RealMeasure& m, const Polynomial& p);

// Total weight within the closed ball |pos - x| <= r.
double ball_mass(const RealMeasure& m, double x, double r);

// Entropy of a list of cell masses, accumulated in descending mass order.
double entropy_from_masses(std::vector<double> masses);

}  // namespace conformal
