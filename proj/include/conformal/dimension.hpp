#pragma once

#include <span>

#include "conformal/measure.hpp"

namespace conformal {

struct DimReport {
  double estimate = 0.0;            // clamped to [0, 1.5]
  double extrapolation_slope = 0.0; // raw regression slope
  std::vector<std::pair<int, double>> levels;  // (n, normalized level value)
};

// Base-2 entropy of a probability vector.
double shannon_entropy(std::span<const double> probs);

// Quadrature of -sum p_i \int log2|phi_i'| against the discretized measure.
double lyapunov(const IFS& ifs, int resolution, std::size_t budget = kDefaultAtomBudget);

struct BirkhoffEstimate {
  double value = 0.0;
  double bias_bound = 0.0;  // log2(c_bound) / word_length
};
BirkhoffEstimate lyapunov_birkhoff(const IFS& ifs, int samples, int word_length,
                                   std::uint64_t seed, int threads = 1);

// Certified bracket from the per-map derivative enclosures.
IntervalBound lyapunov_enclosure(const IFS& ifs);

double theorem_rhs(const IFS& ifs, int resolution, std::size_t budget = kDefaultAtomBudget);

// Least-squares slope of H(D_n) against n over the top half of levels 4..n_max,
// on a discretization whose guard exceeds the finest level by 2.
DimReport entropy_dimension(const IFS& ifs, int n_max, std::size_t budget = kDefaultAtomBudget);

// Slope of log2 ball mass against log2 radius.
double local_dimension(const IFS& ifs, double x, std::span<const double> radii,
                       int resolution, std::size_t budget = kDefaultAtomBudget);

// Counts of level-j dyadic cells meeting the cut-set interval images.
DimReport box_counting(const IFS& ifs, int n, std::size_t budget = kDefaultAtomBudget);

}  // namespace conformal
