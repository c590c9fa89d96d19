#pragma once

#include "conformal/ifs.hpp"

namespace conformal {

struct PressureCurve {
  std::vector<double> t_values;
  std::vector<std::pair<double, double>> estimates;  // (lower, upper) per t
  int n_used = 0;
};

// Level-n bracket for the pressure P(t). The upper value is exact by
// subadditivity; the lower subtracts the distortion gap t*log2(c_bound)/n.
std::pair<double, double> pressure_at(const IFS& ifs, double t, int n,
                                      std::size_t budget = kDefaultAtomBudget,
                                      int threads = 1);

// Root of the level-n upper pressure, bisected to a bracket of width < tol.
double similarity_dimension(const IFS& ifs, double tol, int n,
                            std::size_t budget = kDefaultAtomBudget, int threads = 1);

PressureCurve pressure_curve(const IFS& ifs, double t_min, double t_max, int steps, int n,
                             std::size_t budget = kDefaultAtomBudget, int threads = 1);

// True when every map has a certified vanishing second derivative; affine
// systems get exact n-independent pressure values.
bool is_affine(const IFS& ifs);

// 4 for affine systems, 10 otherwise.
int default_pressure_level(const IFS& ifs);

}  // namespace conformal
