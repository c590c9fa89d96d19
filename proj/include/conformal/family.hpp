#pragma once

#include "conformal/ifs.hpp"

namespace conformal {

// One-parameter analytic family: maps are expressions in (t, x), each a valid
// contraction of [0,1] for every t in [t_lo, t_hi].
struct FamilySpec {
  std::vector<AnalyticExpr> maps;
  double t_lo = 0.0;
  double t_hi = 1.0;
  std::vector<double> probs;  // optional weights carried into instantiations

  int alphabet_size() const { return static_cast<int>(maps.size()); }
};

struct PeriodicWord {
  std::vector<std::uint8_t> block;

  std::uint8_t letter(std::size_t i) const { return block[i % block.size()]; }
  bool operator==(const PeriodicWord&) const = default;
};

PeriodicWord constant_word(std::uint8_t letter);

// Validates the two-variable boxes: contraction and codomain over
// [0,1] x [t_lo, t_hi]. Uniform probabilities when none are given.
FamilySpec make_family(std::vector<AnalyticExpr> maps, double t_lo, double t_hi,
                       std::vector<double> probs = {});

// Certified sup over (t, x) of |d/dx map|; the family truncation rate.
double family_contraction_bound(const FamilySpec& fam);

IFS instantiate(const FamilySpec& fam, double t);

// Difference of depth-fold prefix compositions applied to 0 for the two
// periodic symbol sequences; truncation error at most 2 * rho_max^depth.
double coding_gap(const FamilySpec& fam, const PeriodicWord& w1, const PeriodicWord& w2,
                  double t, int depth);

struct ZeroHit {
  IntervalBound bracket;  // width <= tol
};

// Sign changes of the coding gap over a t grid, refined by bisection; grid
// points where |F| < tol are flagged as touching zeros.
std::vector<ZeroHit> zero_scan(const FamilySpec& fam, const PeriodicWord& w1,
                               const PeriodicWord& w2, int grid, double tol,
                               int depth = 64);

struct CommonFixedPointHit {
  IntervalBound bracket;
  int letter_a = 0;
  int letter_b = 0;
};

// Union over unordered letter pairs of single-letter zero scans, deduplicated
// within tol.
std::vector<CommonFixedPointHit> common_fixed_point_scan(const FamilySpec& fam, int grid,
                                                         double tol, int depth = 64);

}  // namespace conformal
