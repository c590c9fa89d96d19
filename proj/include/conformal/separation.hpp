#pragma once

#include "conformal/ifs.hpp"

namespace conformal {

struct PairDistance {
  IntervalBound distance;  // enclosure of the minimal pairwise sup-norm distance
  Word u, v;               // witness pair attaining the upper end
};

struct SeparationRow {
  int n = 0;
  IntervalBound distance;
  Word u, v;
  double rate = 0.0;        // distance.lo^(1/n), conservative
  bool exact_overlap = false;
};

struct SeparationProfile {
  std::vector<SeparationRow> rows;
};

// Enclosure of min over distinct length-n pairs of ||phi_u - phi_v||_[0,1]
// with width <= tol. Candidate pairs are screened by the Chebyshev metric on
// a fixed 33-point grid (a lower bound of the sup norm) and only candidates
// are certified; certify_all skips the screening and certifies every pair.
// Throws ExactOverlapDetected when a certified enclosure pins a pair to 0.
PairDistance min_pairwise_distance(const IFS& ifs, int n, double tol,
                                   std::size_t budget = kDefaultAtomBudget,
                                   int threads = 1, bool certify_all = false);

// Rows for n = 1..n_max; stops at the first exact overlap and flags that row.
SeparationProfile separation_profile(const IFS& ifs, int n_max, double tol,
                                     std::size_t budget = kDefaultAtomBudget,
                                     int threads = 1);

// Certified sup-norm enclosure for one word pair (grid + Lipschitz bound).
IntervalBound certify_word_pair(const IFS& ifs, const Word& u, const Word& v, double tol,
                                std::size_t budget = kDefaultAtomBudget);

}  // namespace conformal
