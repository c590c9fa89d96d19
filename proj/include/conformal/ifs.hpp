#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "conformal/expr.hpp"
#include "conformal/polynomial.hpp"

namespace conformal {

inline constexpr std::size_t kDefaultAtomBudget = 5'000'000;

// Finite word over the alphabet {0, ..., m-1}; the word i1...in denotes the
// composition map_{i1} ∘ ... ∘ map_{in}.
struct Word {
  std::vector<std::uint8_t> letters;

  std::size_t size() const { return letters.size(); }
  bool empty() const { return letters.empty(); }
  bool operator==(const Word&) const = default;
  auto operator<=>(const Word&) const = default;
};

std::string to_string(const Word& w, int alphabet_size = 10);
Word word_from_string(const std::string& s, int alphabet_size);

struct DistortionData {
  double c_emp = 1.0;    // largest sampled derivative ratio
  double c_bound = 1.0;  // certified telescoping bound, never below c_emp
};

// Validated conformal iterated function system on [0,1].
struct IFS {
  int alphabet_size = 0;
  std::vector<AnalyticExpr> maps;
  std::vector<double> probs;
  std::vector<IntervalBound> deriv_bounds;  // signed enclosure of each map derivative
  std::vector<IntervalBound> range_bounds;  // enclosure of each map image, within [0,1]
  double rho_min = 0.0;  // certified min of |map'| over maps and [0,1]
  double rho_max = 0.0;  // certified max, < 1
  double c_bound = 1.0;  // distortion constant used in guards and remainders
  bool ssc = false;      // range enclosures pairwise disjoint
  // Set when all maps share a fixed point (warning-level degeneracy).
  std::optional<double> common_fixed_point;
};

struct CutSetEntry {
  Word word;
  double weight;          // p_u
  double deriv_at_zero;   // |phi_u'(0)|
  double value_at_zero;   // phi_u(0)
};

// Minimal prefix-free family where |phi'(0)| first drops to 2^-n or below.
struct CutSet {
  int n = 0;
  std::vector<CutSetEntry> entries;
};

IFS validate_ifs(std::vector<AnalyticExpr> maps, std::vector<double> probs);

double word_eval(const IFS& ifs, const Word& u, double x);
// (phi_u(x), phi_u'(x)) by the chain rule.
std::pair<double, double> word_value_deriv(const IFS& ifs, const Word& u, double x);
// Chained certified enclosures over an input interval inside [0,1].
IntervalBound word_range(const IFS& ifs, const Word& u, IntervalBound x);
IntervalBound word_deriv_enclosure(const IFS& ifs, const Word& u, IntervalBound x);

Jet word_jet(const IFS& ifs, const Word& u, double a, int k);

CutSet cut_set(const IFS& ifs, int n, std::size_t budget = kDefaultAtomBudget);

DistortionData distortion(const IFS& ifs, int sample_words, int sample_points,
                          std::uint64_t seed);

// Degree-k Taylor polynomial of phi_u at a, in the monomial basis.
Polynomial taylor_project(const IFS& ifs, const Word& u, int k, double a);

// Upper bound for |phi_u - P_{k,a} phi_u| on [a-radius, a+radius] ∩ [0,1]:
// radius^(k+1) * c_bound^(k+1) * |phi_u'(0)|.
double remainder_bound(const IFS& ifs, const Word& u, int k, double a, double radius);

}  // namespace conformal
