#pragma once

#include <vector>

#include "conformal/ifs.hpp"

// Systems shared across the test suites.
namespace corpus {

inline conformal::IFS c3() {
  return conformal::validate_ifs({conformal::parse("x/3"), conformal::parse("x/3 + 2/3")},
                                 {0.5, 0.5});
}

inline conformal::IFS quadratic() {
  return conformal::validate_ifs({conformal::parse("0.1*x^2 + 0.3*x + 0.05"),
                                  conformal::parse("0.1*x^2 + 0.3*x + 0.55")},
                                 {0.5, 0.5});
}

inline conformal::IFS halves() {
  return conformal::validate_ifs({conformal::parse("x/2"), conformal::parse("x/2 + 1/2")},
                                 {0.5, 0.5});
}

inline conformal::IFS two_ratio() {
  // contraction ratios 1/2 and 1/4, disjoint ranges
  return conformal::validate_ifs({conformal::parse("x/2"), conformal::parse("x/4 + 3/4")},
                                 {0.5, 0.5});
}

inline conformal::IFS single_affine() {
  return conformal::validate_ifs({conformal::parse("x/3")}, {1.0});
}

inline conformal::IFS single_moebius() {
  return conformal::validate_ifs({conformal::parse("x/(2+x)")}, {1.0});
}

inline conformal::IFS uneven_cantor() {
  return conformal::validate_ifs({conformal::parse("x/3"), conformal::parse("x/3 + 2/3")},
                                 {0.25, 0.75});
}

inline conformal::IFS orientation_mixed() {
  // one decreasing branch; ranges [0.05, 0.3] and [0.7, 0.95] stay disjoint
  return conformal::validate_ifs(
      {conformal::parse("0.3 - x/4"), conformal::parse("x/4 + 0.7")}, {0.5, 0.5});
}

inline conformal::Word word(std::initializer_list<int> letters) {
  conformal::Word w;
  for (int l : letters) w.letters.push_back(static_cast<std::uint8_t>(l));
  return w;
}

inline std::vector<const char*> expression_corpus() {
  return {
      "x/3",
      "x/3 + 2/3",
      "0.1*x^2 + 0.3*x + 0.05",
      "x/(2+x)",
      "(x^3 - 0.5*x + 0.25)/(x + 1.5)",
      "0.3*x^4 + 0.2*x^2 + 0.1",
      "(2 + x)/(4 + x^2)",
      "0.8*x*(1 - x) + 0.05",
      "-x/4 + 0.9",
  };
}

}  // namespace corpus
