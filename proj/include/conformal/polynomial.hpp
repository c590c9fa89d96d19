#pragma once

#include <vector>

#include "conformal/interval.hpp"

namespace conformal {

// Real polynomial in the monomial basis, coefficients low degree first.
struct Polynomial {
  std::vector<double> coeffs;

  double operator()(double x) const {
    double r = 0.0;
    for (std::size_t i = coeffs.size(); i-- > 0;) r = r * x + coeffs[i];
    return r;
  }
  int degree() const { return coeffs.empty() ? 0 : static_cast<int>(coeffs.size()) - 1; }
  Polynomial derivative() const;
  double l2_norm() const;
};

bool operator==(const Polynomial& a, const Polynomial& b);

// sqrt(sum (a_j - b_j)^2), shorter vector padded with zeros.
double coeff_distance(const Polynomial& a, const Polynomial& b);

// Certified range over an interval via interval Horner on 2^depth uniform boxes.
IntervalBound poly_range(const Polynomial& p, IntervalBound x, int depth);

inline Polynomial identity_polynomial() { return Polynomial{{0.0, 1.0}}; }

}  // namespace conformal
