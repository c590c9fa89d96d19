#include "conformal/polynomial.hpp"

#include <cmath>

namespace conformal {

Polynomial Polynomial::derivative() const {
  Polynomial d;
  if (coeffs.size() <= 1) {
    d.coeffs = {0.0};
    return d;
  }
  d.coeffs.resize(coeffs.size() - 1);
  for (std::size_t j = 1; j < coeffs.size(); ++j)
    d.coeffs[j - 1] = static_cast<double>(j) * coeffs[j];
  return d;
}

double Polynomial::l2_norm() const {
  double s = 0.0;
  for (double c : coeffs) s += c * c;
  return std::sqrt(s);
}

bool operator==(const Polynomial& a, const Polynomial& b) {
  const std::size_t n = std::max(a.coeffs.size(), b.coeffs.size());
  for (std::size_t i = 0; i < n; ++i) {
    const double ca = i < a.coeffs.size() ? a.coeffs[i] : 0.0;
    const double cb = i < b.coeffs.size() ? b.coeffs[i] : 0.0;
    if (ca != cb) return false;
  }
  return true;
}

double coeff_distance(const Polynomial& a, const Polynomial& b) {
  const std::size_t n = std::max(a.coeffs.size(), b.coeffs.size());
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double ca = i < a.coeffs.size() ? a.coeffs[i] : 0.0;
    const double cb = i < b.coeffs.size() ? b.coeffs[i] : 0.0;
    s += (ca - cb) * (ca - cb);
  }
  return std::sqrt(s);
}

IntervalBound poly_range(const Polynomial& p, IntervalBound x, int depth) {
  const std::size_t boxes = std::size_t{1} << std::min(depth, 20);
  const double step = x.width() / static_cast<double>(boxes);
  IntervalBound out{};
  for (std::size_t b = 0; b < boxes; ++b) {
    IntervalBound sub{x.lo + static_cast<double>(b) * step,
                      (b + 1 == boxes) ? x.hi : x.lo + static_cast<double>(b + 1) * step};
    IntervalBound r = point_interval(0.0);
    for (std::size_t i = p.coeffs.size(); i-- > 0;)
      r = r * sub + point_interval(p.coeffs[i]);
    out = (b == 0) ? r : hull(out, r);
  }
  return out;
}

}  // namespace conformal
