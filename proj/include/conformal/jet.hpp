#pragma once

#include <vector>

#include "conformal/errors.hpp"
#include "conformal/interval.hpp"

namespace conformal {

// Truncated Taylor expansion at a base point: coeffs[j] = f^(j)(a) / j!.
struct Jet {
  double base_point = 0.0;
  std::vector<double> coeffs;

  int order() const { return static_cast<int>(coeffs.size()) - 1; }
  double value() const { return coeffs.empty() ? 0.0 : coeffs[0]; }
};

inline constexpr int kJetOrderCap = 32;

Jet jet_constant(double c, double a, int k);
Jet jet_variable(double a, int k);

// Truncated series arithmetic shared by double and interval coefficient jets.
// T needs +, -, *, / and value-construction from double.
namespace series {

template <class T>
std::vector<T> add(const std::vector<T>& a, const std::vector<T>& b) {
  std::vector<T> r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
  return r;
}

template <class T>
std::vector<T> sub(const std::vector<T>& a, const std::vector<T>& b) {
  std::vector<T> r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
  return r;
}

template <class T>
std::vector<T> neg(const std::vector<T>& a) {
  std::vector<T> r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = T{} - a[i];
  return r;
}

template <class T>
std::vector<T> mul(const std::vector<T>& a, const std::vector<T>& b) {
  std::vector<T> r(a.size(), T{});
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; i + j < a.size(); ++j) r[i + j] = r[i + j] + a[i] * b[j];
  }
  return r;
}

inline bool denom_near_zero(double c0) { return std::abs(c0) < kDenomFloor; }
inline bool denom_near_zero(const IntervalBound& c0) { return c0.mig() < kDenomFloor; }

template <class T>
std::vector<T> div(const std::vector<T>& a, const std::vector<T>& b) {
  if (denom_near_zero(b[0]))
    fail(Err::DivisionNearZero, "denominator magnitude below 1e-12");
  std::vector<T> q(a.size(), T{});
  for (std::size_t i = 0; i < a.size(); ++i) {
    T acc = a[i];
    for (std::size_t j = 1; j <= i; ++j) acc = acc - b[j] * q[i - j];
    q[i] = acc / b[0];
  }
  return q;
}

template <class T>
std::vector<T> pow(std::vector<T> base, std::int64_t e, const T& one) {
  std::vector<T> r(base.size(), T{});
  r[0] = one;
  // binary exponentiation, fixed evaluation order
  while (e > 0) {
    if (e & 1) r = mul(r, base);
    e >>= 1;
    if (e > 0) base = mul(base, base);
  }
  return r;
}

}  // namespace series

// Jet of outer∘inner at inner.base_point via truncated-series substitution.
// Requires equal orders and outer.base_point == inner value within 1e-9.
Jet compose_jets(const Jet& outer, const Jet& inner);

}  // namespace conformal
