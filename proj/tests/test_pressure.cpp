#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "conformal/pressure.hpp"
#include "corpus.hpp"

using namespace conformal;

namespace {
constexpr double kCantorDim = 0.6309297535714574;  // 1/log2(3)
}

TEST_CASE("pressure_at closed forms") {
  const IFS c3 = corpus::c3();
  for (int n : {1, 4, 8}) {
    const auto [lower, upper] = pressure_at(c3, 1.0, n);
    CHECK(upper == doctest::Approx(1.0 - std::log2(3.0)).epsilon(1e-12));
    CHECK(lower == doctest::Approx(upper).epsilon(1e-12));  // affine: c_bound = 1
  }

  // t = 0 counts words
  for (const IFS& ifs : {corpus::c3(), corpus::quadratic(), corpus::two_ratio()}) {
    const auto [lower, upper] = pressure_at(ifs, 0.0, 6);
    CHECK(upper == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(lower == doctest::Approx(1.0).epsilon(1e-12));
  }

  // root of the middle-thirds pressure
  const auto [lo_root, hi_root] = pressure_at(c3, kCantorDim, 6);
  CHECK(std::abs(hi_root) <= 1e-9);
  CHECK(std::abs(lo_root) <= 1e-9);

  CHECK_THROWS_AS(pressure_at(c3, -1.0, 4), LabError);
  CHECK_THROWS_AS(pressure_at(c3, 1.0, 30, 1000), LabError);
}

TEST_CASE("pressure_at is n-independent for affine systems") {
  for (const IFS& ifs : {corpus::c3(), corpus::two_ratio(), corpus::halves()}) {
    for (double t : {0.25, 0.5, 1.0, 1.5}) {
      const double base = pressure_at(ifs, t, 2).second;
      for (int n : {4, 6, 10})
        CHECK(std::abs(pressure_at(ifs, t, n).second - base) <= 1e-12);
    }
  }
}

TEST_CASE("pressure upper bounds are strictly decreasing in t") {
  for (const IFS& ifs : {corpus::c3(), corpus::quadratic(), corpus::two_ratio()}) {
    const int n = is_affine(ifs) ? 4 : 8;
    double prev = pressure_at(ifs, 0.0, n).second;
    for (double t : {0.2, 0.5, 0.9, 1.4, 2.0}) {
      const double cur = pressure_at(ifs, t, n).second;
      CHECK(cur < prev);
      prev = cur;
    }
  }
}

TEST_CASE("pressure subadditivity in n") {
  for (const IFS& ifs : {corpus::c3(), corpus::quadratic()}) {
    for (int m : {2, 4, 6}) {
      for (double t : {0.5, 1.0}) {
        const double at_m = pressure_at(ifs, t, m).second;
        const double at_2m = pressure_at(ifs, t, 2 * m).second;
        CHECK(at_2m <= at_m + 1e-9);
      }
    }
  }
}

TEST_CASE("pressure brackets contain the distortion gap") {
  const IFS q = corpus::quadratic();
  const int n = 8;
  for (double t : {0.5, 1.0}) {
    const auto [lower, upper] = pressure_at(q, t, n);
    CHECK(lower <= upper);
    CHECK(upper - lower == doctest::Approx(t * std::log2(q.c_bound) / n).epsilon(1e-12));
  }
}

TEST_CASE("similarity_dimension closed forms") {
  CHECK(std::abs(similarity_dimension(corpus::c3(), 1e-6, 4) - kCantorDim) <= 1e-6);

  // two maps of ratio 1/2: root at t = 1
  CHECK(std::abs(similarity_dimension(corpus::halves(), 1e-6, 4) - 1.0) <= 1e-6);

  // four maps of ratio 1/4: root at t = 1
  const IFS quarters = validate_ifs({parse("x/4"), parse("x/4 + 1/4"), parse("x/4 + 1/2"),
                                     parse("x/4 + 3/4")},
                                    {0.25, 0.25, 0.25, 0.25});
  CHECK(std::abs(similarity_dimension(quarters, 1e-6, 4) - 1.0) <= 1e-6);

  // affine similarity dimension solves sum r_i^t = 1
  const IFS mixed = corpus::two_ratio();
  const double s = similarity_dimension(mixed, 1e-8, 4);
  CHECK(std::pow(0.5, s) + std::pow(0.25, s) == doctest::Approx(1.0).epsilon(1e-7));

  // single map: pressure starts at 0
  CHECK(similarity_dimension(corpus::single_affine(), 1e-6, 4) == 0.0);
}

TEST_CASE("pressure_curve is monotone and parallel-stable") {
  const IFS q = corpus::quadratic();
  const PressureCurve serial = pressure_curve(q, 0.0, 2.0, 9, 6, kDefaultAtomBudget, 1);
  const PressureCurve parallel = pressure_curve(q, 0.0, 2.0, 9, 6, kDefaultAtomBudget, 4);
  REQUIRE(serial.t_values.size() == 9);
  for (std::size_t i = 0; i < serial.t_values.size(); ++i) {
    CHECK(serial.estimates[i].first == parallel.estimates[i].first);
    CHECK(serial.estimates[i].second == parallel.estimates[i].second);
    CHECK(serial.estimates[i].first <= serial.estimates[i].second);
    if (i > 0) CHECK(serial.estimates[i].second < serial.estimates[i - 1].second);
  }
}
