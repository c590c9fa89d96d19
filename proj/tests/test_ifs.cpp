#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "conformal/ifs.hpp"
#include "conformal/rng.hpp"
#include "corpus.hpp"

using namespace conformal;

TEST_CASE("validate_ifs accepts the classical systems") {
  const IFS c3 = corpus::c3();
  CHECK(c3.alphabet_size == 2);
  CHECK(c3.rho_max == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
  CHECK(c3.c_bound == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(!c3.common_fixed_point.has_value());

  const IFS q = corpus::quadratic();
  CHECK(q.ssc);  // ranges [0.05, 0.45] and [0.55, 0.95] are disjoint
  CHECK(q.range_bounds[0].lo == doctest::Approx(0.05).epsilon(1e-9));
  CHECK(q.range_bounds[0].hi == doctest::Approx(0.45).epsilon(1e-9));
  CHECK(q.range_bounds[1].lo == doctest::Approx(0.55).epsilon(1e-9));
  CHECK(q.range_bounds[1].hi == doctest::Approx(0.95).epsilon(1e-9));
  CHECK(q.c_bound >= q.rho_max / q.rho_min);
}

TEST_CASE("validate_ifs rejects broken systems") {
  try {
    validate_ifs({parse("1.2*x")}, {1.0});
    FAIL("expected NotContracting");
  } catch (const LabError& e) {
    CHECK(e.code() == Err::NotContracting);
  }
  try {
    validate_ifs({parse("x/2 + 0.9")}, {1.0});
    FAIL("expected EscapesInterval");
  } catch (const LabError& e) {
    CHECK(e.code() == Err::EscapesInterval);
  }
  try {
    validate_ifs({parse("x/3"), parse("x/3 + 2/3")}, {1.0, 0.0});
    FAIL("expected NonPositiveProb");
  } catch (const LabError& e) {
    CHECK(e.code() == Err::NonPositiveProb);
  }
  // derivative touches zero inside [0,1]
  CHECK_THROWS_AS(validate_ifs({parse("0.5*x^2 - 0.25*x + 0.3")}, {1.0}), LabError);
}

TEST_CASE("common fixed point detection is warning-level") {
  const IFS degenerate = validate_ifs({parse("x/3"), parse("x/2")}, {0.5, 0.5});
  REQUIRE(degenerate.common_fixed_point.has_value());
  CHECK(*degenerate.common_fixed_point == doctest::Approx(0.0).epsilon(1e-8));

  const IFS single = corpus::single_affine();
  CHECK(single.common_fixed_point.has_value());

  CHECK(!corpus::c3().common_fixed_point.has_value());
}

TEST_CASE("word_jet on frozen compositions") {
  const IFS c3 = corpus::c3();
  // phi_0(phi_1(x)) = (x/3 + 2/3)/3 = x/9 + 2/9
  const Jet j01 = word_jet(c3, corpus::word({0, 1}), 0.0, 1);
  CHECK(j01.coeffs[0] == doctest::Approx(2.0 / 9.0).epsilon(1e-14));
  CHECK(j01.coeffs[1] == doctest::Approx(1.0 / 9.0).epsilon(1e-14));

  // single letter matches eval_jet of the map
  const Jet single = word_jet(c3, corpus::word({1}), 0.25, 3);
  const Jet direct = eval_jet(c3.maps[1], 0.25, 3);
  for (int i = 0; i <= 3; ++i)
    CHECK(single.coeffs[static_cast<std::size_t>(i)] ==
          direct.coeffs[static_cast<std::size_t>(i)]);

  // phi_1 fixes 1: word 11 at 1 has value 1 and derivative 1/9
  const Jet j11 = word_jet(c3, corpus::word({1, 1}), 1.0, 1);
  CHECK(j11.coeffs[0] == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(j11.coeffs[1] == doctest::Approx(1.0 / 9.0).epsilon(1e-14));

  CHECK_THROWS_AS(word_jet(c3, Word{}, 0.0, 1), LabError);
}

TEST_CASE("word_jet chain rule on random splits") {
  Rng rng(101);
  for (const IFS& ifs : {corpus::c3(), corpus::quadratic(), corpus::single_moebius()}) {
    for (int trial = 0; trial < 40; ++trial) {
      Word full;
      const std::size_t len = 2 + rng.next_below(6);
      for (std::size_t i = 0; i < len; ++i)
        full.letters.push_back(static_cast<std::uint8_t>(
            rng.next_below(static_cast<std::uint64_t>(ifs.alphabet_size))));
      const std::size_t cut = 1 + rng.next_below(len - 1);
      Word left{std::vector<std::uint8_t>(full.letters.begin(),
                                          full.letters.begin() + cut)};
      Word right{std::vector<std::uint8_t>(full.letters.begin() + cut, full.letters.end())};
      const double a = rng.next_u01();
      const Jet right_jet = word_jet(ifs, right, a, 1);
      const Jet left_jet = word_jet(ifs, left, right_jet.value(), 1);
      const Jet full_jet = word_jet(ifs, full, a, 1);
      const double product = left_jet.coeffs[1] * right_jet.coeffs[1];
      CHECK(std::abs(full_jet.coeffs[1] - product) <= 1e-9 * std::abs(product));
    }
  }
}

TEST_CASE("cut_set on frozen middle-thirds levels") {
  const IFS c3 = corpus::c3();

  const CutSet level1 = cut_set(c3, 1);
  REQUIRE(level1.entries.size() == 2);
  for (const auto& e : level1.entries) {
    CHECK(e.word.size() == 1);
    CHECK(e.weight == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(e.deriv_at_zero == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
  }

  const CutSet level3 = cut_set(c3, 3);
  REQUIRE(level3.entries.size() == 4);
  for (const auto& e : level3.entries) {
    CHECK(e.word.size() == 2);
    CHECK(e.weight == doctest::Approx(0.25).epsilon(1e-12));
    CHECK(e.deriv_at_zero == doctest::Approx(1.0 / 9.0).epsilon(1e-12));
  }

  // lexicographic order
  CHECK(to_string(level3.entries[0].word) == "00");
  CHECK(to_string(level3.entries[3].word) == "11");
}

TEST_CASE("cut_set weights always sum to one") {
  for (const IFS& ifs : {corpus::c3(), corpus::quadratic(), corpus::uneven_cantor(),
                         corpus::single_moebius()}) {
    for (int n : {2, 6, 10}) {
      const CutSet cs = cut_set(ifs, n);
      double sum = 0.0;
      for (const auto& e : cs.entries) sum += e.weight;
      CHECK(std::abs(sum - 1.0) <= 1e-10);
    }
  }
}

TEST_CASE("cut_set partition: unique prefix per sampled sequence") {
  Rng rng(55);
  for (const IFS& ifs : {corpus::c3(), corpus::quadratic()}) {
    const int n = 10;
    const CutSet cs = cut_set(ifs, n);
    std::vector<Word> sorted;
    for (const auto& e : cs.entries) sorted.push_back(e.word);
    std::sort(sorted.begin(), sorted.end());
    for (int trial = 0; trial < 500; ++trial) {
      Word sequence;
      for (int i = 0; i < 64; ++i)
        sequence.letters.push_back(
            static_cast<std::uint8_t>(rng.next_u01() < ifs.probs[0] ? 0 : 1));
      int prefix_hits = 0;
      for (std::size_t len = 1; len <= 64; ++len) {
        Word prefix{std::vector<std::uint8_t>(sequence.letters.begin(),
                                              sequence.letters.begin() + len)};
        if (std::binary_search(sorted.begin(), sorted.end(), prefix)) ++prefix_hits;
      }
      CHECK(prefix_hits == 1);
    }
  }
}

TEST_CASE("cut_set derivative sandwich") {
  for (const IFS& ifs : {corpus::c3(), corpus::quadratic(), corpus::single_moebius(),
                         corpus::orientation_mixed()}) {
    for (int n : {6, 12}) {
      const double threshold = std::exp2(-n);
      for (const auto& e : cut_set(ifs, n).entries) {
        CHECK(e.deriv_at_zero <= threshold);
        CHECK(e.deriv_at_zero >= ifs.rho_min * threshold);
      }
    }
  }
}

TEST_CASE("orientation-reversing branches are first-class") {
  const IFS mixed = corpus::orientation_mixed();
  CHECK(mixed.ssc);
  CHECK(mixed.deriv_bounds[0].hi < 0.0);
  CHECK(mixed.deriv_bounds[1].lo > 0.0);
  CHECK(!mixed.common_fixed_point.has_value());

  // chain rule with sign bookkeeping: word 01 has derivative (-1/4)(1/4)
  const Jet j = word_jet(mixed, corpus::word({0, 1}), 0.5, 1);
  CHECK(j.coeffs[1] == doctest::Approx(-1.0 / 16.0).epsilon(1e-12));

  double sum = 0.0;
  for (const auto& e : cut_set(mixed, 10).entries) sum += e.weight;
  CHECK(sum == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("cut_set budget") {
  try {
    cut_set(corpus::c3(), 20, 100);
    FAIL("expected BudgetExceeded");
  } catch (const LabError& e) {
    CHECK(e.code() == Err::BudgetExceeded);
  }
}

TEST_CASE("distortion estimates") {
  const DistortionData affine = distortion(corpus::c3(), 50, 20, 1);
  CHECK(affine.c_emp == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(affine.c_bound == doctest::Approx(1.0).epsilon(1e-12));

  const DistortionData quad = distortion(corpus::quadratic(), 100, 30, 2);
  CHECK(quad.c_emp >= 1.0);
  CHECK(quad.c_emp <= quad.c_bound);

  const DistortionData moebius = distortion(corpus::single_moebius(), 100, 30, 3);
  CHECK(moebius.c_emp <= moebius.c_bound);

  // reproducible
  const DistortionData again = distortion(corpus::quadratic(), 100, 30, 2);
  CHECK(again.c_emp == quad.c_emp);
}

TEST_CASE("taylor_project on frozen expansions") {
  const IFS c3 = corpus::c3();
  const Polynomial p = taylor_project(c3, corpus::word({0}), 2, 0.0);
  CHECK(p.coeffs[0] == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(p.coeffs[1] == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
  CHECK(p.coeffs[2] == doctest::Approx(0.0).epsilon(1e-15));

  const IFS moebius = corpus::single_moebius();
  const Polynomial m = taylor_project(moebius, corpus::word({0}), 2, 0.0);
  CHECK(m.coeffs[0] == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(m.coeffs[1] == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(m.coeffs[2] == doctest::Approx(-0.25).epsilon(1e-14));

  // projection evaluated at the base point reproduces the map value
  const IFS q = corpus::quadratic();
  for (double a : {0.0, 0.3, 1.0}) {
    const Word u = corpus::word({1, 0, 1});
    const Polynomial proj = taylor_project(q, u, 3, a);
    CHECK(proj(a) == doctest::Approx(word_eval(q, u, a)).epsilon(1e-12));
  }
}

TEST_CASE("remainder_bound soundness and monotonicity") {
  const IFS c3 = corpus::c3();
  const Word w = corpus::word({0, 1});
  // affine maps have exact Taylor polynomials at k >= 1
  const Polynomial proj = taylor_project(c3, w, 1, 0.5);
  double measured = 0.0;
  for (int g = 0; g <= 100; ++g) {
    const double x = 0.4 + 0.2 * g / 100.0;
    measured = std::max(measured, std::abs(word_eval(c3, w, x) - proj(x)));
  }
  const double bound = remainder_bound(c3, w, 1, 0.5, 0.1);
  CHECK(measured <= 1e-15);
  CHECK(bound >= 0.0);

  // quadratic pair, length-4 word, k = 3, radius 0.1: grid measurement stays
  // below the certified bound
  const IFS q = corpus::quadratic();
  const Word u = corpus::word({0, 1, 1, 0});
  const double a = 0.3;
  const Polynomial qproj = taylor_project(q, u, 3, a);
  double qmeasured = 0.0;
  for (int g = 0; g <= 1000; ++g) {
    const double x = std::clamp(a - 0.1 + 0.2 * g / 1000.0, 0.0, 1.0);
    qmeasured = std::max(qmeasured, std::abs(word_eval(q, u, x) - qproj(x)));
  }
  CHECK(qmeasured <= remainder_bound(q, u, 3, a, 0.1));

  // monotone in radius
  double prev = 0.0;
  for (double radius : {0.05, 0.1, 0.2, 0.4}) {
    const double b = remainder_bound(q, u, 3, a, radius);
    CHECK(b >= prev);
    prev = b;
  }
}

TEST_CASE("composition homomorphism within Lagrange remainder") {
  // composed maps agree with their jet polynomials near the base point,
  // within the certified remainder bound
  Rng rng(77);
  for (const IFS& ifs : {corpus::c3(), corpus::quadratic()}) {
    for (int trial = 0; trial < 20; ++trial) {
      Word w;
      const std::size_t len = 2 + rng.next_below(3);
      for (std::size_t i = 0; i < len; ++i)
        w.letters.push_back(static_cast<std::uint8_t>(rng.next_below(2)));
      const double a = 0.05 + 0.9 * rng.next_u01();
      const int k = 3;
      const Polynomial proj = taylor_project(ifs, w, k, a);
      const double bound = remainder_bound(ifs, w, k, a, 0.05);
      for (int g = 0; g <= 20; ++g) {
        const double x = std::clamp(a - 0.05 + 0.1 * g / 20.0, 0.0, 1.0);
        CHECK(std::abs(word_eval(ifs, w, x) - proj(x)) <= bound + 1e-15);
      }
    }
  }
}

TEST_CASE("word serialization round trip") {
  const Word w = corpus::word({0, 1, 1, 0, 1});
  CHECK(to_string(w) == "01101");
  CHECK(word_from_string("01101", 2) == w);
  CHECK_THROWS_AS(word_from_string("012", 2), LabError);
}
