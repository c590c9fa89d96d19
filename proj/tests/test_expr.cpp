#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "conformal/expr.hpp"
#include "conformal/rng.hpp"
#include "corpus.hpp"

using namespace conformal;

TEST_CASE("parse builds the expected trees") {
  const AnalyticExpr e = parse("x/3");
  const auto& nodes = e.nodes();
  const ExprNode& root = nodes[static_cast<std::size_t>(e.root())];
  CHECK(root.kind == NodeKind::Div);
  CHECK(nodes[static_cast<std::size_t>(root.lhs)].kind == NodeKind::Variable);
  CHECK(nodes[static_cast<std::size_t>(root.rhs)].kind == NodeKind::Constant);
  CHECK(nodes[static_cast<std::size_t>(root.rhs)].value == 3.0);

  const AnalyticExpr m = parse("x/(2+x)");
  const ExprNode& mroot = m.nodes()[static_cast<std::size_t>(m.root())];
  CHECK(mroot.kind == NodeKind::Div);
  const ExprNode& den = m.nodes()[static_cast<std::size_t>(mroot.rhs)];
  CHECK(den.kind == NodeKind::Add);

  // degree-2 polynomial parses with Pow precedence above Mul
  const AnalyticExpr q = parse("0.1*x^2 + 0.3*x + 0.05");
  CHECK(eval(q, 1.0) == doctest::Approx(0.45).epsilon(1e-15));
}

TEST_CASE("parse pretty-print round trip is idempotent") {
  for (const char* text : corpus::expression_corpus()) {
    const AnalyticExpr e = parse(text);
    const std::string printed = to_string(e);
    const AnalyticExpr reparsed = parse(printed);
    CHECK(structurally_equal(e, reparsed));
    CHECK(to_string(reparsed) == printed);
  }
}

TEST_CASE("parse errors carry byte offsets") {
  try {
    parse("x + y");
    FAIL("expected UnknownIdentifier");
  } catch (const LabError& e) {
    CHECK(e.code() == Err::UnknownIdentifier);
    CHECK(e.offset() == 4);
  }
  try {
    parse("x +");
    FAIL("expected SyntaxError");
  } catch (const LabError& e) {
    CHECK(e.code() == Err::Syntax);
    CHECK(e.offset() == 3);
  }
  CHECK_THROWS_AS(parse("x ^ -1"), LabError);
  CHECK_THROWS_AS(parse("(x"), LabError);
  CHECK_THROWS_AS(parse("sin(x)"), LabError);
}

TEST_CASE("eval matches closed forms") {
  CHECK(eval(parse("x/3"), 0.9) == doctest::Approx(0.3).epsilon(1e-15));
  CHECK(eval(parse("x/(2+x)"), 1.0) == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
  CHECK_THROWS_AS(eval(parse("1/(x - 1/2)"), 0.5), LabError);
}

TEST_CASE("eval_jet on frozen expansions") {
  // (x)^2 at 1: 1 + 2(x-1) + (x-1)^2
  const Jet sq = eval_jet(parse("x^2"), 1.0, 2);
  CHECK(sq.coeffs[0] == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(sq.coeffs[1] == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(sq.coeffs[2] == doctest::Approx(1.0).epsilon(1e-15));

  // geometric series of x/(2+x) at 0: x/2 - x^2/4 + ...
  const Jet moebius = eval_jet(parse("x/(2+x)"), 0.0, 2);
  CHECK(moebius.coeffs[0] == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(moebius.coeffs[1] == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(moebius.coeffs[2] == doctest::Approx(-0.25).epsilon(1e-14));

  for (double a : {0.0, 0.25, 0.5, 1.0}) {
    const Jet affine = eval_jet(parse("x/3"), a, 1);
    CHECK(affine.coeffs[0] == doctest::Approx(a / 3.0).epsilon(1e-15));
    CHECK(affine.coeffs[1] == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
  }

  CHECK_THROWS_AS(eval_jet(parse("x"), 0.5, 33), LabError);
}

TEST_CASE("jet coefficients match central finite differences") {
  // first and second coefficients against finite differences of eval, on the
  // fixed base points and on 500 seeded random (expression, point) cases
  const auto exprs = corpus::expression_corpus();
  std::vector<AnalyticExpr> parsed;
  for (const char* text : exprs) parsed.push_back(parse(text));

  auto check_point = [&](const AnalyticExpr& e, double a) {
    const Jet jet = eval_jet(e, a, 4);
    const double h = 1e-5;
    const double fp = eval(e, a + h), fm = eval(e, a - h), f0 = eval(e, a);
    const double fd1 = (fp - fm) / (2.0 * h);
    const double fd2 = (fp - 2.0 * f0 + fm) / (h * h);
    CHECK(std::abs(jet.coeffs[1] - fd1) <=
          1e-6 * std::max({1.0, std::abs(fd1), std::abs(jet.coeffs[1])}));
    CHECK(std::abs(2.0 * jet.coeffs[2] - fd2) <=
          1e-4 * std::max({1.0, std::abs(fd2), std::abs(2.0 * jet.coeffs[2])}));
  };

  for (const auto& e : parsed)
    for (double a : {0.0, 0.25, 0.5, 1.0}) check_point(e, a);

  Rng rng(2024);
  for (int i = 0; i < 500; ++i) {
    const auto& e = parsed[rng.next_below(parsed.size())];
    check_point(e, rng.next_u01());
  }
}

TEST_CASE("compose_jets on frozen expansions") {
  const AnalyticExpr sq = parse("x^2");
  const Jet inner = eval_jet(sq, 1.0, 2);
  const Jet composed = compose_jets(eval_jet(sq, inner.value(), 2), inner);
  // (x^2)^2 = x^4 at 1: value 1, derivative 4, half second derivative 6
  CHECK(composed.coeffs[0] == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(composed.coeffs[1] == doctest::Approx(4.0).epsilon(1e-14));
  CHECK(composed.coeffs[2] == doctest::Approx(6.0).epsilon(1e-14));

  // identity outer jet returns the inner jet
  const Jet j = eval_jet(parse("x/(2+x)"), 0.25, 3);
  const Jet identity = eval_jet(parse("x"), j.value(), 3);
  const Jet same = compose_jets(identity, j);
  for (int i = 0; i <= 3; ++i)
    CHECK(same.coeffs[static_cast<std::size_t>(i)] ==
          doctest::Approx(j.coeffs[static_cast<std::size_t>(i)]).epsilon(1e-15));

  // affine composition: thirds twice is x/9
  const AnalyticExpr third = parse("x/3");
  const Jet inner3 = eval_jet(third, 1.0, 1);
  const Jet comp3 = compose_jets(eval_jet(third, inner3.value(), 1), inner3);
  CHECK(comp3.coeffs[0] == doctest::Approx(1.0 / 9.0).epsilon(1e-15));
  CHECK(comp3.coeffs[1] == doctest::Approx(1.0 / 9.0).epsilon(1e-15));

  CHECK_THROWS_AS(compose_jets(eval_jet(sq, 0.9, 2), inner), LabError);
  CHECK_THROWS_AS(compose_jets(eval_jet(sq, 1.0, 3), inner), LabError);
}

TEST_CASE("derivative enclosures on frozen ranges") {
  const IntervalBound unit{0.0, 1.0};

  const IntervalBound affine = derivative_enclosure(parse("x/3"), unit, 0);
  CHECK(affine.lo == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
  CHECK(affine.hi == doctest::Approx(1.0 / 3.0).epsilon(1e-12));

  // derivative 0.2x + 0.3 is monotone: range [0.3, 0.5]
  const IntervalBound quad =
      derivative_enclosure(parse("0.1*x^2 + 0.3*x + 0.05"), unit, 4);
  CHECK(quad.lo <= 0.3);
  CHECK(quad.hi >= 0.5);
  CHECK(0.3 - quad.lo + quad.hi - 0.5 <= 0.02);

  // derivative 2/(2+x)^2 is monotone: range [2/9, 1/2]
  const IntervalBound moebius = derivative_enclosure(parse("x/(2+x)"), unit, 6);
  CHECK(moebius.lo <= 2.0 / 9.0 + 1e-12);
  CHECK(moebius.hi >= 0.5 - 1e-12);
  CHECK(2.0 / 9.0 - moebius.lo + moebius.hi - 0.5 <= 0.05);

  CHECK_THROWS_AS(derivative_enclosure(parse("1/(2*x - 1)"), unit, 4), LabError);
}

TEST_CASE("enclosure soundness against finite differences") {
  const IntervalBound unit{0.0, 1.0};
  Rng rng(7);
  for (const char* text : corpus::expression_corpus()) {
    const AnalyticExpr e = parse(text);
    const IntervalBound enclosure = derivative_enclosure(e, unit, 6);
    for (int i = 0; i < 112; ++i) {  // 9 expressions x 112 > 1000 samples
      const double x = rng.next_u01();
      const double h = 1e-7;
      const double xm = std::max(0.0, x - h), xp = std::min(1.0, x + h);
      const double fd = (eval(e, xp) - eval(e, xm)) / (xp - xm);
      CHECK(fd >= enclosure.lo - 1e-6);
      CHECK(fd <= enclosure.hi + 1e-6);
    }
  }
}

TEST_CASE("sup_norm_diff on frozen cases") {
  // constant difference 2/9
  const IntervalBound constant = sup_norm_diff(parse("x/3"), parse("x/3 + 2/9"), 1e-12);
  CHECK(constant.width() <= 1e-12);
  CHECK(constant.lo <= 2.0 / 9.0 + 1e-13);
  CHECK(constant.hi >= 2.0 / 9.0 - 1e-13);

  // identical expressions
  const AnalyticExpr f = parse("x/(2+x)");
  const IntervalBound zero = sup_norm_diff(f, f, 1e-9);
  CHECK(zero.lo == 0.0);
  CHECK(zero.hi <= 1e-12);

  // |x/3 - x/2| = x/6 maximized at 1
  const IntervalBound sixth = sup_norm_diff(parse("x/3"), parse("x/2"), 1e-6);
  CHECK(sixth.width() <= 1e-6);
  CHECK(sixth.lo <= 1.0 / 6.0 + 1e-12);
  CHECK(sixth.hi >= 1.0 / 6.0 - 1e-12);

  CHECK_THROWS_AS(sup_norm_diff(parse("x"), parse("x/2"), 1e-14, 1000), LabError);
}

TEST_CASE("sup_norm_diff soundness on a finer grid") {
  Rng rng(11);
  const auto exprs = corpus::expression_corpus();
  for (int trial = 0; trial < 6; ++trial) {
    const AnalyticExpr f = parse(exprs[rng.next_below(exprs.size())]);
    const AnalyticExpr g = parse(exprs[rng.next_below(exprs.size())]);
    const IntervalBound enclosure = sup_norm_diff(f, g, 1e-5);
    double finer = 0.0;
    const int n = 10000;
    for (int i = 0; i <= n; ++i) {
      const double x = static_cast<double>(i) / n;
      finer = std::max(finer, std::abs(eval(f, x) - eval(g, x)));
    }
    CHECK(finer >= enclosure.lo - 1e-12);
    CHECK(finer <= enclosure.hi + 1e-12);
  }
}

TEST_CASE("sup_norm_diff parallel path is bit-identical") {
  const AnalyticExpr f = parse("(x^3 - 0.5*x + 0.25)/(x + 1.5)");
  const AnalyticExpr g = parse("0.8*x*(1 - x) + 0.05");
  const IntervalBound serial = sup_norm_diff(f, g, 1e-7, 50'000'000, 1);
  const IntervalBound parallel = sup_norm_diff(f, g, 1e-7, 50'000'000, 4);
  CHECK(serial.lo == parallel.lo);
  CHECK(serial.hi == parallel.hi);
}

TEST_CASE("family trees accept t and substitute cleanly") {
  const AnalyticExpr fam = parse_xt("x/3 + 2*t/3");
  CHECK(eval_xt(fam, 1.0, 1.0) == doctest::Approx(1.0).epsilon(1e-15));
  const AnalyticExpr at_half = substitute_t(fam, 0.5);
  CHECK(!at_half.uses_var(1));
  CHECK(eval(at_half, 0.0) == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
  CHECK_THROWS_AS(parse("x + t"), LabError);
}
