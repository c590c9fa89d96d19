#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "conformal/interval.hpp"
#include "conformal/jet.hpp"

namespace conformal {

enum class NodeKind : std::uint8_t { Constant, Variable, Add, Sub, Mul, Div, Pow, Neg };

struct ExprNode {
  NodeKind kind = NodeKind::Constant;
  double value = 0.0;       // Constant
  std::uint8_t var = 0;     // Variable slot: 0 = x, 1 = t
  std::int32_t lhs = -1;    // Neg and Pow use lhs only
  std::int32_t rhs = -1;
  std::int64_t exponent = 0;  // Pow
};

// Rational expression tree over constants, x (and optionally t), +, -, *, /,
// nonnegative integer powers and unary negation. Immutable after parsing.
class AnalyticExpr {
 public:
  AnalyticExpr() = default;

  const std::vector<ExprNode>& nodes() const { return nodes_; }
  int root() const { return root_; }
  bool empty() const { return root_ < 0; }
  bool uses_var(int var) const;

  int add_node(const ExprNode& n) {
    nodes_.push_back(n);
    return static_cast<int>(nodes_.size()) - 1;
  }
  void set_root(int r) { root_ = r; }

 private:
  std::vector<ExprNode> nodes_;
  int root_ = -1;
};

bool structurally_equal(const AnalyticExpr& a, const AnalyticExpr& b);

// Grammar:
//   expr   := term (('+'|'-') term)*
//   term   := factor (('*'|'/') factor)*
//   factor := '-'? atom ('^' uint)?
//   atom   := number | 'x' | '(' expr ')'
// parse accepts only the variable x; parse_xt additionally accepts t.
AnalyticExpr parse(std::string_view text);
AnalyticExpr parse_xt(std::string_view text);

// Fully parenthesized canonical form; parse(to_string(e)) reproduces e.
std::string to_string(const AnalyticExpr& e);

double eval(const AnalyticExpr& e, double x);
double eval_xt(const AnalyticExpr& e, double x, double t);
// (value, derivative in x) in one pass.
std::pair<double, double> eval_value_deriv(const AnalyticExpr& e, double x);

// Replaces every occurrence of t by a constant, yielding a single-variable tree.
AnalyticExpr substitute_t(const AnalyticExpr& e, double t);

Jet eval_jet(const AnalyticExpr& e, double a, int k);

// Interval-coefficient jet over a box; coeffs[j] encloses f^(j)/j! on x
// (t entering as a constant interval for two-variable trees).
std::vector<IntervalBound> eval_interval_jet(const AnalyticExpr& e, IntervalBound x, int k);
std::vector<IntervalBound> eval_interval_jet_xt(const AnalyticExpr& e, IntervalBound x,
                                                IntervalBound t, int k);
IntervalBound eval_interval(const AnalyticExpr& e, IntervalBound x);

// Certified enclosure of {e'(x) : x in domain} (resp. the range of e) by
// adaptive bisection into at most 2^depth boxes.
IntervalBound derivative_enclosure(const AnalyticExpr& e, IntervalBound domain, int depth);
IntervalBound range_enclosure(const AnalyticExpr& e, IntervalBound domain, int depth);

// Throws DivisionNearZero unless every denominator stays bounded away from
// zero on the domain (checked over 2^depth uniform boxes).
void validate_denominators(const AnalyticExpr& e, IntervalBound domain, int depth);

// Enclosure of sup_{x in [0,1]} |f(x) - g(x)| with width <= tol, from a
// uniform grid plus a Lipschitz certificate for f - g.
IntervalBound sup_norm_diff(const AnalyticExpr& f, const AnalyticExpr& g, double tol,
                            std::size_t eval_budget = 50'000'000, int threads = 1);

}  // namespace conformal
