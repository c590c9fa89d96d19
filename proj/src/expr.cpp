#include "conformal/expr.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <queue>
#include <type_traits>

#include "conformal/parallel.hpp"

namespace conformal {

bool AnalyticExpr::uses_var(int var) const {
  for (const auto& n : nodes_)
    if (n.kind == NodeKind::Variable && n.var == var) return true;
  return false;
}

namespace {

bool node_equal(const AnalyticExpr& a, int ia, const AnalyticExpr& b, int ib) {
  const ExprNode& na = a.nodes()[static_cast<std::size_t>(ia)];
  const ExprNode& nb = b.nodes()[static_cast<std::size_t>(ib)];
  if (na.kind != nb.kind) return false;
  switch (na.kind) {
    case NodeKind::Constant:
      return na.value == nb.value;
    case NodeKind::Variable:
      return na.var == nb.var;
    case NodeKind::Neg:
      return node_equal(a, na.lhs, b, nb.lhs);
    case NodeKind::Pow:
      return na.exponent == nb.exponent && node_equal(a, na.lhs, b, nb.lhs);
    default:
      return node_equal(a, na.lhs, b, nb.lhs) && node_equal(a, na.rhs, b, nb.rhs);
  }
}

}  // namespace

bool structurally_equal(const AnalyticExpr& a, const AnalyticExpr& b) {
  if (a.empty() || b.empty()) return a.empty() == b.empty();
  return node_equal(a, a.root(), b, b.root());
}

// ---------------------------------------------------------------------------
// Parser
// ---------------------------------------------------------------------------

namespace {

struct Token {
  enum Kind { Number, Ident, Plus, Minus, Star, Slash, Caret, LParen, RParen, End } kind;
  double number = 0.0;
  std::string ident;
  std::size_t offset = 0;
};

class Lexer {
 public:
  explicit Lexer(std::string_view text) : text_(text) {}

  Token next() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    Token tok;
    tok.offset = pos_;
    if (pos_ >= text_.size()) {
      tok.kind = Token::End;
      return tok;
    }
    const char c = text_[pos_];
    switch (c) {
      case '+': tok.kind = Token::Plus; ++pos_; return tok;
      case '-': tok.kind = Token::Minus; ++pos_; return tok;
      case '*': tok.kind = Token::Star; ++pos_; return tok;
      case '/': tok.kind = Token::Slash; ++pos_; return tok;
      case '^': tok.kind = Token::Caret; ++pos_; return tok;
      case '(': tok.kind = Token::LParen; ++pos_; return tok;
      case ')': tok.kind = Token::RParen; ++pos_; return tok;
      default: break;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      const char* begin = text_.data() + pos_;
      char* end = nullptr;
      const double v = std::strtod(begin, &end);
      if (end == begin) fail_at(Err::Syntax, "malformed number", pos_);
      pos_ += static_cast<std::size_t>(end - begin);
      tok.kind = Token::Number;
      tok.number = v;
      return tok;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t start = pos_;
      while (pos_ < text_.size() &&
             (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
        ++pos_;
      tok.kind = Token::Ident;
      tok.ident = std::string(text_.substr(start, pos_ - start));
      return tok;
    }
    fail_at(Err::Syntax, std::string("unexpected character '") + c + "'", pos_);
  }

 private:
  std::string_view text_;
  std::size_t pos_ = 0;
};

class Parser {
 public:
  Parser(std::string_view text, bool allow_t) : lexer_(text), allow_t_(allow_t) {
    advance();
  }

  AnalyticExpr run() {
    const int root = parse_expr();
    if (cur_.kind != Token::End) fail_at(Err::Syntax, "trailing input", cur_.offset);
    out_.set_root(root);
    return std::move(out_);
  }

 private:
  void advance() { cur_ = lexer_.next(); }

  int parse_expr() {
    int lhs = parse_term();
    while (cur_.kind == Token::Plus || cur_.kind == Token::Minus) {
      const NodeKind op = cur_.kind == Token::Plus ? NodeKind::Add : NodeKind::Sub;
      advance();
      const int rhs = parse_term();
      ExprNode n;
      n.kind = op;
      n.lhs = lhs;
      n.rhs = rhs;
      lhs = out_.add_node(n);
    }
    return lhs;
  }

  int parse_term() {
    int lhs = parse_factor();
    while (cur_.kind == Token::Star || cur_.kind == Token::Slash) {
      const NodeKind op = cur_.kind == Token::Star ? NodeKind::Mul : NodeKind::Div;
      advance();
      const int rhs = parse_factor();
      ExprNode n;
      n.kind = op;
      n.lhs = lhs;
      n.rhs = rhs;
      lhs = out_.add_node(n);
    }
    return lhs;
  }

  int parse_factor() {
    bool negate = false;
    if (cur_.kind == Token::Minus) {
      negate = true;
      advance();
    }
    int node = parse_atom();
    if (cur_.kind == Token::Caret) {
      const std::size_t at = cur_.offset;
      advance();
      if (cur_.kind != Token::Number) fail_at(Err::Syntax, "expected integer exponent", at);
      const double e = cur_.number;
      if (e < 0.0 || e != std::floor(e) || e > 1e6)
        fail_at(Err::Syntax, "exponent must be a nonnegative integer", cur_.offset);
      ExprNode n;
      n.kind = NodeKind::Pow;
      n.lhs = node;
      n.exponent = static_cast<std::int64_t>(e);
      node = out_.add_node(n);
      advance();
    }
    if (negate) {
      ExprNode n;
      n.kind = NodeKind::Neg;
      n.lhs = node;
      node = out_.add_node(n);
    }
    return node;
  }

  int parse_atom() {
    switch (cur_.kind) {
      case Token::Number: {
        ExprNode n;
        n.kind = NodeKind::Constant;
        n.value = cur_.number;
        advance();
        return out_.add_node(n);
      }
      case Token::Ident: {
        ExprNode n;
        n.kind = NodeKind::Variable;
        if (cur_.ident == "x") {
          n.var = 0;
        } else if (allow_t_ && cur_.ident == "t") {
          n.var = 1;
        } else {
          fail_at(Err::UnknownIdentifier, "unknown identifier '" + cur_.ident + "'",
                  cur_.offset);
        }
        advance();
        return out_.add_node(n);
      }
      case Token::LParen: {
        advance();
        const int inner = parse_expr();
        if (cur_.kind != Token::RParen) fail_at(Err::Syntax, "expected ')'", cur_.offset);
        advance();
        return inner;
      }
      default:
        fail_at(Err::Syntax, "expected number, variable or '('", cur_.offset);
    }
  }

  Lexer lexer_;
  Token cur_;
  bool allow_t_;
  AnalyticExpr out_;
};

}  // namespace

AnalyticExpr parse(std::string_view text) { return Parser(text, false).run(); }
AnalyticExpr parse_xt(std::string_view text) { return Parser(text, true).run(); }

// ---------------------------------------------------------------------------
// Printer
// ---------------------------------------------------------------------------

namespace {

std::string format_number(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

void print_node(const AnalyticExpr& e, int idx, std::string& out) {
  const ExprNode& n = e.nodes()[static_cast<std::size_t>(idx)];
  switch (n.kind) {
    case NodeKind::Constant:
      out += format_number(n.value);
      return;
    case NodeKind::Variable:
      out += (n.var == 0 ? "x" : "t");
      return;
    case NodeKind::Neg:
      out += "(-";
      print_node(e, n.lhs, out);
      out += ")";
      return;
    case NodeKind::Pow:
      out += "(";
      print_node(e, n.lhs, out);
      out += " ^ ";
      out += std::to_string(n.exponent);
      out += ")";
      return;
    default: {
      const char* op = n.kind == NodeKind::Add   ? " + "
                       : n.kind == NodeKind::Sub ? " - "
                       : n.kind == NodeKind::Mul ? " * "
                                                 : " / ";
      out += "(";
      print_node(e, n.lhs, out);
      out += op;
      print_node(e, n.rhs, out);
      out += ")";
      return;
    }
  }
}

}  // namespace

std::string to_string(const AnalyticExpr& e) {
  std::string out;
  if (!e.empty()) print_node(e, e.root(), out);
  return out;
}

// ---------------------------------------------------------------------------
// Scalar evaluation
// ---------------------------------------------------------------------------

namespace {

double pow_by_squaring(double base, std::int64_t e) {
  double r = 1.0;
  while (e > 0) {
    if (e & 1) r *= base;
    e >>= 1;
    if (e > 0) base *= base;
  }
  return r;
}

double eval_node(const AnalyticExpr& e, int idx, double x, double t) {
  const ExprNode& n = e.nodes()[static_cast<std::size_t>(idx)];
  switch (n.kind) {
    case NodeKind::Constant: return n.value;
    case NodeKind::Variable: return n.var == 0 ? x : t;
    case NodeKind::Neg: return -eval_node(e, n.lhs, x, t);
    case NodeKind::Pow: return pow_by_squaring(eval_node(e, n.lhs, x, t), n.exponent);
    case NodeKind::Add: return eval_node(e, n.lhs, x, t) + eval_node(e, n.rhs, x, t);
    case NodeKind::Sub: return eval_node(e, n.lhs, x, t) - eval_node(e, n.rhs, x, t);
    case NodeKind::Mul: return eval_node(e, n.lhs, x, t) * eval_node(e, n.rhs, x, t);
    case NodeKind::Div: {
      const double den = eval_node(e, n.rhs, x, t);
      if (std::abs(den) < kDenomFloor)
        fail(Err::DivisionNearZero, "denominator magnitude below 1e-12");
      return eval_node(e, n.lhs, x, t) / den;
    }
  }
  fail(Err::Syntax, "corrupt expression tree");
}

// Dual number (value, d/dx).
struct Dual {
  double v = 0.0;
  double d = 0.0;
};

Dual eval_dual(const AnalyticExpr& e, int idx, double x) {
  const ExprNode& n = e.nodes()[static_cast<std::size_t>(idx)];
  switch (n.kind) {
    case NodeKind::Constant: return {n.value, 0.0};
    case NodeKind::Variable: return n.var == 0 ? Dual{x, 1.0} : Dual{0.0, 0.0};
    case NodeKind::Neg: {
      Dual a = eval_dual(e, n.lhs, x);
      return {-a.v, -a.d};
    }
    case NodeKind::Pow: {
      Dual a = eval_dual(e, n.lhs, x);
      if (n.exponent == 0) return {1.0, 0.0};
      const double p = pow_by_squaring(a.v, n.exponent - 1);
      return {p * a.v, static_cast<double>(n.exponent) * p * a.d};
    }
    case NodeKind::Add: {
      Dual a = eval_dual(e, n.lhs, x), b = eval_dual(e, n.rhs, x);
      return {a.v + b.v, a.d + b.d};
    }
    case NodeKind::Sub: {
      Dual a = eval_dual(e, n.lhs, x), b = eval_dual(e, n.rhs, x);
      return {a.v - b.v, a.d - b.d};
    }
    case NodeKind::Mul: {
      Dual a = eval_dual(e, n.lhs, x), b = eval_dual(e, n.rhs, x);
      return {a.v * b.v, a.d * b.v + a.v * b.d};
    }
    case NodeKind::Div: {
      Dual a = eval_dual(e, n.lhs, x), b = eval_dual(e, n.rhs, x);
      if (std::abs(b.v) < kDenomFloor)
        fail(Err::DivisionNearZero, "denominator magnitude below 1e-12");
      const double q = a.v / b.v;
      return {q, (a.d - q * b.d) / b.v};
    }
  }
  fail(Err::Syntax, "corrupt expression tree");
}

}  // namespace

double eval(const AnalyticExpr& e, double x) { return eval_node(e, e.root(), x, 0.0); }
double eval_xt(const AnalyticExpr& e, double x, double t) {
  return eval_node(e, e.root(), x, t);
}

std::pair<double, double> eval_value_deriv(const AnalyticExpr& e, double x) {
  const Dual d = eval_dual(e, e.root(), x);
  return {d.v, d.d};
}

AnalyticExpr substitute_t(const AnalyticExpr& e, double t) {
  AnalyticExpr out;
  for (const auto& n : e.nodes()) {
    ExprNode copy = n;
    if (copy.kind == NodeKind::Variable && copy.var == 1) {
      copy.kind = NodeKind::Constant;
      copy.value = t;
      copy.var = 0;
    }
    out.add_node(copy);
  }
  out.set_root(e.root());
  return out;
}

// ---------------------------------------------------------------------------
// Jets
// ---------------------------------------------------------------------------

Jet jet_constant(double c, double a, int k) {
  Jet j;
  j.base_point = a;
  j.coeffs.assign(static_cast<std::size_t>(k) + 1, 0.0);
  j.coeffs[0] = c;
  return j;
}

Jet jet_variable(double a, int k) {
  Jet j = jet_constant(a, a, k);
  if (k >= 1) j.coeffs[1] = 1.0;
  return j;
}

namespace {

template <class T>
T scalar_of(double v) {
  if constexpr (std::is_same_v<T, double>) {
    return v;
  } else {
    return point_interval(v);
  }
}

template <class T>
std::vector<T> jet_node(const AnalyticExpr& e, int idx, const std::vector<T>& x_seed,
                        const std::vector<T>& t_seed) {
  const ExprNode& n = e.nodes()[static_cast<std::size_t>(idx)];
  switch (n.kind) {
    case NodeKind::Constant: {
      std::vector<T> c(x_seed.size(), T{});
      c[0] = scalar_of<T>(n.value);
      return c;
    }
    case NodeKind::Variable:
      return n.var == 0 ? x_seed : t_seed;
    case NodeKind::Neg:
      return series::neg(jet_node(e, n.lhs, x_seed, t_seed));
    case NodeKind::Pow:
      return series::pow(jet_node(e, n.lhs, x_seed, t_seed), n.exponent, scalar_of<T>(1.0));
    case NodeKind::Add:
      return series::add(jet_node(e, n.lhs, x_seed, t_seed), jet_node(e, n.rhs, x_seed, t_seed));
    case NodeKind::Sub:
      return series::sub(jet_node(e, n.lhs, x_seed, t_seed), jet_node(e, n.rhs, x_seed, t_seed));
    case NodeKind::Mul:
      return series::mul(jet_node(e, n.lhs, x_seed, t_seed), jet_node(e, n.rhs, x_seed, t_seed));
    case NodeKind::Div:
      return series::div(jet_node(e, n.lhs, x_seed, t_seed), jet_node(e, n.rhs, x_seed, t_seed));
  }
  fail(Err::Syntax, "corrupt expression tree");
}

void check_jet_order(int k) {
  if (k < 0) fail(Err::OutOfRange, "jet order must be nonnegative");
  if (k > kJetOrderCap) fail(Err::OutOfRange, "jet order cap is 32");
}

}  // namespace

Jet eval_jet(const AnalyticExpr& e, double a, int k) {
  check_jet_order(k);
  std::vector<double> x_seed(static_cast<std::size_t>(k) + 1, 0.0);
  x_seed[0] = a;
  if (k >= 1) x_seed[1] = 1.0;
  std::vector<double> t_seed(static_cast<std::size_t>(k) + 1, 0.0);
  Jet j;
  j.base_point = a;
  j.coeffs = jet_node(e, e.root(), x_seed, t_seed);
  return j;
}

std::vector<IntervalBound> eval_interval_jet_xt(const AnalyticExpr& e, IntervalBound x,
                                                IntervalBound t, int k) {
  check_jet_order(k);
  std::vector<IntervalBound> x_seed(static_cast<std::size_t>(k) + 1, IntervalBound{});
  x_seed[0] = x;
  if (k >= 1) x_seed[1] = point_interval(1.0);
  std::vector<IntervalBound> t_seed(static_cast<std::size_t>(k) + 1, IntervalBound{});
  t_seed[0] = t;
  return jet_node(e, e.root(), x_seed, t_seed);
}

std::vector<IntervalBound> eval_interval_jet(const AnalyticExpr& e, IntervalBound x, int k) {
  return eval_interval_jet_xt(e, x, point_interval(0.0), k);
}

IntervalBound eval_interval(const AnalyticExpr& e, IntervalBound x) {
  return eval_interval_jet(e, x, 0)[0];
}

Jet compose_jets(const Jet& outer, const Jet& inner) {
  if (outer.order() != inner.order())
    fail(Err::BasePointMismatch, "jet orders differ");
  if (std::abs(outer.base_point - inner.value()) > 1e-9)
    fail(Err::BasePointMismatch, "outer base point does not match inner value");
  const int k = inner.order();
  std::vector<double> shifted = inner.coeffs;
  shifted[0] = 0.0;  // (g - g0)
  std::vector<double> acc(static_cast<std::size_t>(k) + 1, 0.0);
  acc[0] = outer.coeffs[static_cast<std::size_t>(k)];
  for (int j = k - 1; j >= 0; --j) {
    acc = series::mul(acc, shifted);
    acc[0] += outer.coeffs[static_cast<std::size_t>(j)];
  }
  Jet out;
  out.base_point = inner.base_point;
  out.coeffs = std::move(acc);
  return out;
}

// ---------------------------------------------------------------------------
// Certified enclosures
// ---------------------------------------------------------------------------

namespace {

// Adaptive bisection on the domain; boxes where evaluation currently throws
// DivisionNearZero are refined first and only fail if the budget runs out.
IntervalBound coeff_enclosure(const AnalyticExpr& e, IntervalBound domain, int depth,
                              int coeff) {
  struct Box {
    IntervalBound x;
    IntervalBound val;
    bool failed;
    double priority;  // width of target coefficient, +inf when failed
  };
  auto evaluate = [&](IntervalBound x) -> Box {
    Box b;
    b.x = x;
    try {
      const auto jet = eval_interval_jet(e, x, coeff);
      b.val = jet[static_cast<std::size_t>(coeff)];
      b.failed = false;
      b.priority = b.val.width();
    } catch (const LabError& err) {
      if (err.code() != Err::DivisionNearZero) throw;
      b.failed = true;
      b.priority = std::numeric_limits<double>::infinity();
    }
    return b;
  };

  auto cmp = [](const Box& a, const Box& b) {
    if (a.priority != b.priority) return a.priority < b.priority;
    return a.x.lo > b.x.lo;  // deterministic tie-break
  };
  std::priority_queue<Box, std::vector<Box>, decltype(cmp)> queue(cmp);
  queue.push(evaluate(domain));
  std::size_t budget = std::size_t{1} << std::min(depth, 30);
  while (queue.size() < budget) {
    Box top = queue.top();
    if (!top.failed && top.priority <= 0.0) break;
    if (top.x.width() <= 1e-15) {
      if (top.failed)
        fail(Err::DivisionNearZero, "denominator not bounded away from zero on domain");
      break;
    }
    queue.pop();
    const double mid = top.x.mid();
    queue.push(evaluate({top.x.lo, mid}));
    queue.push(evaluate({mid, top.x.hi}));
  }
  bool have = false;
  IntervalBound out{};
  while (!queue.empty()) {
    const Box& b = queue.top();
    if (b.failed)
      fail(Err::DivisionNearZero, "denominator not bounded away from zero on domain");
    out = have ? hull(out, b.val) : b.val;
    have = true;
    queue.pop();
  }
  return out;
}

}  // namespace

IntervalBound derivative_enclosure(const AnalyticExpr& e, IntervalBound domain, int depth) {
  if (depth < 0) fail(Err::OutOfRange, "depth must be nonnegative");
  return coeff_enclosure(e, domain, depth, 1);
}

IntervalBound range_enclosure(const AnalyticExpr& e, IntervalBound domain, int depth) {
  if (depth < 0) fail(Err::OutOfRange, "depth must be nonnegative");
  return coeff_enclosure(e, domain, depth, 0);
}

void validate_denominators(const AnalyticExpr& e, IntervalBound domain, int depth) {
  range_enclosure(e, domain, depth);
}

IntervalBound sup_norm_diff(const AnalyticExpr& f, const AnalyticExpr& g, double tol,
                            std::size_t eval_budget, int threads) {
  if (tol <= 0.0) fail(Err::OutOfRange, "tol must be positive");
  // difference tree
  AnalyticExpr diff;
  int offset = 0;
  for (const auto& n : f.nodes()) {
    ExprNode c = n;
    diff.add_node(c);
    ++offset;
  }
  const int f_root = f.root();
  for (const auto& n : g.nodes()) {
    ExprNode c = n;
    if (c.lhs >= 0) c.lhs += offset;
    if (c.rhs >= 0) c.rhs += offset;
    diff.add_node(c);
  }
  ExprNode top;
  top.kind = NodeKind::Sub;
  top.lhs = f_root;
  top.rhs = g.root() + offset;
  diff.set_root(diff.add_node(top));

  const IntervalBound unit{0.0, 1.0};
  validate_denominators(diff, unit, 8);
  if (structurally_equal(f, g)) return {0.0, 0.0};
  const double lip = derivative_enclosure(diff, unit, 6).mag();

  const double raw = std::ceil(lip / (2.0 * tol)) + 2.0;
  if (!(raw < static_cast<double>(eval_budget)))
    fail(Err::BudgetExceeded, "sup-norm grid of " + std::to_string(raw) +
                                  " points exceeds evaluation budget");
  const std::size_t n_points = std::max<std::size_t>(2, static_cast<std::size_t>(raw));
  const double step = 1.0 / static_cast<double>(n_points - 1);

  const std::size_t chunk = 4096;
  const std::size_t n_chunks = (n_points + chunk - 1) / chunk;
  std::vector<double> chunk_lo(n_chunks, 0.0), chunk_hi(n_chunks, 0.0);
  parallel_chunks(n_points, threads, chunk, [&](std::size_t begin, std::size_t end) {
    double lo_max = 0.0, hi_max = 0.0;
    for (std::size_t i = begin; i < end; ++i) {
      const double x = (i + 1 == n_points) ? 1.0 : static_cast<double>(i) * step;
      const IntervalBound d = abs_interval(eval_interval(diff, point_interval(x)));
      lo_max = std::max(lo_max, d.lo);
      hi_max = std::max(hi_max, d.hi);
    }
    chunk_lo[begin / chunk] = lo_max;
    chunk_hi[begin / chunk] = hi_max;
  });
  double lo_max = 0.0, hi_max = 0.0;
  for (std::size_t c = 0; c < n_chunks; ++c) {
    lo_max = std::max(lo_max, chunk_lo[c]);
    hi_max = std::max(hi_max, chunk_hi[c]);
  }
  return {lo_max, hi_max + lip * step / 2.0};
}

}  // namespace conformal
