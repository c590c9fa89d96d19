#include "conformal/ifs.hpp"

#include <algorithm>
#include <cmath>

#include "conformal/rng.hpp"

namespace conformal {

std::string to_string(const Word& w, int alphabet_size) {
  std::string s;
  if (alphabet_size <= 10) {
    for (auto l : w.letters) s += static_cast<char>('0' + l);
  } else {
    for (std::size_t i = 0; i < w.letters.size(); ++i) {
      if (i) s += '.';
      s += std::to_string(static_cast<int>(w.letters[i]));
    }
  }
  return s;
}

Word word_from_string(const std::string& s, int alphabet_size) {
  Word w;
  if (alphabet_size <= 10) {
    for (char c : s) {
      if (c < '0' || c > '9') fail(Err::Syntax, "word digit expected");
      const int l = c - '0';
      if (l >= alphabet_size) fail(Err::OutOfRange, "letter outside alphabet");
      w.letters.push_back(static_cast<std::uint8_t>(l));
    }
    return w;
  }
  std::size_t pos = 0;
  while (pos < s.size()) {
    std::size_t dot = s.find('.', pos);
    if (dot == std::string::npos) dot = s.size();
    const int l = std::stoi(s.substr(pos, dot - pos));
    if (l < 0 || l >= alphabet_size) fail(Err::OutOfRange, "letter outside alphabet");
    w.letters.push_back(static_cast<std::uint8_t>(l));
    pos = dot + 1;
  }
  return w;
}

namespace {

constexpr double kRangeSlack = 1e-9;
constexpr int kValidateDepth = 8;

double find_fixed_point(const AnalyticExpr& map) {
  // g(x) = map(x) - x is strictly decreasing when map' < 1, so the fixed
  // point is the unique sign change; grid scan then bisection to 1e-10.
  const int grid = 10000;
  double prev_x = 0.0;
  double prev_g = eval(map, 0.0) - 0.0;
  if (prev_g <= 0.0) return 0.0;
  for (int i = 1; i <= grid; ++i) {
    const double x = static_cast<double>(i) / grid;
    const double g = eval(map, x) - x;
    if (g <= 0.0) {
      double lo = prev_x, hi = x;
      while (hi - lo > 1e-10) {
        const double mid = 0.5 * (lo + hi);
        if (eval(map, mid) - mid > 0.0)
          lo = mid;
        else
          hi = mid;
      }
      return 0.5 * (lo + hi);
    }
    prev_x = x;
    prev_g = g;
  }
  return 1.0;  // g > 0 up to the last grid point: fixed point at the right end
}

}  // namespace

IFS validate_ifs(std::vector<AnalyticExpr> maps, std::vector<double> probs) {
  if (maps.empty()) fail(Err::OutOfRange, "need at least one map");
  if (probs.size() != maps.size())
    fail(Err::InvalidDistribution, "probability vector length mismatch");
  double psum = 0.0;
  for (double p : probs) {
    if (!(p > 0.0)) fail(Err::NonPositiveProb, "probabilities must be positive");
    psum += p;
  }
  if (std::abs(psum - 1.0) > 1e-12)
    fail(Err::InvalidDistribution, "probabilities must sum to 1 within 1e-12");

  IFS ifs;
  ifs.alphabet_size = static_cast<int>(maps.size());
  ifs.maps = std::move(maps);
  ifs.probs = std::move(probs);

  const IntervalBound unit{0.0, 1.0};
  ifs.rho_min = 1.0;
  ifs.rho_max = 0.0;
  double log2_distortion_rate = 0.0;  // certified sup of |d/dx log2|phi'||
  for (int i = 0; i < ifs.alphabet_size; ++i) {
    const AnalyticExpr& m = ifs.maps[static_cast<std::size_t>(i)];
    if (m.uses_var(1)) fail(Err::UnknownIdentifier, "map depends on family parameter t");
    validate_denominators(m, unit, kValidateDepth);

    const IntervalBound deriv = derivative_enclosure(m, unit, kValidateDepth);
    if (deriv.contains(0.0))
      fail(Err::NotContracting,
           "map " + std::to_string(i) + " derivative not bounded away from zero");
    if (deriv.mag() >= 1.0)
      fail(Err::NotContracting, "map " + std::to_string(i) + " is not a contraction");
    ifs.deriv_bounds.push_back(deriv);
    ifs.rho_min = std::min(ifs.rho_min, deriv.mig());
    ifs.rho_max = std::max(ifs.rho_max, deriv.mag());

    IntervalBound range = range_enclosure(m, unit, kValidateDepth);
    if (range.lo < -kRangeSlack || range.hi > 1.0 + kRangeSlack)
      fail(Err::EscapesInterval,
           "map " + std::to_string(i) + " leaves [0,1]: range [" +
               std::to_string(range.lo) + ", " + std::to_string(range.hi) + "]");
    range.lo = std::max(range.lo, 0.0);
    range.hi = std::min(range.hi, 1.0);
    ifs.range_bounds.push_back(range);

    // sup over [0,1] of |phi''/phi'| from second-order interval jets
    const int boxes = 1 << kValidateDepth;
    double ratio_hi = 0.0;
    for (int b = 0; b < boxes; ++b) {
      const IntervalBound sub{static_cast<double>(b) / boxes,
                              static_cast<double>(b + 1) / boxes};
      const auto jet = eval_interval_jet(m, sub, 2);
      const IntervalBound ratio = abs_interval((2.0 * jet[2]) / jet[1]);
      ratio_hi = std::max(ratio_hi, ratio.hi);
    }
    log2_distortion_rate = std::max(log2_distortion_rate, ratio_hi / std::log(2.0));
  }

  // Telescoping estimate: along a word, log2|phi_u'(x)/phi_u'(y)| splits into
  // per-letter terms bounded by sup|d/dx log2|phi'|| times point separations
  // that shrink geometrically, so the exponent is at most rate/(1 - rho_max).
  ifs.c_bound = std::exp2(log2_distortion_rate / (1.0 - ifs.rho_max));

  std::vector<double> fixed_points;
  for (const auto& m : ifs.maps) fixed_points.push_back(find_fixed_point(m));
  bool common = true;
  for (double fp : fixed_points)
    if (std::abs(fp - fixed_points[0]) > 1e-8) common = false;
  if (common) ifs.common_fixed_point = fixed_points[0];

  ifs.ssc = ifs.alphabet_size > 1;
  for (int i = 0; i < ifs.alphabet_size && ifs.ssc; ++i)
    for (int j = i + 1; j < ifs.alphabet_size && ifs.ssc; ++j)
      if (ifs.range_bounds[static_cast<std::size_t>(i)].intersects(
              ifs.range_bounds[static_cast<std::size_t>(j)]))
        ifs.ssc = false;

  return ifs;
}

double word_eval(const IFS& ifs, const Word& u, double x) {
  for (std::size_t i = u.letters.size(); i-- > 0;)
    x = eval(ifs.maps[u.letters[i]], x);
  return x;
}

std::pair<double, double> word_value_deriv(const IFS& ifs, const Word& u, double x) {
  double d = 1.0;
  for (std::size_t i = u.letters.size(); i-- > 0;) {
    const auto [v, dv] = eval_value_deriv(ifs.maps[u.letters[i]], x);
    d *= dv;
    x = v;
  }
  return {x, d};
}

IntervalBound word_range(const IFS& ifs, const Word& u, IntervalBound x) {
  for (std::size_t i = u.letters.size(); i-- > 0;) {
    const auto letter = u.letters[i];
    IntervalBound v = eval_interval(ifs.maps[letter], x);
    x = intersect(v, ifs.range_bounds[letter]);
  }
  return x;
}

IntervalBound word_deriv_enclosure(const IFS& ifs, const Word& u, IntervalBound x) {
  IntervalBound d{1.0, 1.0};
  for (std::size_t i = u.letters.size(); i-- > 0;) {
    const auto letter = u.letters[i];
    const auto jet = eval_interval_jet(ifs.maps[letter], x, 1);
    IntervalBound dv = intersect(jet[1], ifs.deriv_bounds[letter]);
    d = d * dv;
    x = intersect(jet[0], ifs.range_bounds[letter]);
  }
  return d;
}

Jet word_jet(const IFS& ifs, const Word& u, double a, int k) {
  if (u.empty()) fail(Err::OutOfRange, "word must be nonempty");
  Jet cur = eval_jet(ifs.maps[u.letters.back()], a, k);
  for (std::size_t i = u.letters.size() - 1; i-- > 0;) {
    const Jet outer = eval_jet(ifs.maps[u.letters[i]], cur.value(), k);
    cur = compose_jets(outer, cur);
  }
  return cur;
}

CutSet cut_set(const IFS& ifs, int n, std::size_t budget) {
  if (n < 1) fail(Err::OutOfRange, "cut-set level must be at least 1");
  const double threshold = std::exp2(static_cast<double>(-n));
  CutSet out;
  out.n = n;

  struct Node {
    Word word;
    double weight;
  };
  std::vector<Node> stack;
  // seed in reverse letter order so the DFS emits words lexicographically
  for (int i = ifs.alphabet_size - 1; i >= 0; --i)
    stack.push_back({Word{{static_cast<std::uint8_t>(i)}},
                     ifs.probs[static_cast<std::size_t>(i)]});

  while (!stack.empty()) {
    Node node = std::move(stack.back());
    stack.pop_back();
    const auto [value, deriv] = word_value_deriv(ifs, node.word, 0.0);
    if (std::abs(deriv) <= threshold) {
      if (out.entries.size() >= budget)
        fail(Err::BudgetExceeded, "cut-set exceeds atom budget of " + std::to_string(budget));
      out.entries.push_back({std::move(node.word), node.weight, std::abs(deriv), value});
    } else {
      if (node.word.size() > 200000)
        fail(Err::BudgetExceeded, "cut-set word length runaway");
      for (int i = ifs.alphabet_size - 1; i >= 0; --i) {
        Word child = node.word;
        child.letters.push_back(static_cast<std::uint8_t>(i));
        stack.push_back({std::move(child),
                         node.weight * ifs.probs[static_cast<std::size_t>(i)]});
      }
    }
  }
  return out;
}

DistortionData distortion(const IFS& ifs, int sample_words, int sample_points,
                          std::uint64_t seed) {
  if (sample_words < 1 || sample_points < 1)
    fail(Err::OutOfRange, "sample counts must be at least 1");
  DistortionData data;
  data.c_bound = ifs.c_bound;
  data.c_emp = 1.0;
  for (int w = 0; w < sample_words; ++w) {
    Rng rng(seed, static_cast<std::uint64_t>(w));
    const std::size_t len = 1 + rng.next_below(8);
    Word word;
    for (std::size_t i = 0; i < len; ++i)
      word.letters.push_back(
          static_cast<std::uint8_t>(rng.next_below(static_cast<std::uint64_t>(ifs.alphabet_size))));
    for (int p = 0; p < sample_points; ++p) {
      const double x = rng.next_u01();
      const double y = rng.next_u01();
      const double dx = std::abs(word_value_deriv(ifs, word, x).second);
      const double dy = std::abs(word_value_deriv(ifs, word, y).second);
      if (dx > 0.0 && dy > 0.0)
        data.c_emp = std::max(data.c_emp, std::max(dx / dy, dy / dx));
    }
  }
  return data;
}

Polynomial taylor_project(const IFS& ifs, const Word& u, int k, double a) {
  const Jet jet = word_jet(ifs, u, a, k);
  // expand sum c_j (X - a)^j by Horner in the coefficient space
  Polynomial p;
  p.coeffs.assign(static_cast<std::size_t>(k) + 1, 0.0);
  p.coeffs[0] = jet.coeffs[static_cast<std::size_t>(k)];
  for (int j = k - 1; j >= 0; --j) {
    // p <- p*(X - a) + c_j
    for (std::size_t d = p.coeffs.size(); d-- > 1;)
      p.coeffs[d] = p.coeffs[d - 1] - a * p.coeffs[d];
    p.coeffs[0] = -a * p.coeffs[0] + jet.coeffs[static_cast<std::size_t>(j)];
  }
  return p;
}

double remainder_bound(const IFS& ifs, const Word& u, int k, double a, double radius) {
  (void)a;
  if (radius <= 0.0) fail(Err::OutOfRange, "radius must be positive");
  const double deriv0 = std::abs(word_value_deriv(ifs, u, 0.0).second);
  return std::pow(radius * ifs.c_bound, static_cast<double>(k + 1)) * deriv0;
}

}  // namespace conformal
