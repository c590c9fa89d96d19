#include "conformal/lab.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>

#include "conformal/parallel.hpp"
#include "conformal/rng.hpp"

namespace conformal {

double ExperimentReport::observed_value(const std::string& key) const {
  for (const auto& [k, v] : observed)
    if (k == key) return v;
  fail(Err::OutOfRange, "no observed value named '" + key + "'");
}

namespace {

void param(ExperimentReport& r, const std::string& k, const std::string& v) {
  r.parameters.push_back({k, v});
}
void param(ExperimentReport& r, const std::string& k, double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  r.parameters.push_back({k, buf});
}
void observe(ExperimentReport& r, const std::string& k, double v) {
  r.observed.push_back({k, v});
}

// psi must be a validated C1 self-map of [0,1] with eps <= |psi'| <= 1/eps.
void check_psi(ExperimentReport& r, const AnalyticExpr& psi, double eps) {
  validate_denominators(psi, {0.0, 1.0}, 6);
  const IntervalBound range = range_enclosure(psi, {0.0, 1.0}, 6);
  if (range.lo < -1e-9 || range.hi > 1.0 + 1e-9)
    r.violations.push_back("psi does not map [0,1] into itself");
  const IntervalBound dpsi = abs_interval(derivative_enclosure(psi, {0.0, 1.0}, 6));
  if (dpsi.mig() < eps || dpsi.mag() > 1.0 / eps)
    r.violations.push_back("psi derivative leaves [eps, 1/eps]");
}

// Categorical sampler over measure atoms by cumulative weight.
struct AtomSampler {
  std::vector<double> cdf;
  const RealMeasure* measure;

  explicit AtomSampler(const RealMeasure& m) : measure(&m) {
    double acc = 0.0;
    cdf.reserve(m.atoms.size());
    for (const auto& a : m.atoms) {
      acc += a.weight;
      cdf.push_back(acc);
    }
  }
  double sample(Rng& rng) const {
    const double u = rng.next_u01() * cdf.back();
    const auto it = std::lower_bound(cdf.begin(), cdf.end(), u);
    const std::size_t idx = std::min<std::size_t>(
        static_cast<std::size_t>(it - cdf.begin()), measure->atoms.size() - 1);
    return measure->atoms[idx].position;
  }
};

}  // namespace

ExperimentReport entropy_increase_experiment(const IFS& ifs, const PolyMeasure& nu,
                                             const AnalyticExpr& psi, int n, double eps,
                                             double rho_min, std::size_t budget) {
  if (n < 4) fail(Err::OutOfRange, "n must be at least 4");
  ExperimentReport r;
  r.name = "entropy-increase";
  param(r, "n", static_cast<double>(n));
  param(r, "eps", eps);
  param(r, "rho_min", rho_min);
  param(r, "psi", to_string(psi));

  check_psi(r, psi, eps);
  for (const auto& atom : nu.atoms) {
    if (atom.poly.l2_norm() > 1.0 / eps) {
      r.violations.push_back("nu atom coefficient norm exceeds 1/eps");
      break;
    }
  }
  for (const auto& atom : nu.atoms) {
    const IntervalBound dp = abs_interval(poly_range(atom.poly.derivative(), {0.0, 1.0}, 6));
    if (dp.mig() < eps) {
      r.violations.push_back("nu atom derivative drops below eps on [0,1]");
      break;
    }
  }
  const double nu_rate = poly_dyadic_entropy(nu, n) / n;
  observe(r, "nu_entropy_rate", nu_rate);
  if (nu_rate < eps)
    r.violations.push_back("nu entropy rate (1/n)H(nu, D_n) below eps");

  const DimReport dim = entropy_dimension(ifs, n, budget);
  observe(r, "dim_estimate", dim.estimate);
  if (dim.estimate > 0.99) {
    r.violations.push_back("dimension estimate is 1 within tolerance; increase "
                           "requires dim mu < 1");
    observe(r, "inapplicable", 1.0);
  }

  const RealMeasure theta =
      pushforward(discretize_self_conformal(ifs, n, budget), psi);
  const RealMeasure conv = convolve(nu, theta, budget);
  const double conv_rate = dyadic_entropy(conv, n) / n;
  const double rho_hat = conv_rate - dim.estimate;
  observe(r, "conv_entropy_rate", conv_rate);
  observe(r, "rho_hat", rho_hat);
  r.pass = r.violations.empty() && rho_hat >= rho_min;
  return r;
}

ExperimentReport uniform_entropy_dimension_check(const IFS& ifs, const AnalyticExpr& psi,
                                                 int m, int n, double eps, int samples,
                                                 std::uint64_t seed, std::size_t budget,
                                                 int threads) {
  if (m < 2 || n < m) fail(Err::OutOfRange, "need n >= m >= 2");
  if (samples < 1) fail(Err::OutOfRange, "need at least one sample");
  ExperimentReport r;
  r.name = "uniform-entropy-dimension";
  r.seed = seed;
  param(r, "m", static_cast<double>(m));
  param(r, "n", static_cast<double>(n));
  param(r, "eps", eps);
  param(r, "samples", static_cast<double>(samples));
  param(r, "psi", to_string(psi));
  check_psi(r, psi, eps);

  const RealMeasure theta =
      pushforward(discretize_self_conformal(ifs, n + m, budget), psi);
  const double dim = entropy_dimension(ifs, std::max(4, n), budget).estimate;
  observe(r, "dim_estimate", dim);

  const AtomSampler sampler(theta);
  std::vector<char> hits(static_cast<std::size_t>(samples), 0);
  parallel_chunks(static_cast<std::size_t>(samples), threads, 64,
                  [&](std::size_t begin, std::size_t end) {
                    for (std::size_t s = begin; s < end; ++s) {
                      Rng rng(seed, s);
                      const int i = 1 + static_cast<int>(rng.next_below(
                                            static_cast<std::uint64_t>(n)));
                      const double x = sampler.sample(rng);
                      // x is an atom of theta, so its cell is never empty
                      const RealMeasure comp = component(theta, x, i);
                      const double h = dyadic_entropy(comp, i + m) / m;
                      hits[s] = std::abs(h - dim) < eps ? 1 : 0;
                    }
                  });
  std::size_t hit_count = 0;
  for (char h : hits) hit_count += static_cast<std::size_t>(h);
  const double fraction = static_cast<double>(hit_count) / samples;
  observe(r, "fraction_in_window", fraction);
  observe(r, "resamples", 0.0);
  r.pass = r.violations.empty() && fraction > 1.0 - eps;
  return r;
}

ExperimentReport doubling_check(const IFS& ifs, const AnalyticExpr& psi, double delta,
                                int samples, std::uint64_t seed, int resolution,
                                double max_ratio_bound, std::size_t budget, int threads) {
  if (!(delta > 0.0 && delta < 1.0)) fail(Err::OutOfRange, "need 0 < delta < 1");
  if (samples < 1) fail(Err::OutOfRange, "need at least one sample");
  ExperimentReport r;
  r.name = "doubling";
  r.seed = seed;
  param(r, "delta", delta);
  param(r, "samples", static_cast<double>(samples));
  param(r, "resolution", static_cast<double>(resolution));
  param(r, "max_ratio_bound", max_ratio_bound);
  param(r, "psi", to_string(psi));
  check_psi(r, psi, 0.01);

  const RealMeasure theta =
      pushforward(discretize_self_conformal(ifs, resolution, budget), psi);
  const AtomSampler sampler(theta);

  std::vector<double> ratios(static_cast<std::size_t>(samples), 0.0);
  std::vector<char> skipped(static_cast<std::size_t>(samples), 0);
  parallel_chunks(static_cast<std::size_t>(samples), threads, 256,
                  [&](std::size_t begin, std::size_t end) {
                    for (std::size_t s = begin; s < end; ++s) {
                      Rng rng(seed, s);
                      const double x = sampler.sample(rng);
                      const double rexp = 2.0 + static_cast<double>(rng.next_below(9));
                      const double radius = std::exp2(-rexp);
                      const double denom = ball_mass(theta, x, radius);
                      if (denom <= 0.0) {
                        skipped[s] = 1;
                        continue;
                      }
                      ratios[s] = ball_mass(theta, x, delta * radius) / denom;
                    }
                  });
  double max_ratio = 0.0;
  std::size_t skip_count = 0;
  for (std::size_t s = 0; s < ratios.size(); ++s) {
    max_ratio = std::max(max_ratio, ratios[s]);
    skip_count += static_cast<std::size_t>(skipped[s]);
  }
  observe(r, "max_ratio", max_ratio);
  observe(r, "skipped", static_cast<double>(skip_count));
  r.pass = r.violations.empty() && max_ratio <= max_ratio_bound;
  return r;
}

ExperimentReport linearization_check(const PolyMeasure& nu, const RealMeasure& theta,
                                     const Polynomial& p, double x, int m, double delta,
                                     std::size_t budget) {
  if (m < 1) fail(Err::OutOfRange, "m must be at least 1");
  if (!(delta > 0.0 && delta < 1.0)) fail(Err::OutOfRange, "need 0 < delta < 1");
  ExperimentReport r;
  r.name = "linearization";
  param(r, "m", static_cast<double>(m));
  param(r, "delta", delta);
  param(r, "x", x);

  for (const auto& atom : nu.atoms) {
    if (coeff_distance(atom.poly, p) > delta) {
      r.violations.push_back("nu atom farther than delta from p in coefficient norm");
      break;
    }
  }
  for (const auto& atom : theta.atoms) {
    if (std::abs(atom.position - x) > delta) {
      r.violations.push_back("theta atom farther than delta from x");
      break;
    }
  }

  const int level = static_cast<int>(std::floor(m - std::log2(delta)));
  const double lhs = dyadic_entropy(convolve(nu, theta, budget), level) / m;

  const double slope = p.derivative()(x);
  double rhs = 0.0;
  if (slope == 0.0) {
    r.violations.push_back("p'(x) = 0; differential surrogate undefined");
  } else {
    std::vector<RealMeasure::Atom> at_x;
    at_x.reserve(nu.atoms.size());
    for (const auto& atom : nu.atoms) at_x.push_back({atom.poly(x), atom.weight});
    const RealMeasure nu_x = make_measure(std::move(at_x));
    const RealMeasure scaled = scale_translate(theta, slope, 0.0);
    rhs = dyadic_entropy(real_convolve(nu_x, scaled, budget), level) / m;
  }
  const double gap = std::abs(lhs - rhs);
  observe(r, "lhs_entropy_rate", lhs);
  observe(r, "rhs_entropy_rate", rhs);
  observe(r, "gap", gap);
  observe(r, "level", static_cast<double>(level));
  r.pass = r.violations.empty();
  return r;
}

ExperimentReport multiscale_decomposition_check(const PolyMeasure& nu,
                                                const RealMeasure& theta, int n, int m,
                                                std::size_t budget) {
  if (m < 2 || n < m) fail(Err::OutOfRange, "need n >= m >= 2");
  ExperimentReport r;
  r.name = "multiscale-decomposition";
  param(r, "n", static_cast<double>(n));
  param(r, "m", static_cast<double>(m));

  const double lhs = dyadic_entropy(convolve(nu, theta, budget), n) / n;

  double expectation = 0.0;
  for (int i = 1; i <= n; ++i) {
    // exact enumeration over occupied component cells, weighted by mass
    std::map<std::vector<std::int64_t>, PolyMeasure> nu_cells;
    for (const auto& atom : nu.atoms) {
      std::vector<std::int64_t> key(static_cast<std::size_t>(nu.order) + 1, 0);
      for (std::size_t j = 0; j < key.size(); ++j)
        key[j] = dyadic_cell(j < atom.poly.coeffs.size() ? atom.poly.coeffs[j] : 0.0, i);
      auto& cell = nu_cells[key];
      cell.order = nu.order;
      cell.atoms.push_back(atom);
    }
    std::map<std::int64_t, std::vector<RealMeasure::Atom>> theta_cells;
    for (const auto& atom : theta.atoms)
      theta_cells[dyadic_cell(atom.position, i)].push_back(atom);

    double level_sum = 0.0;
    for (const auto& [pkey, pcell] : nu_cells) {
      double pw = 0.0;
      for (const auto& a : pcell.atoms) pw += a.weight;
      PolyMeasure pnorm = pcell;
      for (auto& a : pnorm.atoms) a.weight /= pw;
      for (const auto& [xkey, xatoms] : theta_cells) {
        double xw = 0.0;
        for (const auto& a : xatoms) xw += a.weight;
        std::vector<RealMeasure::Atom> norm = xatoms;
        for (auto& a : norm) a.weight /= xw;
        const RealMeasure xcell = make_measure(std::move(norm));
        const double h = dyadic_entropy(convolve(pnorm, xcell, budget), i + m) / m;
        level_sum += pw * xw * h;
      }
    }
    expectation += level_sum;
  }
  expectation /= n;

  const double k = static_cast<double>(nu.order);
  const double slack = (k + 1.0) * (1.0 / m + static_cast<double>(m) / n) * 10.0;
  observe(r, "lhs_entropy_rate", lhs);
  observe(r, "rhs_expectation", expectation);
  observe(r, "gap", lhs - expectation);
  observe(r, "slack", slack);
  if (m >= n) observe(r, "vacuous", 1.0);
  r.pass = lhs >= expectation - slack;
  return r;
}

ExperimentReport taylor_block_experiment(const IFS& ifs, int n, int n_prime, int k,
                                         int grid, std::size_t budget, int threads) {
  if (n < 1 || n_prime < 1) fail(Err::OutOfRange, "word lengths must be positive");
  if (k < 1) fail(Err::OutOfRange, "k must be at least 1");
  if (grid < 2) fail(Err::OutOfRange, "grid must have at least 2 points");
  const double words_n = std::pow(static_cast<double>(ifs.alphabet_size), n);
  const double words_np = std::pow(static_cast<double>(ifs.alphabet_size), n_prime);
  if (words_n > static_cast<double>(budget) || words_np > static_cast<double>(budget))
    fail(Err::BudgetExceeded, "word enumeration exceeds budget");

  ExperimentReport r;
  r.name = "taylor-blocks";
  param(r, "n", static_cast<double>(n));
  param(r, "n_prime", static_cast<double>(n_prime));
  param(r, "k", static_cast<double>(k));
  param(r, "grid", static_cast<double>(grid));

  auto enumerate = [&](int len) {
    std::vector<Word> out;
    const std::size_t count =
        static_cast<std::size_t>(std::pow(static_cast<double>(ifs.alphabet_size), len));
    out.reserve(count);
    for (std::size_t idx = 0; idx < count; ++idx) {
      Word w;
      w.letters.resize(static_cast<std::size_t>(len));
      std::size_t rem = idx;
      for (int j = len - 1; j >= 0; --j) {
        w.letters[static_cast<std::size_t>(j)] = static_cast<std::uint8_t>(
            rem % static_cast<std::size_t>(ifs.alphabet_size));
        rem /= static_cast<std::size_t>(ifs.alphabet_size);
      }
      out.push_back(std::move(w));
    }
    return out;
  };
  const std::vector<Word> block_words = enumerate(n);
  const std::vector<Word> inner_words = enumerate(n_prime);

  // dyadic derivative blocks: |phi'(0)| in (2^-(j+1), 2^-j] shares a block,
  // so any two block members differ by a factor of at most 2
  std::map<int, std::size_t> block_sizes;
  std::vector<int> block_of(block_words.size());
  for (std::size_t w = 0; w < block_words.size(); ++w) {
    const double d = std::abs(word_value_deriv(ifs, block_words[w], 0.0).second);
    const int j = static_cast<int>(std::floor(-std::log2(d)));
    block_of[w] = j;
    block_sizes[j] += 1;
  }

  const std::size_t rows = block_words.size() * inner_words.size();
  std::vector<double> ratios(rows, 0.0);
  parallel_chunks(rows, threads, 8, [&](std::size_t begin, std::size_t end) {
    for (std::size_t idx = begin; idx < end; ++idx) {
      const Word& v = block_words[idx / inner_words.size()];
      const Word& u = inner_words[idx % inner_words.size()];
      const double a = word_eval(ifs, u, 0.0);
      const IntervalBound image = word_range(ifs, u, {0.0, 1.0});
      const double radius = std::max(image.hi - a, a - image.lo);
      const Polynomial proj = taylor_project(ifs, v, k, a);
      const double bound = remainder_bound(ifs, v, k, a, radius);
      double measured = 0.0;
      for (int g = 0; g < grid; ++g) {
        const double x = static_cast<double>(g) / (grid - 1);
        const double w = word_eval(ifs, u, x);
        measured = std::max(measured, std::abs(word_eval(ifs, v, w) - proj(w)));
      }
      ratios[idx] = measured / bound;
    }
  });
  double max_ratio = 0.0;
  for (double ratio : ratios) max_ratio = std::max(max_ratio, ratio);
  observe(r, "max_ratio", max_ratio);
  observe(r, "rows", static_cast<double>(rows));
  observe(r, "blocks", static_cast<double>(block_sizes.size()));
  r.pass = max_ratio <= 1.0;
  return r;
}

}  // namespace conformal
