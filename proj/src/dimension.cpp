#include "conformal/dimension.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <unordered_set>

#include "conformal/parallel.hpp"
#include "conformal/rng.hpp"

namespace conformal {

namespace {

double regression_slope(const std::vector<std::pair<double, double>>& pts) {
  const double n = static_cast<double>(pts.size());
  double xb = 0.0, yb = 0.0;
  for (const auto& [x, y] : pts) {
    xb += x;
    yb += y;
  }
  xb /= n;
  yb /= n;
  double num = 0.0, den = 0.0;
  for (const auto& [x, y] : pts) {
    num += (x - xb) * (y - yb);
    den += (x - xb) * (x - xb);
  }
  if (den == 0.0) return 0.0;
  return num / den;
}

double clamp_estimate(double slope) { return std::clamp(slope, 0.0, 1.5); }

}  // namespace

double shannon_entropy(std::span<const double> probs) {
  if (probs.empty()) fail(Err::InvalidDistribution, "empty probability vector");
  double sum = 0.0;
  for (double p : probs) {
    if (!(p > 0.0)) fail(Err::InvalidDistribution, "probabilities must be positive");
    sum += p;
  }
  if (std::abs(sum - 1.0) > 1e-9)
    fail(Err::InvalidDistribution, "probabilities must sum to 1");
  std::vector<double> sorted(probs.begin(), probs.end());
  std::sort(sorted.begin(), sorted.end(), std::greater<double>());
  double h = 0.0;
  for (double p : sorted) h -= p * std::log2(p);
  return h;
}

double lyapunov(const IFS& ifs, int resolution, std::size_t budget) {
  if (resolution < 1) fail(Err::OutOfRange, "resolution must be at least 1");
  const RealMeasure theta = discretize_self_conformal(ifs, resolution, budget);
  double chi = 0.0;
  for (int i = 0; i < ifs.alphabet_size; ++i) {
    const AnalyticExpr& m = ifs.maps[static_cast<std::size_t>(i)];
    double s = 0.0;
    for (const auto& a : theta.atoms)
      s += a.weight * std::log2(std::abs(eval_value_deriv(m, a.position).second));
    chi -= ifs.probs[static_cast<std::size_t>(i)] * s;
  }
  return chi;
}

BirkhoffEstimate lyapunov_birkhoff(const IFS& ifs, int samples, int word_length,
                                   std::uint64_t seed, int threads) {
  if (samples < 1 || word_length < 1)
    fail(Err::OutOfRange, "samples and word length must be at least 1");
  std::vector<double> cdf(ifs.probs.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < ifs.probs.size(); ++i) {
    acc += ifs.probs[i];
    cdf[i] = acc;
  }
  std::vector<double> per_sample(static_cast<std::size_t>(samples), 0.0);
  parallel_chunks(static_cast<std::size_t>(samples), threads, 256,
                  [&](std::size_t begin, std::size_t end) {
                    for (std::size_t s = begin; s < end; ++s) {
                      Rng rng(seed, s);
                      double x = 0.0;
                      double log_deriv = 0.0;
                      for (int j = 0; j < word_length; ++j) {
                        const double u = rng.next_u01();
                        std::size_t letter = 0;
                        while (letter + 1 < cdf.size() && u > cdf[letter]) ++letter;
                        const auto [v, d] = eval_value_deriv(ifs.maps[letter], x);
                        log_deriv += std::log2(std::abs(d));
                        x = v;
                      }
                      per_sample[s] = -log_deriv / static_cast<double>(word_length);
                    }
                  });
  double mean = 0.0;
  for (double v : per_sample) mean += v;
  mean /= static_cast<double>(samples);
  return {mean, std::log2(ifs.c_bound) / static_cast<double>(word_length)};
}

IntervalBound lyapunov_enclosure(const IFS& ifs) {
  // -log2 is decreasing, so the low end comes from the largest |phi'|
  IntervalBound chi{0.0, 0.0};
  for (std::size_t i = 0; i < ifs.maps.size(); ++i) {
    const IntervalBound mag = abs_interval(ifs.deriv_bounds[i]);
    chi.lo += ifs.probs[i] * -std::log2(mag.hi);
    chi.hi += ifs.probs[i] * -std::log2(mag.lo);
  }
  return chi;
}

double theorem_rhs(const IFS& ifs, int resolution, std::size_t budget) {
  const double h = shannon_entropy(ifs.probs);
  if (h == 0.0) return 0.0;
  return std::min(1.0, h / lyapunov(ifs, resolution, budget));
}

DimReport entropy_dimension(const IFS& ifs, int n_max, std::size_t budget) {
  if (n_max < 4) fail(Err::OutOfRange, "n_max must be at least 4");
  const RealMeasure theta = discretize_self_conformal(ifs, n_max, budget);
  DimReport report;
  std::vector<std::pair<double, double>> pts;
  for (int n = 4; n <= n_max; ++n) {
    const double h = dyadic_entropy(theta, n);
    report.levels.push_back({n, h / n});
    pts.push_back({static_cast<double>(n), h});
  }
  const std::vector<std::pair<double, double>> half(pts.begin() + pts.size() / 2, pts.end());
  report.extrapolation_slope = regression_slope(half);
  report.estimate = clamp_estimate(report.extrapolation_slope);
  return report;
}

double local_dimension(const IFS& ifs, double x, std::span<const double> radii,
                       int resolution, std::size_t budget) {
  if (radii.size() < 2) fail(Err::OutOfRange, "need at least two radii");
  for (std::size_t i = 1; i < radii.size(); ++i)
    if (!(radii[i] < radii[i - 1])) fail(Err::OutOfRange, "radii must be decreasing");
  const RealMeasure theta = discretize_self_conformal(ifs, resolution, budget);
  std::vector<std::pair<double, double>> pts;
  for (double r : radii) {
    const double mass = ball_mass(theta, x, r);
    if (mass <= 0.0)
      fail(Err::ZeroMass, "ball of radius " + std::to_string(r) + " has no atoms");
    pts.push_back({std::log2(r), std::log2(mass)});
  }
  return regression_slope(pts);
}

DimReport box_counting(const IFS& ifs, int n, std::size_t budget) {
  if (n < 4) fail(Err::OutOfRange, "n must be at least 4");
  DimReport report;
  std::vector<std::pair<double, double>> pts;
  const IntervalBound unit{0.0, 1.0};
  for (int j = 4; j <= n; ++j) {
    const CutSet cs = cut_set(ifs, j, budget);
    std::unordered_set<std::int64_t> cells;
    for (const auto& e : cs.entries) {
      const IntervalBound image = word_range(ifs, e.word, unit);
      const std::int64_t lo = dyadic_cell(image.lo, j);
      const std::int64_t hi = dyadic_cell(image.hi, j);
      for (std::int64_t c = lo; c <= hi; ++c) cells.insert(c);
    }
    const double count = static_cast<double>(cells.size());
    report.levels.push_back({j, std::log2(count) / j});
    pts.push_back({static_cast<double>(j), std::log2(count)});
  }
  const std::vector<std::pair<double, double>> half(pts.begin() + pts.size() / 2, pts.end());
  report.extrapolation_slope = regression_slope(half);
  report.estimate = clamp_estimate(report.extrapolation_slope);
  return report;
}

}  // namespace conformal
