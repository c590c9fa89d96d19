#include "conformal/pressure.hpp"

#include <cmath>

#include "conformal/parallel.hpp"

namespace conformal {

namespace {

// Per-word derivative enclosures chained multiplicatively along the word; the
// DFS appends letters on the outside so each node costs one interval product.
struct ChainState {
  IntervalBound range;  // image of [0,1] under the suffix composed so far
  IntervalBound deriv;  // enclosure of the suffix derivative over [0,1]
};

IntervalBound sum_subtree(const IFS& ifs, ChainState state, int remaining, double t) {
  if (remaining == 0) return rpow(abs_interval(state.deriv), t);
  IntervalBound sum{0.0, 0.0};
  for (int i = 0; i < ifs.alphabet_size; ++i) {
    const auto jet = eval_interval_jet(ifs.maps[static_cast<std::size_t>(i)], state.range, 1);
    ChainState next;
    next.deriv = intersect(jet[1], ifs.deriv_bounds[static_cast<std::size_t>(i)]) * state.deriv;
    next.range = intersect(jet[0], ifs.range_bounds[static_cast<std::size_t>(i)]);
    sum = sum + sum_subtree(ifs, next, remaining - 1, t);
  }
  return sum;
}

double word_count(const IFS& ifs, int n) {
  return std::pow(static_cast<double>(ifs.alphabet_size), n);
}

}  // namespace

std::pair<double, double> pressure_at(const IFS& ifs, double t, int n, std::size_t budget,
                                      int threads) {
  if (t < 0.0) fail(Err::OutOfRange, "t must be nonnegative");
  if (n < 1) fail(Err::OutOfRange, "n must be at least 1");
  if (word_count(ifs, n) > static_cast<double>(budget))
    fail(Err::BudgetExceeded, "|alphabet|^n exceeds word budget");

  // split the word tree into prefix blocks, then reduce partials pairwise in
  // a fixed order so the sum is independent of the schedule
  int block_depth = 0;
  std::size_t blocks = 1;
  while (block_depth < n && blocks * static_cast<std::size_t>(ifs.alphabet_size) <= 64) {
    blocks *= static_cast<std::size_t>(ifs.alphabet_size);
    ++block_depth;
  }
  std::vector<ChainState> block_states;
  {
    std::vector<ChainState> frontier{{IntervalBound{0.0, 1.0}, IntervalBound{1.0, 1.0}}};
    for (int d = 0; d < block_depth; ++d) {
      std::vector<ChainState> next_frontier;
      for (const auto& state : frontier) {
        for (int i = 0; i < ifs.alphabet_size; ++i) {
          const auto jet =
              eval_interval_jet(ifs.maps[static_cast<std::size_t>(i)], state.range, 1);
          ChainState next;
          next.deriv =
              intersect(jet[1], ifs.deriv_bounds[static_cast<std::size_t>(i)]) * state.deriv;
          next.range = intersect(jet[0], ifs.range_bounds[static_cast<std::size_t>(i)]);
          next_frontier.push_back(next);
        }
      }
      frontier = std::move(next_frontier);
    }
    block_states = std::move(frontier);
  }

  std::vector<IntervalBound> partials(block_states.size());
  parallel_chunks(block_states.size(), threads, 1, [&](std::size_t begin, std::size_t end) {
    for (std::size_t b = begin; b < end; ++b)
      partials[b] = sum_subtree(ifs, block_states[b], n - block_depth, t);
  });
  while (partials.size() > 1) {
    std::vector<IntervalBound> folded;
    for (std::size_t i = 0; i + 1 < partials.size(); i += 2)
      folded.push_back(partials[i] + partials[i + 1]);
    if (partials.size() % 2 == 1) folded.push_back(partials.back());
    partials = std::move(folded);
  }
  const IntervalBound sum = partials.empty() ? IntervalBound{1.0, 1.0} : partials[0];

  const double upper = std::log2(sum.hi) / n;
  const double lower = upper - t * std::log2(ifs.c_bound) / n;
  return {lower, upper};
}

double similarity_dimension(const IFS& ifs, double tol, int n, std::size_t budget,
                            int threads) {
  if (tol <= 0.0) fail(Err::OutOfRange, "tol must be positive");
  auto upper = [&](double t) { return pressure_at(ifs, t, n, budget, threads).second; };
  if (upper(0.0) <= 0.0) return 0.0;
  double t_hi = 0.0;
  for (double t = 1.0; t <= 64.0; t *= 2.0) {
    if (upper(t) < 0.0) {
      t_hi = t;
      break;
    }
  }
  if (t_hi == 0.0)
    fail(Err::NoRootBracket, "pressure still positive at t = 64");
  double t_lo = 0.0;
  while (t_hi - t_lo >= tol) {
    const double mid = 0.5 * (t_lo + t_hi);
    if (upper(mid) < 0.0)
      t_hi = mid;
    else
      t_lo = mid;
  }
  return 0.5 * (t_lo + t_hi);
}

PressureCurve pressure_curve(const IFS& ifs, double t_min, double t_max, int steps, int n,
                             std::size_t budget, int threads) {
  if (steps < 2) fail(Err::OutOfRange, "need at least two steps");
  if (!(t_min >= 0.0 && t_max > t_min)) fail(Err::OutOfRange, "bad t range");
  PressureCurve curve;
  curve.n_used = n;
  for (int i = 0; i < steps; ++i) {
    const double t = t_min + (t_max - t_min) * i / (steps - 1);
    curve.t_values.push_back(t);
    curve.estimates.push_back(pressure_at(ifs, t, n, budget, threads));
  }
  return curve;
}

bool is_affine(const IFS& ifs) {
  for (const auto& m : ifs.maps) {
    const auto jet = eval_interval_jet(m, {0.0, 1.0}, 2);
    if (jet[2].mag() > 1e-13) return false;
  }
  return true;
}

int default_pressure_level(const IFS& ifs) { return is_affine(ifs) ? 4 : 10; }

}  // namespace conformal
