#include "conformal/separation.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <tuple>

#include "conformal/parallel.hpp"

namespace conformal {

namespace {

constexpr int kFeatureGrid = 33;
constexpr double kOverlapWidth = 1e-13;

struct WordFeatures {
  Word word;
  std::array<double, kFeatureGrid> values;
};

std::vector<WordFeatures> enumerate_words(const IFS& ifs, int n, std::size_t budget,
                                          int threads) {
  const double count_d = std::pow(static_cast<double>(ifs.alphabet_size), n);
  if (count_d > static_cast<double>(budget))
    fail(Err::BudgetExceeded, "|alphabet|^n exceeds word budget");
  const std::size_t count = static_cast<std::size_t>(count_d);

  std::vector<WordFeatures> words(count);
  parallel_chunks(count, threads, 1024, [&](std::size_t begin, std::size_t end) {
    for (std::size_t idx = begin; idx < end; ++idx) {
      Word w;
      w.letters.resize(static_cast<std::size_t>(n));
      std::size_t rem = idx;
      for (int j = n - 1; j >= 0; --j) {
        w.letters[static_cast<std::size_t>(j)] =
            static_cast<std::uint8_t>(rem % static_cast<std::size_t>(ifs.alphabet_size));
        rem /= static_cast<std::size_t>(ifs.alphabet_size);
      }
      for (int g = 0; g < kFeatureGrid; ++g) {
        const double x = static_cast<double>(g) / (kFeatureGrid - 1);
        words[idx].values[static_cast<std::size_t>(g)] = word_eval(ifs, w, x);
      }
      words[idx].word = std::move(w);
    }
  });
  return words;
}

double grid_distance(const WordFeatures& a, const WordFeatures& b) {
  double d = 0.0;
  for (int g = 0; g < kFeatureGrid; ++g)
    d = std::max(d, std::abs(a.values[static_cast<std::size_t>(g)] -
                             b.values[static_cast<std::size_t>(g)]));
  return d;
}

struct Candidate {
  std::size_t a, b;   // indices into the lex-ordered word list
  double d_grid;
};

}  // namespace

IntervalBound certify_word_pair(const IFS& ifs, const Word& u, const Word& v, double tol,
                                std::size_t budget) {
  if (tol <= 0.0) fail(Err::OutOfRange, "tol must be positive");
  // Lipschitz bound of phi_u - phi_v from per-box derivative enclosures
  const int boxes = 16;
  double lip = 0.0;
  for (int b = 0; b < boxes; ++b) {
    const IntervalBound sub{static_cast<double>(b) / boxes,
                            static_cast<double>(b + 1) / boxes};
    const IntervalBound diff =
        word_deriv_enclosure(ifs, u, sub) - word_deriv_enclosure(ifs, v, sub);
    lip = std::max(lip, diff.mag());
  }
  const double raw = std::ceil(lip / (2.0 * tol)) + 2.0;
  if (!(raw < static_cast<double>(budget)))
    fail(Err::BudgetExceeded, "pair certification grid exceeds budget");
  const std::size_t n_points = std::max<std::size_t>(2, static_cast<std::size_t>(raw));
  const double step = 1.0 / static_cast<double>(n_points - 1);
  double lo_max = 0.0, hi_max = 0.0;
  for (std::size_t i = 0; i < n_points; ++i) {
    const double x = (i + 1 == n_points) ? 1.0 : static_cast<double>(i) * step;
    const IntervalBound p = point_interval(x);
    const IntervalBound d = abs_interval(word_range(ifs, u, p) - word_range(ifs, v, p));
    lo_max = std::max(lo_max, d.lo);
    hi_max = std::max(hi_max, d.hi);
  }
  return {lo_max, hi_max + lip * step / 2.0};
}

PairDistance min_pairwise_distance(const IFS& ifs, int n, double tol, std::size_t budget,
                                   int threads, bool certify_all) {
  if (n < 1) fail(Err::OutOfRange, "n must be at least 1");
  if (tol <= 0.0) fail(Err::OutOfRange, "tol must be positive");
  std::vector<WordFeatures> words = enumerate_words(ifs, n, budget, threads);
  if (words.size() < 2) fail(Err::OutOfRange, "need at least two words");

  // sort by the first grid coordinate; |f_a[0] - f_b[0]| lower-bounds d_grid
  std::vector<std::size_t> order(words.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (words[a].values[0] != words[b].values[0])
      return words[a].values[0] < words[b].values[0];
    return words[a].word < words[b].word;
  });

  std::vector<Candidate> candidates;
  if (certify_all) {
    if (words.size() * (words.size() - 1) / 2 > budget)
      fail(Err::BudgetExceeded, "brute-force pair count exceeds budget");
    for (std::size_t a = 0; a < words.size(); ++a)
      for (std::size_t b = a + 1; b < words.size(); ++b)
        candidates.push_back({a, b, grid_distance(words[a], words[b])});
  } else {
    // pass 1: the pair minimizing the grid metric; adjacent pairs seed the
    // bound, then a plane sweep on the first coordinate finishes
    double best_grid = std::numeric_limits<double>::infinity();
    std::size_t best_a = order[0], best_b = order[1];
    for (std::size_t i = 0; i + 1 < order.size(); ++i) {
      const double d = grid_distance(words[order[i]], words[order[i + 1]]);
      if (d < best_grid) {
        best_grid = d;
        best_a = order[i];
        best_b = order[i + 1];
      }
    }
    for (std::size_t i = 0; i < order.size(); ++i) {
      for (std::size_t j = i + 1; j < order.size(); ++j) {
        const double gap = words[order[j]].values[0] - words[order[i]].values[0];
        if (gap > best_grid) break;
        const double d = grid_distance(words[order[i]], words[order[j]]);
        if (d < best_grid) {
          best_grid = d;
          best_a = order[i];
          best_b = order[j];
        }
      }
    }
    // pass 2: collect every pair whose grid lower bound could still matter
    const double ceiling = certify_word_pair(ifs, words[best_a].word, words[best_b].word,
                                             tol, budget)
                               .hi;
    for (std::size_t i = 0; i < order.size(); ++i) {
      for (std::size_t j = i + 1; j < order.size(); ++j) {
        const double gap = words[order[j]].values[0] - words[order[i]].values[0];
        if (gap > ceiling) break;
        const double d = grid_distance(words[order[i]], words[order[j]]);
        if (d <= ceiling) {
          candidates.push_back({order[i], order[j], d});
          if (candidates.size() > budget)
            fail(Err::BudgetExceeded, "candidate pair count exceeds budget");
        }
      }
    }
  }

  // canonical order makes the pruned and brute-force paths assemble the same
  // result bit for bit
  std::sort(candidates.begin(), candidates.end(), [&](const Candidate& p, const Candidate& q) {
    const Word& pu = std::min(words[p.a].word, words[p.b].word);
    const Word& pv = std::max(words[p.a].word, words[p.b].word);
    const Word& qu = std::min(words[q.a].word, words[q.b].word);
    const Word& qv = std::max(words[q.a].word, words[q.b].word);
    return std::tie(pu, pv) < std::tie(qu, qv);
  });

  std::vector<IntervalBound> certs(candidates.size());
  parallel_chunks(candidates.size(), threads, 16, [&](std::size_t begin, std::size_t end) {
    for (std::size_t c = begin; c < end; ++c)
      certs[c] = certify_word_pair(ifs, words[candidates[c].a].word,
                                   words[candidates[c].b].word, tol, budget);
  });

  double result_lo = std::numeric_limits<double>::infinity();
  double result_hi = std::numeric_limits<double>::infinity();
  std::size_t witness = 0;
  for (std::size_t c = 0; c < candidates.size(); ++c) {
    if (certs[c].lo <= 0.0 && certs[c].width() < kOverlapWidth) {
      fail(Err::ExactOverlap,
           "maps for words " + to_string(words[candidates[c].a].word, ifs.alphabet_size) +
               " and " + to_string(words[candidates[c].b].word, ifs.alphabet_size) +
               " coincide within 1e-13");
    }
    const double eff_lo = std::max(certs[c].lo, candidates[c].d_grid);
    result_lo = std::min(result_lo, eff_lo);
    if (certs[c].hi < result_hi) {
      result_hi = certs[c].hi;
      witness = c;
    }
  }
  result_lo = std::min(result_lo, result_hi);

  PairDistance out;
  out.distance = {result_lo, result_hi};
  out.u = std::min(words[candidates[witness].a].word, words[candidates[witness].b].word);
  out.v = std::max(words[candidates[witness].a].word, words[candidates[witness].b].word);
  return out;
}

SeparationProfile separation_profile(const IFS& ifs, int n_max, double tol,
                                     std::size_t budget, int threads) {
  if (n_max < 1) fail(Err::OutOfRange, "n_max must be at least 1");
  SeparationProfile profile;
  for (int n = 1; n <= n_max; ++n) {
    SeparationRow row;
    row.n = n;
    try {
      PairDistance d = min_pairwise_distance(ifs, n, tol, budget, threads, false);
      row.distance = d.distance;
      row.u = std::move(d.u);
      row.v = std::move(d.v);
      row.rate = row.distance.lo > 0.0
                     ? std::pow(row.distance.lo, 1.0 / static_cast<double>(n))
                     : 0.0;
    } catch (const LabError& e) {
      if (e.code() != Err::ExactOverlap) throw;
      row.exact_overlap = true;
      row.distance = {0.0, 0.0};
      profile.rows.push_back(std::move(row));
      break;
    }
    profile.rows.push_back(std::move(row));
  }
  return profile;
}

}  // namespace conformal
