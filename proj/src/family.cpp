#include "conformal/family.hpp"

#include <algorithm>
#include <cmath>
#include <tuple>

namespace conformal {

PeriodicWord constant_word(std::uint8_t letter) { return PeriodicWord{{letter}}; }

FamilySpec make_family(std::vector<AnalyticExpr> maps, double t_lo, double t_hi,
                       std::vector<double> probs) {
  if (maps.empty()) fail(Err::OutOfRange, "need at least one map");
  if (!(0.0 <= t_lo && t_lo < t_hi && t_hi <= 1.0))
    fail(Err::OutOfRange, "parameter interval must be inside [0,1]");
  if (probs.empty())
    probs.assign(maps.size(), 1.0 / static_cast<double>(maps.size()));
  if (probs.size() != maps.size())
    fail(Err::InvalidDistribution, "probability vector length mismatch");

  FamilySpec fam;
  fam.maps = std::move(maps);
  fam.t_lo = t_lo;
  fam.t_hi = t_hi;
  fam.probs = std::move(probs);

  // certified boxes over [0,1] x [t_lo, t_hi]
  const int x_boxes = 64, t_boxes = 16;
  for (std::size_t i = 0; i < fam.maps.size(); ++i) {
    IntervalBound range{1.0, 0.0};
    IntervalBound deriv_mag{1.0, 0.0};
    bool first = true;
    for (int tb = 0; tb < t_boxes; ++tb) {
      const IntervalBound t{t_lo + (t_hi - t_lo) * tb / t_boxes,
                            t_lo + (t_hi - t_lo) * (tb + 1) / t_boxes};
      for (int xb = 0; xb < x_boxes; ++xb) {
        const IntervalBound x{static_cast<double>(xb) / x_boxes,
                              static_cast<double>(xb + 1) / x_boxes};
        const auto jet = eval_interval_jet_xt(fam.maps[i], x, t, 1);
        const IntervalBound mag = abs_interval(jet[1]);
        range = first ? jet[0] : hull(range, jet[0]);
        deriv_mag = first ? mag : hull(deriv_mag, mag);
        first = false;
      }
    }
    if (range.lo < -1e-9 || range.hi > 1.0 + 1e-9)
      fail(Err::EscapesInterval, "family map " + std::to_string(i) + " leaves [0,1]");
    if (deriv_mag.lo <= 0.0)
      fail(Err::NotContracting,
           "family map " + std::to_string(i) + " derivative not bounded away from zero");
    if (deriv_mag.hi >= 1.0)
      fail(Err::NotContracting, "family map " + std::to_string(i) + " is not a contraction");
  }
  return fam;
}

double family_contraction_bound(const FamilySpec& fam) {
  double rho = 0.0;
  const int x_boxes = 64, t_boxes = 16;
  for (const auto& m : fam.maps) {
    for (int tb = 0; tb < t_boxes; ++tb) {
      const IntervalBound t{fam.t_lo + (fam.t_hi - fam.t_lo) * tb / t_boxes,
                            fam.t_lo + (fam.t_hi - fam.t_lo) * (tb + 1) / t_boxes};
      for (int xb = 0; xb < x_boxes; ++xb) {
        const IntervalBound x{static_cast<double>(xb) / x_boxes,
                              static_cast<double>(xb + 1) / x_boxes};
        rho = std::max(rho, abs_interval(eval_interval_jet_xt(m, x, t, 1)[1]).hi);
      }
    }
  }
  return rho;
}

IFS instantiate(const FamilySpec& fam, double t) {
  if (t < fam.t_lo || t > fam.t_hi)
    fail(Err::OutOfRange, "t outside the family parameter interval");
  std::vector<AnalyticExpr> maps;
  maps.reserve(fam.maps.size());
  for (const auto& m : fam.maps) maps.push_back(substitute_t(m, t));
  return validate_ifs(std::move(maps), fam.probs);
}

double coding_gap(const FamilySpec& fam, const PeriodicWord& w1, const PeriodicWord& w2,
                  double t, int depth) {
  if (depth < 1) fail(Err::OutOfRange, "depth must be at least 1");
  if (w1.block.empty() || w2.block.empty())
    fail(Err::OutOfRange, "periodic words need a nonempty block");
  auto prefix_limit = [&](const PeriodicWord& w) {
    double x = 0.0;
    for (int j = depth - 1; j >= 0; --j)
      x = eval_xt(fam.maps[w.letter(static_cast<std::size_t>(j))], x, t);
    return x;
  };
  return prefix_limit(w1) - prefix_limit(w2);
}

std::vector<ZeroHit> zero_scan(const FamilySpec& fam, const PeriodicWord& w1,
                               const PeriodicWord& w2, int grid, double tol, int depth) {
  if (grid < 2) fail(Err::OutOfRange, "grid must have at least 2 points");
  if (tol <= 0.0) fail(Err::OutOfRange, "tol must be positive");
  auto f = [&](double t) { return coding_gap(fam, w1, w2, t, depth); };

  std::vector<double> ts(static_cast<std::size_t>(grid));
  std::vector<double> vals(static_cast<std::size_t>(grid));
  bool all_below = true;
  for (int i = 0; i < grid; ++i) {
    ts[static_cast<std::size_t>(i)] =
        fam.t_lo + (fam.t_hi - fam.t_lo) * i / (grid - 1);
    vals[static_cast<std::size_t>(i)] = f(ts[static_cast<std::size_t>(i)]);
    if (std::abs(vals[static_cast<std::size_t>(i)]) >= tol) all_below = false;
  }
  if (all_below)
    fail(Err::NonDegenerate, "coding gap below tol at every grid point; family looks "
                             "degenerate for this word pair");

  std::vector<ZeroHit> hits;
  for (int i = 0; i < grid; ++i) {
    if (std::abs(vals[static_cast<std::size_t>(i)]) < tol) {
      const double c = ts[static_cast<std::size_t>(i)];
      hits.push_back({{std::max(fam.t_lo, c - tol / 2), std::min(fam.t_hi, c + tol / 2)}});
    }
  }
  for (int i = 0; i + 1 < grid; ++i) {
    const double fa = vals[static_cast<std::size_t>(i)];
    const double fb = vals[static_cast<std::size_t>(i + 1)];
    if (std::abs(fa) < tol || std::abs(fb) < tol) continue;  // already a touching zero
    if (fa * fb < 0.0) {
      double lo = ts[static_cast<std::size_t>(i)], hi = ts[static_cast<std::size_t>(i + 1)];
      double flo = fa;
      while (hi - lo > tol) {
        const double mid = 0.5 * (lo + hi);
        const double fm = f(mid);
        if (fm == 0.0) {
          lo = mid - tol / 4;
          hi = mid + tol / 4;
          break;
        }
        if ((flo < 0.0) == (fm < 0.0)) {
          lo = mid;
          flo = fm;
        } else {
          hi = mid;
        }
      }
      hits.push_back({{lo, hi}});
    }
  }

  std::sort(hits.begin(), hits.end(),
            [](const ZeroHit& a, const ZeroHit& b) { return a.bracket.lo < b.bracket.lo; });
  std::vector<ZeroHit> dedup;
  for (const auto& h : hits) {
    if (!dedup.empty() && h.bracket.mid() - dedup.back().bracket.mid() <= tol)
      dedup.back().bracket = hull(dedup.back().bracket, h.bracket);
    else
      dedup.push_back(h);
  }
  return dedup;
}

std::vector<CommonFixedPointHit> common_fixed_point_scan(const FamilySpec& fam, int grid,
                                                         double tol, int depth) {
  if (fam.alphabet_size() < 2)
    fail(Err::InsufficientAlphabet, "need at least two letters");
  std::vector<CommonFixedPointHit> hits;
  for (int a = 0; a < fam.alphabet_size(); ++a) {
    for (int b = a + 1; b < fam.alphabet_size(); ++b) {
      const auto zeros = zero_scan(fam, constant_word(static_cast<std::uint8_t>(a)),
                                   constant_word(static_cast<std::uint8_t>(b)), grid, tol,
                                   depth);
      for (const auto& z : zeros) hits.push_back({z.bracket, a, b});
    }
  }
  std::sort(hits.begin(), hits.end(), [](const auto& p, const auto& q) {
    if (p.bracket.lo != q.bracket.lo) return p.bracket.lo < q.bracket.lo;
    return std::tie(p.letter_a, p.letter_b) < std::tie(q.letter_a, q.letter_b);
  });
  std::vector<CommonFixedPointHit> dedup;
  for (const auto& h : hits) {
    if (!dedup.empty() && h.bracket.mid() - dedup.back().bracket.mid() <= tol)
      dedup.back().bracket = hull(dedup.back().bracket, h.bracket);
    else
      dedup.push_back(h);
  }
  return dedup;
}

}  // namespace conformal
