#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "conformal/dimension.hpp"
#include "conformal/measure.hpp"

namespace conformal {

// Reproducible experiment result: identical (seed, parameters) give
// bit-identical observed values. Hypothesis failures are recorded in
// `violations` rather than aborting the run.
struct ExperimentReport {
  std::string name;
  std::vector<std::pair<std::string, std::string>> parameters;
  std::vector<std::pair<std::string, double>> observed;
  std::vector<std::string> violations;
  bool pass = false;
  std::uint64_t seed = 0;

  double observed_value(const std::string& key) const;
};

// Convolution entropy rate of nu.(psi mu) at scale n against the dimension
// estimate; reports the observed entropy gain rho_hat.
ExperimentReport entropy_increase_experiment(const IFS& ifs, const PolyMeasure& nu,
                                             const AnalyticExpr& psi, int n,
                                             double eps = 0.01, double rho_min = 0.02,
                                             std::size_t budget = kDefaultAtomBudget);

// Fraction of sampled (i, x) whose component entropy rate at scale i+m lies
// within eps of the dimension estimate; passes when it exceeds 1 - eps.
ExperimentReport uniform_entropy_dimension_check(const IFS& ifs, const AnalyticExpr& psi,
                                                 int m, int n, double eps, int samples,
                                                 std::uint64_t seed,
                                                 std::size_t budget = kDefaultAtomBudget,
                                                 int threads = 1);

// Largest sampled ball-mass ratio psi mu(B(x, delta r)) / psi mu(B(x, r)).
ExperimentReport doubling_check(const IFS& ifs, const AnalyticExpr& psi, double delta,
                                int samples, std::uint64_t seed, int resolution = 18,
                                double max_ratio_bound = 1.0,
                                std::size_t budget = kDefaultAtomBudget, int threads = 1);

// Entropy gap between nu.theta and the differential surrogate
// (nu.x) * S_{p'(x)} theta at scale m - log2(delta).
ExperimentReport linearization_check(const PolyMeasure& nu, const RealMeasure& theta,
                                     const Polynomial& p, double x, int m, double delta,
                                     std::size_t budget = kDefaultAtomBudget);

// Global convolution entropy rate against the expected component-pair rate.
ExperimentReport multiscale_decomposition_check(const PolyMeasure& nu,
                                                const RealMeasure& theta, int n, int m,
                                                std::size_t budget = kDefaultAtomBudget);

// Taylor remainders of block words against the certified remainder bound;
// reports the worst measured/bound ratio (sound when <= 1).
ExperimentReport taylor_block_experiment(const IFS& ifs, int n, int n_prime, int k,
                                         int grid = 1001,
                                         std::size_t budget = kDefaultAtomBudget,
                                         int threads = 1);

}  // namespace conformal
