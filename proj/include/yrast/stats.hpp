#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace yrast {

/// Counter-based seed derivation (splitmix64 of master + counter), so that
/// per-task generators do not depend on scheduling.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t counter);

struct KSResult {
  double statistic;
  double p_value;
};

/// Asymptotic Kolmogorov survival function Q(lambda) = 2 sum (-1)^{k-1} exp(-2 k^2 lambda^2).
double kolmogorov_survival(double lambda);

/// One-sample Kolmogorov-Smirnov test against a continuous CDF.
KSResult ks_test(std::span<const double> sample, const std::function<double(double)>& cdf);

/// One-sample KS test against the uniform distribution on [0, L).
KSResult ks_uniform(std::span<const double> sample, double L);

/// Two-sample Kolmogorov-Smirnov test.
KSResult ks_two_sample(std::span<const double> a, std::span<const double> b);

struct ChiSquareResult {
  double statistic;
  int dof;
  double p_value;
};

/// Pearson chi-square of observed counts against expected counts; bins with
/// expectation below `min_expected` are merged into their neighbour.
ChiSquareResult chi_square(std::span<const double> observed, std::span<const double> expected,
                           int constraints = 1, double min_expected = 5.0);

}  // namespace yrast
