#include <random>

#include "doctest.h"
#include "yrast/errors.hpp"
#include "yrast/sampling.hpp"
#include "yrast/stats.hpp"

using namespace yrast;

namespace {

/// Expected counts of the relative coordinate r = x1 - x0 (mod L) under the
/// two-body density (1 + cos(2 pi r / L)) / L.
std::vector<double> pair_expected(std::size_t bins, std::size_t n) {
  std::vector<double> e(bins);
  auto cdf = [](double u) { return u + std::sin(2 * kPi * u) / (2 * kPi); };
  for (std::size_t b = 0; b < bins; ++b) e[b] = n * (cdf(double(b + 1) / bins) - cdf(double(b) / bins));
  return e;
}

std::vector<double> pair_counts(const SampleSet& s, std::size_t bins) {
  std::vector<double> c(bins, 0.0);
  for (const auto& cfg : s.samples) {
    const double r = wrap(cfg.x[1] - cfg.x[0], cfg.L) / cfg.L;
    c[std::min(bins - 1, std::size_t(r * bins))] += 1.0;
  }
  return c;
}

}  // namespace

TEST_CASE("Metropolis acceptance rule") {
  CHECK(metropolis_acceptance(1.0, 2.0) == 1.0);
  CHECK(metropolis_acceptance(2.0, 1.0) == 0.5);
  CHECK(metropolis_acceptance(1.0, 0.0) == 0.0);
}

TEST_CASE("Metropolis kernel satisfies detailed balance on a three-point target") {
  const std::vector<double> target{0.2, 0.5, 0.3};
  Eigen::MatrixXd q(3, 3);
  q << 0.0, 0.5, 0.5, 0.5, 0.0, 0.5, 0.5, 0.5, 0.0;
  const auto k = metropolis_kernel(target, q);
  for (int i = 0; i < 3; ++i) {
    CHECK(k.row(i).sum() == doctest::Approx(1.0));
    for (int j = 0; j < 3; ++j) CHECK(target[i] * k(i, j) == doctest::Approx(target[j] * k(j, i)));
  }
  const Eigen::RowVector3d pi(0.2, 0.5, 0.3);
  CHECK(((pi * k) - pi).norm() < 1e-14);
}

TEST_CASE("condensate marginal is uniform") {
  MetropolisOptions o;
  o.n_samples = 10000;
  o.seed = 5;
  const auto s = metropolis_sample(WaveFunction(FockState::from_modes(1, {{0, 3}}), 1.0), o);
  CHECK(ks_uniform(s.particle(0), 1.0).statistic < 0.02);
  CHECK(s.provenance.acceptance_rate == doctest::Approx(1.0));
}

TEST_CASE("pair distance of |1,1> under both samplers") {
  const WaveFunction psi(FockState::from_modes(1, {{0, 1}, {1, 1}}), 1.0);
  MetropolisOptions o;
  o.n_samples = 10000;
  o.seed = 6;
  const auto m = metropolis_sample(psi, o);
  const auto q = sequential_sample(psi, 10000, 6);
  const auto e = pair_expected(20, 10000);
  CHECK(chi_square(pair_counts(m, 20), e).p_value > 0.01);
  CHECK(chi_square(pair_counts(q, 20), e).p_value > 0.01);
  CHECK(m.provenance.acceptance_rate > 0.1);
  CHECK(m.provenance.acceptance_rate < 0.9);
}

TEST_CASE("grid inversion for states without a closed-form marginal") {
  // |n-1 = 1, n1 = 1> has two-body density (1 + cos(4 pi r / L)) / L.
  const auto f = FockState::from_modes(1, {{-1, 1}, {1, 1}});
  const WaveFunction psi(StateVector::from_fock(basis_from_states({f}), f), 1.0);
  SequentialOptions so;
  so.grid_points = 512;
  const auto s = sequential_sample(psi, 5000, 7, so);
  std::vector<double> e(20);
  auto cdf = [](double u) { return u + std::sin(4 * kPi * u) / (4 * kPi); };
  for (std::size_t b = 0; b < 20; ++b) e[b] = 5000 * (cdf((b + 1) / 20.0) - cdf(b / 20.0));
  CHECK(chi_square(pair_counts(s, 20), e).p_value > 0.01);
}

TEST_CASE("balanced state marginal is uniform") {
  MetropolisOptions o;
  o.n_samples = 10000;
  o.seed = 8;
  const auto s = metropolis_sample(WaveFunction(free_yrast_state(8, 4), 1.0), o);
  CHECK(ks_uniform(s.particle(0), 1.0).statistic < 0.02);
  const auto q = sequential_sample(WaveFunction(free_yrast_state(8, 4), 1.0), 10000, 8);
  CHECK(ks_uniform(q.particle(3), 1.0).statistic < 0.02);
}

TEST_CASE("last sequential conditional equals the conditional wave function") {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const auto grid = uniform_grid(200, 1.0);
  for (const auto& psi : {WaveFunction(free_yrast_state(6, 2), 1.0),
                          WaveFunction(FockState::from_modes(2, {{-1, 2}, {0, 2}, {2, 2}}), 1.0)}) {
    std::vector<double> prefix(5);
    for (auto& x : prefix) x = u(rng);
    auto dens = sequential_conditional_density(psi, prefix, grid, rng);
    const auto c = conditional(psi, prefix, grid);
    double total = 0.0;
    for (double d : dens) total += d;
    const auto cd = c.density();
    for (std::size_t i = 0; i < grid.size(); ++i) CHECK(std::abs(dens[i] / (total * c.spacing()) - cd[i]) < 1e-10);
  }
}

TEST_CASE("two-mode marginals integrate the remaining particles exactly") {
  // density of particle 2 given particle 1 for |1,2>: compare with brute-force quadrature over x3
  const WaveFunction psi(FockState::from_modes(1, {{0, 1}, {1, 2}}), 1.0);
  const auto grid = uniform_grid(50, 1.0);
  std::mt19937_64 rng(10);
  const std::vector<double> prefix{0.3};
  const auto dens = sequential_conditional_density(psi, prefix, grid, rng);
  std::vector<double> brute(grid.size(), 0.0);
  const int q = 64;
  for (std::size_t i = 0; i < grid.size(); ++i)
    for (int j = 0; j < q; ++j) {
      const std::vector<double> x{0.3, grid[i], double(j) / q};
      brute[i] += std::norm(psi.amplitude(x)) / q;
    }
  const double ratio = dens[0] / brute[0];
  for (std::size_t i = 0; i < grid.size(); ++i) CHECK(dens[i] == doctest::Approx(ratio * brute[i]).epsilon(1e-10));
}

TEST_CASE("condensate conditionals are uniform") {
  std::mt19937_64 rng(11);
  const auto grid = uniform_grid(32, 1.0);
  const std::vector<double> prefix{0.1, 0.2};
  const auto dens = sequential_conditional_density(WaveFunction(FockState::from_modes(1, {{0, 4}}), 1.0), prefix,
                                                   grid, rng);
  for (double d : dens) CHECK(d == doctest::Approx(dens[0]).epsilon(1e-12));
}

TEST_CASE("center of mass") {
  const auto d = center_of_mass(PositionConfig{{0.3, 0.3, 0.3}, 1.0});
  CHECK(d.position == doctest::Approx(0.3));
  CHECK(d.magnitude == doctest::Approx(3.0));
  CHECK_THROWS_AS(center_of_mass(PositionConfig{{0.0, 0.5}, 1.0}), UndefinedDirection);
  const auto e = center_of_mass(PositionConfig{{0.0, 0.25}, 1.0});
  CHECK(e.position == doctest::Approx(0.125));
  CHECK(e.magnitude == doctest::Approx(std::sqrt(2.0)));
  const auto h = center_of_mass(PositionConfig{{0.1, 0.6}, 1.0}, 2);
  CHECK(h.position == doctest::Approx(0.1));
  CHECK(h.magnitude == doctest::Approx(2.0));
}

TEST_CASE("alignment") {
  const auto s = sequential_sample(WaveFunction(free_yrast_state(8, 4), 1.0), 200, 12);
  const auto a = align_samples(s);
  CHECK(a.samples.size() + a.skipped == s.samples.size());
  for (const auto& c : a.samples) {
    const auto d = center_of_mass(c);
    CHECK(std::min(d.position, 1.0 - d.position) < 1e-9);
  }
  const auto b = align_samples(shift_samples(s, 0.37));
  REQUIRE(b.samples.size() == a.samples.size());
  for (std::size_t i = 0; i < a.samples.size(); ++i)
    for (std::size_t j = 0; j < 8; ++j) {
      const double diff = wrap(a.samples[i].x[j] - b.samples[i].x[j], 1.0);
      CHECK(std::min(diff, 1.0 - diff) < 1e-9);
    }
  PositionConfig bad{{0.0, 0.5}, 1.0};
  SampleSet with_bad;
  with_bad.samples = {bad, PositionConfig{{0.1, 0.2}, 1.0}};
  const auto c = align_samples(with_bad);
  CHECK(c.skipped == 1);
  CHECK(c.samples.size() == 1);
}

TEST_CASE("histogram normalization") {
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> u(0.0, 2.0);
  std::vector<double> x(64000);
  for (auto& v : x) v = u(rng);
  const auto h = histogram(x, 2.0, 64);
  std::size_t total = 0;
  double integral = 0.0;
  for (std::size_t b = 0; b < 64; ++b) {
    total += h.counts[b];
    integral += h.density[b] * h.bin_width();
  }
  CHECK(total == x.size());
  CHECK(integral == doctest::Approx(1.0));
  std::vector<double> obs(h.counts.begin(), h.counts.end()), exp(64, 1000.0);
  CHECK(chi_square(obs, exp).p_value > 0.01);

  const auto s = sequential_sample(WaveFunction(free_yrast_state(4, 2), 1.0), 100, 1);
  CHECK(histogram(s, 16).total == 400);
}

TEST_CASE("samplers are reproducible") {
  const WaveFunction psi(free_yrast_state(6, 2), 1.0);
  MetropolisOptions o;
  o.n_samples = 50;
  o.seed = 14;
  const auto a = metropolis_sample(psi, o), b = metropolis_sample(psi, o);
  for (std::size_t i = 0; i < 50; ++i) CHECK(a.samples[i].x == b.samples[i].x);
  const auto c = sequential_sample(psi, 50, 14), d = sequential_sample(psi, 50, 14);
  for (std::size_t i = 0; i < 50; ++i) CHECK(c.samples[i].x == d.samples[i].x);
}

TEST_CASE("sequential and Metropolis agree on aligned histograms") {
  const WaveFunction psi(free_yrast_state(8, 4), 1.0);
  MetropolisOptions o;
  o.n_samples = 10000;
  o.seed = 15;
  const auto m = align_samples(metropolis_sample(psi, o));
  const auto q = align_samples(sequential_sample(psi, 10000, 16));
  CHECK(ks_two_sample(m.particle(0), q.particle(0)).p_value > 0.01);
}

TEST_CASE("aligned histograms ignore a global rotation") {
  const WaveFunction psi(free_yrast_state(8, 4), 1.0);
  const auto s = sequential_sample(psi, 300, 17);
  const auto a = histogram(align_samples(s), 32), b = histogram(align_samples(shift_samples(s, 0.61)), 32);
  std::size_t diff = 0;
  for (std::size_t i = 0; i < 32; ++i) diff += a.counts[i] > b.counts[i] ? a.counts[i] - b.counts[i] : b.counts[i] - a.counts[i];
  CHECK(diff <= 4);  // only positions lying on a bin edge may move
}

TEST_CASE("best-shift profile distance of exact data") {
  AlignedHistogram h;
  const std::size_t bins = 64;
  for (std::size_t b = 0; b <= bins; ++b) h.bin_edges.push_back(double(b) / bins);
  for (std::size_t b = 0; b < bins; ++b) {
    const double lo = double(b) / bins, hi = double(b + 1) / bins, s = 0.3;
    h.density.push_back(1.0 + (std::sin(2 * kPi * (hi - s)) - std::sin(2 * kPi * (lo - s))) / (2 * kPi) * bins);
  }
  const auto m = best_shift_black_profile(h);
  CHECK(m.distance < 1e-3);
  CHECK(m.shift == doctest::Approx(0.3).epsilon(1e-3));
}

TEST_CASE("notch depths") {
  const auto black = notch_depth_histogram(8, 4, 200, 256, 50, 18);
  for (double d : black.depths) CHECK(d < 1e-10);
  CHECK(black.counts[0] == 200);
  const auto gray = notch_depth_histogram(32, 8, 200, 256, 50, 18);
  double mean = 0.0, var = 0.0;
  for (double d : gray.depths) mean += d / 200;
  for (double d : gray.depths) var += (d - mean) * (d - mean);
  CHECK(var > 0.0);
  for (std::size_t i = 0; i < gray.depths.size(); ++i) {
    CHECK(gray.depths[i] >= 0.0);
    CHECK(gray.depths[i] >= gray.bounds[i] - 1e-12);
    CHECK(gray.grid_minima[i] >= gray.depths[i] - 1e-12);
  }
  std::size_t total = 0;
  for (auto c : gray.counts) total += c;
  CHECK(total + gray.skipped == 200);
}
