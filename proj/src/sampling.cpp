#include "yrast/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "yrast/errors.hpp"
#include "yrast/permanent.hpp"
#include "yrast/stats.hpp"

namespace yrast {

int SampleSet::particle_count() const {
  return samples.empty() ? 0 : static_cast<int>(samples.front().size());
}

double SampleSet::length() const { return samples.empty() ? 1.0 : samples.front().L; }

std::vector<double> SampleSet::pooled() const {
  std::vector<double> out;
  out.reserve(samples.size() * static_cast<std::size_t>(particle_count()));
  for (const auto& s : samples) out.insert(out.end(), s.x.begin(), s.x.end());
  return out;
}

std::vector<double> SampleSet::particle(std::size_t index) const {
  std::vector<double> out;
  out.reserve(samples.size());
  for (const auto& s : samples) out.push_back(s.x.at(index));
  return out;
}

double metropolis_acceptance(double p_old, double p_new) {
  if (p_old <= 0.0) return 1.0;
  return std::min(1.0, p_new / p_old);
}

Eigen::MatrixXd metropolis_kernel(std::span<const double> target, const Eigen::MatrixXd& proposal) {
  const auto n = static_cast<Eigen::Index>(target.size());
  if (proposal.rows() != n || proposal.cols() != n) throw InvalidArgument("proposal shape mismatch");
  Eigen::MatrixXd P = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    double stay = 1.0;
    for (Eigen::Index j = 0; j < n; ++j) {
      if (i == j) continue;
      P(i, j) = proposal(i, j) *
                metropolis_acceptance(target[static_cast<std::size_t>(i)], target[static_cast<std::size_t>(j)]);
      stay -= P(i, j);
    }
    P(i, i) = stay;
  }
  return P;
}

namespace {

struct Chain {
  const WaveFunction& psi;
  double time;
  double width;
  std::mt19937_64 rng;
  std::vector<double> x;
  double weight = 0.0;
  std::size_t proposed = 0;
  std::size_t accepted = 0;

  double density(std::span<const double> cfg) const { return std::norm(psi.amplitude(cfg, time)); }

  void start() {
    std::uniform_real_distribution<double> u(0.0, psi.length());
    for (int attempt = 0; attempt < 10000; ++attempt) {
      for (auto& xi : x) xi = u(rng);
      weight = density(x);
      if (weight > 0.0) return;
    }
    throw DegenerateConditional("could not find a start configuration with nonzero density");
  }

  void sweep() {
    std::uniform_int_distribution<std::size_t> pick(0, x.size() - 1);
    std::normal_distribution<double> step(0.0, width);
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    for (std::size_t m = 0; m < x.size(); ++m) {
      const std::size_t j = pick(rng);
      const double old = x[j];
      x[j] = wrap(old + step(rng), psi.length());
      const double w = density(x);
      ++proposed;
      if (u01(rng) < metropolis_acceptance(weight, w)) {
        weight = w;
        ++accepted;
      } else {
        x[j] = old;
      }
    }
  }
};

}  // namespace

SampleSet metropolis_sample(const WaveFunction& psi, const MetropolisOptions& opts) {
  if (opts.n_samples < 1) throw InvalidArgument("need at least one sample");
  const int N = psi.particle_count();
  const double L = psi.length();
  const double width = opts.proposal_width > 0.0 ? opts.proposal_width : L / 8.0;
  const std::size_t thinning = opts.thinning > 0 ? opts.thinning : static_cast<std::size_t>(N);
  const std::size_t chains = opts.chains > 0 ? std::min(opts.chains, opts.n_samples) : opts.n_samples;

  SampleSet set;
  set.samples.reserve(opts.n_samples);
  std::size_t proposed = 0, accepted = 0;
  for (std::size_t c = 0; c < chains; ++c) {
    // samples are split as evenly as possible over the chains
    const std::size_t share = opts.n_samples / chains + (c < opts.n_samples % chains ? 1 : 0);
    Chain chain{psi, opts.time, width, std::mt19937_64(derive_seed(opts.seed, c)),
                std::vector<double>(static_cast<std::size_t>(N))};
    chain.start();
    for (std::size_t s = 0; s < opts.burn_in; ++s) chain.sweep();
    for (std::size_t k = 0; k < share; ++k) {
      if (k > 0)
        for (std::size_t s = 0; s < thinning; ++s) chain.sweep();
      set.samples.push_back(PositionConfig{chain.x, L});
    }
    proposed += chain.proposed;
    accepted += chain.accepted;
  }
  const double rate = proposed ? static_cast<double>(accepted) / static_cast<double>(proposed) : 0.0;
  set.provenance = {"metropolis", opts.seed, opts.burn_in, thinning, chains, width, rate};
  if (proposed && (rate < 0.1 || rate > 0.9))
    set.warnings.push_back("Metropolis acceptance rate " + std::to_string(rate) +
                           " outside [0.1, 0.9]; consider changing the proposal width");
  return set;
}

namespace {

struct TwoModeMarginal {
  double A;  // constant part
  cplx B;    // coefficient of exp(2 pi i d x / L) (density = A + 2 Re(B e^{...}))
  int d;
};

// Closed-form marginal of particle j+1 of |n_p = N-K, n_q = K> given a prefix
// of j positions: with b = exp(2 pi i (q-p) x / L),
//   rho ~ sum_m C(N-j-1, K-m) |e_m(prefix) + b e_{m-1}(prefix)|^2.
TwoModeMarginal two_mode_marginal(const TwoModeView& v, std::span<const double> prefix, double L) {
  const int N = v.n_particles;
  const int K = v.n_high;
  const int d = v.high - v.low;
  if (d == 0 || K == 0) return {1.0, 0.0, 0};
  std::vector<cplx> b;
  b.reserve(prefix.size());
  for (double x : prefix) b.push_back(std::polar(1.0, 2.0 * kPi * d * x / L));
  const auto e = elementary_symmetric(b, K);
  const int rest = N - static_cast<int>(prefix.size()) - 1;
  double A = 0.0;
  cplx B = 0.0;
  // log-binomial weights rescaled by their maximum to stay in range
  std::vector<double> logw(static_cast<std::size_t>(K) + 1, -INFINITY);
  for (int m = 0; m <= K; ++m) {
    const int r = K - m;
    if (r < 0 || r > rest) continue;
    logw[static_cast<std::size_t>(m)] =
        std::lgamma(rest + 1.0) - std::lgamma(r + 1.0) - std::lgamma(rest - r + 1.0);
  }
  const double lmax = *std::max_element(logw.begin(), logw.end());
  for (int m = 0; m <= K; ++m) {
    if (!std::isfinite(logw[static_cast<std::size_t>(m)])) continue;
    const double w = std::exp(logw[static_cast<std::size_t>(m)] - lmax);
    const cplx em = e[static_cast<std::size_t>(m)];
    const cplx em1 = m > 0 ? e[static_cast<std::size_t>(m) - 1] : cplx(0.0);
    A += w * (std::norm(em) + std::norm(em1));
    B += w * std::conj(em) * em1;
  }
  return {A, B, d};
}

double marginal_density(const TwoModeMarginal& m, double x, double L) {
  if (m.d == 0) return m.A;
  return m.A + 2.0 * std::real(m.B * std::polar(1.0, 2.0 * kPi * m.d * x / L));
}

// Exact inverse CDF of A + 2|B| cos(2 pi d x / L + phi) on [0, L).
double invert_two_mode(const TwoModeMarginal& m, double u, double L) {
  if (m.d == 0 || std::abs(m.B) == 0.0) return u * L;
  const double k = 2.0 * kPi * m.d / L;
  const double b = 2.0 * std::abs(m.B);
  const double phi = std::arg(m.B);
  auto cdf = [&](double x) { return m.A * x + (b / k) * (std::sin(k * x + phi) - std::sin(phi)); };
  const double target = u * m.A * L;
  double lo = 0.0, hi = L;
  for (int it = 0; it < 200 && hi - lo > 1e-15 * L; ++it) {
    const double mid = 0.5 * (lo + hi);
    (cdf(mid) < target ? lo : hi) = mid;
  }
  return wrap(0.5 * (lo + hi), L);
}

}  // namespace

std::vector<double> sequential_conditional_density(const WaveFunction& psi,
                                                   std::span<const double> prefix,
                                                   std::span<const double> grid,
                                                   std::mt19937_64& rng, std::size_t mc_samples) {
  const int N = psi.particle_count();
  const double L = psi.length();
  if (static_cast<int>(prefix.size()) >= N) throw InvalidArgument("prefix already holds N positions");
  std::vector<double> out(grid.size());
  if (psi.fock() && psi.two_mode()) {
    const auto m = two_mode_marginal(*psi.two_mode(), prefix, L);
    for (std::size_t j = 0; j < grid.size(); ++j) out[j] = marginal_density(m, grid[j], L);
    return out;
  }
  const int rest = N - static_cast<int>(prefix.size()) - 1;
  std::vector<double> x(prefix.begin(), prefix.end());
  x.resize(static_cast<std::size_t>(N));
  const std::size_t at = prefix.size();
  if (rest == 0) {
    for (std::size_t j = 0; j < grid.size(); ++j) {
      x[at] = grid[j];
      out[j] = std::norm(psi.amplitude(x));
    }
    return out;
  }
  std::uniform_real_distribution<double> u(0.0, L);
  std::vector<std::vector<double>> draws(mc_samples, std::vector<double>(static_cast<std::size_t>(rest)));
  for (auto& d : draws)
    for (auto& v : d) v = u(rng);
  for (std::size_t j = 0; j < grid.size(); ++j) {
    x[at] = grid[j];
    double acc = 0.0;
    for (const auto& d : draws) {
      std::copy(d.begin(), d.end(), x.begin() + static_cast<std::ptrdiff_t>(at) + 1);
      acc += std::norm(psi.amplitude(x));
    }
    out[j] = acc / static_cast<double>(mc_samples);
  }
  return out;
}

PositionConfig sequential_draw(const WaveFunction& psi, std::mt19937_64& rng,
                               const SequentialOptions& opts) {
  const int N = psi.particle_count();
  if (N < 2) throw InvalidArgument("sequential draw needs N >= 2");
  const double L = psi.length();
  const std::size_t count = opts.count > 0 ? std::min<std::size_t>(opts.count, static_cast<std::size_t>(N))
                                           : static_cast<std::size_t>(N);
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  PositionConfig cfg{{}, L};
  cfg.x.reserve(count);
  const bool exact = psi.fock() && psi.two_mode();
  const auto grid = exact ? std::vector<double>{} : uniform_grid(opts.grid_points, L);
  while (cfg.x.size() < count) {
    if (exact) {
      const auto m = two_mode_marginal(*psi.two_mode(), cfg.x, L);
      if (!(m.A > 0.0)) throw DegenerateConditional("conditional marginal vanishes");
      cfg.x.push_back(invert_two_mode(m, u01(rng), L));
      continue;
    }
    if (cfg.x.empty() && psi.is_stationary() && psi.total_momentum()) {
      cfg.x.push_back(u01(rng) * L);
      continue;
    }
    // piecewise-constant inversion on the grid cells
    const auto dens = sequential_conditional_density(psi, cfg.x, grid, rng, opts.mc_samples);
    std::vector<double> cdf(dens.size());
    std::partial_sum(dens.begin(), dens.end(), cdf.begin());
    if (!(cdf.back() > 0.0)) throw DegenerateConditional("grid inversion failed: zero marginal");
    const double t = u01(rng) * cdf.back();
    const auto cell = static_cast<std::size_t>(std::lower_bound(cdf.begin(), cdf.end(), t) - cdf.begin());
    const double dx = L / static_cast<double>(grid.size());
    cfg.x.push_back(wrap(grid[std::min(cell, grid.size() - 1)] - 0.5 * dx + u01(rng) * dx, L));
  }
  return cfg;
}

PositionConfig sequential_draw(const WaveFunction& psi, std::uint64_t seed, const SequentialOptions& opts) {
  std::mt19937_64 rng(seed);
  return sequential_draw(psi, rng, opts);
}

SampleSet sequential_sample(const WaveFunction& psi, std::size_t n_samples, std::uint64_t seed,
                            const SequentialOptions& opts) {
  SampleSet set;
  set.samples.reserve(n_samples);
  for (std::size_t i = 0; i < n_samples; ++i) {
    std::mt19937_64 rng(derive_seed(seed, i));
    set.samples.push_back(sequential_draw(psi, rng, opts));
  }
  set.provenance = {"sequential", seed, 0, 0, n_samples, 0.0, 1.0};
  return set;
}

Direction center_of_mass(const PositionConfig& config, int harmonic) {
  if (config.x.empty()) throw InvalidArgument("center of mass of an empty configuration");
  if (harmonic < 1) throw InvalidArgument("harmonic must be >= 1");
  const double L = config.L;
  cplx sum = 0.0;
  for (double x : config.x) sum += std::polar(1.0, 2.0 * kPi * harmonic * x / L);
  const double mag = std::abs(sum);
  if (mag < 1e-12) throw UndefinedDirection("center-of-mass direction undefined (vector sum vanishes)");
  const double period = L / harmonic;
  return {wrap(std::arg(sum) * period / (2.0 * kPi), period), mag};
}

SampleSet align_samples(const SampleSet& set, int harmonic) {
  SampleSet out;
  out.provenance = set.provenance;
  out.warnings = set.warnings;
  out.skipped = set.skipped;
  out.samples.reserve(set.samples.size());
  for (const auto& s : set.samples) {
    try {
      const auto dir = center_of_mass(s, harmonic);
      PositionConfig c{s.x, s.L};
      for (auto& x : c.x) x = wrap(x - dir.position, s.L);
      out.samples.push_back(std::move(c));
    } catch (const UndefinedDirection&) {
      ++out.skipped;
    }
  }
  return out;
}

SampleSet shift_samples(const SampleSet& set, double d) {
  SampleSet out = set;
  for (auto& s : out.samples)
    for (auto& x : s.x) x = wrap(x + d, s.L);
  return out;
}

std::vector<double> AlignedHistogram::centers() const {
  std::vector<double> c(bin_edges.empty() ? 0 : bin_edges.size() - 1);
  for (std::size_t i = 0; i < c.size(); ++i) c[i] = 0.5 * (bin_edges[i] + bin_edges[i + 1]);
  return c;
}

AlignedHistogram histogram(std::span<const double> positions, double L, std::size_t bins) {
  if (bins < 8) throw InvalidArgument("histogram needs at least 8 bins");
  AlignedHistogram h;
  h.bin_edges.resize(bins + 1);
  for (std::size_t i = 0; i <= bins; ++i) h.bin_edges[i] = L * static_cast<double>(i) / static_cast<double>(bins);
  h.counts.assign(bins, 0);
  for (double x : positions) {
    auto b = static_cast<std::size_t>(wrap(x, L) / L * static_cast<double>(bins));
    h.counts[std::min(b, bins - 1)]++;
  }
  h.total = positions.size();
  const double dx = L / static_cast<double>(bins);
  h.density.resize(bins);
  for (std::size_t i = 0; i < bins; ++i)
    h.density[i] = h.total ? static_cast<double>(h.counts[i]) / (static_cast<double>(h.total) * dx) : 0.0;
  return h;
}

AlignedHistogram histogram(const SampleSet& set, std::size_t bins) {
  const auto pooled = set.pooled();
  return histogram(pooled, set.length(), bins);
}

ProfileMatch best_shift_black_profile(const AlignedHistogram& h, std::size_t shift_steps) {
  const double L = h.bin_edges.back();
  const auto c = h.centers();
  const double dx = h.bin_width();
  ProfileMatch best{INFINITY, 0.0};
  for (std::size_t s = 0; s < shift_steps; ++s) {
    const double shift = L * static_cast<double>(s) / static_cast<double>(shift_steps);
    double d = 0.0;
    for (std::size_t i = 0; i < c.size(); ++i) {
      // bin average of (1 + cos(2 pi (x - shift)/L)) / L
      const double k = 2.0 * kPi / L;
      const double avg = (1.0 + std::cos(k * (c[i] - shift)) * std::sin(k * dx / 2) / (k * dx / 2)) / L;
      d = std::max(d, std::abs(h.density[i] - avg));
    }
    if (d < best.distance) best = {d, shift};
  }
  return best;
}

NotchDepthResult notch_depth_histogram(int N, int K, std::size_t n_samples, std::size_t grid_points,
                                       std::size_t bins, std::uint64_t seed, double L) {
  if (N < 2) throw InvalidArgument("notch depths need N >= 2");
  if (K < 1 || K > N - 1) throw InvalidArgument("notch depths need 1 <= K <= N-1");
  if (bins < 1) throw InvalidArgument("need at least one bin");
  const WaveFunction psi(free_yrast_state(N, K), L);
  const auto grid = uniform_grid(grid_points, L);
  NotchDepthResult r;
  SequentialOptions sopt;
  sopt.count = static_cast<std::size_t>(N) - 1;
  for (std::size_t i = 0; i < n_samples; ++i) {
    std::mt19937_64 rng(derive_seed(seed, i));
    const auto prefix = sequential_draw(psi, rng, sopt);
    try {
      const auto pair = dicke_SM(K, prefix.x, L);
      const auto cond = dicke_conditional(N, K, prefix.x, grid, L);
      const double bound = pair.normalized_min_density(L);
      r.depths.push_back(bound);
      r.bounds.push_back(bound);
      r.grid_minima.push_back(cond.min_density());
    } catch (const DegenerateConditional&) {
      ++r.skipped;
    }
  }
  r.bin_edges.resize(bins + 1);
  const double top = 1.0 / L;
  for (std::size_t b = 0; b <= bins; ++b) r.bin_edges[b] = top * static_cast<double>(b) / static_cast<double>(bins);
  r.counts.assign(bins, 0);
  for (double d : r.depths) {
    auto b = static_cast<std::size_t>(d / top * static_cast<double>(bins));
    r.counts[std::min(b, bins - 1)]++;
  }
  return r;
}

}  // namespace yrast
