#include "yrast/bohmian.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>

#include "yrast/errors.hpp"
#include "yrast/permanent.hpp"
#include "yrast/stats.hpp"

namespace yrast {

std::vector<double> velocity(const WaveFunction& psi, double t, std::span<const double> x) {
  // a global phase drops out of the velocity; skip it so stationary fields are exactly time independent
  const auto local = psi.amplitude_with_gradient(x, psi.is_stationary() ? 0.0 : t);
  if (std::norm(local.value) < 1e-14 * psi.mean_density())
    throw NearNode("|psi|^2 below 1e-14 of its mean; velocity undefined");
  std::vector<double> v(local.gradient.size());
  for (std::size_t l = 0; l < v.size(); ++l) v[l] = std::imag(local.gradient[l] / local.value);
  return v;
}

std::vector<double> velocity_finite_difference(const WaveFunction& psi, double t, std::span<const double> x,
                                               double h) {
  if (h <= 0.0) h = 1e-6 * psi.length();
  std::vector<double> y(x.begin(), x.end());
  std::vector<double> v(y.size());
  for (std::size_t l = 0; l < y.size(); ++l) {
    const double x0 = y[l];
    y[l] = x0 + h;
    const cplx plus = psi.amplitude(y, t);
    y[l] = x0 - h;
    const cplx minus = psi.amplitude(y, t);
    y[l] = x0;
    v[l] = std::arg(plus / minus) / (2.0 * h);
  }
  return v;
}

std::vector<double> velocity_two_mode(const TwoModeView& v, std::span<const double> x, double L) {
  const int N = v.n_particles;
  if (static_cast<int>(x.size()) != N) throw InvalidArgument("configuration size does not match the state");
  const int K = v.n_high;
  const int d = v.high - v.low;
  const double unit = 2.0 * kPi / L;
  std::vector<double> out(x.size(), unit * v.low);
  if (K == 0 || d == 0) return out;
  std::vector<cplx> b(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) b[i] = std::polar(1.0, unit * d * x[i]);
  std::vector<cplx> rest(x.size() - 1);
  for (std::size_t l = 0; l < x.size(); ++l) {
    std::size_t r = 0;
    for (std::size_t i = 0; i < x.size(); ++i)
      if (i != l) rest[r++] = b[i];
    const auto e = elementary_symmetric(rest, K);
    const cplx S = e[static_cast<std::size_t>(K) - 1];
    const cplx M = K <= N - 1 ? e[static_cast<std::size_t>(K)] : cplx(0.0);
    const cplx z = S * b[l];
    if (std::norm(z + M) < 1e-14 * (std::norm(S) + std::norm(M)))
      throw NearNode("conditional amplitude vanishes; velocity undefined");
    out[l] = unit * (v.low + d * std::real(z / (z + M)));
  }
  return out;
}

namespace {

struct Stepper {
  const WaveFunction& psi;
  const BohmianOptions& opts;
  double L;
  double mean;
  std::size_t guards = 0;

  void rk4(std::vector<double>& x, double t, double h) const {
    const std::size_t n = x.size();
    std::vector<double> y(n);
    const auto k1 = velocity(psi, t, x);
    for (std::size_t i = 0; i < n; ++i) y[i] = x[i] + 0.5 * h * k1[i];
    const auto k2 = velocity(psi, t + 0.5 * h, y);
    for (std::size_t i = 0; i < n; ++i) y[i] = x[i] + 0.5 * h * k2[i];
    const auto k3 = velocity(psi, t + 0.5 * h, y);
    for (std::size_t i = 0; i < n; ++i) y[i] = x[i] + h * k3[i];
    const auto k4 = velocity(psi, t + h, y);
    for (std::size_t i = 0; i < n; ++i) x[i] = wrap(x[i] + h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]), L);
  }

  // One step of size h, split in halves while the configuration is close to a node.
  void advance(std::vector<double>& x, double t, double h, int depth) {
    const bool near = std::norm(psi.amplitude(x, t)) < opts.node_threshold * mean;
    if (near && depth < opts.max_halvings) {
      ++guards;
      advance(x, t, 0.5 * h, depth + 1);
      advance(x, t + 0.5 * h, 0.5 * h, depth + 1);
      return;
    }
    std::vector<double> trial = x;
    try {
      rk4(trial, t, h);
    } catch (const NearNode&) {
      if (depth >= opts.max_halvings) throw;
      ++guards;
      advance(x, t, 0.5 * h, depth + 1);
      advance(x, t + 0.5 * h, 0.5 * h, depth + 1);
      return;
    }
    x = std::move(trial);
  }
};

TrajectorySet run_one(const WaveFunction& psi, const PositionConfig& start, std::uint64_t seed,
                      const BohmianOptions& opts) {
  TrajectorySet run;
  run.seed = seed;
  run.L = psi.length();
  Stepper st{psi, opts, psi.length(), psi.mean_density()};
  std::vector<double> x = start.x;
  double t = 0.0;
  run.times.push_back(0.0);
  run.positions.push_back(x);
  try {
    for (double ts : opts.snapshots) {
      const auto steps = std::max<long>(1, std::lround((ts - t) / opts.dt));
      const double h = (ts - t) / static_cast<double>(steps);
      for (long s = 0; s < steps; ++s) {
        st.advance(x, t, h, 0);
        t += h;
      }
      t = ts;
      run.times.push_back(ts);
      run.positions.push_back(x);
    }
  } catch (const NearNode& e) {
    run.aborted = true;
    run.abort_reason = std::string("step underflow near a node: ") + e.what();
  }
  run.node_guards = st.guards;
  return run;
}

}  // namespace

std::vector<TrajectorySet> integrate(const WaveFunction& psi, const SampleSet& initial, const BohmianOptions& opts) {
  if (!(opts.dt > 0.0)) throw InvalidArgument("dt must be positive");
  double prev = 0.0;
  for (double s : opts.snapshots) {
    if (!(s > prev)) throw InvalidArgument("snapshot times must be positive and increasing");
    prev = s;
  }
  for (const auto& s : initial.samples)
    if (static_cast<int>(s.size()) != psi.particle_count())
      throw InvalidArgument("initial configuration size does not match the state");
  std::vector<TrajectorySet> runs(initial.samples.size());
  const unsigned threads = std::max(1u, std::min<unsigned>(opts.threads, static_cast<unsigned>(runs.size())));
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < runs.size(); i = next++)
      runs[i] = run_one(psi, initial.samples[i], derive_seed(initial.provenance.seed, i), opts);
  };
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned k = 0; k < threads; ++k) pool.emplace_back(worker);
  }
  return runs;
}

std::vector<TrajectorySet> align_initial(const std::vector<TrajectorySet>& runs, int harmonic) {
  std::vector<TrajectorySet> out = runs;
  for (auto& r : out) {
    if (r.aborted || r.positions.empty()) continue;
    try {
      const auto dir = center_of_mass(PositionConfig{r.positions.front(), r.L}, harmonic);
      for (auto& cfg : r.positions)
        for (auto& x : cfg) x = wrap(x - dir.position, r.L);
    } catch (const UndefinedDirection&) {
      r.aborted = true;
      r.abort_reason = "undefined initial direction";
    }
  }
  return out;
}

std::vector<double> pooled_positions(const std::vector<TrajectorySet>& runs, std::size_t index) {
  std::vector<double> out;
  for (const auto& r : runs) {
    if (r.aborted) continue;
    const auto& cfg = r.positions.at(index);
    out.insert(out.end(), cfg.begin(), cfg.end());
  }
  return out;
}

namespace {

cplx harmonic_sum(std::span<const double> positions, double L, int harmonic) {
  cplx c = 0.0;
  for (double x : positions) c += std::polar(1.0, -2.0 * kPi * harmonic * x / L);
  return c;
}

}  // namespace

double fourier_notch(std::span<const double> positions, double L, int harmonic) {
  if (positions.empty()) throw InvalidArgument("no positions");
  const cplx c = harmonic_sum(positions, L, harmonic);
  const double period = L / harmonic;
  // density ~ 1 + cos(2 pi h (x - a) / L) has c ~ exp(-2 pi i h a / L)
  const double peak = -std::arg(c) * period / (2.0 * kPi);
  return wrap(peak + 0.5 * period, period);
}

double fourier_notch_depth(std::span<const double> positions, double L, int harmonic) {
  if (positions.empty()) throw InvalidArgument("no positions");
  return 2.0 * std::abs(harmonic_sum(positions, L, harmonic)) / static_cast<double>(positions.size());
}

NotchTrack track_notch(const std::vector<TrajectorySet>& aligned, int harmonic, std::size_t bins) {
  NotchTrack tr;
  const TrajectorySet* ref = nullptr;
  for (const auto& r : aligned) {
    if (r.aborted) ++tr.aborted;
    else if (!ref) ref = &r;
  }
  if (!ref) throw InvalidArgument("every realization was aborted");
  const double L = ref->L;
  const double period = L / harmonic;
  for (std::size_t i = 0; i < ref->times.size(); ++i) {
    const auto pos = pooled_positions(aligned, i);
    double a = fourier_notch(pos, L, harmonic);
    if (!tr.position.empty()) {
      const double prev = tr.position.back();
      a += period * std::round((prev - a) / period);
    }
    tr.times.push_back(ref->times[i]);
    tr.position.push_back(a);
    tr.depth.push_back(fourier_notch_depth(pos, L, harmonic));
    const auto h = histogram(pos, L, bins);
    const double mean = 1.0 / L;
    tr.hist_depth.push_back((mean - *std::min_element(h.density.begin(), h.density.end())) / mean);
  }
  return tr;
}

EquivarianceReport equivariance_check(const WaveFunction& psi, double dt, double T, std::size_t n_realizations,
                                      std::uint64_t seed) {
  if (psi.particle_count() < 2) throw InvalidArgument("equivariance check needs N >= 2");
  MetropolisOptions mo;
  mo.n_samples = n_realizations;
  mo.seed = derive_seed(seed, 0);
  const auto start = metropolis_sample(psi, mo);
  BohmianOptions bo;
  bo.dt = dt;
  bo.snapshots = {T};
  const auto runs = integrate(psi, start, bo);
  mo.seed = derive_seed(seed, 1);
  mo.time = T;
  const auto direct = metropolis_sample(psi, mo);

  const double L = psi.length();
  std::vector<double> m_evolved, r_evolved, m_direct, r_direct;
  EquivarianceReport rep{};
  for (const auto& r : runs) {
    if (r.aborted) {
      ++rep.aborted;
      continue;
    }
    const auto& x = r.positions.back();
    m_evolved.push_back(x[0]);
    r_evolved.push_back(wrap(x[1] - x[0], L));
  }
  for (const auto& s : direct.samples) {
    m_direct.push_back(s.x[0]);
    r_direct.push_back(wrap(s.x[1] - s.x[0], L));
  }
  const auto km = ks_two_sample(m_evolved, m_direct);
  const auto kr = ks_two_sample(r_evolved, r_direct);
  rep.ks_marginal_p = km.p_value;
  rep.ks_marginal_d = km.statistic;
  rep.ks_relative_p = kr.p_value;
  rep.ks_relative_d = kr.statistic;
  return rep;
}

}  // namespace yrast
