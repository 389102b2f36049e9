#include "yrast/wavefunction.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "yrast/errors.hpp"
#include "yrast/permanent.hpp"

namespace yrast {

void PositionConfig::validate() const {
  if (!(L > 0.0)) throw InvalidArgument("L must be positive");
  if (x.empty()) throw InvalidArgument("configuration needs at least one particle");
  for (double xi : x)
    if (!(xi >= 0.0 && xi < L)) throw InvalidArgument("position outside [0, L)");
}

double wrap(double x, double L) {
  double r = std::fmod(x, L);
  if (r < 0.0) r += L;
  if (r >= L) r -= L;
  return r;
}

std::vector<double> uniform_grid(std::size_t n, double L) {
  if (n < 2) throw InvalidArgument("grid needs at least two points");
  std::vector<double> g(n);
  for (std::size_t j = 0; j < n; ++j) g[j] = L * static_cast<double>(j) / static_cast<double>(n);
  return g;
}

std::vector<double> ConditionalWF::density() const {
  std::vector<double> d(amplitude.size());
  std::transform(amplitude.begin(), amplitude.end(), d.begin(), [](cplx a) { return std::norm(a); });
  return d;
}

std::vector<double> ConditionalWF::phase() const {
  std::vector<double> p(amplitude.size());
  std::transform(amplitude.begin(), amplitude.end(), p.begin(), [](cplx a) { return std::arg(a); });
  return p;
}

std::vector<double> ConditionalWF::unwrapped_phase() const {
  const auto p = phase();
  return unwrap_phase(p);
}

std::size_t ConditionalWF::argmin_density() const {
  const auto d = density();
  return static_cast<std::size_t>(std::min_element(d.begin(), d.end()) - d.begin());
}

double ConditionalWF::min_density() const { return std::norm(amplitude[argmin_density()]); }

std::vector<double> unwrap_phase(std::span<const double> phase) {
  std::vector<double> out(phase.begin(), phase.end());
  double offset = 0.0;
  for (std::size_t i = 1; i < phase.size(); ++i) {
    const double d = phase[i] - phase[i - 1];
    if (d > kPi) offset -= 2.0 * kPi;
    else if (d < -kPi) offset += 2.0 * kPi;
    out[i] = phase[i] + offset;
  }
  return out;
}

cplx amplitude(const WaveFunction& psi, const PositionConfig& config) {
  config.validate();
  if (std::abs(config.L - psi.length()) > 1e-12 * psi.length())
    throw InvalidArgument("configuration and state use different ring lengths");
  return psi.amplitude(config.x);
}

cplx amplitude(const FockState& s, const PositionConfig& config) {
  return amplitude(WaveFunction(s, config.L), config);
}

cplx amplitude(const StateVector& v, const PositionConfig& config) {
  return amplitude(WaveFunction(v, config.L), config);
}

ConditionalWF make_conditional(std::vector<double> grid, std::vector<cplx> raw,
                               std::vector<double> fixed, double L) {
  if (grid.size() != raw.size()) throw InvalidArgument("grid and amplitudes differ in length");
  for (std::size_t j = 1; j < grid.size(); ++j)
    if (!(grid[j] > grid[j - 1])) throw InvalidArgument("grid must be strictly increasing");
  double mass = 0.0;
  std::size_t peak = 0;
  for (std::size_t j = 0; j < raw.size(); ++j) {
    mass += std::norm(raw[j]);
    if (std::norm(raw[j]) > std::norm(raw[peak])) peak = j;
  }
  const double dx = L / static_cast<double>(grid.size());
  mass *= dx;
  if (!(mass > 0.0) || !std::isfinite(mass))
    throw DegenerateConditional("conditional wave function vanishes on the grid");
  const cplx rot = std::polar(1.0 / std::sqrt(mass), -std::arg(raw[peak]));
  for (auto& a : raw) a *= rot;
  return ConditionalWF{std::move(grid), std::move(raw), std::move(fixed), L};
}

ConditionalWF conditional(const WaveFunction& psi, std::span<const double> fixed,
                          std::span<const double> grid, double t) {
  const int N = psi.particle_count();
  if (N < 2) throw InvalidArgument("conditional needs N >= 2");
  if (static_cast<int>(fixed.size()) != N - 1)
    throw InvalidArgument("conditional needs exactly N-1 fixed positions");
  std::vector<double> x(fixed.begin(), fixed.end());
  x.push_back(0.0);
  std::vector<cplx> raw(grid.size());
  for (std::size_t j = 0; j < grid.size(); ++j) {
    x.back() = grid[j];
    raw[j] = psi.amplitude(x, t);
  }
  // roundoff-level slices count as vanishing
  double mass = 0.0;
  for (const auto& r : raw) mass += std::norm(r);
  mass *= psi.length() / static_cast<double>(grid.size());
  if (mass < 1e-24 * psi.length() * psi.mean_density())
    throw DegenerateConditional("conditional wave function vanishes on the grid");
  return make_conditional({grid.begin(), grid.end()}, std::move(raw), {fixed.begin(), fixed.end()},
                          psi.length());
}

cplx DickePair::source_product() const {
  cplx p = 1.0;
  for (const auto& a : sources) p *= a;
  return p;
}

double DickePair::normalized_min_density(double L) const {
  const double s = std::abs(S), m = std::abs(M);
  const double d = s - m;
  return d * d / (L * (s * s + m * m));
}

double DickePair::notch_position(double L) const {
  const double theta = kPi + std::arg(M) - std::arg(S);
  return wrap(L * theta / (2.0 * kPi), L);
}

double DickePair::black_shift(std::span<const double> fixed, double L) const {
  double sum = 0.0;
  for (double x : fixed) sum += x;
  return wrap(sum - (L / kPi) * std::arg(M), L);
}

DickePair dicke_SM(int K, std::span<const double> fixed, double L) {
  const int N = static_cast<int>(fixed.size()) + 1;
  if (K < 1 || K > N - 1) throw InvalidArgument("Dicke pair needs 1 <= K <= N-1");
  DickePair p;
  p.K = K;
  p.sources.reserve(fixed.size());
  for (double x : fixed) p.sources.push_back(std::polar(1.0, 2.0 * kPi * x / L));
  const auto e = elementary_symmetric(p.sources, K);
  p.S = e[static_cast<std::size_t>(K) - 1];
  p.M = e[static_cast<std::size_t>(K)];
  return p;
}

ConditionalWF dicke_conditional(int N, int K, std::span<const double> fixed,
                                std::span<const double> grid, double L) {
  if (static_cast<int>(fixed.size()) != N - 1)
    throw InvalidArgument("Dicke conditional needs exactly N-1 fixed positions");
  const auto p = dicke_SM(K, fixed, L);
  std::vector<cplx> raw(grid.size());
  for (std::size_t j = 0; j < grid.size(); ++j)
    raw[j] = p.S * std::polar(1.0, 2.0 * kPi * grid[j] / L) + p.M;
  return make_conditional({grid.begin(), grid.end()}, std::move(raw), {fixed.begin(), fixed.end()}, L);
}

double phase_jump(const std::function<cplx(double)>& psi, double x0, double eps) {
  return std::arg(psi(x0 + eps) / psi(x0 - eps));
}

double refine_minimum(const std::function<double(double)>& f, double a, double b, double tol) {
  const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - invphi * (b - a);
  double d = a + invphi * (b - a);
  double fc = f(c), fd = f(d);
  while (std::abs(b - a) > tol) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - invphi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + invphi * (b - a);
      fd = f(d);
    }
  }
  return 0.5 * (a + b);
}

double locate_conditional_minimum(const WaveFunction& psi, const ConditionalWF& cond) {
  const std::size_t j = cond.argmin_density();
  const double dx = cond.spacing();
  std::vector<double> x(cond.fixed.begin(), cond.fixed.end());
  x.push_back(0.0);
  auto dens = [&](double xn) {
    x.back() = wrap(xn, psi.length());
    return std::norm(psi.amplitude(x));
  };
  return wrap(refine_minimum(dens, cond.grid[j] - dx, cond.grid[j] + dx), psi.length());
}

SymmetryRestorationReport symmetry_restoration_check(int N, std::size_t n_quad,
                                                     std::size_t n_configs, std::uint64_t seed,
                                                     double L) {
  if (N < 2 || N % 2 != 0) throw InvalidArgument("symmetry restoration needs even N >= 2");
  if (N > 8) throw InvalidArgument("symmetry restoration check limited to N <= 8");
  if (n_quad < 2 || n_configs < 1) throw InvalidArgument("need quadrature points and configs");
  const WaveFunction twin(FockState::from_modes(1, {{0, N / 2}, {1, N / 2}}), L,
                          AmplitudeRoute::Permanent);
  const double log_c = std::lgamma(N + 1.0) - 2.0 * std::lgamma(N / 2 + 1.0);
  const double scale = L * std::exp(0.5 * (N * std::log(L) + log_c));

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, L);
  SymmetryRestorationReport rep{0.0, scale, 0.0, n_configs};
  std::vector<cplx> ratios;
  std::vector<double> x(static_cast<std::size_t>(N));
  const double h = L / static_cast<double>(n_quad);
  for (std::size_t c = 0; c < n_configs; ++c) {
    for (auto& xi : x) xi = u(rng);
    cplx G = 0.0;
    for (std::size_t q = 0; q < n_quad; ++q) {
      const double X = h * static_cast<double>(q);
      cplx prod = std::polar(1.0, kPi * N * X / L);
      for (double xi : x) prod *= 1.0 + std::polar(1.0, 2.0 * kPi * (xi - X) / L);
      G += prod;
    }
    G *= h;
    const cplx psi = twin.amplitude(x);
    rep.max_deviation = std::max(rep.max_deviation, std::abs(G / scale - psi));
    if (std::abs(psi) > 1e-3 * std::pow(L, -0.5 * N)) ratios.push_back(G / psi);
  }
  if (!ratios.empty()) {
    cplx mean = 0.0;
    for (auto r : ratios) mean += r;
    mean /= static_cast<double>(ratios.size());
    for (auto r : ratios) rep.scale_spread = std::max(rep.scale_spread, std::abs(r - mean) / std::abs(mean));
  }
  return rep;
}

FockState multi_soliton_state(int N, int M, int k_max) {
  if (N < 2 || N % 2 != 0) throw InvalidArgument("multi-soliton states need even N");
  if (M < 1) throw InvalidArgument("notch count must be >= 1");
  if (M % 2 == 0) {
    const int k = M / 2;
    const int cut = std::max(k_max, k);
    return FockState::from_modes(cut, {{-k, N / 2}, {k, N / 2}});
  }
  const int cut = std::max(k_max, M);
  return FockState::from_modes(cut, {{0, N / 2}, {M, N / 2}});
}

}  // namespace yrast
