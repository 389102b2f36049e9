#include "yrast/state.hpp"

#include <cmath>
#include <map>
#include <mutex>

#include "yrast/errors.hpp"
#include "yrast/permanent.hpp"

namespace yrast {

namespace {

double log_binomial(int n, int k) {
  return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
}

void check_positions(std::span<const double> x, int n) {
  if (static_cast<int>(x.size()) != n)
    throw InvalidArgument("configuration has " + std::to_string(x.size()) +
                          " positions, state has " + std::to_string(n) + " particles");
}

// Plane-wave table exp(2 pi i k x_i / L) for k in [-k_max, k_max].
Eigen::MatrixXcd plane_waves(std::span<const double> x, int k_max, double L) {
  Eigen::MatrixXcd pw(static_cast<Eigen::Index>(x.size()), 2 * k_max + 1);
  for (std::size_t i = 0; i < x.size(); ++i) {
    const cplx a = std::polar(1.0, 2.0 * kPi * x[i] / L);
    const cplx ainv = std::conj(a);
    pw(static_cast<Eigen::Index>(i), k_max) = 1.0;
    cplx up = 1.0, down = 1.0;
    for (int k = 1; k <= k_max; ++k) {
      up *= a;
      down *= ainv;
      pw(static_cast<Eigen::Index>(i), k_max + k) = up;
      pw(static_cast<Eigen::Index>(i), k_max - k) = down;
    }
  }
  return pw;
}

struct Columns {
  Eigen::MatrixXcd cols;
  Eigen::MatrixXcd dcols;
  std::vector<int> mult;
  double log_norm;  // log of L^{-N/2} / sqrt(N! prod n_k!)
};

Columns select_columns(const FockState& s, const Eigen::MatrixXcd& pw, double L, bool gradient) {
  Columns c;
  const int N = s.particle_count();
  c.log_norm = -0.5 * N * std::log(L) - 0.5 * std::lgamma(N + 1.0);
  std::vector<Eigen::Index> idx;
  for (int k = -s.k_max(); k <= s.k_max(); ++k) {
    const int nk = s.occupation(k);
    if (nk == 0) continue;
    idx.push_back(k + s.k_max());
    c.mult.push_back(nk);
    c.log_norm -= 0.5 * std::lgamma(nk + 1.0);
  }
  const auto rows = pw.rows();
  c.cols.resize(rows, static_cast<Eigen::Index>(idx.size()));
  if (gradient) c.dcols.resize(rows, static_cast<Eigen::Index>(idx.size()));
  const int offset = static_cast<int>((pw.cols() - 1) / 2);
  for (std::size_t j = 0; j < idx.size(); ++j) {
    c.cols.col(static_cast<Eigen::Index>(j)) = pw.col(idx[j]);
    if (gradient) {
      const double k = static_cast<double>(idx[j] - offset);
      c.dcols.col(static_cast<Eigen::Index>(j)) = cplx(0.0, 2.0 * kPi * k / L) * pw.col(idx[j]);
    }
  }
  return c;
}

cplx permanent_amplitude(const FockState& s, const Eigen::MatrixXcd& pw, double L) {
  auto c = select_columns(s, pw, L, false);
  return repeated_column_permanent(c.cols, c.mult) * std::exp(c.log_norm);
}

WaveFunction::Local permanent_amplitude_grad(const FockState& s, const Eigen::MatrixXcd& pw,
                                             double L) {
  auto c = select_columns(s, pw, L, true);
  auto pg = repeated_column_permanent_with_gradient(c.cols, c.dcols, c.mult);
  const double norm = std::exp(c.log_norm);
  WaveFunction::Local out{pg.value * norm, {}};
  out.gradient.reserve(pg.row_derivative.size());
  for (const auto& d : pg.row_derivative) out.gradient.push_back(d * norm);
  return out;
}

struct TwoModeTerms {
  cplx prefactor;  // normalization times prod a_i^p
  std::vector<cplx> b;
};

TwoModeTerms two_mode_terms(const TwoModeView& v, std::span<const double> x, double L) {
  const int N = v.n_particles;
  const int d = v.high - v.low;
  TwoModeTerms t;
  t.b.reserve(x.size());
  double phase_sum = 0.0;
  for (double xi : x) {
    phase_sum += xi;
    t.b.push_back(std::polar(1.0, 2.0 * kPi * d * xi / L));
  }
  const double log_norm = -0.5 * (N * std::log(L) + log_binomial(N, v.n_high));
  t.prefactor = std::polar(std::exp(log_norm), 2.0 * kPi * v.low * phase_sum / L);
  return t;
}

WaveFunction::Local two_mode_amplitude_grad(const TwoModeView& v, std::span<const double> x,
                                            double L) {
  const int N = v.n_particles;
  const int K = v.n_high;
  const int d = v.high - v.low;
  auto t = two_mode_terms(v, x, L);
  const auto e = elementary_symmetric(t.b, K);
  WaveFunction::Local out{t.prefactor * e[static_cast<std::size_t>(K)], {}};
  out.gradient.resize(static_cast<std::size_t>(N));
  const cplx dp(0.0, 2.0 * kPi * v.low / L);
  const cplx dq(0.0, 2.0 * kPi * d / L);
  std::vector<cplx> rest(t.b.size() - 1);
  for (int l = 0; l < N; ++l) {
    cplx term = dp * out.value;
    if (K > 0) {
      std::size_t r = 0;
      for (int i = 0; i < N; ++i)
        if (i != l) rest[r++] = t.b[static_cast<std::size_t>(i)];
      const auto el = elementary_symmetric(rest, K - 1);
      term += t.prefactor * dq * t.b[static_cast<std::size_t>(l)] * el[static_cast<std::size_t>(K) - 1];
    }
    out.gradient[static_cast<std::size_t>(l)] = term;
  }
  return out;
}

}  // namespace

std::optional<TwoModeView> two_mode_view(const FockState& s) {
  std::vector<int> modes;
  for (int k = -s.k_max(); k <= s.k_max(); ++k)
    if (s.occupation(k) > 0) modes.push_back(k);
  const int N = s.particle_count();
  if (modes.size() == 1) return TwoModeView{modes[0], modes[0], 0, N};
  if (modes.size() == 2) return TwoModeView{modes[0], modes[1], s.occupation(modes[1]), N};
  return std::nullopt;
}

cplx fock_amplitude_permanent(const FockState& s, std::span<const double> x, double L) {
  check_positions(x, s.particle_count());
  return permanent_amplitude(s, plane_waves(x, s.k_max(), L), L);
}

cplx fock_amplitude_two_mode(const TwoModeView& v, std::span<const double> x, double L) {
  check_positions(x, v.n_particles);
  auto t = two_mode_terms(v, x, L);
  const auto e = elementary_symmetric(t.b, v.n_high);
  return t.prefactor * e[static_cast<std::size_t>(v.n_high)];
}

/// Every occupation reachable by removing particles from the populated
/// components, layered by particle number. Placing particle i in mode k moves
/// from a node of layer i to one of layer i + 1, so the amplitudes of all
/// components come out of a single forward pass that shares common prefixes:
/// F(n) = sum_k F(n - e_k) exp(2 pi i k x_i / L), <x|n> = F(n) sqrt(prod n_k! / N!) / L^(N/2).
struct WaveFunction::Occupations {
  struct Step {
    int from;
    int mode;  // column of the plane-wave table
    int to;
  };
  std::once_flag built;
  bool usable = false;
  std::vector<std::vector<Step>> layers;  // layers[i]: particle i placed
  std::size_t nodes = 0;
  std::vector<std::pair<std::size_t, int>> finals;  // (component, node)
  std::vector<double> weight;                       // sqrt(prod n_k! / N!) L^(-N/2)

  static constexpr std::size_t kMaxSteps = 4'000'000;

  void build(const StateVector& sv, double L) {
    const int N = sv.basis()->particle_count();
    std::vector<std::map<std::vector<int>, int>> ids(static_cast<std::size_t>(N) + 1);
    int next = 0;
    for (std::size_t c = 0; c < sv.size(); ++c) {
      if (sv.amplitudes()(static_cast<Eigen::Index>(c)) == cplx(0.0)) continue;
      const auto& st = (*sv.basis())[c];
      std::vector<int> occ(st.occupations().begin(), st.occupations().end());
      auto [it, fresh] = ids[static_cast<std::size_t>(N)].try_emplace(occ, next);
      if (fresh) ++next;
      finals.push_back({c, it->second});
      double lw = -std::lgamma(N + 1.0) - N * std::log(L);
      for (int n : occ) lw += std::lgamma(n + 1.0);
      weight.push_back(std::exp(0.5 * lw));
    }
    layers.assign(static_cast<std::size_t>(N), {});
    std::size_t total = 0;
    for (int i = N; i > 0; --i) {
      auto& below = ids[static_cast<std::size_t>(i) - 1];
      auto& steps = layers[static_cast<std::size_t>(i) - 1];
      for (const auto& [occ, to] : ids[static_cast<std::size_t>(i)]) {
        auto smaller = occ;
        for (std::size_t k = 0; k < occ.size(); ++k) {
          if (occ[k] == 0) continue;
          --smaller[k];
          auto [it, fresh] = below.try_emplace(smaller, next);
          if (fresh) ++next;
          steps.push_back({it->second, static_cast<int>(k), to});
          ++smaller[k];
        }
      }
      total += steps.size();
      if (total > kMaxSteps) return;  // too large to tabulate; use per-component permanents
    }
    nodes = static_cast<std::size_t>(next);
    usable = true;
  }

  cplx evaluate(const StateVector& sv, const Eigen::MatrixXcd& pw, double L, double t) const {
    std::vector<cplx> f(nodes, cplx(0.0));
    // layer 0 holds the single empty occupation
    f[static_cast<std::size_t>(layers[0].front().from)] = 1.0;
    for (std::size_t i = 0; i < layers.size(); ++i)
      for (const auto& s : layers[i])
        f[static_cast<std::size_t>(s.to)] +=
            f[static_cast<std::size_t>(s.from)] * pw(static_cast<Eigen::Index>(i), s.mode);
    cplx sum = 0.0;
    for (std::size_t j = 0; j < finals.size(); ++j) {
      const auto [c, node] = finals[j];
      cplx w = sv.amplitudes()(static_cast<Eigen::Index>(c)) * weight[j];
      if (t != 0.0) w *= std::polar(1.0, -free_energy((*sv.basis())[c], L) * t);
      sum += w * f[static_cast<std::size_t>(node)];
    }
    return sum;
  }
};

WaveFunction::WaveFunction(FockState s, double L, AmplitudeRoute route)
    : state_(std::move(s)), L_(L), route_(route) {
  if (!(L_ > 0.0)) throw InvalidArgument("L must be positive");
  const auto& f = std::get<FockState>(state_);
  n_ = f.particle_count();
  if (n_ < 1) throw InvalidArgument("state has no particles");
  K_ = f.total_momentum();
  two_mode_ = two_mode_view(f);
}

WaveFunction::WaveFunction(StateVector v, double L, AmplitudeRoute route)
    : state_(std::move(v)), L_(L), route_(route) {
  if (!(L_ > 0.0)) throw InvalidArgument("L must be positive");
  const auto& sv = std::get<StateVector>(state_);
  n_ = sv.basis()->particle_count();
  K_ = sv.basis()->total_momentum();
  occupations_ = std::make_shared<Occupations>();
  // stationary if all populated components share one energy
  std::optional<long long> e;
  std::optional<int> k;
  bool same_k = true;
  for (std::size_t i = 0; i < sv.size(); ++i) {
    if (sv.amplitudes()(static_cast<Eigen::Index>(i)) == cplx(0.0)) continue;
    const auto& s = (*sv.basis())[i];
    if (!e) e = s.kinetic_units();
    else if (*e != s.kinetic_units()) stationary_ = false;
    if (!k) k = s.total_momentum();
    else if (*k != s.total_momentum()) same_k = false;
  }
  if (!K_ && same_k) K_ = k;
}

WaveFunction WaveFunction::with_route(AmplitudeRoute route) const {
  WaveFunction copy = *this;
  copy.route_ = route;
  return copy;
}

double WaveFunction::mean_density() const { return std::pow(L_, -n_); }

cplx WaveFunction::amplitude(std::span<const double> x, double t) const {
  check_positions(x, n_);
  if (const auto* f = fock()) {
    const cplx a = (route_ == AmplitudeRoute::Auto && two_mode_)
                       ? fock_amplitude_two_mode(*two_mode_, x, L_)
                       : permanent_amplitude(*f, plane_waves(x, f->k_max(), L_), L_);
    return t == 0.0 ? a : a * std::polar(1.0, -free_energy(*f, L_) * t);
  }
  const auto& sv = *vector();
  const auto pw = plane_waves(x, sv.basis()->k_max(), L_);
  if (route_ == AmplitudeRoute::Auto) {
    std::call_once(occupations_->built, [&] { occupations_->build(sv, L_); });
    if (occupations_->usable) return occupations_->evaluate(sv, pw, L_, t);
  }
  cplx sum = 0.0;
  for (std::size_t i = 0; i < sv.size(); ++i) {
    const cplx c = sv.amplitudes()(static_cast<Eigen::Index>(i));
    if (c == cplx(0.0)) continue;
    const auto& s = (*sv.basis())[i];
    cplx a;
    if (route_ == AmplitudeRoute::Auto) {
      if (auto v = two_mode_view(s)) a = fock_amplitude_two_mode(*v, x, L_);
      else a = permanent_amplitude(s, pw, L_);
    } else {
      a = permanent_amplitude(s, pw, L_);
    }
    const cplx phase = t == 0.0 ? cplx(1.0) : std::polar(1.0, -free_energy(s, L_) * t);
    sum += c * phase * a;
  }
  return sum;
}

WaveFunction::Local WaveFunction::amplitude_with_gradient(std::span<const double> x, double t) const {
  check_positions(x, n_);
  if (const auto* f = fock()) {
    Local out = (route_ == AmplitudeRoute::Auto && two_mode_)
                    ? two_mode_amplitude_grad(*two_mode_, x, L_)
                    : permanent_amplitude_grad(*f, plane_waves(x, f->k_max(), L_), L_);
    if (t != 0.0) {
      const cplx phase = std::polar(1.0, -free_energy(*f, L_) * t);
      out.value *= phase;
      for (auto& g : out.gradient) g *= phase;
    }
    return out;
  }
  const auto& sv = *vector();
  const auto pw = plane_waves(x, sv.basis()->k_max(), L_);
  Local acc{0.0, std::vector<cplx>(static_cast<std::size_t>(n_), 0.0)};
  for (std::size_t i = 0; i < sv.size(); ++i) {
    const cplx c = sv.amplitudes()(static_cast<Eigen::Index>(i));
    if (c == cplx(0.0)) continue;
    const auto& s = (*sv.basis())[i];
    Local part;
    if (route_ == AmplitudeRoute::Auto) {
      if (auto v = two_mode_view(s)) part = two_mode_amplitude_grad(*v, x, L_);
      else part = permanent_amplitude_grad(s, pw, L_);
    } else {
      part = permanent_amplitude_grad(s, pw, L_);
    }
    const cplx w = c * (t == 0.0 ? cplx(1.0) : std::polar(1.0, -free_energy(s, L_) * t));
    acc.value += w * part.value;
    for (int l = 0; l < n_; ++l)
      acc.gradient[static_cast<std::size_t>(l)] += w * part.gradient[static_cast<std::size_t>(l)];
  }
  return acc;
}

StateVector evolve_state(const StateVector& v, double t, double L) {
  Eigen::VectorXcd a = v.amplitudes();
  for (std::size_t i = 0; i < v.size(); ++i)
    a(static_cast<Eigen::Index>(i)) *= std::polar(1.0, -free_energy((*v.basis())[i], L) * t);
  return StateVector(v.basis(), std::move(a));
}

}  // namespace yrast
