#include "yrast/meanfield.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <mutex>

#include "yrast/basis.hpp"
#include "yrast/elliptic.hpp"
#include "yrast/errors.hpp"

namespace yrast {

namespace {

std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

// In-place complex DFT; the FFTW planner is not reentrant, execution is.
void dft(std::vector<cplx>& data, int sign) {
  const int n = static_cast<int>(data.size());
  auto* ptr = reinterpret_cast<fftw_complex*>(data.data());
  fftw_plan plan;
  {
    std::lock_guard lock(planner_mutex());
    plan = fftw_plan_dft_1d(n, ptr, ptr, sign, FFTW_ESTIMATE);
  }
  fftw_execute_dft(plan, ptr, ptr);
  std::lock_guard lock(planner_mutex());
  fftw_destroy_plan(plan);
}

// Signed frequency index of FFT slot j.
long frequency(std::size_t j, std::size_t n) {
  return j <= n / 2 ? static_cast<long>(j) : static_cast<long>(j) - static_cast<long>(n);
}

std::vector<double> uniform_points(std::size_t n, double L) {
  if (n < 8) throw InvalidArgument("mean-field grids need at least 8 points");
  if (!(L > 0.0)) throw InvalidArgument("L must be positive");
  std::vector<double> g(n);
  for (std::size_t j = 0; j < n; ++j) g[j] = L * static_cast<double>(j) / static_cast<double>(n);
  return g;
}

void sample(GPEProfile& p, std::size_t n) {
  p.grid = uniform_points(n, p.L);
  p.amplitude.resize(n);
  for (std::size_t j = 0; j < n; ++j) p.amplitude[j] = p.evaluate(p.grid[j]);
}

// Elliptic solution chi = sqrt(rho) exp(i theta) of -1/2 chi'' + gN |chi|^2 chi = mu' chi with
// rho = rho1 + (rho2 - rho1) sn^2(kappa (x - L/2) | m), one notch per ring.
struct EllipticBranch {
  double G, L, m;
  double K, rho1, rho2, rho3, kappa, J, I;

  EllipticBranch(double G_, double L_, double m_) : G(G_), L(L_), m(m_) {
    K = elliptic::complete_k(m);
    const double d31 = 4.0 * K * K / (G * L * L);
    rho1 = 1.0 / L - d31 * elliptic::one_minus_e_over_k(m);
    rho2 = rho1 + m * d31;
    rho3 = rho1 + d31;
    kappa = 2.0 * K / L;
    J = 0.0;
    I = std::numeric_limits<double>::infinity();
    if (rho1 > 0.0) {
      // current is negative on the branch with k_avg in (0, 1/2)
      J = -std::sqrt(G * rho1 * rho2 * rho3);
      I = 2.0 * elliptic::complete_pi(-(rho2 - rho1) / rho1, m) / (kappa * rho1);
    }
  }

  double k_avg() const { return J * (L * L - I) / (2.0 * kPi); }
  double mu_static() const { return 0.5 * G * (rho1 + rho2 + rho3); }

  // chi(x) for x in [0, L]; theta measured from the notch.
  cplx chi(double x) const {
    const double u = kappa * (x - 0.5 * L);
    const auto jf = elliptic::jacobi(u, m);
    if (rho1 <= 0.0) return std::sqrt(rho2) * jf.sn;
    const double rho = rho1 + (rho2 - rho1) * jf.sn * jf.sn;
    const double theta = J / (kappa * rho1) * elliptic::incomplete_pi(-(rho2 - rho1) / rho1, jf.am, m);
    return std::polar(std::sqrt(rho), theta);
  }
};

double bisect(const std::function<double(double)>& f, double lo, double hi, double tol) {
  double flo = f(lo);
  for (int it = 0; it < 400; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi || hi - lo <= tol * std::max(hi, 1e-300)) break;
    const double fm = f(mid);
    if ((fm < 0.0) == (flo < 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

// Parameter where rho1 reaches zero (the black soliton).
double black_parameter(double G, double L) {
  auto rho1 = [&](double m) {
    return 1.0 / L - 4.0 * std::pow(elliptic::complete_k(m), 2) / (G * L * L) * elliptic::one_minus_e_over_k(m);
  };
  double hi = 0.5;
  while (rho1(hi) > 0.0) hi = 1.0 - 0.5 * (1.0 - hi);
  return bisect(rho1, 0.0, hi, 1e-16);
}

GPEProfile gray_branch(double G, double q, std::size_t n, double L, double tol) {
  GPEProfile p;
  p.gN = G;
  p.L = L;
  const double m_black = black_parameter(G, L);
  if (q == 0.5) {
    EllipticBranch b(G, L, m_black);
    b.rho1 = 0.0;
    b.rho2 = m_black * (b.rho3 - 0.0);
    p.velocity = kPi / L;
    p.mu = 0.5 * G * (b.rho2 + b.rho3) - 0.5 * p.velocity * p.velocity;
    p.elliptic_m = m_black;
    p.k_avg = 0.5;
    const double v = p.velocity;
    // chi(0) = -sqrt(rho2): flip the sign so that phi(0) > 0
    p.evaluate = [b, v, L](double x) {
      const double xw = x >= 0.0 && x <= L ? x : x - L * std::floor(x / L);
      return -b.chi(xw) * std::polar(1.0, v * xw);
    };
    sample(p, n);
    return p;
  }
  const double m_hi = m_black * (1.0 - 1e-14);
  auto residual = [&](double m) { return EllipticBranch(G, L, m).k_avg() - q; };
  if (!(residual(m_hi) > 0.0))
    throw NoSolution("gray soliton: k_avg bracket failed (k_avg(m_black) - q = " +
                     std::to_string(residual(m_hi)) + ")");
  double lo = 0.0, hi = m_hi;
  for (int it = 0; it < 400; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const double r = residual(mid);
    if (std::abs(r) < tol) {
      lo = hi = mid;
      break;
    }
    (r < 0.0 ? lo : hi) = mid;
  }
  const EllipticBranch b(G, L, 0.5 * (lo + hi));
  p.velocity = -b.J * b.I / L;
  p.mu = b.mu_static() - 0.5 * p.velocity * p.velocity;
  p.elliptic_m = b.m;
  p.k_avg = b.k_avg();
  const double v = p.velocity;
  const cplx phase0 = std::polar(1.0, -std::arg(b.chi(0.0)));
  p.evaluate = [b, v, L, phase0](double x) {
    const double xw = x >= 0.0 && x <= L ? x : x - L * std::floor(x / L);
    return phase0 * b.chi(xw) * std::polar(1.0, v * xw);
  };
  sample(p, n);
  return p;
}

}  // namespace

std::vector<double> GPEProfile::density() const {
  std::vector<double> d(amplitude.size());
  std::transform(amplitude.begin(), amplitude.end(), d.begin(), [](cplx a) { return std::norm(a); });
  return d;
}

std::vector<double> GPEProfile::phase() const {
  std::vector<double> p(amplitude.size());
  std::transform(amplitude.begin(), amplitude.end(), p.begin(), [](cplx a) { return std::arg(a); });
  return p;
}

double GPEProfile::min_density() const {
  const auto d = density();
  return *std::min_element(d.begin(), d.end());
}

std::vector<cplx> spectral_derivative(std::span<const cplx> f, double L, int order) {
  const std::size_t n = f.size();
  if (n < 2) throw InvalidArgument("spectral derivative needs at least two samples");
  std::vector<cplx> c(f.begin(), f.end());
  dft(c, FFTW_FORWARD);
  for (std::size_t j = 0; j < n; ++j) {
    const long k = frequency(j, n);
    if (n % 2 == 0 && j == n / 2 && order % 2 == 1) {
      c[j] = 0.0;
      continue;
    }
    c[j] *= std::pow(cplx(0.0, 2.0 * kPi * static_cast<double>(k) / L), order) / static_cast<double>(n);
  }
  dft(c, FFTW_BACKWARD);
  return c;
}

double average_momentum(std::span<const cplx> amplitude, double L) {
  const double dx = L / static_cast<double>(amplitude.size());
  double norm = 0.0;
  for (auto a : amplitude) norm += std::norm(a) * dx;
  if (std::abs(norm - 1.0) > 1e-6) throw InvalidArgument("average_momentum needs a normalized profile");
  const auto d = spectral_derivative(amplitude, L, 1);
  double p = 0.0;
  for (std::size_t j = 0; j < amplitude.size(); ++j) p += std::imag(std::conj(amplitude[j]) * d[j]) * dx;
  return L / (2.0 * kPi) * p;
}

double average_momentum(const GPEProfile& profile) { return average_momentum(profile.amplitude, profile.L); }

GPEProfile ideal_limit_soliton(double k_avg, std::size_t grid_points, double L) {
  if (!(k_avg >= 0.0 && k_avg <= 1.0)) throw InvalidArgument("k_avg must lie in [0, 1]");
  GPEProfile p;
  p.L = L;
  p.k_avg = k_avg;
  p.velocity = kPi / L;
  p.mu = 0.0;
  // A^2 / (1 + A^2) = k_avg; k_avg = 1 is the bare plane wave
  const double w0 = std::sqrt(1.0 - k_avg);
  const double w1 = std::sqrt(k_avg);
  const double norm = 1.0 / std::sqrt(L);
  p.evaluate = [w0, w1, norm, L](double x) { return norm * (w0 + w1 * std::polar(1.0, 2.0 * kPi * x / L)); };
  sample(p, grid_points);
  return p;
}

GPEProfile gpe_soliton(double gN, double k_avg, std::size_t grid_points, double L, double tol) {
  if (!(gN >= 0.0)) throw InvalidArgument("gN must be non-negative");
  if (!(k_avg >= 0.0 && k_avg <= 1.0)) throw InvalidArgument("k_avg must lie in [0, 1]");
  if (!(L > 0.0)) throw InvalidArgument("L must be positive");
  if (gN == 0.0) return ideal_limit_soliton(k_avg, grid_points, L);
  const double p = 2.0 * kPi / L;
  if (k_avg == 0.0 || k_avg == 1.0) {
    GPEProfile u;
    u.gN = gN;
    u.L = L;
    u.k_avg = k_avg;
    u.velocity = k_avg * p;
    u.mu = gN / L - 0.5 * k_avg * p * p;
    const double kk = k_avg;
    u.evaluate = [kk, p, L](double x) { return std::polar(1.0 / std::sqrt(L), kk * p * x); };
    sample(u, grid_points);
    return u;
  }
  if (k_avg <= 0.5) return gray_branch(gN, k_avg, grid_points, L, tol);
  // exp(2 pi i x / L) conj(phi_{1 - k}) carries momentum k
  GPEProfile base = gray_branch(gN, 1.0 - k_avg, grid_points, L, tol);
  GPEProfile out = base;
  out.k_avg = 1.0 - base.k_avg;
  out.velocity = p - base.velocity;
  out.mu = base.mu - 0.5 * p * p + base.velocity * p;
  auto f = base.evaluate;
  out.evaluate = [f, p](double x) { return std::polar(1.0, p * x) * std::conj(f(x)); };
  sample(out, grid_points);
  return out;
}

double healing_length(double g, int N, double L) {
  if (g < 0.0) throw InvalidArgument("healing length needs g >= 0");
  if (N < 1 || !(L > 0.0)) throw InvalidArgument("healing length needs N >= 1 and L > 0");
  if (g == 0.0) return std::numeric_limits<double>::infinity();
  return 1.0 / std::sqrt(g * N / L);
}

double gpe_residual(const GPEProfile& profile) {
  const auto& f = profile.amplitude;
  const auto d1 = spectral_derivative(f, profile.L, 1);
  const auto d2 = spectral_derivative(f, profile.L, 2);
  double r = 0.0;
  for (std::size_t j = 0; j < f.size(); ++j) {
    const cplx res = -0.5 * d2[j] + cplx(0.0, profile.velocity) * d1[j] + profile.gN * std::norm(f[j]) * f[j] -
                     profile.mu * f[j];
    r = std::max(r, std::abs(res));
  }
  return r;
}

double gpe_energy(std::span<const cplx> amplitude, double gN, double L) {
  const double dx = L / static_cast<double>(amplitude.size());
  const auto d = spectral_derivative(amplitude, L, 1);
  double e = 0.0;
  for (std::size_t j = 0; j < amplitude.size(); ++j)
    e += (0.5 * std::norm(d[j]) + 0.5 * gN * std::pow(std::norm(amplitude[j]), 2)) * dx;
  return e;
}

ConstrainedMinimum constrained_minimum(double gN, double k_avg, std::size_t grid_points, double L,
                                       double tol, int max_iters) {
  if (!(gN >= 0.0)) throw InvalidArgument("gN must be non-negative");
  if (!(k_avg > 0.0 && k_avg < 1.0)) throw InvalidArgument("constrained minimum needs 0 < k_avg < 1");
  const std::size_t n = grid_points;
  const double p = 2.0 * kPi / L;
  std::vector<double> k(n), eps(n);
  for (std::size_t j = 0; j < n; ++j) {
    k[j] = static_cast<double>(frequency(j, n));
    eps[j] = 0.5 * p * p * k[j] * k[j];
  }
  // phi(x) = sum_k c_k exp(2 pi i k x / L) / sqrt(L), so sum |c_k|^2 is the norm
  auto to_real = [&](std::vector<cplx> c) {
    dft(c, FFTW_BACKWARD);
    for (auto& v : c) v /= std::sqrt(L);
    return c;
  };
  auto to_fourier = [&](std::vector<cplx> f) {
    dft(f, FFTW_FORWARD);
    for (auto& v : f) v *= std::sqrt(L) / static_cast<double>(n);
    return f;
  };
  // start from the ideal-limit two-mode profile with a small third-mode admixture
  std::vector<cplx> c(n, 0.0);
  c[0] = std::sqrt(1.0 - k_avg);
  c[1] = std::sqrt(k_avg);
  c[n - 1] = 1e-3;
  c[2] = 1e-3;

  auto retract = [&](std::vector<cplx>& cc) {
    for (int pass = 0; pass < 3; ++pass) {
      double m0 = 0.0, m1 = 0.0, m2 = 0.0;
      for (std::size_t j = 0; j < n; ++j) {
        const double w = std::norm(cc[j]);
        m0 += w;
        m1 += k[j] * w;
        m2 += k[j] * k[j] * w;
      }
      const double det = m0 * m2 - m1 * m1;
      const double a = (m2 - k_avg * m1) / det;
      const double b = (k_avg * m0 - m1) / det;
      for (std::size_t j = 0; j < n; ++j) cc[j] *= std::sqrt(std::max(0.0, a + b * k[j]));
    }
  };
  retract(c);

  const double alpha = std::max(1.0, gN / L) + 0.5 * p * p;
  const double tau = 0.8;
  ConstrainedMinimum out{};
  for (int it = 1; it <= max_iters; ++it) {
    const auto f = to_real(c);
    std::vector<cplx> nl(n);
    for (std::size_t j = 0; j < n; ++j) nl[j] = gN * std::norm(f[j]) * f[j];
    const auto nh = to_fourier(nl);
    std::vector<cplx> g(n);
    for (std::size_t j = 0; j < n; ++j) g[j] = eps[j] * c[j] + nh[j];
    // Lagrange multipliers: remove the components along c and k c
    double a00 = 0.0, a01 = 0.0, a11 = 0.0, r0 = 0.0, r1 = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      const double w = std::norm(c[j]);
      a00 += w;
      a01 += k[j] * w;
      a11 += k[j] * k[j] * w;
      const double cg = std::real(std::conj(c[j]) * g[j]);
      r0 += cg;
      r1 += k[j] * cg;
    }
    const double det = a00 * a11 - a01 * a01;
    const double mu = (r0 * a11 - r1 * a01) / det;
    const double beta = (a00 * r1 - a01 * r0) / det;
    std::vector<cplx> r(n);
    for (std::size_t j = 0; j < n; ++j) r[j] = g[j] - (mu + beta * k[j]) * c[j];
    const auto rr = to_real(r);
    double res = 0.0;
    for (auto v : rr) res = std::max(res, std::abs(v));
    out.iterations = it;
    out.mu = mu;
    out.velocity = beta / p;
    out.residual = res;
    if (res < tol) break;
    for (std::size_t j = 0; j < n; ++j) c[j] -= tau * r[j] / (alpha + eps[j]);
    retract(c);
  }
  out.amplitude = to_real(c);
  out.energy = gpe_energy(out.amplitude, gN, L);
  return out;
}

double aligned_density_distance(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size() || a.size() < 4) throw InvalidArgument("densities must share a grid");
  const std::size_t n = a.size();
  std::vector<cplx> fa(a.begin(), a.end()), fb(b.begin(), b.end());
  dft(fa, FFTW_FORWARD);
  dft(fb, FFTW_FORWARD);
  // fb(x) -> fb(x - s) with the first harmonics brought into phase
  const double theta = std::arg(fa[1]) - std::arg(fb[1]);
  for (std::size_t j = 0; j < n; ++j) {
    const double kk = static_cast<double>(frequency(j, n));
    if (n % 2 == 0 && j == n / 2) {
      fb[j] *= std::cos(kk * theta) / static_cast<double>(n);
      continue;
    }
    fb[j] *= std::polar(1.0 / static_cast<double>(n), kk * theta);
  }
  dft(fb, FFTW_BACKWARD);
  double d = 0.0;
  for (std::size_t j = 0; j < n; ++j) d = std::max(d, std::abs(a[j] - fb[j].real()));
  return d;
}

}  // namespace yrast
