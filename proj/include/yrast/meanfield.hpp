#pragma once

#include <complex>
#include <functional>
#include <span>
#include <vector>

namespace yrast {

using cplx = std::complex<double>;

/// Dark or gray soliton of the ring GPE, travelling at `velocity`:
///   -1/2 phi'' + i v phi' + gN |phi|^2 phi = mu phi,  int |phi|^2 dx = 1,
/// so that phi(x - v t) exp(-i mu t) solves the time-dependent equation.
/// The notch sits at x = L/2 and phi(0) is real and positive.
struct GPEProfile {
  std::vector<double> grid;
  std::vector<cplx> amplitude;
  double gN = 0.0;
  double L = 1.0;
  double k_avg = 0.0;     // average momentum in units of 2 pi / L
  double velocity = 0.0;
  double mu = 0.0;
  double elliptic_m = 0.0;  // parameter of the underlying Jacobi functions (0 in the ideal limit)
  /// Closed form at any x (periodic).
  std::function<cplx(double)> evaluate;

  std::vector<double> density() const;
  std::vector<double> phase() const;
  double min_density() const;
};

/// (L / 2 pi i) int phi* phi' dx with a spectral derivative, for a normalized
/// amplitude on the uniform grid x_j = j L / n.
double average_momentum(std::span<const cplx> amplitude, double L);
double average_momentum(const GPEProfile& profile);

/// Normalized (1 + A exp(2 pi i x / L)) / sqrt(L (1 + A^2)) with
/// A^2 / (1 + A^2) = k_avg.
GPEProfile ideal_limit_soliton(double k_avg, std::size_t grid_points = 1024, double L = 1.0);

/// Soliton with interaction gN and average momentum k_avg in [0, 1], built
/// from Jacobi elliptic functions; the parameter is fixed by bisection on
/// k_avg to `tol`. gN = 0 returns ideal_limit_soliton. Throws NoSolution if
/// the bracket fails.
GPEProfile gpe_soliton(double gN, double k_avg, std::size_t grid_points = 1024, double L = 1.0,
                       double tol = 1e-13);

/// 1 / sqrt(g N / L); +infinity for g = 0.
double healing_length(double g, int N, double L = 1.0);

/// d^order f / dx^order of periodic samples on [0, L) by FFT.
std::vector<cplx> spectral_derivative(std::span<const cplx> f, double L, int order);

/// max_j |-1/2 phi'' + i v phi' + gN |phi|^2 phi - mu phi| with spectral derivatives.
double gpe_residual(const GPEProfile& profile);

/// int (1/2 |phi'|^2 + gN/2 |phi|^4) dx.
double gpe_energy(std::span<const cplx> amplitude, double gN, double L);

struct ConstrainedMinimum {
  std::vector<cplx> amplitude;
  double energy;
  double mu;
  double velocity;
  double residual;  // max |R| of the travelling-wave equation
  int iterations;
};

/// Preconditioned gradient flow of the GPE energy at fixed norm and fixed
/// average momentum k_avg (a projected imaginary-time propagation).
ConstrainedMinimum constrained_minimum(double gN, double k_avg, std::size_t grid_points = 256,
                                       double L = 1.0, double tol = 1e-10, int max_iters = 200000);

/// Sup-norm distance between two periodic densities after the translation
/// that aligns their first Fourier harmonics (applied spectrally).
double aligned_density_distance(std::span<const double> a, std::span<const double> b);

}  // namespace yrast
