#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "yrast/sampling.hpp"

namespace yrast {

/// Positions of one Bohmian realization at the recorded times.
struct TrajectorySet {
  std::vector<double> times;                  // strictly increasing, starting at 0
  std::vector<std::vector<double>> positions;  // one N-particle config per time, wrapped to [0, L)
  std::uint64_t seed = 0;                     // seed of the initial configuration
  double L = 1.0;
  bool aborted = false;
  std::string abort_reason;
  std::size_t node_guards = 0;  // steps taken with a halved dt near a node
};

/// v_l = Im(d_l psi / psi) from the analytic gradient. Throws NearNode when
/// |psi|^2 < 1e-14 of its configuration-space mean.
std::vector<double> velocity(const WaveFunction& psi, double t, std::span<const double> x);

/// Same field by central differences of log psi with step h (default 1e-6 L).
std::vector<double> velocity_finite_difference(const WaveFunction& psi, double t, std::span<const double> x,
                                               double h = 0.0);

/// Closed form for a two-mode Fock state |n_p, n_q>: with d = q - p, b_i =
/// exp(2 pi i d x_i / L), S_l = e_{K-1}(b without b_l), M_l = e_K(b without b_l),
///   v_l = (2 pi / L) (p + d Re(S_l b_l / (S_l b_l + M_l))).
/// For |N-K, K> on modes 0, 1 this is pi/L + (pi/L)(|S|^2 - |M|^2)/|S b + M|^2.
std::vector<double> velocity_two_mode(const TwoModeView& v, std::span<const double> x, double L);

struct BohmianOptions {
  double dt = 1e-3;
  /// Recorded times besides t = 0; must be positive and increasing.
  std::vector<double> snapshots{0.1, 0.2, 0.3, 0.4};
  /// Relative density below which the step is halved.
  double node_threshold = 1e-10;
  int max_halvings = 30;
  unsigned threads = 1;
};

/// RK4 integration of dx_l/dt = v_l from every initial configuration
/// (which the caller draws from |psi(0)|^2). Realizations that stall at a
/// node are aborted and flagged; the rest are returned alongside.
std::vector<TrajectorySet> integrate(const WaveFunction& psi, const SampleSet& initial,
                                     const BohmianOptions& opts = {});

/// Rotates every realization by -X_cm of its own initial configuration
/// (harmonic h), keeping the rotation fixed for all later times.
std::vector<TrajectorySet> align_initial(const std::vector<TrajectorySet>& runs, int harmonic = 1);

/// Pooled positions of all non-aborted realizations at snapshot index i.
std::vector<double> pooled_positions(const std::vector<TrajectorySet>& runs, std::size_t index);

/// Notch position from the h-th Fourier harmonic of an empirical density
/// assumed ~ 1 + cos(2 pi h (x - a) / L): returns the minimum a + L/(2h) in [0, L/h).
double fourier_notch(std::span<const double> positions, double L, int harmonic = 1);

/// Relative notch depth (mean - min) / mean of the fitted 1 + c cos profile,
/// i.e. 2 |c_h| / n for the h-th harmonic.
double fourier_notch_depth(std::span<const double> positions, double L, int harmonic = 1);

struct NotchTrack {
  std::vector<double> times;
  std::vector<double> position;   // unwrapped notch position
  std::vector<double> depth;      // fitted relative depth
  std::vector<double> hist_depth; // (mean - min bin) / mean of a 64-bin histogram
  std::size_t aborted = 0;
};

/// Follows the aligned notch through the snapshots; positions are unwrapped
/// assuming the notch moves less than L/(2h) between snapshots.
NotchTrack track_notch(const std::vector<TrajectorySet>& aligned, int harmonic = 1, std::size_t bins = 64);

struct EquivarianceReport {
  double ks_marginal_p;   // particle-0 positions at T vs direct samples of |psi(T)|^2
  double ks_relative_p;   // x_1 - x_0 (mod L) likewise
  double ks_marginal_d;
  double ks_relative_d;
  std::size_t aborted;
};

/// Propagates Metropolis samples of |psi(0)|^2 to T and compares with
/// Metropolis samples of |psi(T)|^2 (two-sample KS). Needs N >= 2.
EquivarianceReport equivariance_check(const WaveFunction& psi, double dt, double T, std::size_t n_realizations,
                                      std::uint64_t seed);

}  // namespace yrast
