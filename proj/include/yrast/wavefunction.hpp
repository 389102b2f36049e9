#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "yrast/state.hpp"

namespace yrast {

/// N particle positions on a ring of length L ("one measurement shot").
struct PositionConfig {
  std::vector<double> x;
  double L = 1.0;

  void validate() const;
  std::size_t size() const noexcept { return x.size(); }
};

/// Wraps a coordinate into [0, L).
double wrap(double x, double L);

/// Uniform periodic grid x_j = j L / n, j = 0..n-1.
std::vector<double> uniform_grid(std::size_t n, double L);

/// Single-particle wave function of the last particle with the other N-1
/// positions held fixed, sampled on a grid.
///
/// Normalized so that sum |psi|^2 dx = 1 over the grid; the global phase is
/// zero at the grid point of largest modulus.
struct ConditionalWF {
  std::vector<double> grid;
  std::vector<cplx> amplitude;
  std::vector<double> fixed;
  double L = 1.0;

  double spacing() const { return L / static_cast<double>(grid.size()); }
  std::vector<double> density() const;
  std::vector<double> phase() const;
  /// Phase unwrapped along the grid (2 pi jumps removed at threshold pi).
  std::vector<double> unwrapped_phase() const;
  std::size_t argmin_density() const;
  double min_density() const;
};

/// Removes 2 pi discontinuities between consecutive samples.
std::vector<double> unwrap_phase(std::span<const double> phase);

/// Normalized many-body amplitude at a configuration.
cplx amplitude(const WaveFunction& psi, const PositionConfig& config);
cplx amplitude(const FockState& s, const PositionConfig& config);
cplx amplitude(const StateVector& v, const PositionConfig& config);

/// psi(fixed..., x) on the grid, normalized. Throws DegenerateConditional if
/// the slice vanishes on the whole grid (weight below 1e-24 of the mean).
ConditionalWF conditional(const WaveFunction& psi, std::span<const double> fixed,
                          std::span<const double> grid, double t = 0.0);

/// Normalizes raw grid values into a ConditionalWF (shared by the closed forms).
ConditionalWF make_conditional(std::vector<double> grid, std::vector<cplx> raw,
                               std::vector<double> fixed, double L);

/// S_K = e_{K-1}(a), M_K = e_K(a) of the phase factors a_i = exp(2 pi i x_i / L)
/// of the N-1 fixed particles.
struct DickePair {
  cplx S;
  cplx M;
  int K;
  std::vector<cplx> sources;

  int particle_count() const noexcept { return static_cast<int>(sources.size()) + 1; }
  /// prod a_i
  cplx source_product() const;
  /// Exact minimum of |S e^{2 pi i x/L} + M|^2 / (L (|S|^2 + |M|^2)), the
  /// normalized conditional density.
  double normalized_min_density(double L) const;
  /// Position in [0, L) of the conditional density minimum.
  double notch_position(double L) const;
  /// Shift X in psi_con ~ 1 + exp(2 pi i (x + X) / L) for the balanced
  /// (K = N/2) case: X = sum x_i - (L / pi) Arg(M), wrapped to [0, L).
  /// The notch then sits at L/2 - X (mod L).
  double black_shift(std::span<const double> fixed, double L) const;
};

DickePair dicke_SM(int K, std::span<const double> fixed, double L);

/// Closed-form conditional of |N-K, K> (modes 0 and 1): S e^{2 pi i x/L} + M.
ConditionalWF dicke_conditional(int N, int K, std::span<const double> fixed,
                                std::span<const double> grid, double L);

/// Phase jump arg(psi(x0 + eps) / psi(x0 - eps)) in (-pi, pi].
double phase_jump(const std::function<cplx(double)>& psi, double x0, double eps);

/// Golden-section refinement of a minimum of f on [a, b].
double refine_minimum(const std::function<double(double)>& f, double a, double b,
                      double tol = 1e-13);

/// Bracketed density minimum of the conditional of `psi`, refined from the
/// grid minimum of `cond`.
double locate_conditional_minimum(const WaveFunction& psi, const ConditionalWF& cond);

struct SymmetryRestorationReport {
  double max_deviation;   // max |G(x) / scale - psi(x)| over the configurations
  double scale;           // analytic scale L sqrt(L^N C(N, N/2))
  double scale_spread;    // max relative spread of G(x) / psi(x) across configs
  std::size_t configs;
};

/// Integrates X over [0, L) with an n_quad-point trapezoid rule:
///   G(x) = int dX exp(i pi N X / L) prod_i (1 + exp(2 pi i (x_i - X) / L)),
/// which projects the translated product onto total momentum N/2, and
/// compares with the |N/2, N/2> amplitude at random configurations.
SymmetryRestorationReport symmetry_restoration_check(int N, std::size_t n_quad,
                                                     std::size_t n_configs, std::uint64_t seed,
                                                     double L = 1.0);

/// State with M density notches: |n_{-M/2} = N/2, n_{M/2} = N/2> for even M,
/// |n_0 = N/2, n_M = N/2> for odd M. N must be even.
FockState multi_soliton_state(int N, int M, int k_max = 0);

}  // namespace yrast
