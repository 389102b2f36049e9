#pragma once

#include <complex>
#include <memory>
#include <optional>
#include <span>
#include <variant>
#include <vector>

#include "yrast/basis.hpp"
#include "yrast/hamiltonian.hpp"

namespace yrast {

/// Occupied mode pair of a Fock state with at most two occupied modes.
/// A single occupied mode is reported as low == high.
struct TwoModeView {
  int low;         // mode p
  int high;        // mode q >= p
  int n_high;      // particles in mode q (0 when low == high)
  int n_particles;
};

std::optional<TwoModeView> two_mode_view(const FockState& s);

enum class AmplitudeRoute {
  Auto,       // closed form for two-mode Fock states, permanents otherwise
  Permanent,  // always through the permanent
};

/// A many-body state on a ring of length L, evaluable in position space.
///
/// Wraps either a single Fock state or a superposition over a Fock basis.
/// Amplitudes are normalized: <x|n> = perm(phi_{k_j}(x_i)) / sqrt(N! prod n_k!)
/// with phi_k(x) = exp(2 pi i k x / L) / sqrt(L). Time arguments apply the
/// free (g = 0) evolution c_n -> c_n exp(-i E_n t).
class WaveFunction {
 public:
  WaveFunction(FockState s, double L, AmplitudeRoute route = AmplitudeRoute::Auto);
  WaveFunction(StateVector v, double L, AmplitudeRoute route = AmplitudeRoute::Auto);

  int particle_count() const noexcept { return n_; }
  double length() const noexcept { return L_; }
  /// Total momentum if every component shares one K.
  std::optional<int> total_momentum() const noexcept { return K_; }
  /// True if the free evolution only multiplies by a global phase.
  bool is_stationary() const noexcept { return stationary_; }
  const std::optional<TwoModeView>& two_mode() const noexcept { return two_mode_; }

  const FockState* fock() const noexcept { return std::get_if<FockState>(&state_); }
  const StateVector* vector() const noexcept { return std::get_if<StateVector>(&state_); }

  WaveFunction with_route(AmplitudeRoute route) const;

  cplx amplitude(std::span<const double> x, double t = 0.0) const;

  struct Local {
    cplx value;
    std::vector<cplx> gradient;  // d psi / d x_l
  };
  Local amplitude_with_gradient(std::span<const double> x, double t = 0.0) const;

  /// Mean of |psi|^2 over the configuration space, L^-N.
  double mean_density() const;

 private:
  struct Occupations;
  std::variant<FockState, StateVector> state_;
  /// Shared-prefix evaluation table of a superposition, built on first use.
  std::shared_ptr<Occupations> occupations_;
  double L_;
  AmplitudeRoute route_;
  int n_;
  std::optional<int> K_;
  bool stationary_ = true;
  std::optional<TwoModeView> two_mode_;
};

/// Amplitude of a single Fock state through the repeated-column permanent.
cplx fock_amplitude_permanent(const FockState& s, std::span<const double> x, double L);

/// Amplitude of a two-mode Fock state through symmetric polynomials.
cplx fock_amplitude_two_mode(const TwoModeView& v, std::span<const double> x, double L);

/// c_n -> c_n exp(-i E_n t) with ideal-gas energies.
StateVector evolve_state(const StateVector& v, double t, double L);

}  // namespace yrast
