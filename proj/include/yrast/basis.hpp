#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

namespace yrast {

inline constexpr double kPi = 3.14159265358979323846;

/// Free single-particle energy of plane-wave mode k on a ring of length L
/// (hbar = m = 1): 2 pi^2 k^2 / L^2.
inline double mode_energy(int k, double L) {
  return 2.0 * kPi * kPi * static_cast<double>(k) * k / (L * L);
}

/// Occupation numbers over the plane-wave modes -k_max..+k_max.
///
/// Storage is dense: occupation(k) lives at slot k + k_max. Two states
/// compare equal only if they share k_max and every occupation.
class FockState {
 public:
  FockState() = default;
  FockState(int k_max, std::vector<int> occupations);

  /// Builds a state from (mode, count) pairs; unmentioned modes are empty.
  static FockState from_modes(int k_max, std::initializer_list<std::pair<int, int>> modes);

  int k_max() const noexcept { return k_max_; }
  int occupation(int k) const;
  std::span<const int> occupations() const noexcept { return occ_; }

  int particle_count() const noexcept;
  int total_momentum() const noexcept;
  /// Sum_k n_k k^2 (integer, no prefactor).
  long long kinetic_units() const noexcept;

  /// Same occupations embedded in a larger (or equal) cutoff.
  FockState with_cutoff(int k_max) const;
  /// k -> -k reflection.
  FockState reflected() const;

  /// Human readable form, e.g. "|n0=4,n1=4>".
  std::string to_string() const;

  bool operator==(const FockState&) const = default;
  auto operator<=>(const FockState&) const = default;

 private:
  int k_max_ = 0;
  std::vector<int> occ_;
};

struct FockStateHash {
  std::size_t operator()(const FockState& s) const noexcept;
};

/// Immutable, ordered list of Fock states with a reverse index.
///
/// Bases produced by enumerate_basis() carry a definite total momentum;
/// merged bases (several momentum blocks) report total_momentum() ==
/// std::nullopt.
class BasisSet {
 public:
  BasisSet(int n_particles, std::optional<int> total_momentum, int k_max,
           std::vector<FockState> states);

  int particle_count() const noexcept { return n_; }
  std::optional<int> total_momentum() const noexcept { return K_; }
  int k_max() const noexcept { return k_max_; }
  std::size_t size() const noexcept { return states_.size(); }
  const FockState& operator[](std::size_t i) const { return states_[i]; }
  const std::vector<FockState>& states() const noexcept { return states_; }

  /// Index of a state, or std::nullopt if it is not in the basis.
  std::optional<std::size_t> find(const FockState& s) const;

 private:
  int n_;
  std::optional<int> K_;
  int k_max_;
  std::vector<FockState> states_;
  std::unordered_map<FockState, std::size_t, FockStateHash> index_;
};

using BasisPtr = std::shared_ptr<const BasisSet>;

/// Every Fock state with N particles, total momentum K and support in
/// [-k_max, k_max], in lexicographic order of the occupation tuple read from
/// k = -k_max upwards. Throws EmptyBasisError when |K| > N k_max.
BasisPtr enumerate_basis(int N, int K, int k_max);

/// Union of several momentum blocks with the same N and k_max, in the order
/// given. Used for cross-block checks and for superpositions of different K.
BasisPtr merge_bases(std::span<const BasisPtr> blocks);

/// Basis made of an explicit list of states (all with the same N).
BasisPtr basis_from_states(std::vector<FockState> states);

/// Ideal-gas energy (2 pi^2 / L^2) sum_k n_k k^2.
double free_energy(const FockState& state, double L);

/// The ideal-gas yrast state |n_0 = N-K, n_1 = K>. Requires 0 <= K <= N.
FockState free_yrast_state(int N, int K, int k_max = 1);

struct BranchRow {
  int K;
  double elementary;
  double yrast;
};

/// Elementary (one particle carries K) and yrast (K particles carry one unit)
/// ideal-gas branches.
std::vector<BranchRow> two_branches(std::span<const int> Ks, double L);

}  // namespace yrast
