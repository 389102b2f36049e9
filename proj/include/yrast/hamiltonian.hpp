#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <complex>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "yrast/basis.hpp"

namespace yrast {

using cplx = std::complex<double>;

/// Complex amplitudes over a Fock basis.
class StateVector {
 public:
  StateVector(BasisPtr basis, Eigen::VectorXcd amplitudes);
  /// Unit vector on a single basis state.
  static StateVector basis_vector(BasisPtr basis, std::size_t index);
  /// The Fock state expressed in `basis` (must be contained in it).
  static StateVector from_fock(BasisPtr basis, const FockState& state);

  const BasisPtr& basis() const noexcept { return basis_; }
  const Eigen::VectorXcd& amplitudes() const noexcept { return amps_; }
  Eigen::VectorXcd& amplitudes() noexcept { return amps_; }
  std::size_t size() const noexcept { return static_cast<std::size_t>(amps_.size()); }

  double norm() const { return amps_.norm(); }
  StateVector& normalize();
  /// <this|other>
  cplx dot(const StateVector& other) const;

 private:
  BasisPtr basis_;
  Eigen::VectorXcd amps_;
};

/// Throws BasisMismatch unless both vectors live on the same basis.
void require_same_basis(const StateVector& a, const StateVector& b);

struct ModelParams {
  int N = 1;
  int K = 0;
  int k_max = 1;
  double g = 0.0;
  double L = 1.0;

  void validate() const;
  double density() const { return N / L; }
};

/// Lieb-Liniger Hamiltonian restricted to a (possibly merged) Fock basis:
///   H = sum_k (2 pi^2 k^2 / L^2) a+_k a_k
///     + (g / 2L) sum_{k,l,m} a+_{k+m} a+_{l-m} a_l a_k
/// with all mode indices confined to [-k_max, k_max]. The matrix is real
/// symmetric in the plane-wave basis.
class Hamiltonian {
 public:
  /// Block Hamiltonian on enumerate_basis(N, K, k_max).
  explicit Hamiltonian(const ModelParams& params);
  /// Hamiltonian on an explicit basis (N and k_max taken from it).
  Hamiltonian(BasisPtr basis, double g, double L);

  const BasisPtr& basis() const noexcept { return basis_; }
  std::size_t dimension() const noexcept { return basis_->size(); }
  double g() const noexcept { return g_; }
  double L() const noexcept { return L_; }

  /// Row i as (column, value) pairs, duplicates merged.
  std::vector<std::pair<std::size_t, double>> row(std::size_t i) const;

  /// y = H x, matrix-free or via the cached sparse form.
  void apply(const Eigen::VectorXcd& x, Eigen::VectorXcd& y) const;
  StateVector apply(const StateVector& v) const;

  /// Builds the sparse form (done automatically below kCacheLimit).
  void cache();
  bool cached() const noexcept { return cached_; }
  const Eigen::SparseMatrix<double, Eigen::RowMajor>& sparse() const;

  /// Dense matrix (small blocks only; used by oracles and tests).
  Eigen::MatrixXd dense() const;

  /// Rigorous upper bound of the spectrum: the smaller of the Gershgorin
  /// row-sum bound and max kinetic + g N(N-1)(2 k_max + 1) / (2L).
  double spectral_upper_bound() const;

  static constexpr std::size_t kCacheLimit = 200000;

 private:
  BasisPtr basis_;
  double g_;
  double L_;
  bool cached_ = false;
  Eigen::SparseMatrix<double, Eigen::RowMajor> matrix_;
};

/// H v for the block of `params`; throws BasisMismatch if v lives elsewhere.
StateVector apply_hamiltonian(const ModelParams& params, const StateVector& v);

enum class EigenSolver { PowerIteration, Lanczos };

struct YrastOptions {
  double tol = 1e-10;
  std::int64_t max_iters = 1'000'000;
  std::uint64_t seed = 12345;
  EigenSolver solver = EigenSolver::PowerIteration;
  /// Also compute the lowest eigenvalue orthogonal to the result.
  bool check_degeneracy = false;
  /// Record <v_n|H|v_n> per power-iteration step.
  bool record_history = false;
};

struct YrastResult {
  StateVector state;
  double energy;
  double residual;
  std::int64_t iterations;
  double shift;  // C used by the power iteration (0 for Lanczos)
  std::optional<double> second_energy;
  bool degenerate = false;
  std::vector<double> energy_history;
};

/// Lowest eigenvector of the block by repeated application of (C - H) to a
/// seeded random vector, or by restarted Lanczos. Throws NonConvergence.
YrastResult find_yrast(const ModelParams& params, const YrastOptions& opts = {});
YrastResult find_yrast(const Hamiltonian& h, const YrastOptions& opts = {});

/// |<u|v>|^2; both vectors must share a basis. Inputs need not be normalized
/// (the overlap is divided by both norms).
double fidelity(const StateVector& u, const StateVector& v);

/// Squared overlap of v with a single Fock state.
double fidelity_with_fock(const StateVector& v, const FockState& s);

struct SweepRow {
  int N;
  double g;
  double xi_inverse;  // sqrt(g N / L)
  std::optional<double> fidelity;
  std::string error;
};

struct SweepOptions {
  int k_max = 3;
  double L = 1.0;
  YrastOptions yrast{};
};

/// Fidelity between the K = N/2 yrast state and |N/2, N/2> on a grid of
/// couplings. Failed cells carry an error message; the sweep continues.
std::vector<SweepRow> fidelity_sweep(std::span<const int> Ns, std::span<const double> gs,
                                     const SweepOptions& opts);

struct CutoffStep {
  int k_max;
  std::size_t dimension;
  double energy;
  double fidelity;  // with the ideal-gas yrast state
  double change;    // |fidelity - previous fidelity|, NaN for the first step
};

/// Repeats find_yrast with k_max doubled until the fidelity with the ideal
/// yrast state changes by less than `fidelity_tol`, or `k_max_limit` is hit.
std::vector<CutoffStep> converge_cutoff(ModelParams params, double fidelity_tol, int k_max_limit,
                                        const YrastOptions& opts = {});

}  // namespace yrast
