#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "yrast/wavefunction.hpp"

namespace yrast {

struct SampleProvenance {
  std::string method;  // "metropolis" or "sequential"
  std::uint64_t seed = 0;
  std::size_t burn_in = 0;   // sweeps (N single-particle proposals each)
  std::size_t thinning = 0;  // sweeps between kept samples
  std::size_t chains = 0;
  double proposal_width = 0.0;
  double acceptance_rate = 0.0;
};

/// Position samples drawn from |psi|^2.
struct SampleSet {
  std::vector<PositionConfig> samples;
  SampleProvenance provenance;
  std::size_t skipped = 0;  // samples dropped by alignment
  std::vector<std::string> warnings;

  int particle_count() const;
  double length() const;
  /// Every position of every sample, in sample order.
  std::vector<double> pooled() const;
  /// Position of particle `index` in every sample.
  std::vector<double> particle(std::size_t index) const;
};

struct MetropolisOptions {
  std::size_t n_samples = 1000;
  std::size_t burn_in = 200;  // sweeps per chain
  std::size_t thinning = 0;   // sweeps between kept samples; 0 means N
  /// Gaussian step width; 0 means L/8.
  double proposal_width = 0.0;
  /// Independent chains, each started from uniform positions. 0 means one
  /// chain per kept sample.
  std::size_t chains = 0;
  std::uint64_t seed = 1;
  /// Time at which |psi(t)|^2 is the target.
  double time = 0.0;
};

/// Metropolis acceptance probability min(1, p_new / p_old).
double metropolis_acceptance(double p_old, double p_new);

/// Exact transition matrix of a Metropolis chain with the given proposal
/// matrix on a discrete target (rows sum to one).
Eigen::MatrixXd metropolis_kernel(std::span<const double> target, const Eigen::MatrixXd& proposal);

/// Markov chain sampling of |psi|^2 with single-particle circular Gaussian
/// moves. Acceptance outside [0.1, 0.9] is reported in `warnings`.
SampleSet metropolis_sample(const WaveFunction& psi, const MetropolisOptions& opts);

/// Unnormalized density of particle j+1 given the first j positions, with the
/// remaining particles integrated out. Exact for Fock states with at most two
/// occupied modes; otherwise estimated with `mc_samples` uniform draws of the
/// remaining positions (exact again when no particle remains).
std::vector<double> sequential_conditional_density(const WaveFunction& psi,
                                                   std::span<const double> prefix,
                                                   std::span<const double> grid,
                                                   std::mt19937_64& rng,
                                                   std::size_t mc_samples = 64);

struct SequentialOptions {
  std::size_t grid_points = 256;  // general states only
  std::size_t mc_samples = 64;    // general states only
  /// Draw only this many particles (0 = all N).
  std::size_t count = 0;
};

/// x_1 uniform, then every further position from its conditional marginal.
/// Two-mode states are inverted exactly from the closed-form marginal CDF.
PositionConfig sequential_draw(const WaveFunction& psi, std::mt19937_64& rng,
                               const SequentialOptions& opts = {});
PositionConfig sequential_draw(const WaveFunction& psi, std::uint64_t seed,
                               const SequentialOptions& opts = {});

/// n independent sequential draws with per-sample derived seeds.
SampleSet sequential_sample(const WaveFunction& psi, std::size_t n_samples, std::uint64_t seed,
                            const SequentialOptions& opts = {});

struct Direction {
  double position;   // in [0, L)
  double magnitude;  // length of the vector sum
};

/// Vector sum of exp(2 pi i h x_j / L). The returned position is the angle
/// mapped back to [0, L/h). Throws UndefinedDirection when the sum
/// vanishes (magnitude < 1e-12).
Direction center_of_mass(const PositionConfig& config, int harmonic = 1);

/// Shifts every sample by -X_cm so all directions sit at 0; samples with an
/// undefined direction are dropped and counted in `skipped`.
SampleSet align_samples(const SampleSet& set, int harmonic = 1);

/// Every position shifted by d (wrapped).
SampleSet shift_samples(const SampleSet& set, double d);

struct AlignedHistogram {
  std::vector<double> bin_edges;
  std::vector<std::size_t> counts;
  std::vector<double> density;  // counts / (total dx)
  std::size_t total = 0;
  double reference_direction = 0.0;

  double bin_width() const { return bin_edges[1] - bin_edges[0]; }
  std::vector<double> centers() const;
};

/// Pooled positions of all particles of all samples, binned over [0, L).
AlignedHistogram histogram(const SampleSet& set, std::size_t bins);
AlignedHistogram histogram(std::span<const double> positions, double L, std::size_t bins);

/// Sup-norm distance between a histogram density and (1 + cos(2 pi (x - s)/L)) / L
/// (notch at s + L/2), minimized over the shift s on a fine grid.
struct ProfileMatch {
  double distance;
  double shift;
};
ProfileMatch best_shift_black_profile(const AlignedHistogram& h, std::size_t shift_steps = 4096);

struct NotchDepthResult {
  std::vector<double> depths;        // normalized minimum conditional density per sample
  std::vector<double> bounds;        // (|S|-|M|)^2 / (L (|S|^2 + |M|^2)) per sample
  std::vector<double> grid_minima;   // grid minimum of the normalized conditional
  std::vector<double> bin_edges;
  std::vector<std::size_t> counts;
  std::size_t skipped = 0;
};

/// For each sample: draw N-1 positions sequentially, build the closed-form
/// conditional of |N-K, K> and record its exact minimum density; histogram
/// the minima over [0, 1/L] with `bins` bins.
NotchDepthResult notch_depth_histogram(int N, int K, std::size_t n_samples, std::size_t grid_points,
                                       std::size_t bins, std::uint64_t seed, double L = 1.0);

}  // namespace yrast
