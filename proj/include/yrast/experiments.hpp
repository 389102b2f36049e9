#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "yrast/bohmian.hpp"
#include "yrast/hamiltonian.hpp"
#include "yrast/io.hpp"
#include "yrast/meanfield.hpp"
#include "yrast/sampling.hpp"

namespace yrast {

/// CSV builders shared by the command line and the figure bundles.
io::CsvTable branches_table(int N, const io::Provenance& prov, double L = 1.0);
io::CsvTable conditional_table(const ConditionalWF& cond, const io::Provenance& prov);
io::CsvTable histogram_table(const AlignedHistogram& h, const io::Provenance& prov);
io::CsvTable notch_depth_table(const NotchDepthResult& r, const io::Provenance& prov);
io::CsvTable profile_table(const GPEProfile& p, const io::Provenance& prov);
io::CsvTable sweep_table(const std::vector<SweepRow>& rows, const io::Provenance& prov);
io::CsvTable trajectory_table(const std::vector<TrajectorySet>& runs, std::size_t max_realizations,
                              const io::Provenance& prov);
io::CsvTable notch_track_table(const NotchTrack& track, const io::Provenance& prov);

struct FigureOptions {
  std::filesystem::path out_dir = ".";
  std::uint64_t seed = 1;
  unsigned threads = 1;
  std::size_t n_samples = 1000;
  std::size_t bins = 64;
  std::size_t grid_points = 1024;
  double L = 1.0;
  /// Particle numbers: fig5 panels (default 4, 8, 16, 32), fig9 curves (8, 16).
  std::vector<int> Ns;
  /// fig7 particle number.
  int N = 32;
  /// fig9: also run N = 32 and 64 (slow).
  bool large = false;
};

inline const std::vector<std::string> kFigureNames{"fig2", "fig3", "fig5", "fig7", "fig8", "fig9"};

/// Writes every series of the named figure into out_dir/<name>/ plus a
/// manifest.json (returned). Throws InvalidArgument for unknown names.
io::json reproduce_figure(const std::string& name, const FigureOptions& opts);

/// Coupling grid of the fidelity sweep, chosen on the healing-length axis:
/// g = xi_inverse^2 L / N.
std::vector<double> sweep_couplings(int N, std::span<const double> xi_inverse, double L = 1.0);

/// Cutoff used for each particle number in the fidelity sweep.
int sweep_cutoff(int N);

}  // namespace yrast
