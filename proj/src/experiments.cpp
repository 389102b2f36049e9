#include "yrast/experiments.hpp"

#include <algorithm>
#include <cmath>

#include "yrast/errors.hpp"
#include "yrast/stats.hpp"

namespace yrast {

io::CsvTable branches_table(int N, const io::Provenance& prov, double L) {
  if (N < 0) throw InvalidArgument("branches need N >= 0");
  std::vector<int> Ks(static_cast<std::size_t>(N) + 1);
  for (int K = 0; K <= N; ++K) Ks[static_cast<std::size_t>(K)] = K;
  auto t = io::make_table({"K", "E_elementary", "E_yrast"}, prov);
  for (const auto& r : two_branches(Ks, L)) t.add_row({double(r.K), r.elementary, r.yrast});
  return t;
}

io::CsvTable conditional_table(const ConditionalWF& cond, const io::Provenance& prov) {
  auto t = io::make_table({"x", "density", "phase"}, prov);
  const auto d = cond.density();
  const auto p = cond.phase();
  for (std::size_t j = 0; j < cond.grid.size(); ++j) t.add_row({cond.grid[j], d[j], p[j]});
  return t;
}

io::CsvTable histogram_table(const AlignedHistogram& h, const io::Provenance& prov) {
  auto t = io::make_table({"bin_left", "bin_right", "count", "density"}, prov);
  for (std::size_t i = 0; i < h.counts.size(); ++i)
    t.add_row({h.bin_edges[i], h.bin_edges[i + 1], double(h.counts[i]), h.density[i]});
  return t;
}

io::CsvTable notch_depth_table(const NotchDepthResult& r, const io::Provenance& prov) {
  auto t = io::make_table({"depth_bin_left", "depth_bin_right", "count"}, prov);
  for (std::size_t i = 0; i < r.counts.size(); ++i)
    t.add_row({r.bin_edges[i], r.bin_edges[i + 1], double(r.counts[i])});
  return t;
}

io::CsvTable profile_table(const GPEProfile& p, const io::Provenance& prov) {
  auto t = io::make_table({"x", "density", "phase"}, prov);
  const auto d = p.density();
  const auto ph = p.phase();
  for (std::size_t j = 0; j < p.grid.size(); ++j) t.add_row({p.grid[j], d[j], ph[j]});
  return t;
}

io::CsvTable sweep_table(const std::vector<SweepRow>& rows, const io::Provenance& prov) {
  auto t = io::make_table({"N", "g", "xi_inverse", "fidelity"}, prov);
  for (const auto& r : rows) t.add_row({double(r.N), r.g, r.xi_inverse, r.fidelity.value_or(NAN)});
  return t;
}

io::CsvTable trajectory_table(const std::vector<TrajectorySet>& runs, std::size_t max_realizations,
                              const io::Provenance& prov) {
  auto t = io::make_table({"realization", "time", "particle", "x"}, prov);
  for (std::size_t r = 0; r < std::min(max_realizations, runs.size()); ++r) {
    const auto& run = runs[r];
    for (std::size_t i = 0; i < run.times.size() && i < run.positions.size(); ++i)
      for (std::size_t p = 0; p < run.positions[i].size(); ++p)
        t.add_row({double(r), run.times[i], double(p), run.positions[i][p]});
  }
  return t;
}

io::CsvTable notch_track_table(const NotchTrack& track, const io::Provenance& prov) {
  auto t = io::make_table({"time", "notch_position", "fit_depth", "hist_depth"}, prov);
  for (std::size_t i = 0; i < track.times.size(); ++i)
    t.add_row({track.times[i], track.position[i], track.depth[i], track.hist_depth[i]});
  return t;
}

std::vector<double> sweep_couplings(int N, std::span<const double> xi_inverse, double L) {
  std::vector<double> g;
  g.reserve(xi_inverse.size());
  for (double s : xi_inverse) g.push_back(s * s * L / N);
  return g;
}

int sweep_cutoff(int N) {
  if (N <= 8) return 4;
  if (N <= 16) return 3;
  return 2;
}

namespace {

struct Bundle {
  std::filesystem::path dir;
  io::json manifest;
  std::uint64_t seed;

  io::Provenance prov(const std::string& what, io::json config, std::uint64_t s) const {
    return {"fig " + manifest["figure"].get<std::string>() + " " + what, std::move(config), s};
  }

  void add(const std::string& file, const io::CsvTable& t, io::json meta = io::json::object()) {
    io::write_csv(dir / file, t);
    meta["file"] = file;
    meta["columns"] = t.header;
    meta["rows"] = t.rows.size();
    manifest["files"].push_back(std::move(meta));
  }
};

std::string tag(int N, int K) { return "N" + std::to_string(N) + "_K" + std::to_string(K); }

void fig2(Bundle& b, const FigureOptions& o) {
  const int N = 8;
  const double g = 0.08;
  const auto grid = uniform_grid(o.grid_points, o.L);
  int counter = 0;
  for (int K : {4, 2}) {
    YrastOptions yo;
    yo.solver = EigenSolver::Lanczos;
    const ModelParams mp{N, K, 3, g, o.L};
    const auto r = find_yrast(mp, yo);
    const WaveFunction psi(r.state, o.L);
    MetropolisOptions mo;
    mo.n_samples = 1;
    mo.seed = derive_seed(b.seed, static_cast<std::uint64_t>(counter++));
    const auto shot = metropolis_sample(psi, mo);
    const std::vector<double> fixed(shot.samples[0].x.begin(), shot.samples[0].x.end() - 1);
    const auto cond = conditional(psi, fixed, grid);
    const io::json cfg{{"N", N}, {"K", K}, {"g", g}, {"k_max", 3}, {"fixed", fixed}};
    const double fid = fidelity_with_fock(r.state, free_yrast_state(N, K, 3));
    b.add("conditional_" + tag(N, K) + ".csv", conditional_table(cond, b.prov("conditional", cfg, mo.seed)),
          {{"series", "conditional"}, {"N", N}, {"K", K}, {"g", g}, {"fidelity_with_fock", fid},
           {"fixed", fixed}});
    const double k_avg = static_cast<double>(K) / N;
    const auto gpe = gpe_soliton(g * N, k_avg, o.grid_points, o.L);
    b.add("gpe_" + tag(N, K) + ".csv",
          profile_table(gpe, b.prov("gpe", {{"gN", g * N}, {"k_avg", k_avg}}, 0)),
          {{"series", "mean_field"}, {"gN", g * N}, {"k_avg", k_avg}, {"velocity", gpe.velocity}});
  }
}

void fig3(Bundle& b, const FigureOptions& o) {
  b.add("branches.csv", branches_table(8, b.prov("branches", {{"N", 8}, {"L", o.L}}, 0), o.L),
        {{"series", "branches"}, {"N", 8}});
}

void fig5(Bundle& b, const FigureOptions& o) {
  const auto Ns = o.Ns.empty() ? std::vector<int>{4, 8, 16, 32} : o.Ns;
  std::uint64_t counter = 0;
  for (int N : Ns) {
    for (int K : {N / 2, N / 4}) {
      if (K < 1) continue;
      const WaveFunction psi(free_yrast_state(N, K), o.L);
      const std::uint64_t s = derive_seed(b.seed, counter++);
      const auto aligned = align_samples(sequential_sample(psi, o.n_samples, s));
      const auto h = histogram(aligned, o.bins);
      const io::json cfg{{"N", N}, {"K", K}, {"samples", o.n_samples}, {"bins", o.bins}};
      b.add("hist_" + tag(N, K) + ".csv", histogram_table(h, b.prov("histogram", cfg, s)),
            {{"series", "aligned_histogram"}, {"N", N}, {"K", K}, {"skipped", aligned.skipped}});
      const double k_avg = static_cast<double>(K) / N;
      const auto mf = ideal_limit_soliton(k_avg, o.grid_points, o.L);
      b.add("meanfield_" + tag(N, K) + ".csv", profile_table(mf, b.prov("gpe", {{"gN", 0}, {"k_avg", k_avg}}, 0)),
            {{"series", "mean_field"}, {"N", N}, {"K", K}, {"k_avg", k_avg}});
    }
  }
}

void fig7(Bundle& b, const FigureOptions& o) {
  const int N = o.N;
  std::uint64_t counter = 0;
  for (int K : {N / 2, N / 4}) {
    const std::uint64_t s = derive_seed(b.seed, counter++);
    const auto r = notch_depth_histogram(N, K, o.n_samples, o.grid_points, 50, s, o.L);
    double mean = 0.0;
    for (double d : r.depths) mean += d;
    mean /= static_cast<double>(std::max<std::size_t>(1, r.depths.size()));
    const io::json cfg{{"N", N}, {"K", K}, {"samples", o.n_samples}};
    b.add("depths_" + tag(N, K) + ".csv", notch_depth_table(r, b.prov("notch-hist", cfg, s)),
          {{"series", "notch_depths"}, {"N", N}, {"K", K}, {"skipped", r.skipped}, {"mean_depth", mean}});
  }
}

void fig8(Bundle& b, const FigureOptions& o) {
  struct Case {
    std::string name;
    FockState state;
    int harmonic;
  };
  const std::vector<Case> cases{{"twin", FockState::from_modes(1, {{0, 4}, {1, 4}}), 1},
                                {"double", FockState::from_modes(1, {{-1, 4}, {1, 4}}), 2},
                                {"gray", FockState::from_modes(1, {{0, 5}, {1, 3}}), 1}};
  BohmianOptions bo;
  bo.threads = o.threads;
  bo.snapshots.clear();
  for (int i = 1; i <= 40; ++i) bo.snapshots.push_back(0.01 * i);
  std::uint64_t counter = 0;
  for (const auto& c : cases) {
    const WaveFunction psi(c.state, o.L);
    const std::uint64_t s = derive_seed(b.seed, counter++);
    const auto runs = align_initial(integrate(psi, sequential_sample(psi, o.n_samples, s), bo), c.harmonic);
    const io::json cfg{{"state", c.state.to_string()}, {"realizations", o.n_samples}, {"dt", bo.dt}};
    b.add("trajectories_" + c.name + ".csv", trajectory_table(runs, 1, b.prov("bohmian", cfg, s)),
          {{"series", "trajectories"}, {"state", c.state.to_string()}});
    const auto track = track_notch(runs, c.harmonic, o.bins);
    b.add("notch_" + c.name + ".csv", notch_track_table(track, b.prov("bohmian", cfg, s)),
          {{"series", "notch_track"}, {"state", c.state.to_string()}, {"aborted", track.aborted}});
    for (int snap : {10, 20, 30, 40}) {
      const auto h = histogram(pooled_positions(runs, static_cast<std::size_t>(snap)), o.L, o.bins);
      const double t = 0.01 * snap;
      b.add("hist_" + c.name + "_t" + std::to_string(snap) + ".csv", histogram_table(h, b.prov("bohmian", cfg, s)),
            {{"series", "snapshot_histogram"}, {"state", c.state.to_string()}, {"time", t}});
    }
  }
}

void fig9(Bundle& b, const FigureOptions& o) {
  auto Ns = o.Ns.empty() ? std::vector<int>{8, 16} : o.Ns;
  if (o.large)
    for (int N : {32, 64})
      if (std::find(Ns.begin(), Ns.end(), N) == Ns.end()) Ns.push_back(N);
  const std::vector<double> xi_inverse{0.25, 0.5, 1.0, 1.5, 2.0, 3.0, 4.0, 6.0};
  std::vector<SweepRow> rows;
  for (int N : Ns) {
    SweepOptions so;
    so.k_max = sweep_cutoff(N);
    so.L = o.L;
    so.yrast.solver = EigenSolver::Lanczos;
    const int Narr[] = {N};
    const auto part = fidelity_sweep(Narr, sweep_couplings(N, xi_inverse, o.L), so);
    rows.insert(rows.end(), part.begin(), part.end());
  }
  io::json cutoffs = io::json::object();
  for (int N : Ns) cutoffs[std::to_string(N)] = sweep_cutoff(N);
  b.add("fidelity_sweep.csv", sweep_table(rows, b.prov("fidelity-sweep", {{"Ns", Ns}, {"k_max", cutoffs}}, 0)),
        {{"series", "fidelity"}, {"Ns", Ns}, {"k_max", cutoffs}});
}

}  // namespace

io::json reproduce_figure(const std::string& name, const FigureOptions& opts) {
  if (std::find(kFigureNames.begin(), kFigureNames.end(), name) == kFigureNames.end())
    throw InvalidArgument("unknown figure '" + name + "'");
  Bundle b{opts.out_dir / name, {{"figure", name}, {"files", io::json::array()}}, opts.seed};
  b.manifest["provenance"] = io::Provenance{"fig " + name,
                                            {{"seed", opts.seed},
                                             {"samples", opts.n_samples},
                                             {"bins", opts.bins},
                                             {"grid", opts.grid_points},
                                             {"L", opts.L},
                                             {"Ns", opts.Ns},
                                             {"N", opts.N},
                                             {"large", opts.large}},
                                            opts.seed}
                                 .to_json();
  if (name == "fig2") fig2(b, opts);
  else if (name == "fig3") fig3(b, opts);
  else if (name == "fig5") fig5(b, opts);
  else if (name == "fig7") fig7(b, opts);
  else if (name == "fig8") fig8(b, opts);
  else fig9(b, opts);
  io::write_json(b.dir / "manifest.json", b.manifest);
  return b.manifest;
}

}  // namespace yrast
