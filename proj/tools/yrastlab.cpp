// Command-line front end: one subcommand per experiment, CSV/JSON outputs
// with provenance headers.

#include <cstdio>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "yrast/errors.hpp"
#include "yrast/experiments.hpp"
#include "yrast/state_spec.hpp"
#include "yrast/stats.hpp"

using namespace yrast;
using io::json;

namespace {

struct Globals {
  std::uint64_t seed = 1;
  std::string output_dir;
  unsigned threads = 1;
};

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    std::size_t used = 0;
    double v;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      throw InvalidArgument("not a number: '" + item + "'");
    }
    if (used != item.size()) throw InvalidArgument("not a number: '" + item + "'");
    out.push_back(v);
  }
  if (out.empty()) throw InvalidArgument("empty list");
  return out;
}

std::filesystem::path target(const Globals& g, const std::string& explicit_path, const std::string& name) {
  if (!explicit_path.empty()) return explicit_path;
  return io::output_dir(g.output_dir) / name;
}

void report(const json& j) { std::cout << j.dump(2) << "\n"; }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"yrastlab: soliton-like structures in yrast states of the Lieb-Liniger gas"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  app.add_option("--seed", g.seed, "Master seed");
  app.add_option("--output-dir", g.output_dir, std::string("Output directory (default $") + io::kOutputDirEnv + " or .)");
  app.add_option("--threads", g.threads, "Maximum worker threads")->check(CLI::Range(1u, 1024u));

  std::function<void()> action;

  // basis
  int b_n = 4, b_k = 0, b_kmax = 1;
  std::size_t b_limit = 50;
  auto* basis = app.add_subcommand("basis", "Enumerate the momentum-constrained Fock basis");
  basis->add_option("--n", b_n, "Particles")->required();
  basis->add_option("--k", b_k, "Total momentum")->required();
  basis->add_option("--kmax", b_kmax, "Mode cutoff")->required();
  basis->add_option("--limit", b_limit, "Print at most this many states");
  basis->callback([&] {
    action = [&] {
      const auto b = enumerate_basis(b_n, b_k, b_kmax);
      std::cout << "size " << b->size() << "\n";
      for (std::size_t i = 0; i < std::min(b_limit, b->size()); ++i) std::cout << i << " " << (*b)[i].to_string() << "\n";
    };
  });

  // branches
  int br_n = 8, br_kmax = 4;
  double br_l = 1.0;
  std::string br_out;
  auto* branches = app.add_subcommand("branches", "Elementary and yrast ideal-gas branches");
  branches->add_option("--n", br_n, "Particles")->required();
  branches->add_option("--kmax", br_kmax, "Mode cutoff (recorded)");
  branches->add_option("--l", br_l, "Ring length")->check(CLI::PositiveNumber);
  branches->add_option("--out", br_out, "CSV path");
  branches->callback([&] {
    action = [&] {
      const io::Provenance prov{"branches", {{"n", br_n}, {"kmax", br_kmax}, {"l", br_l}}, g.seed};
      const auto path = target(g, br_out, "branches.csv");
      io::write_csv(path, branches_table(br_n, prov, br_l));
      report({{"csv", path.string()}, {"provenance", prov.to_json()}});
    };
  });

  // yrast
  int y_n = 8, y_k = 4, y_kmax = 3;
  double y_g = 0.08, y_l = 1.0, y_tol = 1e-10;
  std::string y_solver = "power", y_out, y_amps;
  auto* yrast = app.add_subcommand("yrast", "Lowest state of a momentum block");
  yrast->add_option("--n", y_n, "Particles")->required();
  yrast->add_option("--k", y_k, "Total momentum")->required();
  yrast->add_option("--g", y_g, "Coupling")->check(CLI::NonNegativeNumber);
  yrast->add_option("--kmax", y_kmax, "Mode cutoff");
  yrast->add_option("--l", y_l, "Ring length")->check(CLI::PositiveNumber);
  yrast->add_option("--tol", y_tol, "Residual tolerance")->check(CLI::PositiveNumber);
  yrast->add_option("--solver", y_solver, "power or lanczos")->check(CLI::IsMember({"power", "lanczos"}));
  yrast->add_option("--out", y_out, "JSON path");
  yrast->add_option("--amplitudes", y_amps, "Also write the amplitude vector as CSV");
  yrast->callback([&] {
    action = [&] {
      const ModelParams p{y_n, y_k, y_kmax, y_g, y_l};
      YrastOptions o;
      o.tol = y_tol;
      o.seed = g.seed;
      o.solver = y_solver == "lanczos" ? EigenSolver::Lanczos : EigenSolver::PowerIteration;
      const auto r = find_yrast(p, o);
      const io::Provenance prov{"yrast",
                                {{"n", y_n}, {"k", y_k}, {"g", y_g}, {"kmax", y_kmax}, {"l", y_l}, {"tol", y_tol},
                                 {"solver", y_solver}},
                                g.seed};
      std::vector<std::size_t> order(r.state.size());
      for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
      const auto& a = r.state.amplitudes();
      std::sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
        return std::norm(a(Eigen::Index(i))) > std::norm(a(Eigen::Index(j)));
      });
      json top = json::array();
      for (std::size_t i = 0; i < std::min<std::size_t>(10, order.size()); ++i) {
        const auto c = a(Eigen::Index(order[i]));
        top.push_back({{"state", (*r.state.basis())[order[i]].to_string()}, {"re", c.real()}, {"im", c.imag()},
                       {"probability", std::norm(c)}});
      }
      json out{{"energy", r.energy},
               {"residual", r.residual},
               {"iterations", r.iterations},
               {"dimension", r.state.size()},
               {"top_amplitudes", top},
               {"provenance", prov.to_json()}};
      if (y_k >= 0 && y_k <= y_n)
        out["fidelity_with_free_yrast"] = fidelity_with_fock(r.state, free_yrast_state(y_n, y_k, y_kmax));
      io::write_json(target(g, y_out, "yrast.json"), out);
      if (!y_amps.empty()) {
        auto t = io::make_table({"index", "re", "im"}, prov);
        for (std::size_t i = 0; i < r.state.size(); ++i)
          t.add_row({double(i), a(Eigen::Index(i)).real(), a(Eigen::Index(i)).imag()});
        io::write_csv(y_amps, t);
      }
      report(out);
    };
  });

  // fidelity-sweep
  std::string fs_ns = "8,16", fs_gs, fs_xi = "0.25,0.5,1,1.5,2,3,4,6", fs_out;
  int fs_kmax = 0;
  double fs_l = 1.0, fs_tol = 1e-10;
  auto* sweep = app.add_subcommand("fidelity-sweep", "Fidelity of the K = N/2 yrast state with |N/2, N/2>");
  sweep->add_option("--n", fs_ns, "Comma-separated particle numbers");
  sweep->add_option("--g", fs_gs, "Comma-separated couplings (overrides --xi-inverse)");
  sweep->add_option("--xi-inverse", fs_xi, "Comma-separated values of sqrt(gN/L)");
  sweep->add_option("--kmax", fs_kmax, "Mode cutoff (0 = per-N default)");
  sweep->add_option("--l", fs_l, "Ring length")->check(CLI::PositiveNumber);
  sweep->add_option("--tol", fs_tol, "Residual tolerance")->check(CLI::PositiveNumber);
  sweep->add_option("--out", fs_out, "CSV path");
  sweep->callback([&] {
    action = [&] {
      std::vector<SweepRow> rows;
      for (double nd : parse_list(fs_ns)) {
        const int N = static_cast<int>(nd);
        SweepOptions so;
        so.k_max = fs_kmax > 0 ? fs_kmax : sweep_cutoff(N);
        so.L = fs_l;
        so.yrast.tol = fs_tol;
        so.yrast.seed = g.seed;
        so.yrast.solver = EigenSolver::Lanczos;
        const auto gs = fs_gs.empty() ? sweep_couplings(N, parse_list(fs_xi), fs_l) : parse_list(fs_gs);
        const int Ns[] = {N};
        const auto part = fidelity_sweep(Ns, gs, so);
        rows.insert(rows.end(), part.begin(), part.end());
      }
      const io::Provenance prov{"fidelity-sweep",
                                {{"n", fs_ns}, {"g", fs_gs}, {"xi_inverse", fs_xi}, {"kmax", fs_kmax}, {"l", fs_l}},
                                g.seed};
      const auto path = target(g, fs_out, "fidelity_sweep.csv");
      io::write_csv(path, sweep_table(rows, prov));
      json failed = json::array();
      for (const auto& r : rows)
        if (!r.fidelity) failed.push_back({{"N", r.N}, {"g", r.g}, {"error", r.error}});
      report({{"csv", path.string()}, {"failed_cells", failed}, {"provenance", prov.to_json()}});
    };
  });

  // conditional
  std::string c_state, c_fixed = "sample", c_out;
  std::size_t c_grid = 1024;
  double c_l = 1.0;
  auto* cond = app.add_subcommand("conditional", "Conditional single-particle wave function");
  cond->add_option("--state", c_state, "State spec, e.g. fock:n0=4,n1=4")->required();
  cond->add_option("--fixed", c_fixed, "Comma-separated N-1 positions, or 'sample'");
  cond->add_option("--grid", c_grid, "Grid points")->check(CLI::Range(std::size_t{2}, std::size_t{1} << 24));
  cond->add_option("--l", c_l, "Ring length")->check(CLI::PositiveNumber);
  cond->add_option("--out", c_out, "CSV path");
  cond->callback([&] {
    action = [&] {
      const auto rs = resolve_state(parse_state_spec(c_state), c_l);
      const int N = rs.psi.particle_count();
      std::vector<double> fixed;
      if (c_fixed == "sample") {
        MetropolisOptions mo;
        mo.n_samples = 1;
        mo.seed = g.seed;
        const auto s = metropolis_sample(rs.psi, mo);
        fixed.assign(s.samples[0].x.begin(), s.samples[0].x.end() - 1);
      } else {
        fixed = parse_list(c_fixed);
        if (static_cast<int>(fixed.size()) != N - 1)
          throw InvalidArgument("--fixed needs exactly N-1 = " + std::to_string(N - 1) + " positions");
        for (double x : fixed)
          if (!(x >= 0.0 && x < rs.psi.length())) throw InvalidArgument("fixed position outside [0, L)");
      }
      const auto cw = conditional(rs.psi, fixed, uniform_grid(c_grid, rs.psi.length()));
      const io::Provenance prov{"conditional",
                                {{"state", c_state}, {"fixed", fixed}, {"grid", c_grid}, {"l", c_l}}, g.seed};
      const auto path = target(g, c_out, "conditional.csv");
      io::write_csv(path, conditional_table(cw, prov));
      report({{"csv", path.string()}, {"fixed", fixed}, {"provenance", prov.to_json()}});
    };
  });

  // sample
  std::string s_state, s_method = "sequential", s_out;
  std::size_t s_n = 1000, s_bins = 64;
  bool s_align = false;
  double s_l = 1.0;
  auto* sample = app.add_subcommand("sample", "Position samples and (aligned) histograms");
  sample->add_option("--state", s_state, "State spec")->required();
  sample->add_option("--n-samples", s_n, "Samples")->check(CLI::PositiveNumber);
  sample->add_option("--bins", s_bins, "Histogram bins")->check(CLI::Range(std::size_t{8}, std::size_t{1} << 20));
  sample->add_option("--method", s_method, "sequential or metropolis")->check(CLI::IsMember({"sequential", "metropolis"}));
  sample->add_flag("--align", s_align, "Align each sample by its center of mass");
  sample->add_option("--l", s_l, "Ring length")->check(CLI::PositiveNumber);
  sample->add_option("--out", s_out, "CSV path (a .json provenance file is written next to it)");
  sample->callback([&] {
    action = [&] {
      const auto rs = resolve_state(parse_state_spec(s_state), s_l);
      SampleSet set;
      if (s_method == "metropolis") {
        MetropolisOptions mo;
        mo.n_samples = s_n;
        mo.seed = g.seed;
        set = metropolis_sample(rs.psi, mo);
      } else {
        set = sequential_sample(rs.psi, s_n, g.seed);
      }
      if (s_align) set = align_samples(set);
      const io::Provenance prov{"sample",
                                {{"state", s_state}, {"n_samples", s_n}, {"bins", s_bins}, {"align", s_align},
                                 {"method", s_method}, {"l", s_l}},
                                g.seed};
      const auto path = target(g, s_out, "sample_histogram.csv");
      io::write_csv(path, histogram_table(histogram(set, s_bins), prov));
      const auto& pv = set.provenance;
      json meta{{"provenance", prov.to_json()},
                {"sampler",
                 {{"method", pv.method}, {"seed", pv.seed}, {"burn_in", pv.burn_in}, {"thinning", pv.thinning},
                  {"chains", pv.chains}, {"proposal_width", pv.proposal_width},
                  {"acceptance_rate", pv.acceptance_rate}}},
                {"skipped", set.skipped},
                {"warnings", set.warnings}};
      auto json_path = path;
      json_path.replace_extension(".json");
      io::write_json(json_path, meta);
      report({{"csv", path.string()}, {"json", json_path.string()}, {"warnings", set.warnings}});
    };
  });

  // notch-hist
  int nh_n = 32, nh_k = 8;
  std::size_t nh_samples = 1000, nh_bins = 50, nh_grid = 1024;
  double nh_l = 1.0;
  std::string nh_out;
  auto* notch = app.add_subcommand("notch-hist", "Histogram of conditional notch depths of |N-K, K>");
  notch->add_option("--n", nh_n, "Particles")->required();
  notch->add_option("--k", nh_k, "Particles in mode 1")->required();
  notch->add_option("--n-samples", nh_samples, "Samples")->check(CLI::PositiveNumber);
  notch->add_option("--bins", nh_bins, "Depth bins over [0, 1/L]")->check(CLI::PositiveNumber);
  notch->add_option("--grid", nh_grid, "Grid points of the recorded conditional")->check(CLI::Range(std::size_t{2}, std::size_t{1} << 24));
  notch->add_option("--l", nh_l, "Ring length")->check(CLI::PositiveNumber);
  notch->add_option("--out", nh_out, "CSV path");
  notch->callback([&] {
    action = [&] {
      const auto r = notch_depth_histogram(nh_n, nh_k, nh_samples, nh_grid, nh_bins, g.seed, nh_l);
      const io::Provenance prov{"notch-hist",
                                {{"n", nh_n}, {"k", nh_k}, {"n_samples", nh_samples}, {"bins", nh_bins},
                                 {"grid", nh_grid}, {"l", nh_l}},
                                g.seed};
      const auto path = target(g, nh_out, "notch_hist.csv");
      io::write_csv(path, notch_depth_table(r, prov));
      report({{"csv", path.string()}, {"skipped", r.skipped}, {"provenance", prov.to_json()}});
    };
  });

  // bohmian
  std::string bo_state, bo_snaps = "0.1,0.2,0.3,0.4", bo_prefix = "bohmian";
  std::size_t bo_real = 1000, bo_bins = 64, bo_traj = 10;
  double bo_dt = 1e-3, bo_l = 1.0;
  int bo_harm = 1;
  auto* bohm = app.add_subcommand("bohmian", "Bohmian trajectories in the freely evolving state");
  bohm->add_option("--state", bo_state, "State spec")->required();
  bohm->add_option("--n-real", bo_real, "Realizations")->check(CLI::PositiveNumber);
  bohm->add_option("--dt", bo_dt, "RK4 step")->check(CLI::PositiveNumber);
  bohm->add_option("--t-snapshots", bo_snaps, "Comma-separated snapshot times");
  bohm->add_option("--bins", bo_bins, "Histogram bins")->check(CLI::Range(std::size_t{8}, std::size_t{1} << 20));
  bohm->add_option("--harmonic", bo_harm, "Alignment harmonic (2 for two notches)")->check(CLI::Range(1, 64));
  bohm->add_option("--trajectories", bo_traj, "Realizations written to the trajectory CSV");
  bohm->add_option("--l", bo_l, "Ring length")->check(CLI::PositiveNumber);
  bohm->add_option("--prefix", bo_prefix, "Output file prefix");
  bohm->callback([&] {
    action = [&] {
      const auto rs = resolve_state(parse_state_spec(bo_state), bo_l);
      if (rs.yrast) throw InvalidArgument("Bohmian dynamics is limited to the ideal gas (fock/dicke/multi specs)");
      BohmianOptions bo;
      bo.dt = bo_dt;
      bo.snapshots = parse_list(bo_snaps);
      bo.threads = g.threads;
      const auto init = sequential_sample(rs.psi, bo_real, g.seed);
      const auto runs = align_initial(integrate(rs.psi, init, bo), bo_harm);
      const io::Provenance prov{"bohmian",
                                {{"state", bo_state}, {"n_real", bo_real}, {"dt", bo_dt}, {"snapshots", bo_snaps},
                                 {"bins", bo_bins}, {"harmonic", bo_harm}, {"l", bo_l}},
                                g.seed};
      const auto dir = io::output_dir(g.output_dir);
      json files = json::array();
      const auto traj = dir / (bo_prefix + "_trajectories.csv");
      io::write_csv(traj, trajectory_table(runs, bo_traj, prov));
      files.push_back(traj.string());
      const auto track = track_notch(runs, bo_harm, bo_bins);
      const auto tp = dir / (bo_prefix + "_notch.csv");
      io::write_csv(tp, notch_track_table(track, prov));
      files.push_back(tp.string());
      for (std::size_t i = 0; i < track.times.size(); ++i) {
        const auto p = dir / (bo_prefix + "_hist_" + std::to_string(i) + ".csv");
        auto t = histogram_table(histogram(pooled_positions(runs, i), bo_l, bo_bins), prov);
        t.comments.push_back("time: " + io::format_number(track.times[i]));
        io::write_csv(p, t);
        files.push_back(p.string());
      }
      report({{"files", files}, {"aborted", track.aborted}, {"provenance", prov.to_json()}});
    };
  });

  // gpe
  double gp_gn = 0.64, gp_k = 0.5, gp_l = 1.0;
  std::size_t gp_grid = 1024;
  std::string gp_out;
  auto* gpe = app.add_subcommand("gpe", "Mean-field dark/gray soliton profile");
  gpe->add_option("--gn", gp_gn, "Interaction gN")->check(CLI::NonNegativeNumber);
  gpe->add_option("--kavg", gp_k, "Average momentum per particle in [0, 1]")->check(CLI::Range(0.0, 1.0));
  gpe->add_option("--grid", gp_grid, "Grid points")->check(CLI::Range(std::size_t{8}, std::size_t{1} << 24));
  gpe->add_option("--l", gp_l, "Ring length")->check(CLI::PositiveNumber);
  gpe->add_option("--out", gp_out, "CSV path");
  gpe->callback([&] {
    action = [&] {
      const auto p = gpe_soliton(gp_gn, gp_k, gp_grid, gp_l);
      const io::Provenance prov{"gpe", {{"gn", gp_gn}, {"kavg", gp_k}, {"grid", gp_grid}, {"l", gp_l}}, g.seed};
      const auto path = target(g, gp_out, "gpe.csv");
      io::write_csv(path, profile_table(p, prov));
      report({{"csv", path.string()}, {"velocity", p.velocity}, {"mu", p.mu}, {"elliptic_m", p.elliptic_m},
              {"residual", gpe_residual(p)}, {"min_density", p.min_density()}, {"provenance", prov.to_json()}});
    };
  });

  // fig
  std::string f_name, f_ns;
  FigureOptions fo;
  auto* fig = app.add_subcommand("fig", "Write every data series of a figure plus a manifest");
  fig->add_option("--name", f_name, "fig2, fig3, fig5, fig7, fig8 or fig9")->required()->check(CLI::IsMember(kFigureNames));
  auto* fig_n = fig->add_option("--n", fo.N, "Particle number (fig7; a single panel or curve for fig5, fig9)");
  fig->add_option("--ns", f_ns, "Comma-separated particle numbers (fig5, fig9)");
  fig->add_option("--samples", fo.n_samples, "Samples or realizations")->check(CLI::PositiveNumber);
  fig->add_option("--bins", fo.bins, "Histogram bins")->check(CLI::Range(std::size_t{8}, std::size_t{1} << 20));
  fig->add_flag("--large", fo.large, "fig9: include N = 32 and 64");
  fig->callback([&] {
    action = [&] {
      fo.out_dir = io::output_dir(g.output_dir);
      fo.seed = g.seed;
      fo.threads = g.threads;
      if (!f_ns.empty())
        for (double v : parse_list(f_ns)) fo.Ns.push_back(static_cast<int>(v));
      else if (fig_n->count() > 0)
        fo.Ns = {fo.N};
      report(reproduce_figure(f_name, fo));
    };
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }
  try {
    action();
  } catch (const InvalidArgument& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const EmptyBasisError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    json diag{{"error", e.what()}};
    if (const auto* nc = dynamic_cast<const NonConvergence*>(&e)) {
      diag["type"] = "non_convergence";
      diag["residual"] = nc->residual();
    } else if (dynamic_cast<const NoSolution*>(&e)) {
      diag["type"] = "no_solution";
    } else if (dynamic_cast<const DegenerateConditional*>(&e)) {
      diag["type"] = "degenerate_conditional";
    } else if (dynamic_cast<const NearNode*>(&e)) {
      diag["type"] = "near_node";
    } else {
      diag["type"] = "numerical_failure";
    }
    std::cerr << diag.dump(2) << "\n";
    return 1;
  }
  return 0;
}
