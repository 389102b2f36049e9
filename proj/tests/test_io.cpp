#include <cstdlib>
#include <filesystem>

#include "doctest.h"
#include "yrast/errors.hpp"
#include "yrast/experiments.hpp"
#include "yrast/io.hpp"
#include "yrast/state_spec.hpp"

using namespace yrast;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const auto p = fs::temp_directory_path() / ("yrastlab_test_" + name);
  fs::remove_all(p);
  return p;
}

}  // namespace

TEST_CASE("numbers round-trip through text") {
  for (double v : {0.1, 1.0 / 3.0, -2.5e-300, 6.02214076e23, 0.0, 42.0}) CHECK(std::stod(io::format_number(v)) == v);
  CHECK(io::format_number(42.0) == "42");
  CHECK(io::format_number(std::numeric_limits<double>::infinity()) == "inf");
}

TEST_CASE("config hash is stable and sensitive") {
  const io::json a{{"n", 8}, {"g", 0.08}}, b{{"g", 0.08}, {"n", 8}}, c{{"n", 8}, {"g", 0.081}};
  CHECK(io::config_hash(a) == io::config_hash(b));
  CHECK(io::config_hash(a) != io::config_hash(c));
  CHECK(io::config_hash(a).size() == 16);
}

TEST_CASE("CSV tables parse back to themselves") {
  const io::Provenance prov{"test", {{"x", 1}}, 7};
  auto t = io::make_table({"a", "b"}, prov);
  t.add_row({1.0 / 3.0, -1e-17});
  t.add_row({2.0, 3.5});
  const std::string text = io::to_string(t);
  CHECK(text.rfind("# yrastlab", 0) == 0);
  const auto back = io::parse_csv(text);
  CHECK(back.header == t.header);
  CHECK(back.rows == t.rows);
  CHECK(back.comments == t.comments);
  CHECK(io::reserialize_csv(text) == text);
  CHECK(back.numeric("a")[0] == 1.0 / 3.0);
  CHECK_THROWS_AS(t.add_row({1.0}), InvalidArgument);
  CHECK_THROWS_AS(back.column("c"), InvalidArgument);
}

TEST_CASE("output directory resolution") {
  ::setenv(io::kOutputDirEnv, "/tmp/from_env", 1);
  CHECK(io::output_dir() == fs::path("/tmp/from_env"));
  CHECK(io::output_dir("explicit") == fs::path("explicit"));
  ::unsetenv(io::kOutputDirEnv);
  CHECK(io::output_dir() == fs::path("."));
}

TEST_CASE("state specifications") {
  const auto f = parse_state_spec("fock:n0=4,n1=4");
  CHECK(f.kind == "fock");
  CHECK(f.occupations.at(0) == 4);
  CHECK(parse_state_spec("fock:n-1=3,n1=3").occupations.at(-1) == 3);
  const auto y = parse_state_spec("yrast:N=8,K=4,g=0.08");
  CHECK(y.integer("N") == 8);
  CHECK(y.real("g", 0.0) == 0.08);
  CHECK(y.real("L", 2.0) == 2.0);
  CHECK_THROWS_AS(parse_state_spec("n0=4"), InvalidArgument);
  CHECK_THROWS_AS(parse_state_spec("blob:N=3"), InvalidArgument);
  CHECK_THROWS_AS(parse_state_spec("fock:n0=x"), InvalidArgument);
  CHECK_THROWS_AS(parse_state_spec("fock:n0=1,n0=2"), InvalidArgument);
  CHECK_THROWS_AS(parse_state_spec("dicke:N=8,K=x").integer("K"), InvalidArgument);

  const auto psi = resolve_state(parse_state_spec("fock:n-1=2,n1=2"), 1.0).psi;
  CHECK(psi.particle_count() == 4);
  CHECK(*psi.fock() == multi_soliton_state(4, 2));
  CHECK(*resolve_state(parse_state_spec("dicke:N=6,K=2"), 1.0).psi.fock() == free_yrast_state(6, 2));
  CHECK(*resolve_state(parse_state_spec("multi:N=6,M=2"), 1.0).psi.fock() == multi_soliton_state(6, 2));
  const auto r = resolve_state(parse_state_spec("yrast:N=4,K=2,g=0.1,kmax=2"), 1.0);
  REQUIRE(r.yrast.has_value());
  CHECK(r.psi.vector() != nullptr);
}

TEST_CASE("branches table") {
  const auto t = branches_table(8, io::Provenance{"branches", {}, 0});
  CHECK(t.rows.size() == 9);
  CHECK(t.numeric("E_yrast")[4] == doctest::Approx(8 * kPi * kPi));
  CHECK(t.numeric("E_elementary")[4] == doctest::Approx(32 * kPi * kPi));
}

TEST_CASE("figure bundles are reproducible and parse back") {
  FigureOptions o;
  o.n_samples = 40;
  o.N = 16;
  o.Ns = {8};
  o.grid_points = 128;
  const auto d1 = scratch("a"), d2 = scratch("b");
  for (const std::string name : {"fig3", "fig5", "fig7"}) {
    o.out_dir = d1;
    const auto m = reproduce_figure(name, o);
    o.out_dir = d2;
    reproduce_figure(name, o);
    CHECK(m["figure"] == name);
    REQUIRE(!m["files"].empty());
    for (const auto& f : m["files"]) {
      const auto file = f["file"].get<std::string>();
      const auto a = io::read_file(d1 / name / file), b = io::read_file(d2 / name / file);
      CHECK(a == b);
      CHECK(io::reserialize_csv(a) == a);
    }
    CHECK(io::read_file(d1 / name / "manifest.json") == io::read_file(d2 / name / "manifest.json"));
  }
  CHECK(io::parse_csv(io::read_file(d1 / "fig3" / "branches.csv")).rows.size() == 9);
  CHECK_THROWS_AS(reproduce_figure("fig4", o), InvalidArgument);
  fs::remove_all(d1);
  fs::remove_all(d2);
}

TEST_CASE("sweep couplings sit on the healing-length grid") {
  const std::vector<double> xi{0.5, 1.0, 2.0};
  const auto g = sweep_couplings(8, xi, 1.0);
  for (std::size_t i = 0; i < xi.size(); ++i) CHECK(healing_length(g[i], 8, 1.0) == doctest::Approx(1.0 / xi[i]));
}
