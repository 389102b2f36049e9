#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "yrast/errors.hpp"
#include "yrast/hamiltonian.hpp"
#include "yrast/state.hpp"

using namespace yrast;

namespace {

Eigen::VectorXcd random_vector(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> d;
  Eigen::VectorXcd v(static_cast<Eigen::Index>(n));
  for (auto& c : v) c = {d(rng), d(rng)};
  return v;
}

}  // namespace

TEST_CASE("dense matrix matches the ladder-operator oracle") {
  for (int N : {2, 3, 4})
    for (int K : {0, 1, 2})
      for (int k_max : {1, 2}) {
        const Hamiltonian h(ModelParams{N, K, k_max, 0.37, 1.3});
        const auto ref = oracle::hamiltonian(oracle::basis(N, K, k_max), k_max, 0.37, 1.3);
        CAPTURE(N);
        CAPTURE(K);
        CHECK((h.dense() - ref).cwiseAbs().maxCoeff() < 1e-12);
      }
}

TEST_CASE("two-particle contact element against a position-space integral") {
  // <a|g delta(x1 - x2)|b> = g int dx conj(psi_a(x, x)) psi_b(x, x)
  const double g = 0.7, L = 1.0;
  const int k_max = 2;
  const auto b = enumerate_basis(2, 0, k_max);
  const Hamiltonian h(b, g, L);
  const Hamiltonian h0(b, 0.0, L);
  const Eigen::MatrixXd hint = h.dense() - h0.dense();
  const int n = 256;
  for (std::size_t i = 0; i < b->size(); ++i)
    for (std::size_t j = 0; j < b->size(); ++j) {
      cplx sum = 0;
      for (int q = 0; q < n; ++q) {
        const std::vector<double> x{q * L / n, q * L / n};
        const auto oi = std::vector<int>((*b)[i].occupations().begin(), (*b)[i].occupations().end());
        const auto oj = std::vector<int>((*b)[j].occupations().begin(), (*b)[j].occupations().end());
        sum += std::conj(oracle::amplitude(oi, k_max, x, L)) * oracle::amplitude(oj, k_max, x, L);
      }
      sum *= L / n;
      CHECK(std::abs(g * sum - hint(Eigen::Index(i), Eigen::Index(j))) < 1e-12);
    }
  const auto idx = *b->find(FockState::from_modes(k_max, {{0, 2}}));
  CHECK(hint(Eigen::Index(idx), Eigen::Index(idx)) == doctest::Approx(g / L).epsilon(1e-14));
}

TEST_CASE("free Hamiltonian is diagonal with the kinetic energies") {
  const ModelParams p{5, 2, 2, 0.0, 1.0};
  const auto b = enumerate_basis(5, 2, 2);
  for (std::size_t i = 0; i < b->size(); ++i) {
    const auto hv = apply_hamiltonian(p, StateVector::basis_vector(b, i));
    Eigen::VectorXcd expect = Eigen::VectorXcd::Zero(Eigen::Index(b->size()));
    expect(Eigen::Index(i)) = free_energy((*b)[i], 1.0);
    CHECK((hv.amplitudes() - expect).norm() < 1e-12);
  }
}

TEST_CASE("hermiticity on random vectors") {
  const ModelParams p{6, 3, 3, 0.4, 1.0};
  Hamiltonian h(p);
  const auto u = random_vector(h.dimension(), 1), v = random_vector(h.dimension(), 2);
  Eigen::VectorXcd hu, hv;
  h.apply(u, hu);
  h.apply(v, hv);
  CHECK(std::abs(u.dot(hv) - hu.dot(v)) < 1e-12 * u.norm() * hv.norm());

  const Eigen::VectorXcd dense_hv = h.dense().cast<cplx>() * v;
  CHECK((hv - dense_hv).norm() < 1e-12 * hv.norm());
}

TEST_CASE("no matrix elements between momentum blocks") {
  for (int N = 2; N <= 4; ++N) {
    std::vector<BasisPtr> blocks;
    for (int K = -N; K <= N; ++K) blocks.push_back(enumerate_basis(N, K, 1));
    const auto merged = merge_bases(blocks);
    const Hamiltonian h(merged, 0.9, 1.0);
    const Eigen::MatrixXd H = h.dense();
    for (std::size_t i = 0; i < merged->size(); ++i)
      for (std::size_t j = 0; j < merged->size(); ++j)
        if ((*merged)[i].total_momentum() != (*merged)[j].total_momentum())
          CHECK(H(Eigen::Index(i), Eigen::Index(j)) == 0.0);
  }
}

TEST_CASE("basis mismatch is reported") {
  const auto v = StateVector::basis_vector(enumerate_basis(3, 1, 1), 0);
  CHECK_THROWS_AS(apply_hamiltonian(ModelParams{3, 0, 1, 0.1, 1.0}, v), BasisMismatch);
  const auto w = StateVector::basis_vector(enumerate_basis(3, 0, 1), 0);
  CHECK_THROWS_AS(fidelity(v, w), BasisMismatch);
}

TEST_CASE("power iteration agrees with a dense eigensolver") {
  for (auto p : {ModelParams{2, 0, 3, 0.05, 1.0}, ModelParams{4, 2, 2, 0.3, 1.0}, ModelParams{5, 1, 2, 2.0, 2.0}}) {
    const auto r = find_yrast(p);
    const auto ref = oracle::hamiltonian(oracle::basis(p.N, p.K, p.k_max), p.k_max, p.g, p.L);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(ref);
    CHECK(r.energy == doctest::Approx(es.eigenvalues()(0)).epsilon(1e-10));
    const Eigen::VectorXcd ev = es.eigenvectors().col(0).cast<cplx>();
    CHECK(std::norm(ev.dot(r.state.amplitudes())) == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(r.residual <= 1e-10);
  }
}

TEST_CASE("Lanczos and power iteration agree") {
  const ModelParams p{6, 3, 3, 0.2, 1.0};
  YrastOptions lo;
  lo.solver = EigenSolver::Lanczos;
  const auto a = find_yrast(p), b = find_yrast(p, lo);
  CHECK(a.energy == doctest::Approx(b.energy).epsilon(1e-11));
  CHECK(fidelity(a.state, b.state) == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("Rayleigh quotients of the power iteration never increase") {
  YrastOptions o;
  o.record_history = true;
  const auto r = find_yrast(ModelParams{6, 3, 2, 0.5, 1.0}, o);
  REQUIRE(r.energy_history.size() > 10);
  for (std::size_t i = 1; i < r.energy_history.size(); ++i)
    CHECK(r.energy_history[i] <= r.energy_history[i - 1] + 1e-12 * std::abs(r.energy_history[0]));
}

TEST_CASE("identical seeds give identical vectors") {
  const ModelParams p{5, 2, 2, 0.3, 1.0};
  const auto a = find_yrast(p), b = find_yrast(p);
  CHECK(a.state.amplitudes() == b.state.amplitudes());
}

TEST_CASE("fidelity basics") {
  const auto b = enumerate_basis(4, 2, 2);
  const auto u = StateVector(b, random_vector(b->size(), 3));
  CHECK(fidelity(u, u) == doctest::Approx(1.0));
  StateVector w(b, u.amplitudes() * std::polar(2.5, 0.7));
  CHECK(fidelity(u, w) == doctest::Approx(1.0));
  CHECK(fidelity(StateVector::basis_vector(b, 0), StateVector::basis_vector(b, 1)) == 0.0);
}

TEST_CASE("weak-coupling continuity of the yrast fidelity") {
  for (int N : {4, 8}) {
    double prev = 1.0;
    for (double g : {1e-4, 1e-3, 1e-2, 1e-1}) {
      const auto r = find_yrast(ModelParams{N, N / 2, 2, g, 1.0});
      const double f = fidelity_with_fock(r.state, free_yrast_state(N, N / 2, 2));
      CHECK(f <= prev + 1e-12);
      prev = f;
      if (g == 1e-4) CHECK(f > 1 - 1e-8);
    }
  }
}

TEST_CASE("free-gas sweep cell is exact") {
  const std::vector<int> Ns{4, 6};
  const std::vector<double> gs{0.0};
  SweepOptions o;
  o.k_max = 2;
  for (const auto& row : fidelity_sweep(Ns, gs, o)) {
    REQUIRE(row.fidelity.has_value());
    CHECK(*row.fidelity == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("cutoff doubling converges") {
  YrastOptions o;
  o.solver = EigenSolver::Lanczos;
  const auto steps = converge_cutoff(ModelParams{4, 2, 1, 0.5, 1.0}, 1e-5, 8, o);
  REQUIRE(steps.size() >= 2);
  CHECK(steps.back().change < 1e-5);
  for (std::size_t i = 1; i < steps.size(); ++i) CHECK(steps[i].energy <= steps[i - 1].energy + 1e-10);
}

/// Reference values from a k_max = 12 run (dimension 176390):
/// E = 84.382876, fidelity 0.99866057.
TEST_CASE("golden yrast state N=8, K=4, g=1/8") {
  YrastOptions o;
  o.solver = EigenSolver::Lanczos;
  o.tol = 1e-11;
  const auto r = find_yrast(ModelParams{8, 4, 8, 0.125, 1.0}, o);
  CHECK(r.state.size() == 17099);
  CHECK(r.energy == doctest::Approx(84.384290560742).epsilon(1e-10));
  CHECK(std::abs(r.energy - 84.382876) < 2e-3);
  const double f = fidelity_with_fock(r.state, free_yrast_state(8, 4, 8));
  CHECK(std::abs(f - 0.99866057) < 1e-6);
}

TEST_CASE("invalid parameters") {
  CHECK_THROWS_AS(find_yrast(ModelParams{4, 2, 1, -0.1, 1.0}), InvalidArgument);
  CHECK_THROWS_AS(find_yrast(ModelParams{4, 2, 1, 0.1, 0.0}), InvalidArgument);
  YrastOptions o;
  o.max_iters = 2;
  CHECK_THROWS_AS(find_yrast(ModelParams{6, 3, 2, 0.5, 1.0}, o), NonConvergence);
}
