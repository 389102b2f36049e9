#include <set>

#include "doctest.h"
#include "oracles.hpp"
#include "yrast/basis.hpp"
#include "yrast/errors.hpp"

using namespace yrast;

namespace {

std::vector<std::vector<int>> tuples(const BasisSet& b) {
  std::vector<std::vector<int>> out;
  for (const auto& s : b.states()) out.emplace_back(s.occupations().begin(), s.occupations().end());
  return out;
}

}  // namespace

TEST_CASE("hand-enumerated small bases") {
  auto b = enumerate_basis(1, 0, 1);
  REQUIRE(b->size() == 1);
  CHECK((*b)[0] == FockState::from_modes(1, {{0, 1}}));

  b = enumerate_basis(2, 1, 1);
  REQUIRE(b->size() == 1);
  CHECK((*b)[0] == FockState::from_modes(1, {{0, 1}, {1, 1}}));

  b = enumerate_basis(2, 0, 1);
  REQUIRE(b->size() == 2);
  std::set<FockState> got(b->states().begin(), b->states().end());
  CHECK(got.count(FockState::from_modes(1, {{0, 2}})) == 1);
  CHECK(got.count(FockState::from_modes(1, {{-1, 1}, {1, 1}})) == 1);
}

TEST_CASE("enumeration matches the odometer oracle, order included") {
  for (int N = 1; N <= 6; ++N)
    for (int k_max = 1; k_max <= 3; ++k_max)
      for (int K = -N * k_max; K <= N * k_max; ++K) {
        CAPTURE(N);
        CAPTURE(K);
        CAPTURE(k_max);
        CHECK(tuples(*enumerate_basis(N, K, k_max)) == oracle::basis(N, K, k_max));
      }
}

TEST_CASE("conservation sums and reverse index") {
  const auto b = enumerate_basis(7, 3, 3);
  for (std::size_t i = 0; i < b->size(); ++i) {
    const auto& s = (*b)[i];
    CHECK(s.particle_count() == 7);
    CHECK(s.total_momentum() == 3);
    CHECK(b->find(s) == i);
  }
  CHECK_FALSE(b->find(FockState::from_modes(3, {{0, 7}})).has_value());
}

TEST_CASE("reflection pairs the K and -K blocks") {
  for (int K = 0; K <= 5; ++K) {
    const auto plus = enumerate_basis(5, K, 2), minus = enumerate_basis(5, -K, 2);
    REQUIRE(plus->size() == minus->size());
    for (const auto& s : plus->states()) CHECK(minus->find(s.reflected()).has_value());
  }
}

TEST_CASE("repeated enumeration is identical") {
  CHECK(enumerate_basis(6, 2, 3)->states() == enumerate_basis(6, 2, 3)->states());
}

TEST_CASE("out-of-range momentum is an empty basis") {
  CHECK_THROWS_AS(enumerate_basis(2, 3, 1), EmptyBasisError);
  CHECK_THROWS_AS(enumerate_basis(0, 0, 1), InvalidArgument);
}

TEST_CASE("free energies") {
  CHECK(free_energy(FockState::from_modes(1, {{0, 5}}), 1.0) == 0.0);
  CHECK(free_energy(FockState::from_modes(2, {{2, 1}}), 1.0) == doctest::Approx(8 * kPi * kPi));
  for (int K = 0; K <= 6; ++K)
    CHECK(free_energy(free_yrast_state(6, K), 2.0) == doctest::Approx(2 * kPi * kPi * K / 4.0));
}

TEST_CASE("ideal yrast states") {
  CHECK(free_yrast_state(8, 4) == FockState::from_modes(1, {{0, 4}, {1, 4}}));
  CHECK(free_yrast_state(5, 0) == FockState::from_modes(1, {{0, 5}}));
  CHECK(free_yrast_state(4, 3) == FockState::from_modes(1, {{0, 1}, {1, 3}}));
  CHECK_THROWS_AS(free_yrast_state(4, 5), InvalidArgument);
  CHECK_THROWS_AS(free_yrast_state(4, -1), InvalidArgument);
}

TEST_CASE("ideal yrast state minimizes the free energy of its block") {
  for (int N = 1; N <= 6; ++N)
    for (int K = 0; K <= N; ++K)
      for (int k_max = 1; k_max <= 3; ++k_max) {
        const auto b = enumerate_basis(N, K, k_max);
        long long best = std::numeric_limits<long long>::max();
        for (const auto& s : b->states()) best = std::min(best, s.kinetic_units());
        CHECK(free_yrast_state(N, K, k_max).kinetic_units() == best);
        CHECK(b->find(free_yrast_state(N, K, k_max)).has_value());
      }
}

TEST_CASE("two branches") {
  const std::vector<int> Ks{0, 1, 4};
  const auto rows = two_branches(Ks, 1.0);
  CHECK(rows[0].elementary == 0.0);
  CHECK(rows[0].yrast == 0.0);
  CHECK(rows[1].elementary == doctest::Approx(2 * kPi * kPi));
  CHECK(rows[1].yrast == doctest::Approx(2 * kPi * kPi));
  CHECK(rows[2].elementary == doctest::Approx(32 * kPi * kPi));
  CHECK(rows[2].yrast == doctest::Approx(8 * kPi * kPi));
}

TEST_CASE("merged bases carry no single momentum") {
  std::vector<BasisPtr> blocks{enumerate_basis(3, 0, 1), enumerate_basis(3, 1, 1)};
  const auto m = merge_bases(blocks);
  CHECK(m->size() == blocks[0]->size() + blocks[1]->size());
  CHECK_FALSE(m->total_momentum().has_value());
}
