#include "yrast/basis.hpp"

#include <algorithm>
#include <climits>
#include <cstdlib>
#include <numeric>
#include <sstream>

#include "yrast/errors.hpp"

namespace yrast {

namespace {

// Guard so that sum_k n_k k^2 <= N k_max^2 stays far below INT64 overflow and
// the momentum sums fit in int.
void validate_sizes(int N, int K, int k_max) {
  if (N < 1) throw InvalidArgument("particle count must be >= 1");
  if (k_max < 0) throw InvalidArgument("k_max must be >= 0");
  if (N > 100000 || k_max > 10000)
    throw InvalidArgument("N or k_max too large for integer energy sums");
  if (std::abs(static_cast<long long>(K)) > static_cast<long long>(N) * k_max)
    throw EmptyBasisError("no Fock state with |K| > N k_max (N=" + std::to_string(N) +
                          ", K=" + std::to_string(K) + ", k_max=" + std::to_string(k_max) + ")");
}

struct Enumerator {
  int k_max;
  std::vector<int> occ;
  std::vector<FockState>* out;

  // Fill modes from slot `slot` (mode k = slot - k_max) upwards.
  void run(int slot, int n_left, long long K_left) {
    const int k = slot - k_max;
    const int last_slot = 2 * k_max;
    if (slot == last_slot) {
      // all remaining particles must go to k_max
      if (static_cast<long long>(n_left) * k == K_left) {
        occ[slot] = n_left;
        out->emplace_back(k_max, occ);
        occ[slot] = 0;
      }
      return;
    }
    for (int n = 0; n <= n_left; ++n) {
      const int rest = n_left - n;
      const long long K_rest = K_left - static_cast<long long>(n) * k;
      // remaining modes are k+1..k_max
      if (K_rest < static_cast<long long>(rest) * (k + 1)) continue;
      if (K_rest > static_cast<long long>(rest) * k_max) continue;
      occ[slot] = n;
      run(slot + 1, rest, K_rest);
    }
    occ[slot] = 0;
  }
};

}  // namespace

FockState::FockState(int k_max, std::vector<int> occupations)
    : k_max_(k_max), occ_(std::move(occupations)) {
  if (k_max < 0) throw InvalidArgument("k_max must be >= 0");
  if (occ_.size() != static_cast<std::size_t>(2 * k_max + 1))
    throw InvalidArgument("occupation vector must have 2 k_max + 1 entries");
  for (int n : occ_)
    if (n < 0) throw InvalidArgument("occupation numbers must be non-negative");
}

FockState FockState::from_modes(int k_max, std::initializer_list<std::pair<int, int>> modes) {
  std::vector<int> occ(2 * k_max + 1, 0);
  for (auto [k, n] : modes) {
    if (std::abs(k) > k_max) throw InvalidArgument("mode index outside [-k_max, k_max]");
    occ[k + k_max] += n;
  }
  return FockState(k_max, std::move(occ));
}

int FockState::occupation(int k) const {
  if (std::abs(k) > k_max_) return 0;
  return occ_[k + k_max_];
}

int FockState::particle_count() const noexcept {
  return std::accumulate(occ_.begin(), occ_.end(), 0);
}

int FockState::total_momentum() const noexcept {
  int K = 0;
  for (int s = 0; s < static_cast<int>(occ_.size()); ++s) K += (s - k_max_) * occ_[s];
  return K;
}

long long FockState::kinetic_units() const noexcept {
  long long e = 0;
  for (int s = 0; s < static_cast<int>(occ_.size()); ++s) {
    const long long k = s - k_max_;
    e += k * k * occ_[s];
  }
  return e;
}

FockState FockState::with_cutoff(int k_max) const {
  for (int k = -k_max_; k <= k_max_; ++k)
    if (std::abs(k) > k_max && occupation(k) != 0)
      throw InvalidArgument("cannot shrink cutoff below an occupied mode");
  std::vector<int> occ(2 * k_max + 1, 0);
  for (int k = -std::min(k_max, k_max_); k <= std::min(k_max, k_max_); ++k)
    occ[k + k_max] = occupation(k);
  return FockState(k_max, std::move(occ));
}

FockState FockState::reflected() const {
  std::vector<int> occ(occ_.rbegin(), occ_.rend());
  return FockState(k_max_, std::move(occ));
}

std::string FockState::to_string() const {
  std::ostringstream os;
  os << '|';
  bool first = true;
  for (int k = -k_max_; k <= k_max_; ++k) {
    const int n = occupation(k);
    if (n == 0) continue;
    if (!first) os << ',';
    os << 'n' << k << '=' << n;
    first = false;
  }
  os << '>';
  return os.str();
}

std::size_t FockStateHash::operator()(const FockState& s) const noexcept {
  // FNV-1a over the occupation words
  std::uint64_t h = 1469598103934665603ULL ^ static_cast<std::uint64_t>(s.k_max());
  for (int n : s.occupations()) {
    h ^= static_cast<std::uint64_t>(static_cast<std::uint32_t>(n));
    h *= 1099511628211ULL;
  }
  return static_cast<std::size_t>(h);
}

BasisSet::BasisSet(int n_particles, std::optional<int> total_momentum, int k_max,
                   std::vector<FockState> states)
    : n_(n_particles), K_(total_momentum), k_max_(k_max), states_(std::move(states)) {
  index_.reserve(states_.size());
  for (std::size_t i = 0; i < states_.size(); ++i) {
    const auto& s = states_[i];
    if (s.k_max() != k_max_) throw BasisMismatch("state cutoff differs from basis cutoff");
    if (s.particle_count() != n_) throw BasisMismatch("state particle count differs from basis");
    if (K_ && s.total_momentum() != *K_) throw BasisMismatch("state momentum differs from basis");
    if (!index_.emplace(s, i).second) throw InvalidArgument("duplicate state in basis");
  }
}

std::optional<std::size_t> BasisSet::find(const FockState& s) const {
  auto it = index_.find(s);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

BasisPtr enumerate_basis(int N, int K, int k_max) {
  validate_sizes(N, K, k_max);
  std::vector<FockState> states;
  Enumerator e{k_max, std::vector<int>(2 * k_max + 1, 0), &states};
  if (k_max == 0) {
    if (K == 0) states.emplace_back(0, std::vector<int>{N});
  } else {
    e.run(0, N, K);
  }
  if (states.empty()) throw EmptyBasisError("empty Fock basis");
  return std::make_shared<const BasisSet>(N, K, k_max, std::move(states));
}

BasisPtr merge_bases(std::span<const BasisPtr> blocks) {
  if (blocks.empty()) throw InvalidArgument("nothing to merge");
  const int N = blocks.front()->particle_count();
  const int k_max = blocks.front()->k_max();
  std::vector<FockState> states;
  for (const auto& b : blocks) {
    if (b->particle_count() != N || b->k_max() != k_max)
      throw BasisMismatch("merged blocks must share N and k_max");
    states.insert(states.end(), b->states().begin(), b->states().end());
  }
  return std::make_shared<const BasisSet>(N, std::nullopt, k_max, std::move(states));
}

BasisPtr basis_from_states(std::vector<FockState> states) {
  if (states.empty()) throw EmptyBasisError("empty state list");
  int k_max = 0;
  for (const auto& s : states) k_max = std::max(k_max, s.k_max());
  for (auto& s : states) s = s.with_cutoff(k_max);
  const int N = states.front().particle_count();
  std::optional<int> K = states.front().total_momentum();
  for (const auto& s : states)
    if (s.total_momentum() != *K) K.reset();
  return std::make_shared<const BasisSet>(N, K, k_max, std::move(states));
}

double free_energy(const FockState& state, double L) {
  return 2.0 * kPi * kPi * static_cast<double>(state.kinetic_units()) / (L * L);
}

FockState free_yrast_state(int N, int K, int k_max) {
  if (N < 1) throw InvalidArgument("particle count must be >= 1");
  if (K < 0 || K > N)
    throw InvalidArgument("ideal-gas yrast state is only defined for 0 <= K <= N");
  if (k_max < 1) throw InvalidArgument("k_max must be >= 1");
  return FockState::from_modes(k_max, {{0, N - K}, {1, K}});
}

std::vector<BranchRow> two_branches(std::span<const int> Ks, double L) {
  std::vector<BranchRow> rows;
  rows.reserve(Ks.size());
  const double unit = 2.0 * kPi * kPi / (L * L);
  for (int K : Ks) {
    const double k = K;
    rows.push_back({K, unit * k * k, unit * std::abs(k)});
  }
  return rows;
}

}  // namespace yrast
