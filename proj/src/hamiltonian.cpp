#include "yrast/hamiltonian.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <random>

#include "yrast/errors.hpp"

namespace yrast {

// ---------------------------------------------------------------------------
// StateVector

StateVector::StateVector(BasisPtr basis, Eigen::VectorXcd amplitudes)
    : basis_(std::move(basis)), amps_(std::move(amplitudes)) {
  if (!basis_) throw InvalidArgument("state vector needs a basis");
  if (static_cast<std::size_t>(amps_.size()) != basis_->size())
    throw BasisMismatch("amplitude count differs from basis size");
}

StateVector StateVector::basis_vector(BasisPtr basis, std::size_t index) {
  Eigen::VectorXcd a = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(basis->size()));
  a(static_cast<Eigen::Index>(index)) = 1.0;
  return StateVector(std::move(basis), std::move(a));
}

StateVector StateVector::from_fock(BasisPtr basis, const FockState& state) {
  auto idx = basis->find(state.with_cutoff(basis->k_max()));
  if (!idx) throw BasisMismatch("Fock state " + state.to_string() + " is not in the basis");
  return basis_vector(std::move(basis), *idx);
}

StateVector& StateVector::normalize() {
  const double n = amps_.norm();
  if (n == 0.0) throw InvalidArgument("cannot normalize the zero vector");
  amps_ /= n;
  return *this;
}

cplx StateVector::dot(const StateVector& other) const {
  require_same_basis(*this, other);
  return amps_.dot(other.amps_);
}

void require_same_basis(const StateVector& a, const StateVector& b) {
  if (a.basis() == b.basis()) return;
  if (a.basis()->states() != b.basis()->states())
    throw BasisMismatch("state vectors live on different bases");
}

void ModelParams::validate() const {
  if (N < 1) throw InvalidArgument("N must be >= 1");
  if (k_max < 1) throw InvalidArgument("k_max must be >= 1");
  if (!(L > 0.0)) throw InvalidArgument("L must be positive");
  if (!(g >= 0.0)) throw InvalidArgument("only repulsive or zero coupling (g >= 0) is supported");
}

// ---------------------------------------------------------------------------
// Hamiltonian

Hamiltonian::Hamiltonian(const ModelParams& params)
    : Hamiltonian((params.validate(), enumerate_basis(params.N, params.K, params.k_max)),
                  params.g, params.L) {}

Hamiltonian::Hamiltonian(BasisPtr basis, double g, double L)
    : basis_(std::move(basis)), g_(g), L_(L) {
  if (!(L_ > 0.0)) throw InvalidArgument("L must be positive");
  if (!(g_ >= 0.0)) throw InvalidArgument("g must be >= 0");
  if (basis_->size() <= kCacheLimit) cache();
}

std::vector<std::pair<std::size_t, double>> Hamiltonian::row(std::size_t i) const {
  const FockState& s = (*basis_)[i];
  const int k_max = s.k_max();
  std::map<std::size_t, double> acc;
  acc[i] += free_energy(s, L_);

  if (g_ != 0.0) {
    const double pref = g_ / (2.0 * L_);
    std::vector<int> occ(s.occupations().begin(), s.occupations().end());
    const int n_slots = static_cast<int>(occ.size());
    for (int sk = 0; sk < n_slots; ++sk) {
      if (occ[sk] == 0) continue;
      for (int sl = sk; sl < n_slots; ++sl) {
        if (occ[sl] == 0 || (sl == sk && occ[sk] < 2)) continue;
        // a_l a_k, both orderings folded together
        double annih;
        if (sk == sl) {
          annih = std::sqrt(static_cast<double>(occ[sk]) * (occ[sk] - 1));
        } else {
          annih = 2.0 * std::sqrt(static_cast<double>(occ[sk]) * occ[sl]);
        }
        occ[sk] -= 1;
        occ[sl] -= 1;
        const int total = (sk - k_max) + (sl - k_max);
        for (int p = -k_max; p <= k_max; ++p) {
          const int q = total - p;
          if (q < p) break;
          if (q > k_max) continue;
          const int sp = p + k_max, sq = q + k_max;
          double create;
          if (sp == sq) {
            create = std::sqrt(static_cast<double>(occ[sp] + 1) * (occ[sp] + 2));
          } else {
            create = 2.0 * std::sqrt(static_cast<double>(occ[sp] + 1) * (occ[sq] + 1));
          }
          occ[sp] += 1;
          occ[sq] += 1;
          auto j = basis_->find(FockState(k_max, occ));
          occ[sp] -= 1;
          occ[sq] -= 1;
          // merged bases may omit some blocks; terms leaving the basis are
          // dropped only if the block itself is absent
          if (!j) {
            if (basis_->total_momentum())
              throw Error("interaction term left a complete momentum block");
            continue;
          }
          acc[*j] += pref * annih * create;
        }
        occ[sk] += 1;
        occ[sl] += 1;
      }
    }
  }
  return {acc.begin(), acc.end()};
}

void Hamiltonian::cache() {
  if (cached_) return;
  const auto n = static_cast<Eigen::Index>(basis_->size());
  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(basis_->size() * 8);
  for (std::size_t i = 0; i < basis_->size(); ++i)
    for (auto [j, v] : row(i))
      triplets.emplace_back(static_cast<int>(i), static_cast<int>(j), v);
  matrix_.resize(n, n);
  matrix_.setFromTriplets(triplets.begin(), triplets.end());
  matrix_.makeCompressed();
  cached_ = true;
}

const Eigen::SparseMatrix<double, Eigen::RowMajor>& Hamiltonian::sparse() const {
  if (!cached_) throw Error("sparse form not cached");
  return matrix_;
}

void Hamiltonian::apply(const Eigen::VectorXcd& x, Eigen::VectorXcd& y) const {
  if (static_cast<std::size_t>(x.size()) != basis_->size())
    throw BasisMismatch("vector length differs from Hamiltonian dimension");
  y.resize(x.size());
  if (cached_) {
    y.real() = matrix_ * x.real();
    y.imag() = matrix_ * x.imag();
    return;
  }
  for (std::size_t i = 0; i < basis_->size(); ++i) {
    cplx acc = 0.0;
    for (auto [j, v] : row(i)) acc += v * x(static_cast<Eigen::Index>(j));
    y(static_cast<Eigen::Index>(i)) = acc;
  }
}

StateVector Hamiltonian::apply(const StateVector& v) const {
  if (v.basis() != basis_ && v.basis()->states() != basis_->states())
    throw BasisMismatch("state vector does not live on the Hamiltonian basis");
  Eigen::VectorXcd y;
  apply(v.amplitudes(), y);
  return StateVector(basis_, std::move(y));
}

Eigen::MatrixXd Hamiltonian::dense() const {
  const auto n = static_cast<Eigen::Index>(basis_->size());
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
  for (std::size_t i = 0; i < basis_->size(); ++i)
    for (auto [j, v] : row(i)) m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = v;
  return m;
}

double Hamiltonian::spectral_upper_bound() const {
  double max_kin = 0.0;
  for (const auto& s : basis_->states()) max_kin = std::max(max_kin, free_energy(s, L_));
  const double N = basis_->particle_count();
  const double analytic = max_kin + g_ * N * (N - 1.0) * (2.0 * basis_->k_max() + 1.0) / (2.0 * L_);
  if (!cached_) return analytic;
  double gersh = 0.0;
  for (Eigen::Index r = 0; r < matrix_.outerSize(); ++r) {
    double sum = 0.0;
    for (Eigen::SparseMatrix<double, Eigen::RowMajor>::InnerIterator it(matrix_, r); it; ++it)
      sum += std::abs(it.value());
    gersh = std::max(gersh, sum);
  }
  return std::min(gersh, analytic);
}

StateVector apply_hamiltonian(const ModelParams& params, const StateVector& v) {
  params.validate();
  const auto& b = *v.basis();
  if (b.particle_count() != params.N || b.total_momentum() != params.K || b.k_max() != params.k_max)
    throw BasisMismatch("state vector is not on the (N, K, k_max) block of the parameters");
  Hamiltonian h(v.basis(), params.g, params.L);
  return h.apply(v);
}

// ---------------------------------------------------------------------------
// Eigen solvers

namespace {

Eigen::VectorXcd random_start(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Eigen::VectorXcd v(static_cast<Eigen::Index>(n));
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    const double re = u(rng);
    const double im = u(rng);
    v(i) = cplx(re, im);
  }
  v.normalize();
  return v;
}

void project_out(Eigen::VectorXcd& w, const std::vector<Eigen::VectorXcd>& against) {
  for (const auto& a : against) w -= a * a.dot(w);
}

struct LanczosOutcome {
  Eigen::VectorXcd vector;
  double value;
  double residual;
  std::int64_t applications;
};

// Restarted Lanczos with full reorthogonalization for the lowest eigenpair of
// H restricted to the orthogonal complement of `deflate`.
LanczosOutcome lanczos_lowest(const Hamiltonian& h, Eigen::VectorXcd start,
                              const std::vector<Eigen::VectorXcd>& deflate, double tol,
                              std::int64_t max_applications) {
  const auto n = static_cast<Eigen::Index>(h.dimension());
  const Eigen::Index free_dim = n - static_cast<Eigen::Index>(deflate.size());
  if (free_dim <= 0) throw InvalidArgument("nothing left after deflation");
  const Eigen::Index steps = std::min<Eigen::Index>(free_dim, 120);

  project_out(start, deflate);
  start.normalize();
  Eigen::VectorXcd x = start;
  std::int64_t applications = 0;
  double theta = 0.0, residual = std::numeric_limits<double>::infinity();
  Eigen::VectorXcd hx;

  while (applications < max_applications) {
    std::vector<Eigen::VectorXcd> Q;
    Q.reserve(static_cast<std::size_t>(steps));
    std::vector<double> alpha, beta;
    Q.push_back(x);
    Eigen::VectorXcd w;
    for (Eigen::Index j = 0; j < steps; ++j) {
      h.apply(Q.back(), w);
      ++applications;
      project_out(w, deflate);
      const double a = Q.back().dot(w).real();
      alpha.push_back(a);
      // two passes of Gram-Schmidt against the whole Krylov basis
      for (int pass = 0; pass < 2; ++pass) {
        project_out(w, deflate);
        for (const auto& q : Q) w -= q * q.dot(w);
      }
      const double b = w.norm();
      if (j + 1 == steps || b < 1e-13) break;
      beta.push_back(b);
      Q.push_back(w / b);
    }
    const auto m = static_cast<Eigen::Index>(alpha.size());
    Eigen::MatrixXd T = Eigen::MatrixXd::Zero(m, m);
    for (Eigen::Index i = 0; i < m; ++i) {
      T(i, i) = alpha[static_cast<std::size_t>(i)];
      if (i + 1 < m) T(i, i + 1) = T(i + 1, i) = beta[static_cast<std::size_t>(i)];
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(T);
    const Eigen::VectorXd y = es.eigenvectors().col(0);
    x.setZero(n);
    for (Eigen::Index i = 0; i < m; ++i) x += y(i) * Q[static_cast<std::size_t>(i)];
    project_out(x, deflate);
    x.normalize();
    h.apply(x, hx);
    ++applications;
    project_out(hx, deflate);
    theta = x.dot(hx).real();
    residual = (hx - theta * x).norm();
    if (residual <= tol) return {x, theta, residual, applications};
  }
  throw NonConvergence("Lanczos did not converge", residual);
}

}  // namespace

YrastResult find_yrast(const ModelParams& params, const YrastOptions& opts) {
  params.validate();
  Hamiltonian h(params);
  return find_yrast(h, opts);
}

YrastResult find_yrast(const Hamiltonian& h, const YrastOptions& opts) {
  if (!(opts.tol > 0.0)) throw InvalidArgument("tolerance must be positive");
  const std::size_t n = h.dimension();
  if (n == 0) throw EmptyBasisError("empty basis");

  Eigen::VectorXcd v = random_start(n, opts.seed);
  Eigen::VectorXcd w;
  double energy = 0.0, residual = std::numeric_limits<double>::infinity();
  std::int64_t iters = 0;
  double shift = 0.0;
  std::vector<double> history;

  if (opts.solver == EigenSolver::PowerIteration) {
    shift = h.spectral_upper_bound();
    for (;;) {
      h.apply(v, w);
      energy = v.dot(w).real();
      if (opts.record_history) history.push_back(energy);
      residual = (w - energy * v).norm();
      if (residual <= opts.tol) break;
      if (iters >= opts.max_iters)
        throw NonConvergence("power iteration did not reach tolerance after " +
                                 std::to_string(iters) + " iterations",
                             residual);
      v = shift * v - w;
      v.normalize();
      ++iters;
    }
  } else {
    auto out = lanczos_lowest(h, v, {}, opts.tol, opts.max_iters);
    v = out.vector;
    energy = out.value;
    residual = out.residual;
    iters = out.applications;
  }

  YrastResult result{StateVector(h.basis(), v), energy, residual, iters, shift, std::nullopt,
                     false, std::move(history)};
  if (opts.check_degeneracy && n > 1) {
    auto second = lanczos_lowest(h, random_start(n, opts.seed ^ 0x9e3779b97f4a7c15ULL), {v},
                                 std::max(opts.tol, 1e-9), opts.max_iters);
    result.second_energy = second.value;
    result.degenerate = std::abs(second.value - energy) < 1e-9;
  }
  return result;
}

double fidelity(const StateVector& u, const StateVector& v) {
  require_same_basis(u, v);
  const double nu = u.norm(), nv = v.norm();
  if (nu == 0.0 || nv == 0.0) throw InvalidArgument("fidelity of a zero vector");
  const double f = std::norm(u.amplitudes().dot(v.amplitudes())) / (nu * nu * nv * nv);
  return std::clamp(f, 0.0, 1.0);
}

double fidelity_with_fock(const StateVector& v, const FockState& s) {
  return fidelity(StateVector::from_fock(v.basis(), s), v);
}

std::vector<SweepRow> fidelity_sweep(std::span<const int> Ns, std::span<const double> gs,
                                     const SweepOptions& opts) {
  std::vector<SweepRow> rows;
  for (int N : Ns) {
    for (double g : gs) {
      SweepRow row{N, g, std::sqrt(g * N / opts.L), std::nullopt, {}};
      try {
        if (g < 0.0) throw InvalidArgument("negative coupling");
        if (N % 2 != 0) throw InvalidArgument("sweep needs even N (K = N/2)");
        ModelParams p{N, N / 2, opts.k_max, g, opts.L};
        auto res = find_yrast(p, opts.yrast);
        row.fidelity = fidelity_with_fock(res.state, free_yrast_state(N, N / 2, opts.k_max));
      } catch (const Error& e) {
        row.error = e.what();
      }
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

std::vector<CutoffStep> converge_cutoff(ModelParams params, double fidelity_tol, int k_max_limit,
                                        const YrastOptions& opts) {
  std::vector<CutoffStep> steps;
  double prev = std::numeric_limits<double>::quiet_NaN();
  for (;;) {
    auto res = find_yrast(params, opts);
    const double f =
        fidelity_with_fock(res.state, free_yrast_state(params.N, params.K, params.k_max));
    const double change = std::isnan(prev) ? prev : std::abs(f - prev);
    steps.push_back({params.k_max, res.state.size(), res.energy, f, change});
    if (!std::isnan(change) && change < fidelity_tol) break;
    if (params.k_max * 2 > k_max_limit) break;
    prev = f;
    params.k_max *= 2;
  }
  return steps;
}

}  // namespace yrast
