#pragma once

// Slow, straightforward reference implementations used to check the fast
// paths. Nothing here calls into the library routine it is meant to check.

#include <Eigen/Dense>
#include <algorithm>
#include <bit>
#include <cmath>
#include <complex>
#include <map>
#include <numeric>
#include <vector>

namespace oracle {

using cplx = std::complex<double>;
inline constexpr double pi = 3.14159265358979323846;

/// Every occupation tuple over 2 k_max + 1 modes with N particles and total
/// momentum K, by odometer over all tuples; ordered lexicographically.
inline std::vector<std::vector<int>> basis(int N, int K, int k_max) {
  const int modes = 2 * k_max + 1;
  std::vector<std::vector<int>> out;
  std::vector<int> occ(static_cast<std::size_t>(modes), 0);
  for (;;) {
    int n = 0, k = 0;
    for (int i = 0; i < modes; ++i) {
      n += occ[i];
      k += occ[i] * (i - k_max);
    }
    if (n == N && k == K) out.push_back(occ);
    int i = modes - 1;
    while (i >= 0 && occ[i] == N) occ[i--] = 0;
    if (i < 0) break;
    ++occ[i];
  }
  std::sort(out.begin(), out.end());
  return out;
}

/// Dense Hamiltonian by explicit ladder-operator action on occupation maps.
inline Eigen::MatrixXd hamiltonian(const std::vector<std::vector<int>>& states, int k_max, double g, double L) {
  const int modes = 2 * k_max + 1;
  std::map<std::vector<int>, int> index;
  for (std::size_t i = 0; i < states.size(); ++i) index[states[i]] = static_cast<int>(i);
  const std::size_t dim = states.size();
  Eigen::MatrixXd H = Eigen::MatrixXd::Zero(Eigen::Index(dim), Eigen::Index(dim));
  for (std::size_t c = 0; c < dim; ++c) {
    const auto& s = states[c];
    for (int i = 0; i < modes; ++i) {
      const double k = i - k_max;
      H(Eigen::Index(c), Eigen::Index(c)) += 2.0 * pi * pi * k * k / (L * L) * s[i];
    }
    // (g / 2L) a+_{k+m} a+_{l-m} a_l a_k
    for (int k = -k_max; k <= k_max; ++k)
      for (int l = -k_max; l <= k_max; ++l)
        for (int m = -2 * k_max; m <= 2 * k_max; ++m) {
          const int p = k + m, q = l - m;
          if (std::abs(p) > k_max || std::abs(q) > k_max) continue;
          auto t = s;
          double amp = 1.0;
          auto lower = [&](int mode) {
            int& n = t[mode + k_max];
            amp *= std::sqrt(double(n));
            if (n > 0) --n;
          };
          auto raise = [&](int mode) {
            int& n = t[mode + k_max];
            ++n;
            amp *= std::sqrt(double(n));
          };
          lower(k);
          lower(l);
          if (amp == 0.0) continue;
          raise(q);
          raise(p);
          const auto it = index.find(t);
          if (it == index.end()) continue;
          H(it->second, Eigen::Index(c)) += g / (2.0 * L) * amp;
        }
  }
  return H;
}

/// Permanent by summing over all permutations.
inline cplx permanent(const Eigen::MatrixXcd& a) {
  const int n = static_cast<int>(a.rows());
  std::vector<int> p(static_cast<std::size_t>(n));
  std::iota(p.begin(), p.end(), 0);
  cplx sum = 0;
  do {
    cplx term = 1;
    for (int i = 0; i < n; ++i) term *= a(i, p[i]);
    sum += term;
  } while (std::next_permutation(p.begin(), p.end()));
  return sum;
}

/// Normalized bosonic amplitude of an occupation tuple by explicit
/// symmetrization over distinct orbital assignments.
inline cplx amplitude(const std::vector<int>& occ, int k_max, const std::vector<double>& x, double L) {
  std::vector<int> orbitals;
  double norm = 1.0;
  for (int i = 0; i < 2 * k_max + 1; ++i) {
    for (int j = 0; j < occ[i]; ++j) orbitals.push_back(i - k_max);
    norm *= std::tgamma(occ[i] + 1.0);
  }
  const int n = static_cast<int>(orbitals.size());
  Eigen::MatrixXcd m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = std::polar(1.0 / std::sqrt(L), 2.0 * pi * orbitals[j] * x[i] / L);
  return permanent(m) / std::sqrt(std::tgamma(n + 1.0) * norm);
}

/// e_K of a list by subset enumeration (bitmask).
inline cplx esp(const std::vector<cplx>& a, int K) {
  cplx sum = 0;
  const unsigned n = static_cast<unsigned>(a.size());
  for (unsigned mask = 0; mask < (1u << n); ++mask) {
    if (std::popcount(mask) != K) continue;
    cplx t = 1;
    for (unsigned i = 0; i < n; ++i)
      if (mask & (1u << i)) t *= a[i];
    sum += t;
  }
  return sum;
}

/// Composite Simpson rule (n even).
template <class F>
double simpson(F f, double a, double b, int n = 20000) {
  const double h = (b - a) / n;
  double s = f(a) + f(b);
  for (int i = 1; i < n; ++i) s += f(a + i * h) * (i % 2 ? 4.0 : 2.0);
  return s * h / 3.0;
}

}  // namespace oracle
