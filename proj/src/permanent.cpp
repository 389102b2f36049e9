#include "yrast/permanent.hpp"

#include <bit>
#include <cmath>
#include <cstdint>

#include "yrast/errors.hpp"

namespace yrast {

cplx ryser_permanent(const Eigen::MatrixXcd& a) {
  if (a.rows() != a.cols()) throw InvalidArgument("permanent needs a square matrix");
  const int n = static_cast<int>(a.rows());
  if (n == 0) return 1.0;
  if (n > 24) throw InvalidArgument("Ryser permanent limited to n <= 24");

  std::vector<cplx> row_sum(static_cast<std::size_t>(n), 0.0);
  cplx total = 0.0;
  std::uint64_t gray = 0;
  const std::uint64_t count = std::uint64_t{1} << n;
  for (std::uint64_t step = 1; step < count; ++step) {
    // column that flips between consecutive Gray codes
    const int col = std::countr_zero(step);
    const std::uint64_t bit = std::uint64_t{1} << col;
    gray ^= bit;
    const double sgn = (gray & bit) ? 1.0 : -1.0;
    cplx prod = 1.0;
    for (int i = 0; i < n; ++i) {
      row_sum[static_cast<std::size_t>(i)] += sgn * a(i, col);
      prod *= row_sum[static_cast<std::size_t>(i)];
    }
    const int subset = std::popcount(gray);
    total += ((n - subset) % 2 == 0) ? prod : -prod;
  }
  return total;
}

namespace {

double binomial(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  return std::exp(std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0));
}

template <bool WithGradient>
PermanentWithGradient glynn_grouped(const Eigen::MatrixXcd& cols, const Eigen::MatrixXcd* dcols,
                                    std::span<const int> mult) {
  const auto n = cols.rows();
  const auto m = cols.cols();
  if (static_cast<std::size_t>(m) != mult.size())
    throw InvalidArgument("multiplicity count differs from column count");
  long long total_mult = 0;
  for (int v : mult) {
    if (v < 0) throw InvalidArgument("negative multiplicity");
    total_mult += v;
  }
  if (total_mult != n) throw InvalidArgument("multiplicities must sum to the row count");
  if (n == 0) return {1.0, {}};

  // precomputed binomial weights per group
  std::vector<std::vector<double>> weight(static_cast<std::size_t>(m));
  for (Eigen::Index k = 0; k < m; ++k) {
    const int nk = mult[static_cast<std::size_t>(k)];
    for (int t = 0; t <= nk; ++t) weight[static_cast<std::size_t>(k)].push_back(binomial(nk, t));
  }

  std::vector<int> t(static_cast<std::size_t>(m), 0);
  // row sums with every t_k = 0: sum_k n_k A_ik
  Eigen::VectorXcd rs = Eigen::VectorXcd::Zero(n);
  Eigen::VectorXcd drs = Eigen::VectorXcd::Zero(n);
  for (Eigen::Index k = 0; k < m; ++k) {
    rs += static_cast<double>(mult[static_cast<std::size_t>(k)]) * cols.col(k);
    if constexpr (WithGradient)
      drs += static_cast<double>(mult[static_cast<std::size_t>(k)]) * dcols->col(k);
  }

  cplx value = 0.0;
  std::vector<cplx> grad;
  if constexpr (WithGradient) grad.assign(static_cast<std::size_t>(n), 0.0);
  std::vector<cplx> prefix, suffix;
  if constexpr (WithGradient) {
    prefix.resize(static_cast<std::size_t>(n) + 1);
    suffix.resize(static_cast<std::size_t>(n) + 1);
  }

  for (;;) {
    double w = 1.0;
    int parity = 0;
    for (Eigen::Index k = 0; k < m; ++k) {
      w *= weight[static_cast<std::size_t>(k)][static_cast<std::size_t>(t[static_cast<std::size_t>(k)])];
      parity += t[static_cast<std::size_t>(k)];
    }
    if (parity % 2) w = -w;

    if constexpr (WithGradient) {
      prefix[0] = 1.0;
      for (Eigen::Index i = 0; i < n; ++i)
        prefix[static_cast<std::size_t>(i) + 1] = prefix[static_cast<std::size_t>(i)] * rs(i);
      suffix[static_cast<std::size_t>(n)] = 1.0;
      for (Eigen::Index i = n; i-- > 0;)
        suffix[static_cast<std::size_t>(i)] = suffix[static_cast<std::size_t>(i) + 1] * rs(i);
      value += w * prefix[static_cast<std::size_t>(n)];
      for (Eigen::Index i = 0; i < n; ++i)
        grad[static_cast<std::size_t>(i)] +=
            w * prefix[static_cast<std::size_t>(i)] * drs(i) * suffix[static_cast<std::size_t>(i) + 1];
    } else {
      cplx prod = 1.0;
      for (Eigen::Index i = 0; i < n; ++i) prod *= rs(i);
      value += w * prod;
    }

    // odometer over t_k in [0, n_k]; raising t_k by one lowers (n_k - 2 t_k) by 2
    Eigen::Index k = 0;
    for (; k < m; ++k) {
      auto& tk = t[static_cast<std::size_t>(k)];
      const int nk = mult[static_cast<std::size_t>(k)];
      if (tk < nk) {
        ++tk;
        rs -= 2.0 * cols.col(k);
        if constexpr (WithGradient) drs -= 2.0 * dcols->col(k);
        break;
      }
      rs += 2.0 * static_cast<double>(nk) * cols.col(k);
      if constexpr (WithGradient) drs += 2.0 * static_cast<double>(nk) * dcols->col(k);
      tk = 0;
    }
    if (k == m) break;
  }

  const double scale = std::ldexp(1.0, -static_cast<int>(n));
  value *= scale;
  if constexpr (WithGradient)
    for (auto& gi : grad) gi *= scale;
  return {value, std::move(grad)};
}

}  // namespace

cplx repeated_column_permanent(const Eigen::MatrixXcd& columns, std::span<const int> multiplicity) {
  return glynn_grouped<false>(columns, nullptr, multiplicity).value;
}

PermanentWithGradient repeated_column_permanent_with_gradient(const Eigen::MatrixXcd& columns,
                                                              const Eigen::MatrixXcd& d_columns,
                                                              std::span<const int> multiplicity) {
  if (d_columns.rows() != columns.rows() || d_columns.cols() != columns.cols())
    throw InvalidArgument("derivative matrix shape differs");
  return glynn_grouped<true>(columns, &d_columns, multiplicity);
}

std::vector<cplx> elementary_symmetric(std::span<const cplx> values, int max_degree) {
  if (max_degree < 0) throw InvalidArgument("negative degree");
  std::vector<cplx> e(static_cast<std::size_t>(max_degree) + 1, 0.0);
  e[0] = 1.0;
  int filled = 0;
  for (const cplx& a : values) {
    filled = std::min(filled + 1, max_degree);
    for (int j = filled; j >= 1; --j) e[static_cast<std::size_t>(j)] += a * e[static_cast<std::size_t>(j) - 1];
  }
  return e;
}

cplx elementary_symmetric_bruteforce(std::span<const cplx> values, int degree) {
  const auto n = values.size();
  if (n > 20) throw InvalidArgument("brute-force symmetric polynomial limited to 20 values");
  if (degree < 0 || static_cast<std::size_t>(degree) > n) return 0.0;
  cplx sum = 0.0;
  for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
    if (std::popcount(mask) != degree) continue;
    cplx prod = 1.0;
    for (std::size_t i = 0; i < n; ++i)
      if (mask & (1u << i)) prod *= values[i];
    sum += prod;
  }
  return sum;
}

}  // namespace yrast
