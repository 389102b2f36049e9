#pragma once

#include <Eigen/Dense>
#include <complex>
#include <span>
#include <vector>

namespace yrast {

using cplx = std::complex<double>;

/// Permanent of a square complex matrix by Ryser's formula, visiting column
/// subsets in Gray-code order so each step updates the row sums by a single
/// column. O(2^n n); n is capped at 24.
cplx ryser_permanent(const Eigen::MatrixXcd& a);

/// Permanent of the N x N matrix obtained by repeating column k of `columns`
/// (N x M) multiplicity[k] times, with sum(multiplicity) == N.
///
/// Uses Glynn's formula grouped by column multiplicity:
///   perm = 2^-N sum_t prod_k C(n_k, t_k) (-1)^{sum t} prod_i sum_k (n_k - 2 t_k) A_ik,
/// which costs prod_k (n_k + 1) terms instead of 2^N.
cplx repeated_column_permanent(const Eigen::MatrixXcd& columns, std::span<const int> multiplicity);

/// Same permanent together with its derivative with respect to each row,
/// where row i of the derivative matrix is `d_columns.row(i)` (the permanent
/// is linear in every row).
struct PermanentWithGradient {
  cplx value;
  std::vector<cplx> row_derivative;
};
PermanentWithGradient repeated_column_permanent_with_gradient(const Eigen::MatrixXcd& columns,
                                                              const Eigen::MatrixXcd& d_columns,
                                                              std::span<const int> multiplicity);

/// Elementary symmetric polynomials e_0..e_max_degree of `values`
/// (e_0 = 1, e_j = 0 for j > values.size()), via the product recurrence
/// e_j <- e_j + a_i e_{j-1}. O(n * max_degree).
std::vector<cplx> elementary_symmetric(std::span<const cplx> values, int max_degree);

/// Elementary symmetric polynomial of degree `degree` by explicit subset
/// enumeration. Exponential; test oracle only (n <= 20).
cplx elementary_symmetric_bruteforce(std::span<const cplx> values, int degree);

}  // namespace yrast
