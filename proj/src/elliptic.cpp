#include "yrast/elliptic.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "yrast/errors.hpp"

namespace yrast::elliptic {

namespace {

constexpr double kErrTol = 1e-3;

double max3(double a, double b, double c) { return std::max({std::abs(a), std::abs(b), std::abs(c)}); }

// Degenerate R_C(x, y) for y > 0.
double carlson_rc(double x, double y) {
  double s;
  double ave;
  do {
    const double alamb = 2.0 * std::sqrt(x) * std::sqrt(y) + y;
    x = 0.25 * (x + alamb);
    y = 0.25 * (y + alamb);
    ave = (x + 2.0 * y) / 3.0;
    s = (y - ave) / ave;
  } while (std::abs(s) > kErrTol);
  return (1.0 + s * s * (0.3 + s * (1.0 / 7.0 + s * (0.375 + s * 9.0 / 22.0)))) / std::sqrt(ave);
}

}  // namespace

double carlson_rf(double x, double y, double z) {
  if (x < 0.0 || y < 0.0 || z < 0.0 || std::min({x + y, x + z, y + z}) <= 0.0)
    throw InvalidArgument("carlson_rf: invalid arguments");
  double dx, dy, dz, ave;
  do {
    const double sx = std::sqrt(x), sy = std::sqrt(y), sz = std::sqrt(z);
    const double alamb = sx * (sy + sz) + sy * sz;
    x = 0.25 * (x + alamb);
    y = 0.25 * (y + alamb);
    z = 0.25 * (z + alamb);
    ave = (x + y + z) / 3.0;
    dx = (ave - x) / ave;
    dy = (ave - y) / ave;
    dz = (ave - z) / ave;
  } while (max3(dx, dy, dz) > kErrTol);
  const double e2 = dx * dy - dz * dz;
  const double e3 = dx * dy * dz;
  return (1.0 + (e2 / 24.0 - 0.1 - 3.0 * e3 / 44.0) * e2 + e3 / 14.0) / std::sqrt(ave);
}

double carlson_rd(double x, double y, double z) {
  if (x < 0.0 || y < 0.0 || x + y <= 0.0 || z <= 0.0) throw InvalidArgument("carlson_rd: invalid arguments");
  constexpr double c1 = 3.0 / 14.0, c2 = 1.0 / 6.0, c3 = 9.0 / 22.0, c4 = 3.0 / 26.0;
  constexpr double c5 = 0.25 * c3, c6 = 1.5 * c4;
  double sum = 0.0, fac = 1.0;
  double dx, dy, dz, ave;
  do {
    const double sx = std::sqrt(x), sy = std::sqrt(y), sz = std::sqrt(z);
    const double alamb = sx * (sy + sz) + sy * sz;
    sum += fac / (sz * (z + alamb));
    fac *= 0.25;
    x = 0.25 * (x + alamb);
    y = 0.25 * (y + alamb);
    z = 0.25 * (z + alamb);
    ave = 0.2 * (x + y + 3.0 * z);
    dx = (ave - x) / ave;
    dy = (ave - y) / ave;
    dz = (ave - z) / ave;
  } while (max3(dx, dy, dz) > kErrTol);
  const double ea = dx * dy, eb = dz * dz, ec = ea - eb, ed = ea - 6.0 * eb, ee = ed + ec + ec;
  return 3.0 * sum + fac * (1.0 + ed * (-c1 + c5 * ed - c6 * dz * ee) +
                            dz * (c2 * ee + dz * (-c3 * ec + dz * c4 * ea))) /
                         (ave * std::sqrt(ave));
}

double carlson_rj(double x, double y, double z, double p) {
  if (x < 0.0 || y < 0.0 || z < 0.0 || std::min({x + y, x + z, y + z}) <= 0.0 || p <= 0.0)
    throw InvalidArgument("carlson_rj: invalid arguments");
  constexpr double c1 = 3.0 / 14.0, c2 = 1.0 / 3.0, c3 = 3.0 / 22.0, c4 = 3.0 / 26.0;
  constexpr double c5 = 0.75 * c3, c6 = 1.5 * c4, c7 = 0.5 * c2, c8 = c3 + c3;
  double sum = 0.0, fac = 1.0;
  double dx, dy, dz, dp, ave;
  do {
    const double sx = std::sqrt(x), sy = std::sqrt(y), sz = std::sqrt(z);
    const double alamb = sx * (sy + sz) + sy * sz;
    const double alpha = std::pow(p * (sx + sy + sz) + sx * sy * sz, 2);
    const double beta = p * std::pow(p + alamb, 2);
    sum += fac * carlson_rc(alpha, beta);
    fac *= 0.25;
    x = 0.25 * (x + alamb);
    y = 0.25 * (y + alamb);
    z = 0.25 * (z + alamb);
    p = 0.25 * (p + alamb);
    ave = 0.2 * (x + y + z + p + p);
    dx = (ave - x) / ave;
    dy = (ave - y) / ave;
    dz = (ave - z) / ave;
    dp = (ave - p) / ave;
  } while (std::max(max3(dx, dy, dz), std::abs(dp)) > kErrTol);
  const double ea = dx * (dy + dz) + dy * dz;
  const double eb = dx * dy * dz;
  const double ec = dp * dp;
  const double ed = ea - 3.0 * ec;
  const double ee = eb + 2.0 * dp * (ea - ec);
  return 3.0 * sum + fac * (1.0 + ed * (-c1 + c5 * ed - c6 * ee) + eb * (c7 + dp * (-c8 + dp * c4)) +
                            dp * ea * (c2 - dp * c3) - c2 * dp * ec) /
                         (ave * std::sqrt(ave));
}

double complete_k(double m) {
  if (!(m < 1.0)) throw InvalidArgument("complete_k needs m < 1");
  return carlson_rf(0.0, 1.0 - m, 1.0);
}

double complete_e(double m) {
  if (!(m <= 1.0)) throw InvalidArgument("complete_e needs m <= 1");
  if (m == 1.0) return 1.0;
  return carlson_rf(0.0, 1.0 - m, 1.0) - m / 3.0 * carlson_rd(0.0, 1.0 - m, 1.0);
}

double complete_pi(double n, double m) {
  if (!(n < 1.0) || !(m < 1.0)) throw InvalidArgument("complete_pi needs n < 1 and m < 1");
  return complete_k(m) + n / 3.0 * carlson_rj(0.0, 1.0 - m, 1.0, 1.0 - n);
}

double one_minus_e_over_k(double m) {
  if (!(m < 1.0)) throw InvalidArgument("one_minus_e_over_k needs m < 1");
  return m / 3.0 * carlson_rd(0.0, 1.0 - m, 1.0) / carlson_rf(0.0, 1.0 - m, 1.0);
}

double incomplete_pi(double n, double phi, double m) {
  if (std::abs(phi) > 0.5 * M_PI + 1e-12) throw InvalidArgument("incomplete_pi needs |phi| <= pi/2");
  const double s = std::sin(phi);
  if (s == 0.0) return 0.0;
  const double c2 = std::max(0.0, 1.0 - s * s);
  const double d2 = 1.0 - m * s * s;
  const double p = 1.0 - n * s * s;
  if (!(d2 > 0.0) || !(p > 0.0)) throw InvalidArgument("incomplete_pi: singular arguments");
  return s * carlson_rf(c2, d2, 1.0) + n / 3.0 * s * s * s * carlson_rj(c2, d2, 1.0, p);
}

Jacobi jacobi(double u, double m) {
  if (m < 0.0 || !(m < 1.0)) throw InvalidArgument("jacobi needs 0 <= m < 1");
  std::array<double, 64> a{}, c{};
  a[0] = 1.0;
  double b = std::sqrt(1.0 - m);
  c[0] = std::sqrt(m);
  int n = 0;
  while (std::abs(c[static_cast<std::size_t>(n)]) > 1e-16 && n < 63) {
    const double an = a[static_cast<std::size_t>(n)];
    a[static_cast<std::size_t>(n) + 1] = 0.5 * (an + b);
    c[static_cast<std::size_t>(n) + 1] = 0.5 * (an - b);
    b = std::sqrt(an * b);
    ++n;
  }
  double phi = std::ldexp(a[static_cast<std::size_t>(n)] * u, n);
  for (int j = n; j > 0; --j) {
    const auto k = static_cast<std::size_t>(j);
    phi = 0.5 * (phi + std::asin(c[k] / a[k] * std::sin(phi)));
  }
  const double sn = std::sin(phi);
  return {sn, std::cos(phi), std::sqrt(1.0 - m * sn * sn), phi};
}

}  // namespace yrast::elliptic
