#pragma once

namespace yrast::elliptic {

/// Carlson symmetric integrals (duplication algorithm, relative accuracy ~1e-15).
double carlson_rf(double x, double y, double z);
double carlson_rd(double x, double y, double z);
double carlson_rj(double x, double y, double z, double p);

/// Complete integrals in the parameter convention m = k^2.
double complete_k(double m);
double complete_e(double m);
/// Complete third kind, Pi(n | m) = int_0^{pi/2} dt / ((1 - n sin^2 t) sqrt(1 - m sin^2 t)).
double complete_pi(double n, double m);

/// 1 - E(m)/K(m), computed without cancellation for small m.
double one_minus_e_over_k(double m);

/// Incomplete third kind Pi(n; phi | m) for |phi| <= pi/2.
double incomplete_pi(double n, double phi, double m);

struct Jacobi {
  double sn;
  double cn;
  double dn;
  double am;  // amplitude phi with sn = sin(phi)
};

/// Jacobi elliptic functions by the arithmetic-geometric mean, 0 <= m < 1.
Jacobi jacobi(double u, double m);

}  // namespace yrast::elliptic
