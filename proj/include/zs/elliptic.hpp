#pragma once

// Jacobi elliptic functions for parameter m (not modulus k = sqrt(m)).

namespace zs {

// Complete elliptic integral of the first kind via the AGM. Requires 0 <= m < 1.
double elliptic_K(double m);

// dn(x|m) via descending Landen/AGM. Requires 0 <= m <= 1; m == 1 gives sech(x).
double jacobi_dn(double x, double m);

struct JacobiTriple {
  double sn, cn, dn;
};
JacobiTriple jacobi_sncndn(double x, double m);

}  // namespace zs
