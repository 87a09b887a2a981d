#pragma once

#include <vector>

namespace nlspec {

/// J_0(x), ..., J_{max_order}(x) for x >= 0.
///
/// Orders below x come from upward recurrence seeded with J_0, J_1; orders at or
/// above x from Miller's downward recurrence normalised by J_0 + 2 sum J_{2k} = 1.
std::vector<double> bessel_j_sequence(int max_order, double x);

double bessel_j(int order, double x);

/// J_m'(x) = (J_{m-1}(x) - J_{m+1}(x)) / 2, with J_0' = -J_1.
double bessel_j_derivative(int order, double x);

/// Power series of J_m(x); accurate for small x only (used as a cross-check).
double bessel_j_series(int order, double x);

}  // namespace nlspec
