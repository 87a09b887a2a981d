#include "nlspec/bessel.hpp"

#include "nlspec/errors.hpp"

#include <algorithm>
#include <cmath>

namespace nlspec {

namespace {

constexpr double kRescaleAbove = 1e250;
constexpr double kRescaleFactor = 1e-250;

// Normalised Miller sweep; returns J_0 .. J_{max_order}, start chosen above max(max_order, x).
std::vector<double> miller(int max_order, double x) {
  const int top = std::max(max_order, static_cast<int>(x));
  int start = top + 20 + static_cast<int>(std::sqrt(160.0 * (top + 1)));
  start += start % 2;  // even, so the normalisation sum sees matching parity

  std::vector<double> out(static_cast<std::size_t>(max_order) + 1, 0.0);
  double next = 0.0;  // J_{k+1}
  double cur = 1e-30; // J_k
  double norm = 0.0;
  const double two_over_x = 2.0 / x;
  for (int k = start; k > 0; --k) {
    const double prev = k * two_over_x * cur - next;  // J_{k-1}
    next = cur;
    cur = prev;
    if (std::abs(cur) > kRescaleAbove) {
      cur *= kRescaleFactor;
      next *= kRescaleFactor;
      norm *= kRescaleFactor;
      for (double& v : out) v *= kRescaleFactor;
    }
    const int order = k - 1;
    if (order > 0 && order % 2 == 0) norm += 2.0 * cur;
    if (order <= max_order) out[order] = cur;
    if (order + 1 <= max_order) out[order + 1] = next;
  }
  norm += cur;  // J_0
  for (double& v : out) v /= norm;
  return out;
}

}  // namespace

std::vector<double> bessel_j_sequence(int max_order, double x) {
  if (max_order < 0) fail(ErrorKind::InvalidArgument, "Bessel order must be nonnegative");
  if (!(x >= 0.0) || !std::isfinite(x)) fail(ErrorKind::InvalidArgument, "Bessel argument must be finite and nonnegative");
  std::vector<double> j(static_cast<std::size_t>(max_order) + 1, 0.0);
  if (x == 0.0) {
    j[0] = 1.0;
    return j;
  }
  const int upward_limit = std::min(max_order, static_cast<int>(x));
  if (upward_limit < 2) return miller(max_order, x);

  std::vector<double> seed = miller(max_order, x);
  j = seed;
  // Upward recurrence is stable while the order stays below x.
  for (int k = 1; k < upward_limit; ++k) j[k + 1] = 2.0 * k / x * j[k] - j[k - 1];
  return j;
}

double bessel_j(int order, double x) { return bessel_j_sequence(order, x)[order]; }

double bessel_j_derivative(int order, double x) {
  const std::vector<double> j = bessel_j_sequence(order + 1, x);
  if (order == 0) return -j[1];
  return 0.5 * (j[order - 1] - j[order + 1]);
}

double bessel_j_series(int order, double x) {
  if (order < 0) fail(ErrorKind::InvalidArgument, "Bessel order must be nonnegative");
  const double half = 0.5 * x;
  double term = std::pow(half, order) / std::tgamma(order + 1.0);
  double sum = term;
  for (int k = 1; k < 200; ++k) {
    term *= -half * half / (static_cast<double>(k) * (k + order));
    sum += term;
    if (std::abs(term) < 1e-18 * std::abs(sum)) break;
  }
  return sum;
}

}  // namespace nlspec
