#include "nlspec/heat_kernel.hpp"

#include "nlspec/errors.hpp"
#include "nlspec/symbol.hpp"

#include <cmath>
#include <numbers>

namespace nlspec {

namespace {

using std::numbers::pi;

void check_dim(int n) {
  if (n < 1) fail(ErrorKind::InvalidArgument, "dimension must be >= 1");
}

void check_time(double t) {
  if (!(t > 0.0) || !std::isfinite(t)) fail(ErrorKind::InvalidArgument, "time t must be positive and finite");
}

// (n-1) f(mu) + f(2mu+lambda) for the two wave branches.
template <class F>
double branch_sum(int n, const LameParameters& params, F&& f) {
  const double shear = n > 1 ? (n - 1) * f(params.mu) : 0.0;
  return shear + f(params.pressure_modulus());
}

// (1/2 pi i) \oint f over the circle |tau - center| = radius, N-point trapezoid.
template <class F>
Complex circle_integral(Complex center, double radius, int nodes, F&& f) {
  Complex sum = 0.0;
  for (int k = 0; k < nodes; ++k) {
    const Complex z = radius * std::polar(1.0, 2.0 * pi * (k + 0.5) / nodes);
    sum += f(center + z) * z;
  }
  return sum / static_cast<double>(nodes);
}

}  // namespace

int boundary_sign(BoundaryCondition bc) { return bc == BoundaryCondition::Dirichlet ? -1 : +1; }

double CoefficientPrediction::model(double t, int bc_sign) const {
  return a0 * std::pow(t, -0.5 * n) + bc_sign * a1 * std::pow(t, -0.5 * (n - 1));
}

double residue_heat_symbol(int n, const LameParameters& params, double q, double t) {
  check_dim(n);
  params.validate();
  check_time(t);
  if (q < 0.0) fail(ErrorKind::InvalidArgument, "Q must be nonnegative");
  return branch_sum(n, params, [&](double c) { return std::exp(-t * c * q); });
}

double contour_heat_symbol(int n, const LameParameters& params, double q, double t, int nodes) {
  check_dim(n);
  params.validate();
  check_time(t);
  if (q < 0.0) fail(ErrorKind::InvalidArgument, "Q must be nonnegative");
  if (nodes < 16) fail(ErrorKind::InvalidArgument, "contour needs at least 16 nodes");

  const double shear = params.mu * q;
  const double pressure = params.pressure_modulus() * q;
  const double spread = pressure - shear;
  auto integrand = [&](Complex tau) { return std::exp(-t * tau) * trace_q2(n, params, q, tau); };

  // Radii stay O(1) so that e^{-t tau} on the contour never exceeds the residue by more than ~e^t.
  if (spread < 1.0) {
    const Complex center = 0.5 * (shear + pressure);
    return circle_integral(center, 0.5 * spread + 0.5, nodes, integrand).real();
  }
  const double radius = std::min(1.0, spread / 3.0);
  const Complex total = circle_integral(shear, radius, nodes, integrand) + circle_integral(pressure, radius, nodes, integrand);
  return total.real();
}

double interior_density(int n, const LameParameters& params, double t) {
  check_dim(n);
  params.validate();
  check_time(t);
  return branch_sum(n, params, [&](double c) { return std::pow(4.0 * pi * c * t, -0.5 * n); });
}

double boundary_layer_density(int n, const LameParameters& params, double t, double xn) {
  check_dim(n);
  params.validate();
  check_time(t);
  if (xn < 0.0) fail(ErrorKind::InvalidArgument, "depth must be nonnegative");
  // Image point sits at distance 2 xn: exp(-(2 xn)^2 / (4 c t)).
  return branch_sum(n, params, [&](double c) { return std::pow(4.0 * pi * c * t, -0.5 * n) * std::exp(-xn * xn / (c * t)); });
}

double boundary_density(int n, const LameParameters& params, double t) {
  check_dim(n);
  params.validate();
  check_time(t);
  return 0.25 * branch_sum(n, params, [&](double c) { return std::pow(4.0 * pi * c * t, -0.5 * (n - 1)); });
}

HeatDensity heat_density(int n, const LameParameters& params, double t, int bc_sign) {
  if (bc_sign != -1 && bc_sign != 1) fail(ErrorKind::InvalidArgument, "bc_sign must be -1 or +1");
  return HeatDensity{t, interior_density(n, params, t), boundary_density(n, params, t), bc_sign};
}

CoefficientPrediction predict_coefficients(int n, const LameParameters& params, double vol, double boundary_vol) {
  check_dim(n);
  params.validate();
  if (!(vol > 0.0)) fail(ErrorKind::InvalidArgument, "volume must be positive");
  if (boundary_vol < 0.0) fail(ErrorKind::InvalidArgument, "boundary volume must be nonnegative");
  CoefficientPrediction p;
  p.n = n;
  p.vol = vol;
  p.boundary_vol = boundary_vol;
  p.params = params;
  // Densities at t = 1 are exactly the t-free coefficients.
  p.a0 = interior_density(n, params, 1.0) * vol;
  p.a1 = boundary_density(n, params, 1.0) * boundary_vol;
  return p;
}

double image_tail_bound(int n, const LameParameters& params, double t, double eps) {
  check_dim(n);
  params.validate();
  check_time(t);
  if (!(eps > 0.0)) fail(ErrorKind::InvalidArgument, "eps must be positive");
  // int_eps^inf e^{-x^2/(c t)} dx = sqrt(pi c t)/2 erfc(eps / sqrt(c t))
  return branch_sum(n, params, [&](double c) {
    const double s = std::sqrt(c * t);
    return std::pow(4.0 * pi * c * t, -0.5 * n) * 0.5 * std::sqrt(pi) * s * std::erfc(eps / s);
  });
}

double image_tail_bound_constant(int n, const LameParameters& params, double eps) {
  check_dim(n);
  params.validate();
  if (!(eps > 0.0)) fail(ErrorKind::InvalidArgument, "eps must be positive");
  // erfc(z) <= e^{-z^2} / (z sqrt(pi)) <= 1 / (z sqrt(pi)) with z = eps / sqrt(c t).
  return branch_sum(n, params, [&](double c) { return std::pow(4.0 * pi * c, -0.5 * n) * c / (2.0 * eps); });
}

double unit_ball_volume(int n) {
  check_dim(n);
  return std::pow(pi, 0.5 * n) / std::tgamma(0.5 * n + 1.0);
}

double weyl_coefficient(int n, const LameParameters& params, double vol) {
  check_dim(n);
  params.validate();
  if (!(vol > 0.0)) fail(ErrorKind::InvalidArgument, "volume must be positive");
  return vol / std::tgamma(0.5 * n + 1.0) * interior_density(n, params, 1.0);
}

}  // namespace nlspec
