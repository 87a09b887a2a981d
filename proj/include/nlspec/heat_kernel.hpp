#pragma once

#include "nlspec/geometry.hpp"

namespace nlspec {

enum class BoundaryCondition { Dirichlet, NeumannTraction };

/// -1 for Dirichlet, +1 for traction-free Neumann: the sign of the boundary term.
int boundary_sign(BoundaryCondition bc);

/// Heat-trace densities at time t: per unit volume and per unit boundary area.
struct HeatDensity {
  double t = 0.0;
  double interior = 0.0;
  double boundary = 0.0;
  int bc_sign = -1;
};

/// Two-term small-time heat-trace coefficients of a domain:
///   Tr e^{-tP} ~ a0 t^{-n/2} + bc_sign * a1 t^{-(n-1)/2}.
struct CoefficientPrediction {
  double a0 = 0.0;
  double a1 = 0.0;  ///< unsigned magnitude
  int n = 0;
  double vol = 0.0;
  double boundary_vol = 0.0;
  LameParameters params;

  /// Model value a0 t^{-n/2} + sign a1 t^{-(n-1)/2}.
  double model(double t, int bc_sign) const;
};

/// (n-1) e^{-t mu Q} + e^{-t (2mu+lambda) Q}: the residue of e^{-t tau} Tr a2^{-1}.
double residue_heat_symbol(int n, const LameParameters& params, double q, double t);

/// Same quantity by trapezoidal quadrature of (1/2 pi i) \oint e^{-t tau} Tr a2^{-1} d tau
/// on a circle enclosing both characteristic values.
double contour_heat_symbol(int n, const LameParameters& params, double q, double t, int nodes = 4096);

/// (n-1)/(4 pi mu t)^{n/2} + 1/(4 pi (2mu+lambda) t)^{n/2}.
double interior_density(int n, const LameParameters& params, double t);

/// Image-term trace density at depth xn below a flat boundary:
/// (n-1)/(4 pi mu t)^{n/2} e^{-xn^2/(mu t)} + 1/(4 pi (2mu+lambda) t)^{n/2} e^{-xn^2/((2mu+lambda) t)}.
double boundary_layer_density(int n, const LameParameters& params, double t, double xn);

/// Closed form of the depth integral of boundary_layer_density over [0, inf):
/// 1/4 [(n-1)/(4 pi mu t)^{(n-1)/2} + 1/(4 pi (2mu+lambda) t)^{(n-1)/2}].
double boundary_density(int n, const LameParameters& params, double t);

HeatDensity heat_density(int n, const LameParameters& params, double t, int bc_sign);

CoefficientPrediction predict_coefficients(int n, const LameParameters& params, double vol, double boundary_vol);

/// Depth integral of boundary_layer_density over [eps, inf), in closed form via erfc.
/// The discarded image layer is bounded by image_tail_bound_constant(...) * t^{1-n/2}.
double image_tail_bound(int n, const LameParameters& params, double t, double eps);

/// Constant C with image_tail_bound(n, params, t, eps) <= C t^{1-n/2} for all t > 0.
double image_tail_bound_constant(int n, const LameParameters& params, double eps);

/// Weyl constant C_W: N(eta) ~ C_W eta^{n/2} with
/// C_W = vol / Gamma(n/2 + 1) [(n-1)/(4 pi mu)^{n/2} + 1/(4 pi (2mu+lambda))^{n/2}].
double weyl_coefficient(int n, const LameParameters& params, double vol);

/// Volume of the unit ball in R^n.
double unit_ball_volume(int n);

}  // namespace nlspec
