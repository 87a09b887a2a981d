#pragma once

#include "nlspec/spectra.hpp"
#include "nlspec/trace.hpp"

#include <string>

namespace nlspec {

struct GeometryEstimate {
  double vol_hat = 0.0;
  double boundary_vol_hat = 0.0;
  int n = 0;
  int bc_sign = -1;         ///< fitted sign of the boundary term
  double confidence = 0.0;  ///< residual norm of the underlying fit
  CoefficientFit fit;
};

/// Volume and boundary measure from the fitted coefficients:
///   vol = a0 / [(n-1)/(4 pi mu)^{n/2} + 1/(4 pi (2mu+lambda))^{n/2}],
///   |boundary| = 4 a1 / [(n-1)/(4 pi mu)^{(n-1)/2} + 1/(4 pi (2mu+lambda))^{(n-1)/2}].
/// The domain metadata of the spectrum is ignored: only eigenvalues, params and n are used.
GeometryEstimate estimate_geometry(const Spectrum& spectrum, const LameParameters& params, int n,
                                   const FitOptions& opts = {});

/// Same inversion applied to already fitted coefficients.
GeometryEstimate geometry_from_fit(const CoefficientFit& fit, const LameParameters& params);

enum class Verdict { Ball, NotBall, Inconclusive };
std::string to_string(Verdict v);

struct RigidityVerdict {
  double ratio = 0.0;       ///< |boundary| / |domain|^{(n-1)/n}
  double ball_ratio = 0.0;  ///< the same for the unit ball
  Verdict verdict = Verdict::Inconclusive;
  double margin = 0.0;  ///< ratio / ball_ratio - 1
  double tolerance = 0.0;
  std::string warning;  ///< set when the estimate violates the isoperimetric floor
};

inline constexpr double kDefaultVerdictTolerance = 0.05;

/// |dB_1| / |B_1|^{(n-1)/n} = n omega_n^{1/n}; 2 sqrt(pi) in the plane.
double ball_isoperimetric_ratio(int n);

/// Ball when ratio <= ball_ratio (1 + tol), NotBall when ratio > ball_ratio (1 + 2 tol),
/// Inconclusive in between. A ratio below ball_ratio (1 - 2 tol) cannot come from a domain and
/// is reported as Inconclusive with a warning.
RigidityVerdict ball_rigidity_verdict(const GeometryEstimate& estimate, double tolerance = kDefaultVerdictTolerance);

}  // namespace nlspec
