#include "nlspec/inverse.hpp"

#include "nlspec/errors.hpp"

#include <cmath>
#include <sstream>

namespace nlspec {

GeometryEstimate geometry_from_fit(const CoefficientFit& fit, const LameParameters& params) {
  params.validate();
  const int n = fit.n;
  // The forward map is linear: a0 = vol * a0(vol = 1), a1 = boundary * a1(boundary = 1).
  const CoefficientPrediction unit = predict_coefficients(n, params, 1.0, 1.0);
  GeometryEstimate e;
  e.n = n;
  e.vol_hat = fit.a0_hat / unit.a0;
  e.boundary_vol_hat = fit.a1_hat / unit.a1;
  e.bc_sign = fit.sign;
  e.confidence = fit.residual_norm;
  e.fit = fit;
  return e;
}

GeometryEstimate estimate_geometry(const Spectrum& spectrum, const LameParameters& params, int n,
                                   const FitOptions& opts) {
  Spectrum blind = spectrum;
  blind.params = params;
  blind.domain = Domain(UnspecifiedDomain{n});
  blind.validate();
  GeometryEstimate e = geometry_from_fit(fit_spectrum(blind, opts), params);
  if (!(e.vol_hat > 0.0)) fail(ErrorKind::IllConditionedFit, "fitted volume is not positive");
  return e;
}

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::Ball: return "Ball";
    case Verdict::NotBall: return "NotBall";
    case Verdict::Inconclusive: return "Inconclusive";
  }
  return "Inconclusive";
}

double ball_isoperimetric_ratio(int n) {
  if (n < 1) fail(ErrorKind::InvalidArgument, "dimension must be >= 1");
  return n * std::pow(unit_ball_volume(n), 1.0 / n);
}

RigidityVerdict ball_rigidity_verdict(const GeometryEstimate& e, double tolerance) {
  if (!(tolerance > 0.0 && tolerance < 0.5)) fail(ErrorKind::InvalidArgument, "tolerance must lie in (0, 0.5)");
  if (!(e.vol_hat > 0.0) || !(e.boundary_vol_hat >= 0.0))
    fail(ErrorKind::InvalidArgument, "estimate needs positive volume and nonnegative boundary measure");
  RigidityVerdict r;
  r.tolerance = tolerance;
  r.ball_ratio = ball_isoperimetric_ratio(e.n);
  r.ratio = e.boundary_vol_hat / std::pow(e.vol_hat, (e.n - 1.0) / e.n);
  r.margin = r.ratio / r.ball_ratio - 1.0;
  if (r.ratio < r.ball_ratio * (1.0 - 2.0 * tolerance)) {
    std::ostringstream os;
    os << "isoperimetric ratio " << r.ratio << " lies below the ball value " << r.ball_ratio
       << " by more than the tolerance; the estimate is inconsistent";
    r.warning = os.str();
    r.verdict = Verdict::Inconclusive;
  } else if (r.ratio <= r.ball_ratio * (1.0 + tolerance)) {
    r.verdict = Verdict::Ball;
  } else if (r.ratio > r.ball_ratio * (1.0 + 2.0 * tolerance)) {
    r.verdict = Verdict::NotBall;
  } else {
    r.verdict = Verdict::Inconclusive;
  }
  return r;
}

}  // namespace nlspec
