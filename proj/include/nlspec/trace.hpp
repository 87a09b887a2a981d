#pragma once

#include "nlspec/heat_kernel.hpp"
#include "nlspec/spectra.hpp"

#include <optional>
#include <vector>

namespace nlspec {

struct HeatTraceSample {
  double t = 0.0;
  double value = 0.0;             ///< sum of multiplicity * exp(-t tau) over the resolved eigenvalues
  double truncation_bound = 0.0;  ///< Weyl-law estimate of the omitted tail
};

/// Largest admissible truncation_bound / value.
inline constexpr double kTruncationTolerance = 1e-3;

/// Weyl constant used for truncation estimates: from the domain volume when known,
/// otherwise the empirical N(T) / T^{n/2} at the resolved ceiling T.
double weyl_constant_for(const Spectrum& spectrum);

/// Heat trace at t, summed pairwise in ascending order over eigenvalues up to the
/// resolved ceiling T. The omitted part is bounded by
///   int_T^inf e^{-t eta} (n/2) C_W eta^{n/2-1} d eta = (n/2) C_W t^{-n/2} Gamma(n/2, t T).
/// Throws TruncationDominated when that exceeds kTruncationTolerance * value.
/// An empty spectrum has nothing to truncate and yields value 0 and bound 0.
HeatTraceSample heat_trace(const Spectrum& spectrum, double t);

struct TraceWindow {
  double t_min = 0.0;
  double t_max = 0.0;
};

/// Fitted two-term coefficients.
struct CoefficientFit {
  double a0_hat = 0.0;
  double a1_hat = 0.0;    ///< magnitude of the t^{-(n-1)/2} coefficient
  int sign = -1;          ///< sign of that coefficient
  double nuisance = 0.0;  ///< t^{-(n-2)/2} coefficient, reported only
  TraceWindow t_window;
  double residual_norm = 0.0;  ///< RMS relative residual
  double condition = 0.0;      ///< of the column-scaled weighted design
  int n = 0;
  std::optional<CoefficientPrediction> prediction;
};

inline constexpr double kMaxFitCondition = 1e12;
inline constexpr int kMinFitSamples = 8;

/// Relative-error least squares of the samples against
/// a0 t^{-n/2} + c1 t^{-(n-1)/2} + c2 t^{-(n-2)/2}, solved by column-pivoted QR.
/// Requires kMinFitSamples samples spanning a factor of 10 in t.
CoefficientFit fit_coefficients(const std::vector<HeatTraceSample>& samples, int n);

/// Default window: t_max = 0.5 / tau_1 (first positive eigenvalue), t_min the smallest t whose
/// truncation bound is within kTruncationTolerance of the trace.
TraceWindow default_window(const Spectrum& spectrum);

/// Logarithmically spaced samples over the window (endpoints included).
std::vector<HeatTraceSample> sample_heat_trace(const Spectrum& spectrum, const TraceWindow& window, int count);

struct FitOptions {
  std::optional<double> t_min;
  std::optional<double> t_max;
  int samples = 32;
};

/// Samples, fits, and attaches the prediction when the domain geometry is known.
CoefficientFit fit_spectrum(const Spectrum& spectrum, const FitOptions& opts = {});

/// Number of eigenvalues <= eta, with multiplicity.
long counting_function(const Spectrum& spectrum, double eta);

/// Median of N(tau_k) / (C_W tau_k^{n/2}) over the upper half of the resolved spectrum
/// (eigenvalues listed with multiplicity). Needs at least 200 eigenvalues and a known volume.
double weyl_check(const Spectrum& spectrum);

inline constexpr long kMinWeylCount = 200;

}  // namespace nlspec
