#include "nlspec/trace.hpp"

#include "nlspec/errors.hpp"

#include <Eigen/Dense>
#include <boost/math/special_functions/gamma.hpp>

#include <algorithm>
#include <cmath>
#include <sstream>

namespace nlspec {

namespace {

constexpr double kZeroModeFraction = 1e-8;  // relative to the ceiling, below this counts as a rigid mode
constexpr int kWindowBisections = 200;

double pairwise_sum(const double* x, std::size_t n) {
  if (n <= 8) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += x[i];
    return s;
  }
  const std::size_t half = n / 2;
  return pairwise_sum(x, half) + pairwise_sum(x + half, n - half);
}

// Index one past the last eigenvalue at or below the resolved ceiling.
std::size_t resolved_end(const Spectrum& s) {
  const double ceiling = s.resolved_ceiling();
  return static_cast<std::size_t>(std::upper_bound(s.eigenvalues.begin(), s.eigenvalues.end(), ceiling) -
                                  s.eigenvalues.begin());
}

double tail_bound(int n, double weyl, double t, double ceiling) {
  const double a = 0.5 * n;
  return a * weyl * std::pow(t, -a) * boost::math::tgamma(a, t * ceiling);
}

double first_positive(const Spectrum& s) {
  const double floor = kZeroModeFraction * s.resolved_ceiling();
  for (double v : s.eigenvalues)
    if (v > floor) return v;
  fail(ErrorKind::InvalidArgument, "spectrum has no positive eigenvalue");
}

}  // namespace

double weyl_constant_for(const Spectrum& s) {
  const int n = s.dim();
  if (s.domain.has_geometry()) return weyl_coefficient(n, s.params, s.domain.volume());
  const double ceiling = s.resolved_ceiling();
  if (!(ceiling > 0.0)) fail(ErrorKind::InvalidArgument, "cannot estimate a Weyl constant from this spectrum");
  return static_cast<double>(counting_function(s, ceiling)) / std::pow(ceiling, 0.5 * n);
}

HeatTraceSample heat_trace(const Spectrum& s, double t) {
  if (!(t > 0.0) || !std::isfinite(t)) fail(ErrorKind::InvalidArgument, "t must be positive and finite");
  HeatTraceSample out;
  out.t = t;
  if (s.empty()) return out;

  const std::size_t end = resolved_end(s);
  std::vector<double> terms(end);
  for (std::size_t i = 0; i < end; ++i) terms[i] = s.multiplicities[i] * std::exp(-t * s.eigenvalues[i]);
  out.value = pairwise_sum(terms.data(), terms.size());
  out.truncation_bound = tail_bound(s.dim(), weyl_constant_for(s), t, s.resolved_ceiling());
  if (out.truncation_bound > kTruncationTolerance * out.value) {
    std::ostringstream os;
    os << "at t=" << t << " the omitted eigenvalues may contribute " << out.truncation_bound << " against a trace of "
       << out.value << "; increase the eigenvalue count or t_min";
    fail(ErrorKind::TruncationDominated, os.str());
  }
  return out;
}

CoefficientFit fit_coefficients(const std::vector<HeatTraceSample>& samples, int n) {
  if (n < 1) fail(ErrorKind::InvalidArgument, "dimension must be >= 1");
  if (static_cast<int>(samples.size()) < kMinFitSamples)
    fail(ErrorKind::InvalidArgument, "need at least " + std::to_string(kMinFitSamples) + " samples");
  double t_lo = samples.front().t, t_hi = samples.front().t;
  for (const auto& s : samples) {
    if (!(s.t > 0.0) || !(s.value > 0.0)) fail(ErrorKind::InvalidArgument, "samples need positive t and value");
    t_lo = std::min(t_lo, s.t);
    t_hi = std::max(t_hi, s.t);
  }
  if (t_hi < 10.0 * t_lo * (1.0 - 1e-12)) fail(ErrorKind::InvalidArgument, "samples must span a decade in t");

  const auto m = static_cast<Eigen::Index>(samples.size());
  Eigen::MatrixXd design(m, 3);
  Eigen::VectorXd rhs = Eigen::VectorXd::Ones(m);
  for (Eigen::Index i = 0; i < m; ++i) {
    const double t = samples[i].t, w = 1.0 / samples[i].value;
    for (int j = 0; j < 3; ++j) design(i, j) = std::pow(t, -0.5 * (n - j)) * w;
  }

  Eigen::MatrixXd scaled = design;
  for (int j = 0; j < 3; ++j) scaled.col(j).normalize();
  const Eigen::VectorXd sv = Eigen::JacobiSVD<Eigen::MatrixXd>(scaled).singularValues();
  const double condition = sv(sv.size() - 1) > 0.0 ? sv(0) / sv(sv.size() - 1) : INFINITY;
  if (!(condition <= kMaxFitCondition)) {
    std::ostringstream os;
    os << "design condition number " << condition << " exceeds " << kMaxFitCondition << "; widen the t-window";
    fail(ErrorKind::IllConditionedFit, os.str());
  }

  const Eigen::VectorXd c = design.colPivHouseholderQr().solve(rhs);
  CoefficientFit fit;
  fit.n = n;
  fit.a0_hat = c(0);
  fit.a1_hat = std::abs(c(1));
  fit.sign = c(1) < 0.0 ? -1 : 1;
  fit.nuisance = c(2);
  fit.t_window = {t_lo, t_hi};
  fit.residual_norm = (design * c - rhs).norm() / std::sqrt(static_cast<double>(m));
  fit.condition = condition;
  return fit;
}

TraceWindow default_window(const Spectrum& s) {
  if (s.empty()) fail(ErrorKind::InvalidArgument, "empty spectrum");
  TraceWindow w;
  w.t_max = 0.5 / first_positive(s);

  const int n = s.dim();
  const double weyl = weyl_constant_for(s), ceiling = s.resolved_ceiling();
  const std::size_t end = resolved_end(s);
  auto acceptable = [&](double t) {
    double value = 0.0;
    for (std::size_t i = 0; i < end; ++i) value += s.multiplicities[i] * std::exp(-t * s.eigenvalues[i]);
    return tail_bound(n, weyl, t, ceiling) <= kTruncationTolerance * value;
  };
  if (!acceptable(w.t_max)) {
    fail(ErrorKind::TruncationDominated, "even t_max=" + std::to_string(w.t_max) +
                                             " is truncation dominated; the spectrum is too short");
  }
  double lo = w.t_max * 1e-9, hi = w.t_max;
  if (acceptable(lo)) {
    w.t_min = lo;
    return w;
  }
  for (int it = 0; it < kWindowBisections && hi / lo > 1.0 + 1e-6; ++it) {
    const double mid = std::sqrt(lo * hi);
    (acceptable(mid) ? hi : lo) = mid;
  }
  w.t_min = hi;
  return w;
}

std::vector<HeatTraceSample> sample_heat_trace(const Spectrum& s, const TraceWindow& w, int count) {
  if (count < 2) fail(ErrorKind::InvalidArgument, "need at least two samples");
  if (!(w.t_min > 0.0 && w.t_max > w.t_min)) fail(ErrorKind::InvalidArgument, "window needs 0 < t_min < t_max");
  std::vector<HeatTraceSample> out;
  out.reserve(static_cast<std::size_t>(count));
  const double ratio = w.t_max / w.t_min;
  for (int k = 0; k < count; ++k) {
    const double t = k == count - 1 ? w.t_max : w.t_min * std::pow(ratio, static_cast<double>(k) / (count - 1));
    out.push_back(heat_trace(s, t));
  }
  return out;
}

CoefficientFit fit_spectrum(const Spectrum& s, const FitOptions& opts) {
  s.validate();
  TraceWindow w;
  if (!opts.t_min || !opts.t_max) w = default_window(s);
  if (opts.t_min) w.t_min = *opts.t_min;
  if (opts.t_max) w.t_max = *opts.t_max;
  CoefficientFit fit = fit_coefficients(sample_heat_trace(s, w, opts.samples), s.dim());
  if (s.domain.has_geometry())
    fit.prediction = predict_coefficients(s.dim(), s.params, s.domain.volume(), s.domain.boundary_volume());
  return fit;
}

long counting_function(const Spectrum& s, double eta) {
  if (!(eta >= 0.0)) fail(ErrorKind::InvalidArgument, "eta must be nonnegative");
  long c = 0;
  for (std::size_t i = 0; i < s.eigenvalues.size() && s.eigenvalues[i] <= eta; ++i) c += s.multiplicities[i];
  return c;
}

double weyl_check(const Spectrum& s) {
  const std::size_t end = resolved_end(s);
  std::vector<double> taus;
  for (std::size_t i = 0; i < end; ++i) taus.insert(taus.end(), s.multiplicities[i], s.eigenvalues[i]);
  if (static_cast<long>(taus.size()) < kMinWeylCount)
    fail(ErrorKind::InvalidArgument, "Weyl check needs at least " + std::to_string(kMinWeylCount) + " eigenvalues");
  if (!s.domain.has_geometry()) fail(ErrorKind::InvalidArgument, "Weyl check needs the domain volume");
  const double weyl = weyl_constant_for(s);
  const double half_n = 0.5 * s.dim();
  std::vector<double> ratios;
  for (std::size_t k = taus.size() / 2; k < taus.size(); ++k)
  {
    const auto count = std::upper_bound(taus.begin(), taus.end(), taus[k]) - taus.begin();
    ratios.push_back(static_cast<double>(count) / (weyl * std::pow(taus[k], half_n)));
  }
  const auto mid = ratios.begin() + static_cast<std::ptrdiff_t>(ratios.size() / 2);
  std::nth_element(ratios.begin(), mid, ratios.end());
  if (ratios.size() % 2 == 1) return *mid;
  const double upper = *mid;
  const double lower = *std::max_element(ratios.begin(), mid);
  return 0.5 * (lower + upper);
}

}  // namespace nlspec
