#include "nlspec/bessel.hpp"
#include "nlspec/errors.hpp"
#include "nlspec/spectra.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace nlspec {

namespace {

constexpr double kResidualLimit = 1e-6;
constexpr int kDipSubdivisions = 16;

struct Root {
  double b;
  int order;
};

// Bisection on a sign change of f in [lo, hi] down to relative width rel_tol.
template <class F>
double bisect(F&& f, double lo, double hi, double flo, double rel_tol) {
  for (int it = 0; it < 200 && hi - lo > rel_tol * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double fm = f(mid);
    if (fm == 0.0) return mid;
    if ((fm < 0.0) == (flo < 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  const double root = 0.5 * (lo + hi);
  if (std::abs(f(root)) > kResidualLimit) {
    std::ostringstream os;
    os << "sign change near b=" << root << " is not a root (residual " << f(root) << ")";
    fail(ErrorKind::RootBracketFailure, os.str());
  }
  return root;
}

// Roots of f on (lo, hi] by a uniform sign scan. Interior points where |f| dips without a
// sign change get a finer re-scan of both neighbouring intervals, which may hide a close pair.
template <class F>
std::vector<double> scan_roots(F&& f, double lo, double hi, double step, double rel_tol, std::size_t limit) {
  std::vector<double> roots;
  const int points = std::max(2, static_cast<int>(std::ceil((hi - lo) / step)));
  const double h = (hi - lo) / points;
  std::vector<double> xs(points + 1), fs(points + 1);
  for (int i = 0; i <= points; ++i) {
    xs[i] = lo + i * h;
    fs[i] = f(xs[i]);
  }
  auto bracket = [&](double a, double b, double fa, double fb) {
    if (fa == 0.0) return;  // counted as the right end of the previous interval
    if (fb == 0.0) {
      roots.push_back(b);
    } else if ((fa < 0.0) != (fb < 0.0)) {
      roots.push_back(bisect(f, a, b, fa, 0.5 * rel_tol));
    }
  };
  auto same_sign = [](double x, double y) { return x != 0.0 && y != 0.0 && (x < 0.0) == (y < 0.0); };

  for (int i = 0; i < points; ++i) {
    bracket(xs[i], xs[i + 1], fs[i], fs[i + 1]);
    // Stop early once the limit is safely exceeded; dips below can only add roots.
    if (roots.size() > 2 * limit) break;
  }
  for (int i = 1; i < points; ++i) {
    if (!roots.empty() && roots.size() >= limit && xs[i - 1] > roots.back()) break;
    const bool dip = std::abs(fs[i]) < std::abs(fs[i - 1]) && std::abs(fs[i]) < std::abs(fs[i + 1]) &&
                     same_sign(fs[i], fs[i - 1]) && same_sign(fs[i], fs[i + 1]);
    if (!dip) continue;
    double a = xs[i - 1], fa = fs[i - 1];
    for (int s = 1; s <= 2 * kDipSubdivisions; ++s) {
      const double b = xs[i - 1] + h * s / kDipSubdivisions;
      const double fb = s == kDipSubdivisions ? fs[i] : (s == 2 * kDipSubdivisions ? fs[i + 1] : f(b));
      bracket(a, b, fa, fb);
      a = b;
      fa = fb;
    }
  }
  std::sort(roots.begin(), roots.end());
  if (roots.size() > limit) roots.resize(limit);
  return roots;
}

}  // namespace

double disk_determinant(int m, double tau, double radius, const LameParameters& params) {
  if (m < 0) fail(ErrorKind::InvalidArgument, "angular order must be nonnegative");
  if (!(tau > 0.0)) fail(ErrorKind::InvalidArgument, "tau must be positive");
  const double a = radius * std::sqrt(tau / params.pressure_modulus());
  const double b = radius * std::sqrt(tau / params.mu);
  const auto ja = bessel_j_sequence(m + 1, a);
  const auto jb = bessel_j_sequence(m + 1, b);
  auto deriv = [m](const std::vector<double>& j) { return m == 0 ? -j[1] : 0.5 * (j[m - 1] - j[m + 1]); };
  const double dja = deriv(ja), djb = deriv(jb);
  const double na = std::hypot(a * dja, m * ja[m], ja[m]);
  const double nb = std::hypot(b * djb, m * jb[m], jb[m]);
  return (a * b * dja * djb - static_cast<double>(m) * m * ja[m] * jb[m]) / (na * nb);
}

Spectrum disk_spectrum(double radius, const LameParameters& params, int m_max, int k_max, const DiskSolverOptions& opts) {
  params.validate();
  if (!(radius > 0.0)) fail(ErrorKind::InvalidArgument, "disk radius must be positive");
  if (m_max < 1 || k_max < 1) fail(ErrorKind::InvalidArgument, "m_max and k_max must be >= 1");
  if (opts.scan_points_per_pi < 4) fail(ErrorKind::InvalidArgument, "scan resolution too coarse");

  // Work in b = R sqrt(tau / mu); the pressure wavenumber is a = kappa b.
  const double kappa = std::sqrt(params.mu / params.pressure_modulus());
  const double step = std::numbers::pi / opts.scan_points_per_pi;
  double b_cut = m_max + 1.0;
  const auto limit = static_cast<std::size_t>(k_max);

  std::vector<Root> roots;
  auto keep = [&](const std::vector<double>& found, int order) {
    if (found.size() >= limit) b_cut = std::min(b_cut, found[limit - 1]);
    for (double b : found) roots.push_back({b, order});
  };

  // m = 0 decouples: radial J_1(a) = 0 and torsional J_1(b) = 0.
  const double j1_lo = 1.0;  // first zero of J_1 is 3.83
  keep(scan_roots([&](double b) { return bessel_j(1, kappa * b); }, j1_lo, b_cut, step,
                  opts.rel_tol, limit),
       0);
  keep(scan_roots([&](double b) { return bessel_j(1, b); }, j1_lo, b_cut, step, opts.rel_tol, limit), 0);

  for (int m = 1; m <= m_max; ++m) {
    // Any order-m root has b > j'_{m,1} > m.
    const double lo = std::max(0.5, m - 1.0);
    if (lo >= b_cut) break;
    auto det = [&](double b) { return disk_determinant(m, params.mu * b * b / (radius * radius), radius, params); };
    keep(scan_roots(det, lo, b_cut, step, opts.rel_tol, limit), m);
  }

  std::sort(roots.begin(), roots.end(), [](const Root& x, const Root& y) { return x.b < y.b; });
  Spectrum s;
  s.domain = Domain(Disk{radius});
  s.bc = BoundaryCondition::Dirichlet;
  s.params = params;
  s.method = SolverMethod::BesselRoots;
  for (const Root& r : roots) {
    if (r.b > b_cut) break;
    s.eigenvalues.push_back(params.mu * r.b * r.b / (radius * radius));
    s.multiplicities.push_back(r.order == 0 ? 1 : 2);
  }
  return s;
}

}  // namespace nlspec
