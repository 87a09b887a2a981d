#include "doctest.h"

#include "oracles.hpp"

#include "nlspec/errors.hpp"
#include "nlspec/trace.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

using namespace nlspec;
using std::numbers::pi;

namespace {

ErrorKind kind_of(const auto& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("no error thrown");
  return ErrorKind::InvalidArgument;
}

std::vector<HeatTraceSample> model_samples(double t_lo, double t_hi, int count, const auto& value) {
  std::vector<HeatTraceSample> out;
  for (int i = 0; i < count; ++i) {
    const double t = t_lo * std::pow(t_hi / t_lo, static_cast<double>(i) / (count - 1));
    out.push_back({t, value(t), 0.0});
  }
  return out;
}

}  // namespace

TEST_SUITE("trace") {
  TEST_CASE("heat trace of the interval against the theta transformation") {
    const Spectrum s = interval_spectrum(pi, {1.0, 0.0}, BoundaryCondition::Dirichlet, 500);
    const HeatTraceSample h = heat_trace(s, 0.1);
    CHECK(std::abs(h.value - oracle::theta_dirichlet(2.0, pi, 0.1)) < 1e-12);
    CHECK(h.truncation_bound >= 0.0);
    CHECK(h.truncation_bound < 1e-100);

    const Spectrum nm = interval_spectrum(2.0, {1.0, 1.0}, BoundaryCondition::NeumannTraction, 800);
    for (double t : {1e-3, 1e-2, 0.3}) CHECK(std::abs(heat_trace(nm, t).value / oracle::theta_neumann(3.0, 2.0, t) - 1.0) < 1e-12);
  }

  TEST_CASE("empty spectra and monotonicity") {
    Spectrum empty;
    empty.domain = Domain(Interval{1.0});
    CHECK(heat_trace(empty, 0.5).value == 0.0);
    CHECK(heat_trace(empty, 0.5).truncation_bound == 0.0);
    const Spectrum s = disk_spectrum(1.0, {1.0, 1.0}, 30, 30);
    double last = INFINITY;
    for (double t = 0.02; t < 1.0; t *= 1.3) {
      const double v = heat_trace(s, t).value;
      CHECK(v < last);
      last = v;
    }
  }

  TEST_CASE("summation order does not matter") {
    const Spectrum s = disk_spectrum(1.0, {1.0, 1.0}, 40, 40);
    for (double t : {0.01, 0.05, 0.2}) {
      double up = 0.0, down = 0.0;
      const double ceiling = s.resolved_ceiling();
      for (std::size_t i = 0; i < s.eigenvalues.size(); ++i)
        if (s.eigenvalues[i] <= ceiling) up += s.multiplicities[i] * std::exp(-t * s.eigenvalues[i]);
      for (std::size_t i = s.eigenvalues.size(); i-- > 0;)
        if (s.eigenvalues[i] <= ceiling) down += s.multiplicities[i] * std::exp(-t * s.eigenvalues[i]);
      const double v = heat_trace(s, t).value;
      CHECK(std::abs(v - up) < 1e-13 * v);
      CHECK(std::abs(v - down) < 1e-13 * v);
    }
  }

  TEST_CASE("truncation dominated samples are refused") {
    const Spectrum s = interval_spectrum(1.0, {1.0, 0.0}, BoundaryCondition::Dirichlet, 10);
    CHECK(kind_of([&] { heat_trace(s, 1e-6); }) == ErrorKind::TruncationDominated);
    CHECK_NOTHROW(heat_trace(s, 0.05));
    FitOptions opts;
    opts.t_min = 1e-6;
    opts.t_max = 1e-2;
    CHECK(kind_of([&] { fit_spectrum(s, opts); }) == ErrorKind::TruncationDominated);
  }

  TEST_CASE("planted coefficients are recovered") {
    const double a0 = 0.1061033, a1 = 0.4449623;
    const auto samples = model_samples(1e-4, 1e-1, 32, [&](double t) { return a0 / t - a1 / std::sqrt(t) + 7.0; });
    const CoefficientFit fit = fit_coefficients(samples, 2);
    CHECK(std::abs(fit.a0_hat - a0) < 1e-10);
    CHECK(std::abs(fit.a1_hat - a1) < 1e-10);
    CHECK(std::abs(fit.nuisance - 7.0) < 1e-8);
    CHECK(fit.sign == -1);
    CHECK(fit.residual_norm < 1e-13);
    CHECK(fit.t_window.t_min == doctest::Approx(1e-4));
    CHECK(fit.t_window.t_max == doctest::Approx(1e-1));

    for (int n : {1, 3}) {
      const auto s3 = model_samples(1e-3, 1.0, 16, [&](double t) {
        return 2.0 * std::pow(t, -0.5 * n) + 0.7 * std::pow(t, -0.5 * (n - 1)) + 0.1 * std::pow(t, -0.5 * (n - 2));
      });
      const CoefficientFit f3 = fit_coefficients(s3, n);
      CHECK(std::abs(f3.a0_hat - 2.0) < 1e-10);
      CHECK(std::abs(f3.a1_hat - 0.7) < 1e-10);
      CHECK(f3.sign == 1);
    }
  }

  TEST_CASE("vector Laplacian theta trace on the unit square") {
    const auto samples = model_samples(1e-4, 0.02, 40, [](double t) {
      const double th = oracle::theta_dirichlet(1.0, 1.0, t);
      return 2.0 * th * th;
    });
    const CoefficientFit fit = fit_coefficients(samples, 2);
    CHECK(std::abs(fit.a0_hat / (2.0 / (4.0 * pi)) - 1.0) < 5e-3);
    CHECK(std::abs(fit.a1_hat / (2.0 / std::sqrt(4.0 * pi)) - 1.0) < 2e-2);
    CHECK(fit.sign == -1);
  }

  TEST_CASE("fit preconditions") {
    const auto good = model_samples(1e-3, 1e-1, 8, [](double t) { return 1.0 / t; });
    CHECK_NOTHROW(fit_coefficients(good, 2));
    const auto few = model_samples(1e-3, 1e-1, 7, [](double t) { return 1.0 / t; });
    CHECK(kind_of([&] { fit_coefficients(few, 2); }) == ErrorKind::InvalidArgument);
    const auto narrow = model_samples(1e-3, 5e-3, 20, [](double t) { return 1.0 / t; });
    CHECK(kind_of([&] { fit_coefficients(narrow, 2); }) == ErrorKind::InvalidArgument);
    // Two distinct times only: the three-column design is rank deficient.
    std::vector<HeatTraceSample> degenerate;
    for (int i = 0; i < 8; ++i) {
      const double t = i % 2 ? 1e-2 : 1e-3;
      degenerate.push_back({t, 1.0 / t, 0.0});
    }
    CHECK(kind_of([&] { fit_coefficients(degenerate, 2); }) == ErrorKind::IllConditionedFit);
  }

  TEST_CASE("interval spectra carry the one-dimensional two-term law") {
    for (BoundaryCondition bc : {BoundaryCondition::Dirichlet, BoundaryCondition::NeumannTraction}) {
      const Spectrum s = interval_spectrum(pi, {1.0, 0.0}, bc, 500);
      const CoefficientFit fit = fit_spectrum(s);
      REQUIRE(fit.prediction.has_value());
      CHECK(fit.prediction->a0 == doctest::Approx(pi / std::sqrt(8.0 * pi)).epsilon(1e-14));
      CHECK(fit.prediction->a1 == doctest::Approx(0.5).epsilon(1e-14));
      // The truncated sums carry up to kTruncationTolerance of relative bias.
      CHECK(std::abs(fit.a0_hat / fit.prediction->a0 - 1.0) < kTruncationTolerance);
      CHECK(std::abs(fit.a1_hat / fit.prediction->a1 - 1.0) < 10.0 * kTruncationTolerance);
      CHECK(fit.sign == boundary_sign(bc));
      CHECK(fit.t_window.t_min < fit.t_window.t_max);
    }
  }

  TEST_CASE("default window") {
    const Spectrum s = disk_spectrum(1.0, {1.0, 1.0}, 40, 40);
    const TraceWindow w = default_window(s);
    CHECK(w.t_max == doctest::Approx(0.5 / s.eigenvalues.front()).epsilon(1e-14));
    CHECK(w.t_min < w.t_max / 10.0);
    const HeatTraceSample at_min = heat_trace(s, w.t_min);
    CHECK(at_min.truncation_bound <= kTruncationTolerance * at_min.value * (1.0 + 1e-9));
    const auto samples = sample_heat_trace(s, w, 12);
    REQUIRE(samples.size() == 12);
    CHECK(samples.front().t == doctest::Approx(w.t_min));
    CHECK(samples.back().t == doctest::Approx(w.t_max));
  }

  TEST_CASE("counting function") {
    const Spectrum s = interval_spectrum(pi, {1.0, -1.0}, BoundaryCondition::Dirichlet, 50);
    CHECK(counting_function(s, 0.5) == 0);
    CHECK(counting_function(s, 10.0) == 3);
    CHECK(counting_function(s, 9.0) == 3);  // right-continuous
    CHECK(counting_function(s, 8.999) == 2);
    const Spectrum d = disk_spectrum(1.0, {1.0, 1.0}, 20, 20);
    const std::vector<double> all = d.expanded();
    long last = 0;
    for (std::size_t k = 0; k < all.size(); ++k) {
      const long nk = counting_function(d, all[k]);
      CHECK(nk >= static_cast<long>(k + 1));
      CHECK(nk >= last);
      last = nk;
    }
  }

  TEST_CASE("Weyl ratio") {
    CHECK(std::abs(weyl_check(interval_spectrum(2.0, {1.0, 0.5}, BoundaryCondition::Dirichlet, 1000)) - 1.0) < 0.02);
    const Spectrum d = disk_spectrum(1.0, {1.0, 1.0}, 100, 10000);
    REQUIRE(d.count() >= 200);
    CHECK(std::abs(weyl_check(d) - 1.0) < 0.05);
    CHECK(kind_of([] { weyl_check(interval_spectrum(1.0, {1.0, 0.0}, BoundaryCondition::Dirichlet, 50)); }) ==
          ErrorKind::InvalidArgument);
  }
}

// Weyl ratio of the discretised square over its resolved (lowest) third.
TEST_SUITE("fd_weyl") {
  TEST_CASE("vector Laplacian limit on the unit square") {
    const Spectrum fd = rectangle_fd_spectrum(1.0, 1.0, {1.0, -1.0}, BoundaryCondition::Dirichlet, 64);
    CHECK(std::abs(weyl_check(fd) - 1.0) < 0.05);
  }
}
