#include "doctest.h"

#include "oracles.hpp"

#include "nlspec/errors.hpp"
#include "nlspec/geometry.hpp"

#include <cmath>
#include <numbers>
#include <random>

using namespace nlspec;

namespace {

Vector point(double a, double b) {
  Vector x(2);
  x << a, b;
  return x;
}

ErrorKind kind_of(const auto& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("no error thrown");
  return ErrorKind::InvalidArgument;
}

Matrix random_spd(int n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Matrix a(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) a(i, j) = u(rng);
  return a * a.transpose() + 0.3 * Matrix::Identity(n, n);
}

}  // namespace

TEST_SUITE("geometry") {
  TEST_CASE("lame parameter admissibility") {
    CHECK(LameParameters{1.0, 1.0}.strictly_admissible());
    CHECK(LameParameters{1.0, -1.0}.laplacian_limit());
    CHECK_FALSE(LameParameters{1.0, -1.0}.strictly_admissible());
    CHECK(kind_of([] { LameParameters{0.0, 1.0}.validate(); }) == ErrorKind::InvalidArgument);
    CHECK(kind_of([] { LameParameters{1.0, -1.5}.validate(); }) == ErrorKind::InvalidArgument);
    CHECK_NOTHROW(LameParameters{1.0, -1.0}.validate());
  }

  TEST_CASE("inverse metric") {
    CHECK(inverse_metric(MetricJet::euclidean(3)).isApprox(Matrix::Identity(3, 3), 0.0));
    Matrix d = Matrix::Zero(2, 2);
    d.diagonal() << 4.0, 1.0;
    const Matrix inv = inverse_metric(MetricJet::constant(d));
    CHECK(inv(0, 0) == doctest::Approx(0.25).epsilon(1e-15));
    CHECK(inv(1, 1) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(inv(0, 1) == 0.0);

    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 20; ++trial) {
      const Matrix g = random_spd(4, rng);
      const Matrix ginv = inverse_metric(MetricJet::constant(g));
      // Oracle: a dense LU solve against the identity.
      const Matrix lu = g.fullPivLu().solve(Matrix::Identity(4, 4));
      CHECK((g * ginv - Matrix::Identity(4, 4)).cwiseAbs().maxCoeff() < 1e-13);
      CHECK((ginv - lu).cwiseAbs().maxCoeff() < 1e-12 * lu.cwiseAbs().maxCoeff());
    }
  }

  TEST_CASE("invalid metrics are rejected") {
    Matrix g(2, 2);
    g << 1.0, 2.0, 2.0, 1.0;
    CHECK(kind_of([&] { inverse_metric(MetricJet::constant(g)); }) == ErrorKind::InvalidMetric);
    g << 1.0, 0.5, 0.0, 1.0;
    CHECK(kind_of([&] { MetricJet::constant(g).validate(); }) == ErrorKind::InvalidMetric);
    g << 1.0, 0.0, 0.0, std::nan("");
    CHECK(kind_of([&] { MetricJet::constant(g).validate(); }) == ErrorKind::InvalidMetric);
  }

  TEST_CASE("flat jets carry no connection or curvature") {
    for (int n = 1; n <= 4; ++n) {
      const MetricJet jet = MetricJet::euclidean(n);
      CHECK(christoffel(jet).max_abs() == 0.0);
      CHECK(christoffel_derivative(jet).max_abs() == 0.0);
      CHECK(ricci_mixed(jet).cwiseAbs().maxCoeff() == 0.0);
    }
    std::mt19937_64 rng(11);
    const MetricJet skew = MetricJet::constant(random_spd(3, rng));
    CHECK(christoffel(skew).max_abs() == 0.0);
    CHECK(ricci_mixed(skew).cwiseAbs().maxCoeff() == 0.0);
  }

  TEST_CASE("polar plane Christoffel symbols") {
    const double r = 2.0;
    const MetricJet jet = jet_from_field(polar_field(), point(r, 0.7));
    const Tensor3 gam = christoffel(jet);
    CHECK(gam(0, 1, 1) == doctest::Approx(-2.0).epsilon(1e-8));
    CHECK(gam(1, 0, 1) == doctest::Approx(0.5).epsilon(1e-8));
    CHECK(gam(1, 1, 0) == doctest::Approx(0.5).epsilon(1e-8));
    CHECK(std::abs(gam(0, 0, 0)) < 1e-10);
    CHECK(std::abs(gam(0, 0, 1)) < 1e-10);
    CHECK(std::abs(gam(1, 0, 0)) < 1e-10);
    CHECK(std::abs(gam(1, 1, 1)) < 1e-10);

    const Tensor4 dgam = christoffel_derivative(jet_from_field(polar_field(), point(1.0, 0.2)));
    CHECK(dgam(0, 1, 1, 0) == doctest::Approx(-1.0).epsilon(1e-7));  // d_r Gamma^r_{theta theta}
    CHECK(dgam(1, 0, 1, 0) == doctest::Approx(-1.0).epsilon(1e-7));  // d_r Gamma^theta_{r theta} = -1/r^2
    CHECK(ricci_mixed(jet).cwiseAbs().maxCoeff() < 1e-6);
  }

  TEST_CASE("round sphere connection and curvature") {
    const double theta = std::numbers::pi / 4.0;
    const MetricJet jet = jet_from_field(sphere_field(1.0), point(theta, 0.3));
    const Tensor3 gam = christoffel(jet);
    CHECK(gam(0, 1, 1) == doctest::Approx(-0.5).epsilon(1e-8));
    CHECK(gam(1, 0, 1) == doctest::Approx(1.0).epsilon(1e-8));  // cot(pi/4)

    const Tensor4 dgam = christoffel_derivative(jet);
    CHECK(std::abs(dgam(0, 1, 1, 0) + std::cos(2.0 * theta)) < 1e-7);
    CHECK(dgam(1, 0, 1, 0) == doctest::Approx(-2.0).epsilon(1e-7));  // -1/sin^2

    // Finite differences of christoffel over the field, independent of d2g.
    const double h = 1e-4;
    for (int m = 0; m < 2; ++m) {
      Vector xp = point(theta, 0.3), xm = xp;
      xp[m] += h;
      xm[m] -= h;
      const auto gp = oracle::christoffel_fd(sphere_field(1.0), xp, 1e-3);
      const auto gm = oracle::christoffel_fd(sphere_field(1.0), xm, 1e-3);
      for (int j = 0; j < 2; ++j)
        for (int l = 0; l < 2; ++l)
          for (int k = 0; k < 2; ++k) {
            const double fd = (gp[(j * 2 + l) * 2 + k] - gm[(j * 2 + l) * 2 + k]) / (2.0 * h);
            CHECK(std::abs(dgam(j, l, k, m) - fd) <= 1e-6 * std::max(1.0, std::abs(fd)));
          }
    }

    const Matrix ric = ricci_mixed(jet);
    CHECK((ric - Matrix::Identity(2, 2)).cwiseAbs().maxCoeff() < 1e-6);
    const Matrix ric2 = ricci_mixed(jet_from_field(sphere_field(2.0), point(theta, 0.3)));
    CHECK((ric2 - 0.25 * Matrix::Identity(2, 2)).cwiseAbs().maxCoeff() < 1e-6);
  }

  TEST_CASE("Ricci scales inversely with the metric scale") {
    for (double theta : {0.4, 1.0, 2.2}) {
      const Matrix base = ricci_mixed(jet_from_field(sphere_field(1.0), point(theta, 0.0)));
      for (double c : {0.5, 3.0}) {
        const Matrix scaled = ricci_mixed(jet_from_field(sphere_field(c), point(theta, 0.0)));
        CHECK((scaled - base / (c * c)).cwiseAbs().maxCoeff() < 1e-5 / (c * c));
      }
    }
  }

  TEST_CASE("lower-index symmetry of Christoffel symbols") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int n = 2; n <= 4; ++n) {
      MetricJet jet = MetricJet::constant(random_spd(n, rng));
      for (int j = 0; j < n; ++j)
        for (int k = j; k < n; ++k)
          for (int l = 0; l < n; ++l) {
            const double v = u(rng);
            jet.dg(j, k, l) = jet.dg(k, j, l) = v;
          }
      const Tensor3 gam = christoffel(jet);
      for (int j = 0; j < n; ++j)
        for (int l = 0; l < n; ++l)
          for (int k = 0; k < n; ++k) CHECK(gam(j, l, k) == gam(j, k, l));
    }
  }

  TEST_CASE("jets from fields") {
    MetricField constant{3, [](const Vector&) { return Matrix(2.0 * Matrix::Identity(3, 3)); }, {}, "const"};
    const MetricJet cj = jet_from_field(constant, Vector::Zero(3));
    CHECK(cj.dg.max_abs() < 1e-10);
    CHECK(cj.d2g.max_abs() < 1e-10);

    MetricField quad{2,
                     [](const Vector& x) {
                       Matrix g = Matrix::Identity(2, 2);
                       g(0, 0) += x[0] * x[0];
                       return g;
                     },
                     {},
                     "quadratic"};
    const MetricJet qj = jet_from_field(quad, point(0.3, -0.2));
    CHECK(qj.d2g(0, 0, 0, 0) == doctest::Approx(2.0).epsilon(1e-8));
    CHECK(qj.dg(0, 0, 0) == doctest::Approx(0.6).epsilon(1e-10));

    // Fourth-order accuracy: relative error within 10 h^4 of the closed form.
    for (double h : {1e-2, 3e-3, 1e-3}) {
      const Tensor3 gam = christoffel(jet_from_field(polar_field(), point(2.0, 0.1), h));
      CHECK(std::abs(gam(0, 1, 1) / -2.0 - 1.0) <= 10.0 * std::pow(h, 4) + 1e-12);
      CHECK(std::abs(gam(1, 0, 1) / 0.5 - 1.0) <= 10.0 * std::pow(h, 4) + 1e-12);
    }
  }

  TEST_CASE("stencils leaving the chart raise ChartError") {
    CHECK(kind_of([] { jet_from_field(polar_field(), point(1e-3, 0.0)); }) == ErrorKind::ChartError);
    CHECK(kind_of([] { jet_from_field(sphere_field(1.0), point(1e-3, 0.0)); }) == ErrorKind::ChartError);
  }
}
