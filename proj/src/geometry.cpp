#include "nlspec/geometry.hpp"

#include "nlspec/errors.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace nlspec {

namespace {

// mu + lambda is compared against this fraction of mu when deciding the
// Laplacian limit, so that lambda = -mu typed in decimal still counts.
constexpr double kLimitTolerance = 1e-14;

}  // namespace

bool LameParameters::strictly_admissible() const {
  return mu > 0.0 && mu + lambda > kLimitTolerance * mu;
}

bool LameParameters::laplacian_limit() const {
  return mu > 0.0 && std::abs(mu + lambda) <= kLimitTolerance * mu;
}

void LameParameters::validate() const {
  if (!std::isfinite(mu) || !std::isfinite(lambda)) fail(ErrorKind::InvalidArgument, "Lame parameters must be finite");
  if (!(mu > 0.0)) fail(ErrorKind::InvalidArgument, "shear modulus mu must be positive");
  if (!(strictly_admissible() || laplacian_limit())) {
    std::ostringstream os;
    os << "mu + lambda must be >= 0 (mu=" << mu << ", lambda=" << lambda << ")";
    fail(ErrorKind::InvalidArgument, os.str());
  }
}

double Tensor3::max_abs() const {
  double m = 0.0;
  for (double v : data_) m = std::max(m, std::abs(v));
  return m;
}

double Tensor4::max_abs() const {
  double m = 0.0;
  for (double v : data_) m = std::max(m, std::abs(v));
  return m;
}

MetricJet MetricJet::constant(const Matrix& g) {
  const int n = static_cast<int>(g.rows());
  return MetricJet{g, Tensor3(n), Tensor4(n)};
}

void MetricJet::validate() const {
  const int n = dim();
  if (n < 1 || g.cols() != n) fail(ErrorKind::InvalidMetric, "metric must be a nonempty square matrix");
  if (dg.dim() != n || d2g.dim() != n) fail(ErrorKind::InvalidMetric, "jet derivative arrays do not match dimension");
  if (!g.allFinite()) fail(ErrorKind::InvalidMetric, "metric has non-finite entries");
  const double scale = std::max(1.0, g.cwiseAbs().maxCoeff());
  if ((g - g.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale) fail(ErrorKind::InvalidMetric, "metric is not symmetric");
  Eigen::LLT<Matrix> llt(g);
  if (llt.info() != Eigen::Success) fail(ErrorKind::InvalidMetric, "metric is not positive definite");
}

Matrix inverse_metric(const MetricJet& jet) {
  jet.validate();
  const int n = jet.dim();
  Eigen::LLT<Matrix> llt(jet.g);
  Matrix inv = llt.solve(Matrix::Identity(n, n));
  return 0.5 * (inv + inv.transpose());
}

Tensor3 christoffel(const MetricJet& jet) {
  const Matrix ginv = inverse_metric(jet);
  const int n = jet.dim();
  const Tensor3& dg = jet.dg;
  Tensor3 gamma(n);
  for (int l = 0; l < n; ++l) {
    for (int k = l; k < n; ++k) {
      for (int j = 0; j < n; ++j) {
        double s = 0.0;
        for (int m = 0; m < n; ++m) s += ginv(j, m) * (dg(k, m, l) + dg(l, m, k) - dg(l, k, m));
        gamma(j, l, k) = 0.5 * s;
        gamma(j, k, l) = 0.5 * s;
      }
    }
  }
  return gamma;
}

Tensor4 christoffel_derivative(const MetricJet& jet) {
  const Matrix ginv = inverse_metric(jet);
  const int n = jet.dim();
  const Tensor3& dg = jet.dg;
  const Tensor4& d2g = jet.d2g;

  // First-kind symbols C(l, k, a) = 1/2 (d_l g_ka + d_k g_la - d_a g_lk) and their derivatives.
  Tensor3 first(n);
  Tensor4 dfirst(n);
  for (int l = 0; l < n; ++l)
    for (int k = 0; k < n; ++k)
      for (int a = 0; a < n; ++a) {
        first(l, k, a) = 0.5 * (dg(k, a, l) + dg(l, a, k) - dg(l, k, a));
        for (int m = 0; m < n; ++m)
          dfirst(l, k, a, m) = 0.5 * (d2g(k, a, l, m) + d2g(l, a, k, m) - d2g(l, k, a, m));
      }

  // d_m g^{ja} = -g^{jb} (d_m g_bc) g^{ca}
  Tensor3 dginv(n);  // (j, a, m)
  for (int m = 0; m < n; ++m) {
    Matrix dgm(n, n);
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c) dgm(b, c) = dg(b, c, m);
    const Matrix prod = -ginv * dgm * ginv;
    for (int j = 0; j < n; ++j)
      for (int a = 0; a < n; ++a) dginv(j, a, m) = prod(j, a);
  }

  Tensor4 out(n);
  for (int j = 0; j < n; ++j)
    for (int l = 0; l < n; ++l)
      for (int k = 0; k < n; ++k)
        for (int m = 0; m < n; ++m) {
          double s = 0.0;
          for (int a = 0; a < n; ++a) s += dginv(j, a, m) * first(l, k, a) + ginv(j, a) * dfirst(l, k, a, m);
          out(j, l, k, m) = s;
        }
  return out;
}

Matrix ricci_mixed(const MetricJet& jet) {
  const int n = jet.dim();
  const Matrix ginv = inverse_metric(jet);
  const Tensor3 gamma = christoffel(jet);
  const Tensor4 dgamma = christoffel_derivative(jet);

  Matrix ric = Matrix::Zero(n, n);
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < n; ++k) {
      double s = 0.0;
      for (int l = 0; l < n; ++l) {
        s += dgamma(l, j, k, l) - dgamma(l, j, l, k);
        for (int h = 0; h < n; ++h) s += gamma(l, h, l) * gamma(h, j, k) - gamma(l, h, k) * gamma(h, j, l);
      }
      ric(j, k) = s;
    }
  return ginv * ric;
}

namespace {

Matrix checked_eval(const MetricField& field, const Vector& y) {
  if (field.in_chart && !field.in_chart(y)) {
    std::ostringstream os;
    os << "point (" << y.transpose() << ") lies outside the chart of field '" << field.name << "'";
    fail(ErrorKind::ChartError, os.str());
  }
  Matrix g;
  try {
    g = field.eval(y);
  } catch (const Error&) {
    throw;
  } catch (const std::exception& e) {
    fail(ErrorKind::ChartError, std::string("field evaluation failed: ") + e.what());
  }
  if (g.rows() != field.dim || g.cols() != field.dim || !g.allFinite())
    fail(ErrorKind::ChartError, "field '" + field.name + "' returned a malformed metric");
  return g;
}

}  // namespace

MetricJet jet_from_field(const MetricField& field, const Vector& x, double h) {
  const int n = field.dim;
  if (x.size() != n) fail(ErrorKind::InvalidArgument, "point dimension does not match field");
  if (!(h > 0.0)) fail(ErrorKind::InvalidArgument, "finite-difference step must be positive");

  auto at = [&](std::initializer_list<std::pair<int, double>> shifts) {
    Vector y = x;
    for (auto [axis, s] : shifts) y[axis] += s * h;
    return checked_eval(field, y);
  };

  MetricJet jet = MetricJet::constant(checked_eval(field, x));
  const Matrix& g0 = jet.g;
  static constexpr double w1[4] = {1.0, -8.0, 8.0, -1.0};
  static constexpr double o1[4] = {-2.0, -1.0, 1.0, 2.0};

  std::vector<Matrix> d1(n), d2(n);
  for (int l = 0; l < n; ++l) {
    const Matrix gm2 = at({{l, -2.0}}), gm1 = at({{l, -1.0}}), gp1 = at({{l, 1.0}}), gp2 = at({{l, 2.0}});
    d1[l] = (gm2 - 8.0 * gm1 + 8.0 * gp1 - gp2) / (12.0 * h);
    d2[l] = (-gm2 + 16.0 * gm1 - 30.0 * g0 + 16.0 * gp1 - gp2) / (12.0 * h * h);
  }
  for (int l = 0; l < n; ++l)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        jet.dg(j, k, l) = 0.5 * (d1[l](j, k) + d1[l](k, j));
        jet.d2g(j, k, l, l) = 0.5 * (d2[l](j, k) + d2[l](k, j));
      }

  for (int l = 0; l < n; ++l)
    for (int m = l + 1; m < n; ++m) {
      Matrix mixed = Matrix::Zero(n, n);
      for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b) mixed += w1[a] * w1[b] * at({{l, o1[a]}, {m, o1[b]}});
      mixed /= 144.0 * h * h;
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) {
          const double v = 0.5 * (mixed(j, k) + mixed(k, j));
          jet.d2g(j, k, l, m) = v;
          jet.d2g(j, k, m, l) = v;
        }
    }
  return jet;
}

MetricField euclidean_field(int n) {
  MetricField f;
  f.dim = n;
  f.name = "euclidean";
  f.eval = [n](const Vector&) { return Matrix::Identity(n, n); };
  return f;
}

MetricField polar_field() {
  MetricField f;
  f.dim = 2;
  f.name = "polar";
  f.eval = [](const Vector& x) {
    Matrix g = Matrix::Zero(2, 2);
    g(0, 0) = 1.0;
    g(1, 1) = x[0] * x[0];
    return g;
  };
  f.in_chart = [](const Vector& x) { return x[0] > 0.0; };
  return f;
}

MetricField sphere_field(double radius) {
  if (!(radius > 0.0)) fail(ErrorKind::InvalidArgument, "sphere radius must be positive");
  MetricField f;
  f.dim = 2;
  f.name = "sphere";
  f.eval = [radius](const Vector& x) {
    const double r2 = radius * radius;
    const double s = std::sin(x[0]);
    Matrix g = Matrix::Zero(2, 2);
    g(0, 0) = r2;
    g(1, 1) = r2 * s * s;
    return g;
  };
  f.in_chart = [](const Vector& x) { return x[0] > 0.0 && x[0] < M_PI; };
  return f;
}

}  // namespace nlspec
