#pragma once

#include <Eigen/Dense>

#include <functional>
#include <string>
#include <vector>

namespace nlspec {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Lamé pair (mu, lambda) of a homogeneous isotropic medium.
///
/// Ellipticity needs mu > 0 and mu + lambda >= 0. The strict case is the
/// regime of the heat-trace formulas; equality is the vector-Laplacian limit,
/// where the operator degenerates to mu times the Bochner Laplacian.
struct LameParameters {
  double mu = 1.0;
  double lambda = 0.0;

  double shear_modulus() const { return mu; }
  double pressure_modulus() const { return 2.0 * mu + lambda; }

  bool strictly_admissible() const;
  bool laplacian_limit() const;

  /// Throws InvalidArgument unless mu > 0 and mu + lambda >= 0.
  void validate() const;
};

/// Dense cube indexed (i, j, k), row-major.
class Tensor3 {
 public:
  Tensor3() = default;
  explicit Tensor3(int n) : n_(n), data_(static_cast<std::size_t>(n) * n * n, 0.0) {}

  int dim() const { return n_; }
  double& operator()(int i, int j, int k) { return data_[(static_cast<std::size_t>(i) * n_ + j) * n_ + k]; }
  double operator()(int i, int j, int k) const { return data_[(static_cast<std::size_t>(i) * n_ + j) * n_ + k]; }
  double max_abs() const;

 private:
  int n_ = 0;
  std::vector<double> data_;
};

/// Dense rank-4 array indexed (i, j, k, l), row-major.
class Tensor4 {
 public:
  Tensor4() = default;
  explicit Tensor4(int n) : n_(n), data_(static_cast<std::size_t>(n) * n * n * n, 0.0) {}

  int dim() const { return n_; }
  double& operator()(int i, int j, int k, int l) { return data_[index(i, j, k, l)]; }
  double operator()(int i, int j, int k, int l) const { return data_[index(i, j, k, l)]; }
  double max_abs() const;

 private:
  std::size_t index(int i, int j, int k, int l) const {
    return ((static_cast<std::size_t>(i) * n_ + j) * n_ + k) * n_ + l;
  }
  int n_ = 0;
  std::vector<double> data_;
};

/// Second-order jet of a metric at a point.
///
/// dg(j, k, l) = d g_jk / d x_l and d2g(j, k, l, m) = d^2 g_jk / d x_l d x_m.
struct MetricJet {
  Matrix g;
  Tensor3 dg;
  Tensor4 d2g;

  int dim() const { return static_cast<int>(g.rows()); }

  /// Jet of a constant metric (all derivatives zero).
  static MetricJet constant(const Matrix& g);
  static MetricJet euclidean(int n) { return constant(Matrix::Identity(n, n)); }

  /// Throws InvalidMetric on shape mismatch, asymmetry, non-finite entries,
  /// or a g that is not positive definite.
  void validate() const;
};

/// A metric given in a coordinate chart. eval must be re-entrant.
struct MetricField {
  int dim = 0;
  std::function<Matrix(const Vector&)> eval;
  /// Optional chart membership test; absent means the whole of R^n.
  std::function<bool(const Vector&)> in_chart;
  std::string name;

  Matrix operator()(const Vector& x) const { return eval(x); }
};

/// Euclidean metric on R^n.
MetricField euclidean_field(int n);
/// Plane in polar coordinates (r, theta): diag(1, r^2), r > 0.
MetricField polar_field();
/// Round 2-sphere of the given radius in (theta, phi): diag(R^2, R^2 sin^2 theta).
MetricField sphere_field(double radius = 1.0);

inline constexpr double kDefaultJetStep = 1e-3;

Matrix inverse_metric(const MetricJet& jet);

/// Gamma(j, l, k) = Christoffel symbol Gamma^j_{lk}.
Tensor3 christoffel(const MetricJet& jet);

/// Result(j, l, k, m) = d Gamma^j_{lk} / d x_m, differentiated exactly through g, dg, d2g.
Tensor4 christoffel_derivative(const MetricJet& jet);

/// Mixed Ricci tensor R^j_k = g^{jl} R_{lk}, with
/// R_{jk} = d_l G^l_{jk} - d_k G^l_{jl} + G^l_{sl} G^s_{jk} - G^l_{sk} G^s_{jl}.
Matrix ricci_mixed(const MetricJet& jet);

/// Builds a jet from a field with fourth-order central differences of step h.
/// Throws ChartError if any stencil point leaves the chart or the field fails there.
MetricJet jet_from_field(const MetricField& field, const Vector& x, double h = kDefaultJetStep);

}  // namespace nlspec
