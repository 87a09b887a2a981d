#include "nlspec/symbol.hpp"

#include "nlspec/errors.hpp"

#include <array>
#include <cmath>
#include <sstream>
#include <vector>

namespace nlspec {

namespace {

constexpr Complex kI{0.0, 1.0};
constexpr double kPoleTolerance = 1e-12;

void check_xi(const MetricJet& jet, const Vector& xi) {
  if (xi.size() != jet.dim()) fail(ErrorKind::InvalidArgument, "cotangent vector dimension does not match jet");
  if (!xi.allFinite()) fail(ErrorKind::InvalidArgument, "cotangent vector must be finite");
}

// Order-by-order pieces of A_g: A = P2 + P1 + P0.
struct OperatorSymbol {
  SymbolMatrix p2, p1, p0;
};

SymbolMatrix first_order_part(const Matrix& ginv, const Tensor3& gamma, const LameParameters& params, const Vector& xi) {
  const int n = static_cast<int>(ginv.rows());
  const double mu = params.mu;
  const double ml = params.mu + params.lambda;

  double trace_term = 0.0;  // g^{ml} Gamma^s_{ml} xi_s
  for (int m = 0; m < n; ++m)
    for (int l = 0; l < n; ++l)
      for (int s = 0; s < n; ++s) trace_term += ginv(m, l) * gamma(s, m, l) * xi[s];

  // contracted Christoffel Gamma^l_{kl}
  Vector gamma_trace = Vector::Zero(n);
  for (int k = 0; k < n; ++k)
    for (int l = 0; l < n; ++l) gamma_trace[k] += gamma(l, k, l);
  const Vector raised_xi = ginv * xi;  // g^{jm} xi_m

  SymbolMatrix p1 = SymbolMatrix::Zero(n, n);
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < n; ++k) {
      double cov = 0.0;  // sum_{m,l} 2 g^{ml} Gamma^j_{km} xi_l
      for (int m = 0; m < n; ++m)
        for (int l = 0; l < n; ++l) cov += 2.0 * ginv(m, l) * gamma(j, k, m) * xi[l];
      double v = -mu * cov - ml * raised_xi[j] * gamma_trace[k];
      if (j == k) v += mu * trace_term;
      p1(j, k) = kI * v;
    }
  return p1;
}

OperatorSymbol operator_symbol(const MetricJet& jet, const LameParameters& params, const Vector& xi) {
  params.validate();
  check_xi(jet, xi);
  const int n = jet.dim();
  const Matrix ginv = inverse_metric(jet);
  const Tensor3 gamma = christoffel(jet);
  const Tensor4 dgamma = christoffel_derivative(jet);
  const Matrix ricci = ricci_mixed(jet);
  const double mu = params.mu;
  const double ml = params.mu + params.lambda;

  OperatorSymbol s;
  const double q = cometric_norm2(ginv, xi);
  s.p2 = (mu * q * Matrix::Identity(n, n) + ml * xi_projector(ginv, xi)).cast<Complex>();
  s.p1 = first_order_part(ginv, gamma, params, xi);

  Matrix p0 = Matrix::Zero(n, n);
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < n; ++k) {
      double bochner = 0.0;
      for (int l = 0; l < n; ++l)
        for (int m = 0; m < n; ++m) {
          double inner = dgamma(j, k, l, m);
          for (int h = 0; h < n; ++h) inner += gamma(j, h, l) * gamma(h, k, m) - gamma(j, k, h) * gamma(h, m, l);
          bochner += ginv(m, l) * inner;
        }
      double graddiv = 0.0;
      for (int m = 0; m < n; ++m)
        for (int l = 0; l < n; ++l) graddiv += ginv(j, m) * dgamma(l, k, l, m);
      p0(j, k) = -mu * bochner - ml * graddiv - mu * ricci(j, k);
    }
  s.p0 = p0.cast<Complex>();
  return s;
}

void check_poles(const LameParameters& params, double q, Complex tau) {
  const double tol = kPoleTolerance * (1.0 + std::abs(tau));
  const double shear = params.mu * q;
  const double pressure = params.pressure_modulus() * q;
  if (std::abs(tau - shear) < tol || std::abs(tau - pressure) < tol) {
    std::ostringstream os;
    os << "tau=" << tau << " lies on a characteristic ray (mu Q=" << shear << ", (2mu+lambda) Q=" << pressure << ")";
    fail(ErrorKind::PoleProximity, os.str());
  }
}

SymbolMatrix a2_from(const Matrix& ginv, const LameParameters& params, const Vector& xi, Complex tau) {
  const int n = static_cast<int>(ginv.rows());
  const double q = cometric_norm2(ginv, xi);
  SymbolMatrix a2 = (tau - params.mu * q) * SymbolMatrix::Identity(n, n);
  a2 -= (params.mu + params.lambda) * xi_projector(ginv, xi).cast<Complex>();
  return a2;
}

SymbolMatrix a2_inverse_from(const Matrix& ginv, const LameParameters& params, const Vector& xi, Complex tau) {
  const int n = static_cast<int>(ginv.rows());
  const double q = cometric_norm2(ginv, xi);
  check_poles(params, q, tau);
  const Complex shear = tau - params.mu * q;
  const Complex pressure = tau - params.pressure_modulus() * q;
  const Complex s1 = 1.0 / shear;
  const Complex s2 = (params.mu + params.lambda) / (shear * pressure);
  return s1 * SymbolMatrix::Identity(n, n) + s2 * xi_projector(ginv, xi).cast<Complex>();
}

// ---------------------------------------------------------------------------
// Parametrix recursion.

// Multi-index with |alpha| <= 2, stored as the (sorted) list of axes it differentiates.
struct MultiIndex {
  std::vector<int> axes;
  int order() const { return static_cast<int>(axes.size()); }
  double factorial() const { return (order() == 2 && axes[0] == axes[1]) ? 2.0 : 1.0; }
};

std::vector<MultiIndex> multi_indices(int n, int order) {
  std::vector<MultiIndex> out;
  if (order == 0) {
    out.push_back({});
  } else if (order == 1) {
    for (int a = 0; a < n; ++a) out.push_back({{a}});
  } else if (order == 2) {
    for (int a = 0; a < n; ++a)
      for (int b = a; b < n; ++b) out.push_back({{a, b}});
  }
  return out;
}

class Parametrix {
 public:
  Parametrix(const MetricField& field, const LameParameters& params, const Vector& xi, Complex tau,
             const ParametrixOptions& opts)
      : field_(field), params_(params), xi_(xi), tau_(tau), opts_(opts) {}

  // q_{-2-l} at y, with x-derivatives of lower terms taken with step h.
  SymbolMatrix term(const Vector& y, int l, double h) const {
    const MetricJet g_only = MetricJet::constant(metric_at(y));
    const Matrix ginv = inverse_metric(g_only);
    const SymbolMatrix a2inv = a2_inverse_from(ginv, params_, xi_, tau_);
    if (l == 0) return a2inv;
    return -a2inv * correction(y, l, h);
  }

  // sum over j < l of (d_xi^alpha a_k)(D_x^alpha q_{-2-j}) / alpha!, all at y.
  SymbolMatrix correction(const Vector& y, int l, double h) const {
    const int n = field_.dim;
    const MetricJet jet = jet_from_field(field_, y, opts_.jet_step);
    const Matrix ginv = inverse_metric(jet);
    const Tensor3 gamma = christoffel(jet);
    const SymbolSplit split = split_symbol(jet, params_, xi_, tau_);

    SymbolMatrix sum = SymbolMatrix::Zero(n, n);
    for (int j = 0; j < l; ++j) {
      for (int k = 0; k <= 2; ++k) {
        const int order = l - j - 2 + k;
        if (order < 0) continue;
        for (const MultiIndex& alpha : multi_indices(n, order)) {
          const SymbolMatrix da = xi_derivative(split, ginv, gamma, k, alpha);
          if (da.cwiseAbs().maxCoeff() == 0.0) continue;
          const SymbolMatrix dq = x_derivative(y, j, alpha, h);
          // D^alpha = (-i)^{|alpha|} d^alpha
          const Complex phase = std::pow(-kI, order);
          sum += da * (phase * dq) / alpha.factorial();
        }
      }
    }
    return sum;
  }

  const LameParameters& params() const { return params_; }
  const Vector& xi() const { return xi_; }
  Complex tau() const { return tau_; }

 private:
  Matrix metric_at(const Vector& y) const {
    if (field_.in_chart && !field_.in_chart(y)) fail(ErrorKind::ChartError, "stencil point left the chart of '" + field_.name + "'");
    return field_.eval(y);
  }

  SymbolMatrix xi_derivative(const SymbolSplit& split, const Matrix& ginv, const Tensor3& gamma, int k,
                             const MultiIndex& alpha) const {
    const int n = field_.dim;
    const double mu = params_.mu;
    const double ml = params_.mu + params_.lambda;
    const SymbolMatrix zero = SymbolMatrix::Zero(n, n);
    switch (k) {
      case 0:
        return alpha.order() == 0 ? split.a0 : zero;
      case 1: {
        if (alpha.order() == 0) return split.a1;
        if (alpha.order() == 1) return -first_order_part(ginv, gamma, params_, Vector::Unit(n, alpha.axes[0]));
        return zero;
      }
      case 2: {
        if (alpha.order() == 0) return split.a2;
        Matrix dq = Matrix::Zero(n, n);  // d^alpha of mu Q I + (mu+lambda) G
        if (alpha.order() == 1) {
          const int a = alpha.axes[0];
          const Vector raised = ginv * xi_;
          dq += mu * 2.0 * raised[a] * Matrix::Identity(n, n);
          for (int j = 0; j < n; ++j)
            for (int kk = 0; kk < n; ++kk)
              dq(j, kk) += ml * (ginv(j, a) * xi_[kk] + (kk == a ? raised[j] : 0.0));
        } else {
          const int a = alpha.axes[0];
          const int b = alpha.axes[1];
          dq += mu * 2.0 * ginv(a, b) * Matrix::Identity(n, n);
          for (int j = 0; j < n; ++j) {
            dq(j, b) += ml * ginv(j, a);
            dq(j, a) += ml * ginv(j, b);
          }
        }
        return -dq.cast<Complex>();
      }
      default:
        return zero;
    }
  }

  SymbolMatrix x_derivative(const Vector& y, int j, const MultiIndex& alpha, double h) const {
    static constexpr double w1[4] = {1.0, -8.0, 8.0, -1.0};
    static constexpr double o1[4] = {-2.0, -1.0, 1.0, 2.0};
    // Lower terms are differentiated with the same step as the outer stencil. Stencil
    // weights sum to zero, so values are taken relative to the centre; a locally constant
    // term then differentiates to exactly zero instead of amplified round-off.
    if (alpha.order() == 0) return term(y, j, h);
    const SymbolMatrix centre = term(y, j, h);
    auto at = [&](std::initializer_list<std::pair<int, double>> shifts) -> SymbolMatrix {
      Vector z = y;
      for (auto [axis, s] : shifts) z[axis] += s * h;
      return term(z, j, h) - centre;
    };
    if (alpha.order() == 1) {
      const int a = alpha.axes[0];
      SymbolMatrix d = SymbolMatrix::Zero(field_.dim, field_.dim);
      for (int s = 0; s < 4; ++s) d += w1[s] * at({{a, o1[s]}});
      return d / (12.0 * h);
    }
    const int a = alpha.axes[0];
    const int b = alpha.axes[1];
    if (a == b) {
      return (-at({{a, -2.0}}) + 16.0 * at({{a, -1.0}}) + 16.0 * at({{a, 1.0}}) - at({{a, 2.0}})) / (12.0 * h * h);
    }
    SymbolMatrix d = SymbolMatrix::Zero(field_.dim, field_.dim);
    for (int s = 0; s < 4; ++s)
      for (int r = 0; r < 4; ++r) d += w1[s] * w1[r] * at({{a, o1[s]}, {b, o1[r]}});
    return d / (144.0 * h * h);
  }

  const MetricField& field_;
  LameParameters params_;
  Vector xi_;
  Complex tau_;
  ParametrixOptions opts_;
};

void check_parametrix_inputs(const MetricField& field, const LameParameters& params, const Vector& x, const Vector& xi,
                             int l) {
  params.validate();
  if (l < 0 || l > kMaxParametrixOrder) {
    std::ostringstream os;
    os << "parametrix order " << l << " outside supported range [0, " << kMaxParametrixOrder << "]";
    fail(ErrorKind::InvalidArgument, os.str());
  }
  if (x.size() != field.dim || xi.size() != field.dim) fail(ErrorKind::InvalidArgument, "point or covector dimension does not match field");
}

}  // namespace

double cometric_norm2(const Matrix& ginv, const Vector& xi) { return xi.dot(ginv * xi); }

Matrix xi_projector(const Matrix& ginv, const Vector& xi) { return (ginv * xi) * xi.transpose(); }

SymbolMatrix symbol_A(const MetricJet& jet, const LameParameters& params, const Vector& xi) {
  const OperatorSymbol s = operator_symbol(jet, params, xi);
  return s.p2 + s.p1 + s.p0;
}

SymbolSplit split_symbol(const MetricJet& jet, const LameParameters& params, const Vector& xi, Complex tau) {
  const OperatorSymbol s = operator_symbol(jet, params, xi);
  const int n = jet.dim();
  return SymbolSplit{tau * SymbolMatrix::Identity(n, n) - s.p2, -s.p1, -s.p0};
}

SymbolMatrix invert_a2(const MetricJet& jet, const LameParameters& params, const Vector& xi, Complex tau) {
  params.validate();
  check_xi(jet, xi);
  return a2_inverse_from(inverse_metric(jet), params, xi, tau);
}

Complex trace_q2(const MetricJet& jet, const LameParameters& params, const Vector& xi, Complex tau) {
  params.validate();
  check_xi(jet, xi);
  return trace_q2(jet.dim(), params, cometric_norm2(inverse_metric(jet), xi), tau);
}

Complex trace_q2(int n, const LameParameters& params, double q, Complex tau) {
  check_poles(params, q, tau);
  const Complex shear = tau - params.mu * q;
  const Complex pressure = tau - params.pressure_modulus() * q;
  return static_cast<double>(n) / shear + (params.mu + params.lambda) * q / (shear * pressure);
}

SymbolMatrix resolvent_term(const MetricField& field, const LameParameters& params, const Vector& x, const Vector& xi,
                            Complex tau, int l, const ParametrixOptions& opts) {
  check_parametrix_inputs(field, params, x, xi, l);
  return Parametrix(field, params, xi, tau, opts).term(x, l, opts.derivative_step);
}

double parametrix_defect(const MetricField& field, const LameParameters& params, const Vector& x, const Vector& xi,
                         Complex tau, int max_order, const ParametrixOptions& opts) {
  check_parametrix_inputs(field, params, x, xi, max_order);
  const Parametrix p(field, params, xi, tau, opts);
  const MetricJet jet = jet_from_field(field, x, opts.jet_step);
  const SymbolMatrix a2 = a2_from(inverse_metric(jet), params, xi, tau);
  const double h = opts.derivative_step;

  double defect = 0.0;
  for (int l = 1; l <= max_order; ++l) {
    const SymbolMatrix q = p.term(x, l, h);
    const SymbolMatrix residual = a2 * q + p.correction(x, l, 0.5 * h);
    defect = std::max(defect, residual.cwiseAbs().maxCoeff());
  }
  return defect;
}

}  // namespace nlspec
