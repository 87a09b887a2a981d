#pragma once

#include "nlspec/geometry.hpp"

#include <complex>

namespace nlspec {

using Complex = std::complex<double>;
/// Value of a matrix-valued symbol at a point (x, xi, tau).
using SymbolMatrix = Eigen::MatrixXcd;

/// tau I - A_g = a2 + a1 + a0, split by order in xi.
struct SymbolSplit {
  SymbolMatrix a2;  ///< tau I - mu |xi|^2 I - (mu + lambda) G
  SymbolMatrix a1;  ///< linear in xi, purely imaginary for real metrics
  SymbolMatrix a0;  ///< xi-independent (Christoffel derivatives, quadratic Christoffels, Ricci)
};

/// |xi|^2_g = g^{lm} xi_l xi_m.
double cometric_norm2(const Matrix& ginv, const Vector& xi);

/// G_{jk} = sum_r g^{jr} xi_r xi_k; together with I it spans the ring containing a2^{-1}.
Matrix xi_projector(const Matrix& ginv, const Vector& xi);

/// Full symbol A_g(x, xi) of the Navier-Lame operator
/// P u = mu nabla^* nabla u - (mu + lambda) grad div u - mu Ric(u),
/// with the convention d/dx_s <-> i xi_s. Needs the full jet (d2g enters through
/// Christoffel derivatives and the Ricci block).
SymbolMatrix symbol_A(const MetricJet& jet, const LameParameters& params, const Vector& xi);

SymbolSplit split_symbol(const MetricJet& jet, const LameParameters& params, const Vector& xi, Complex tau);

/// a2^{-1} = s1 I + s2 G with s1 = 1/(tau - mu Q), s2 = (mu+lambda)/((tau - mu Q)(tau - (2mu+lambda) Q)).
/// Only g is read from the jet. Throws PoleProximity when tau sits within
/// 1e-12 (1 + |tau|) of either characteristic value mu Q, (2mu+lambda) Q.
SymbolMatrix invert_a2(const MetricJet& jet, const LameParameters& params, const Vector& xi, Complex tau);

/// Closed-form trace of a2^{-1}: n/(tau - mu Q) + (mu+lambda) Q / ((tau - mu Q)(tau - (2mu+lambda) Q)).
Complex trace_q2(const MetricJet& jet, const LameParameters& params, const Vector& xi, Complex tau);
/// Same, in terms of the dimension and Q = |xi|^2_g directly.
Complex trace_q2(int n, const LameParameters& params, double q, Complex tau);

struct ParametrixOptions {
  double jet_step = kDefaultJetStep;         ///< step for metric jets at stencil points
  double derivative_step = kDefaultJetStep;  ///< step for x-derivatives of lower-order q terms
};

inline constexpr int kMaxParametrixOrder = 2;

/// Term q_{-2-l}(x, xi, tau) of the resolvent parametrix, 0 <= l <= 2:
///   q_{-2}   = a2^{-1}
///   q_{-2-l} = -a2^{-1} sum (d_xi^alpha a_k)(D_x^alpha q_{-2-j}) / alpha!
/// over j < l, k in {0,1,2}, |alpha| = l - j - 2 + k, with D_x = -i d/dx.
/// xi-derivatives are analytic; x-derivatives are fourth-order finite differences
/// over the field.
SymbolMatrix resolvent_term(const MetricField& field, const LameParameters& params, const Vector& x,
                            const Vector& xi, Complex tau, int l, const ParametrixOptions& opts = {});

/// max over 1 <= l <= L of || a2 q_{-2-l} + sum_{j<l} (d^alpha a_k)(D^alpha q_{-2-j})/alpha! ||_inf.
///
/// The residual sum is re-evaluated with half the derivative step used to build
/// the q terms, so the result measures how well the computed terms satisfy the
/// defining equations rather than reproducing the construction bit for bit.
double parametrix_defect(const MetricField& field, const LameParameters& params, const Vector& x, const Vector& xi,
                         Complex tau, int max_order, const ParametrixOptions& opts = {});

}  // namespace nlspec
