#pragma once

// Independent reference computations for the test suites. Nothing here calls the
// routine it is meant to check.

#include "nlspec/geometry.hpp"
#include "nlspec/symbol.hpp"

#include <complex>
#include <functional>
#include <vector>

namespace oracle {

using nlspec::Matrix;
using nlspec::Vector;

/// Gauss-Hermite nodes and weights (weight e^{-x^2}) by Golub-Welsch.
struct Quadrature {
  std::vector<double> nodes, weights;
};
Quadrature gauss_hermite(int points);

/// Christoffel symbols Gamma^j_{lk} of a metric field at x from second-order central
/// differences of the metric with step h (no jets involved).
std::vector<double> christoffel_fd(const nlspec::MetricField& field, const Vector& x, double h);

/// Full symbol of the Navier-Lame operator at (x, xi), assembled by applying
///   P u = mu nabla^* nabla u - (mu + lambda) grad div u - mu Ric(u)
/// in coordinates to u = e^{i x.xi} e_k, with covariant derivatives written out term by term
/// and every Christoffel quantity finite-differenced from the field.
nlspec::SymbolMatrix symbol_by_bochner(const nlspec::MetricField& field, const nlspec::LameParameters& params,
                                       const Vector& x, const Vector& xi, double h = 1e-4);

/// (1 / 2 pi i) \oint e^{-t tau} Tr a2^{-1} d tau over the rectangle with corners (-1 +- iH) and
/// (3 (2mu+lambda) Q + 1 +- iH), H = 10 (1 + Q), each side by composite 30-point Gauss-Legendre.
double rectangle_contour(int n, const nlspec::LameParameters& params, double q, double t);

/// (2 pi)^{-n} \int residue_heat_symbol(n, params, |xi|^2, t) d xi by a tensor Gauss-Hermite rule (n = 2 or 3).
double interior_by_gauss_hermite(int n, const nlspec::LameParameters& params, double t, int points = 48);

/// Scalar Dirichlet heat trace of the interval [0, L] with speed c: sum_{k>=1} e^{-c t (k pi / L)^2},
/// evaluated through the Jacobi transformation  sum_{k in Z} e^{-a k^2} = sqrt(pi/a) sum_{m in Z} e^{-pi^2 m^2/a}.
double theta_dirichlet(double c, double length, double t);
double theta_neumann(double c, double length, double t);

/// Dirichlet eigenvalues of the disk from a radial P1 Galerkin discretisation per angular order.
/// Returns eigenvalues with multiplicity (orders m >= 1 twice), ascending, up to max_count values.
std::vector<double> disk_polar_galerkin(double radius, const nlspec::LameParameters& params, int max_order,
                                        int elements, int max_count);

}  // namespace oracle
