#pragma once

#include "nlspec/geometry.hpp"
#include "nlspec/heat_kernel.hpp"

#include <Eigen/Sparse>

#include <string>
#include <variant>
#include <vector>

namespace nlspec {

struct Interval {
  double length = 1.0;
};
struct Rectangle {
  double a = 1.0;
  double b = 1.0;
};
struct Disk {
  double radius = 1.0;
};
/// Geometry withheld (e.g. when the spectrum is to be "heard"); only the dimension is known.
struct UnspecifiedDomain {
  int dim = 2;
};

class Domain {
 public:
  using Shape = std::variant<Interval, Rectangle, Disk, UnspecifiedDomain>;

  Domain() = default;
  Domain(Shape shape);  // NOLINT: implicit from any concrete shape

  const Shape& shape() const { return shape_; }
  int dim() const;
  bool has_geometry() const { return !std::holds_alternative<UnspecifiedDomain>(shape_); }
  double volume() const;
  double boundary_volume() const;

  /// e.g. "disk(radius=1)", "rectangle(a=2,b=1)", "interval(length=3.14)", "unspecified(dim=2)".
  std::string describe() const;
  static Domain parse(const std::string& text);

  bool operator==(const Domain& other) const;

 private:
  Shape shape_ = UnspecifiedDomain{};
};

enum class SolverMethod { Analytic, BesselRoots, FiniteDifference, Unknown };

std::string to_string(BoundaryCondition bc);
std::string to_string(SolverMethod method);
BoundaryCondition parse_boundary_condition(const std::string& text);
SolverMethod parse_solver_method(const std::string& text);

/// Ascending eigenvalues with multiplicities and the metadata needed to interpret them.
struct Spectrum {
  std::vector<double> eigenvalues;
  std::vector<int> multiplicities;
  BoundaryCondition bc = BoundaryCondition::Dirichlet;
  LameParameters params;
  Domain domain;
  SolverMethod method = SolverMethod::Unknown;
  int grid = 0;  ///< cells per side for finite-difference spectra, else 0

  /// Number of eigenvalues counted with multiplicity.
  long count() const;
  bool empty() const { return eigenvalues.empty(); }
  int dim() const { return domain.dim(); }

  /// Largest eigenvalue the spectrum represents faithfully. For finite-difference
  /// spectra only the lowest third of the discrete spectrum is trusted.
  double resolved_ceiling() const;

  /// Throws SortedViolation or InvalidArgument when invariants fail.
  void validate() const;

  /// Eigenvalues with each repeated according to its multiplicity.
  std::vector<double> expanded() const;
};

inline constexpr double kFiniteDifferenceResolvedFraction = 1.0 / 3.0;

/// Closed-form spectrum of the one-dimensional reduction -(2mu+lambda) d^2/dx^2 on [0, L].
/// Dirichlet: k = 1..count, Neumann: k = 0..count-1, tau_k = (2mu+lambda)(k pi / L)^2.
Spectrum interval_spectrum(double length, const LameParameters& params, BoundaryCondition bc, int count);

struct DiskSolverOptions {
  int scan_points_per_pi = 64;  ///< sign-scan resolution in the shear wavenumber times radius
  double rel_tol = 1e-12;       ///< bisection tolerance on tau
};

/// Normalised Dirichlet boundary determinant of angular order m at tau:
/// (a b J_m'(a) J_m'(b) - m^2 J_m(a) J_m(b)) / (N(a) N(b)), with a = R sqrt(tau/(2mu+lambda)),
/// b = R sqrt(tau/mu) and N(x) = |(x J_m'(x), m J_m(x), J_m(x))|. Bounded by 1 in magnitude.
double disk_determinant(int m, double tau, double radius, const LameParameters& params);

/// Dirichlet eigenvalues of the disk from the Helmholtz potential split.
///
/// Roots are complete below tau_max = mu ((m_max + 1) / radius)^2, since an order-m root needs
/// b > m; when some order reaches k_max roots first, tau_max is lowered to that root. Orders
/// m >= 1 carry multiplicity 2; m = 0 splits into the radial J_1(a) = 0 and torsional J_1(b) = 0 families.
Spectrum disk_spectrum(double radius, const LameParameters& params, int m_max, int k_max,
                       const DiskSolverOptions& opts = {});

struct FdOptions {
  bool use_symmetry = true;  ///< split into the four reflection-parity sectors before solving
  int threads = 1;           ///< sectors solved concurrently
};

inline constexpr int kMinFdGrid = 16;

/// Stiffness and lumped mass of the rectangle discretisation.
///
/// Bilinear cells with exact (2x2 Gauss) integration of the strain energy
/// lambda (div u)^2 + 2 mu eps(u):eps(u), lumped nodal mass, two displacement
/// components per node. Dirichlet eliminates boundary nodes; traction-free Neumann
/// keeps them, the traction condition being the natural one for this energy.
struct FdSystem {
  Eigen::SparseMatrix<double> stiffness;
  Eigen::VectorXd mass;  ///< diagonal
  int nx = 0;            ///< cells along x
  int ny = 0;            ///< cells along y
  std::vector<int> dof_node_i, dof_node_j, dof_component;
};

FdSystem assemble_rectangle(double a, double b, const LameParameters& params, BoundaryCondition bc, int grid_n);

/// All discrete eigenvalues of K u = tau M u on a grid_n x grid_n cell grid, ascending.
/// Round-off negatives of the Neumann rigid modes are clamped to zero.
Spectrum rectangle_fd_spectrum(double a, double b, const LameParameters& params, BoundaryCondition bc, int grid_n,
                               const FdOptions& opts = {});

}  // namespace nlspec
