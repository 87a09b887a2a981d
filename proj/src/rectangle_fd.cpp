#include "nlspec/errors.hpp"
#include "nlspec/spectra.hpp"

#include <lapacke.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <future>
#include <string>

namespace nlspec {

namespace {

using ElementMatrix = Eigen::Matrix<double, 8, 8>;

// Local node k sits at reference corner (xi_k, eta_k); local dof 2k + c.
constexpr std::array<int, 4> kCornerI = {0, 1, 1, 0};
constexpr std::array<int, 4> kCornerJ = {0, 0, 1, 1};

ElementMatrix element_stiffness(double hx, double hy, const LameParameters& p) {
  Eigen::Matrix3d d;
  d << p.lambda + 2.0 * p.mu, p.lambda, 0.0,  //
      p.lambda, p.lambda + 2.0 * p.mu, 0.0,   //
      0.0, 0.0, p.mu;
  const double g = 1.0 / std::sqrt(3.0);
  const double jac = 0.25 * hx * hy;
  ElementMatrix k = ElementMatrix::Zero();
  for (double xi : {-g, g}) {
    for (double eta : {-g, g}) {
      Eigen::Matrix<double, 3, 8> b = Eigen::Matrix<double, 3, 8>::Zero();
      for (int n = 0; n < 4; ++n) {
        const double sx = kCornerI[n] == 0 ? -1.0 : 1.0;
        const double sy = kCornerJ[n] == 0 ? -1.0 : 1.0;
        const double dx = 0.25 * sx * (1.0 + sy * eta) * 2.0 / hx;
        const double dy = 0.25 * sy * (1.0 + sx * xi) * 2.0 / hy;
        b(0, 2 * n) = dx;
        b(1, 2 * n + 1) = dy;
        b(2, 2 * n) = dy;
        b(2, 2 * n + 1) = dx;
      }
      k += b.transpose() * d * b * jac;
    }
  }
  return k;
}

// Reduced matrix of one symmetry sector in banded lower storage.
struct Sector {
  int size = 0;
  int kd = 0;
  std::vector<double> band;  // (kd + 1) x size, column-major, ab[(i - j) + j (kd + 1)]
};

std::vector<double> solve_banded(Sector s) {
  if (s.size == 0) return {};
  std::vector<double> w(static_cast<std::size_t>(s.size));
  const lapack_int info = LAPACKE_dsbevd(LAPACK_COL_MAJOR, 'N', 'L', s.size, s.kd, s.band.data(), s.kd + 1, w.data(),
                                         nullptr, 1);
  if (info != 0) fail(ErrorKind::EigensolverFailure, "dsbevd returned info=" + std::to_string(info));
  return w;
}

}  // namespace

FdSystem assemble_rectangle(double a, double b, const LameParameters& params, BoundaryCondition bc, int grid_n) {
  params.validate();
  if (!(a > 0.0 && b > 0.0)) fail(ErrorKind::InvalidArgument, "rectangle sides must be positive");
  if (grid_n < kMinFdGrid)
    fail(ErrorKind::DiscretizationTooCoarse,
         "grid_n=" + std::to_string(grid_n) + " is below the minimum " + std::to_string(kMinFdGrid));

  FdSystem sys;
  sys.nx = grid_n;
  sys.ny = grid_n;
  const int nx = sys.nx, ny = sys.ny;
  const double hx = a / nx, hy = b / ny;
  const bool dirichlet = bc == BoundaryCondition::Dirichlet;

  // Node (i, j) -> first dof index or -1 when eliminated.
  std::vector<int> first_dof(static_cast<std::size_t>((nx + 1) * (ny + 1)), -1);
  auto node = [nx](int i, int j) { return j * (nx + 1) + i; };
  int dofs = 0;
  for (int j = 0; j <= ny; ++j) {
    for (int i = 0; i <= nx; ++i) {
      const bool boundary = i == 0 || j == 0 || i == nx || j == ny;
      if (dirichlet && boundary) continue;
      first_dof[node(i, j)] = dofs;
      for (int c = 0; c < 2; ++c) {
        sys.dof_node_i.push_back(i);
        sys.dof_node_j.push_back(j);
        sys.dof_component.push_back(c);
      }
      dofs += 2;
    }
  }

  const ElementMatrix ke = element_stiffness(hx, hy, params);
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(static_cast<std::size_t>(nx) * ny * 64);
  sys.mass = Eigen::VectorXd::Zero(dofs);
  const double quarter_cell = 0.25 * hx * hy;
  for (int cj = 0; cj < ny; ++cj) {
    for (int ci = 0; ci < nx; ++ci) {
      std::array<int, 8> map{};
      for (int n = 0; n < 4; ++n) {
        const int f = first_dof[node(ci + kCornerI[n], cj + kCornerJ[n])];
        map[2 * n] = f < 0 ? -1 : f;
        map[2 * n + 1] = f < 0 ? -1 : f + 1;
      }
      for (int r = 0; r < 8; ++r) {
        if (map[r] < 0) continue;
        sys.mass[map[r]] += quarter_cell;
        for (int c = 0; c < 8; ++c) {
          if (map[c] >= 0) trip.emplace_back(map[r], map[c], ke(r, c));
        }
      }
    }
  }
  sys.stiffness.resize(dofs, dofs);
  sys.stiffness.setFromTriplets(trip.begin(), trip.end());
  return sys;
}

Spectrum rectangle_fd_spectrum(double a, double b, const LameParameters& params, BoundaryCondition bc, int grid_n,
                               const FdOptions& opts) {
  const FdSystem sys = assemble_rectangle(a, b, params, bc, grid_n);
  const int dofs = static_cast<int>(sys.mass.size());

  // A = M^{-1/2} K M^{-1/2} commutes with the reflections x -> a - x (flipping u_x) and
  // y -> b - y (flipping u_y). Each parity sector (sx, sy) is spanned by symmetrised unit
  // dofs, one per orbit, ordered row-major over the lower-left quarter so the reduced
  // matrix stays banded.
  const Eigen::VectorXd inv_sqrt_m = sys.mass.cwiseSqrt().cwiseInverse();
  std::vector<int> dof_at(static_cast<std::size_t>((sys.nx + 1) * (sys.ny + 1)) * 2, -1);
  auto key = [&](int i, int j, int c) { return (j * (sys.nx + 1) + i) * 2 + c; };
  for (int d = 0; d < dofs; ++d) dof_at[key(sys.dof_node_i[d], sys.dof_node_j[d], sys.dof_component[d])] = d;

  struct Slot {
    int column = -1;     // basis index in its sector
    double coeff = 0.0;  // entry of that basis vector at this dof
  };
  const std::vector<std::array<int, 2>> parities =
      opts.use_symmetry ? std::vector<std::array<int, 2>>{{1, 1}, {1, -1}, {-1, 1}, {-1, -1}}
                        : std::vector<std::array<int, 2>>{{0, 0}};

  auto build_sector = [&](std::array<int, 2> parity) {
    std::vector<Slot> slot(static_cast<std::size_t>(dofs));
    int columns = 0;
    for (int d = 0; d < dofs; ++d) {
      const int i = sys.dof_node_i[d], j = sys.dof_node_j[d], c = sys.dof_component[d];
      if (parity[0] == 0) {
        slot[d] = {columns++, 1.0};
        continue;
      }
      if (2 * i > sys.nx || 2 * j > sys.ny) continue;  // not an orbit representative
      // Reflection images with their signs: T_x negates u_x, T_y negates u_y.
      const double tx = parity[0] * (c == 0 ? -1.0 : 1.0);
      const double ty = parity[1] * (c == 1 ? -1.0 : 1.0);
      if ((2 * i == sys.nx && tx < 0) || (2 * j == sys.ny && ty < 0)) continue;  // projects to zero
      std::array<std::pair<int, double>, 4> images = {{{d, 1.0},
                                                       {dof_at[key(sys.nx - i, j, c)], tx},
                                                       {dof_at[key(i, sys.ny - j, c)], ty},
                                                       {dof_at[key(sys.nx - i, sys.ny - j, c)], tx * ty}}};
      std::sort(images.begin(), images.end());
      const auto end = std::unique(images.begin(), images.end(),
                                   [](const auto& x, const auto& y) { return x.first == y.first; });
      const double norm = 1.0 / std::sqrt(static_cast<double>(end - images.begin()));
      for (auto it = images.begin(); it != end; ++it) slot[it->first] = {columns, it->second * norm};
      ++columns;
    }

    Sector s;
    s.size = columns;
    for (int q_dof = 0; q_dof < dofs; ++q_dof) {
      if (slot[q_dof].column < 0) continue;
      for (Eigen::SparseMatrix<double>::InnerIterator it(sys.stiffness, q_dof); it; ++it) {
        const int r = static_cast<int>(it.row());
        if (slot[r].column < 0) continue;
        s.kd = std::max(s.kd, std::abs(slot[r].column - slot[q_dof].column));
      }
    }
    s.band.assign(static_cast<std::size_t>(s.kd + 1) * columns, 0.0);
    for (int q_dof = 0; q_dof < dofs; ++q_dof) {
      const Slot q = slot[q_dof];
      if (q.column < 0) continue;
      for (Eigen::SparseMatrix<double>::InnerIterator it(sys.stiffness, q_dof); it; ++it) {
        const int r = static_cast<int>(it.row());
        const Slot p = slot[r];
        if (p.column < 0 || p.column < q.column) continue;  // lower triangle only
        const double v = p.coeff * it.value() * inv_sqrt_m[r] * inv_sqrt_m[q_dof] * q.coeff;
        s.band[static_cast<std::size_t>(p.column - q.column) + static_cast<std::size_t>(q.column) * (s.kd + 1)] += v;
      }
    }
    return s;
  };

  std::vector<double> all;
  all.reserve(static_cast<std::size_t>(dofs));
  const std::size_t batch = static_cast<std::size_t>(std::max(1, opts.threads));
  for (std::size_t start = 0; start < parities.size(); start += batch) {
    std::vector<std::future<std::vector<double>>> jobs;
    for (std::size_t k = start; k < std::min(parities.size(), start + batch); ++k) {
      const auto parity = parities[k];
      const auto policy = batch > 1 ? std::launch::async : std::launch::deferred;
      jobs.push_back(std::async(policy, [&, parity] { return solve_banded(build_sector(parity)); }));
    }
    for (auto& job : jobs) {
      const auto w = job.get();
      all.insert(all.end(), w.begin(), w.end());
    }
  }
  if (static_cast<int>(all.size()) != dofs)
    fail(ErrorKind::EigensolverFailure, "symmetry sectors lost dofs (" + std::to_string(all.size()) + " of " +
                                            std::to_string(dofs) + ")");
  std::sort(all.begin(), all.end());
  const double scale = all.empty() ? 0.0 : std::abs(all.back());
  for (double& v : all) {
    if (v < 0.0) {
      if (v < -1e-10 * scale) fail(ErrorKind::EigensolverFailure, "negative eigenvalue of a nonnegative operator");
      v = 0.0;
    }
  }

  Spectrum s;
  s.domain = Domain(Rectangle{a, b});
  s.bc = bc;
  s.params = params;
  s.method = SolverMethod::FiniteDifference;
  s.grid = grid_n;
  s.eigenvalues = std::move(all);
  s.multiplicities.assign(s.eigenvalues.size(), 1);
  return s;
}

}  // namespace nlspec
