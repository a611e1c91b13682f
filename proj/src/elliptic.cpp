#include "disloc/elliptic.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace disloc {

namespace {

// Index of unknown node (i, j), j >= 1.
inline int unknown(const GridSpec& g, int i, int j) { return (j - 1) * (g.Nx + 1) + i; }

inline double weightX(const GridSpec& g, int i) { return (i == 0 || i == g.Nx) ? 0.5 : 1.0; }
inline double weightY(const GridSpec& g, int j) { return j == g.Ny ? 0.5 : 1.0; }

}  // namespace

LaplaceSolver::LaplaceSolver(const GridSpec& grid) : grid_(grid) {
  grid_.validate();
  const int Nx = grid_.Nx, Ny = grid_.Ny;
  const double dx2 = grid_.dx() * grid_.dx();
  const double dy2 = grid_.dy() * grid_.dy();
  const int n = (Nx + 1) * Ny;

  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(static_cast<size_t>(5 * n));
  for (int j = 1; j <= Ny; ++j) {
    for (int i = 0; i <= Nx; ++i) {
      const double c = weightX(grid_, i) * weightY(grid_, j);
      const int k = unknown(grid_, i, j);
      double diag = 0.0;
      if (i == 0) {
        trip.emplace_back(k, unknown(grid_, 1, j), -2.0 * c / dx2);
        diag += 2.0 * c / dx2;
      } else if (i == Nx) {
        trip.emplace_back(k, unknown(grid_, Nx - 1, j), -2.0 * c / dx2);
        diag += 2.0 * c / dx2;
      } else {
        trip.emplace_back(k, unknown(grid_, i - 1, j), -c / dx2);
        trip.emplace_back(k, unknown(grid_, i + 1, j), -c / dx2);
        diag += 2.0 * c / dx2;
      }
      if (j == Ny) {
        trip.emplace_back(k, unknown(grid_, i, Ny - 1), -2.0 * c / dy2);
        diag += 2.0 * c / dy2;
      } else {
        if (j > 1) trip.emplace_back(k, unknown(grid_, i, j - 1), -c / dy2);
        trip.emplace_back(k, unknown(grid_, i, j + 1), -c / dy2);
        diag += 2.0 * c / dy2;
      }
      trip.emplace_back(k, k, diag);
    }
  }
  op_.resize(n, n);
  op_.setFromTriplets(trip.begin(), trip.end());
  factor_ = std::make_unique<Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>>>(op_);
  if (factor_->info() != Eigen::Success)
    throw std::runtime_error("LaplaceSolver: factorization failed");
}

Eigen::VectorXd LaplaceSolver::assembleRhs(const Profile1D& dirichlet_S,
                                           const Profile1D& g, double mu) const {
  const int Nx = grid_.Nx, Ny = grid_.Ny;
  const double dy = grid_.dy();
  const double dy2 = dy * dy;
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero((Nx + 1) * Ny);
  for (int i = 0; i <= Nx; ++i) {
    // Dirichlet data on S couples into the j = 1 row.
    rhs[unknown(grid_, i, 1)] += weightX(grid_, i) * dirichlet_S[i] / dy2;
    // Ghost node on Gamma1: u_{i,Ny+1} = u_{i,Ny-1} + 2 dy g_i / mu.
    rhs[unknown(grid_, i, Ny)] += weightX(grid_, i) * 0.5 * 2.0 / dy * (g[i] / mu);
  }
  return rhs;
}

Field2D LaplaceSolver::liftSolution(const Eigen::VectorXd& interior,
                                    const Profile1D& dirichlet_S) const {
  Field2D f(grid_);
  for (int i = 0; i <= grid_.Nx; ++i) f.at(i, 0) = dirichlet_S[i];
  for (int j = 1; j <= grid_.Ny; ++j)
    for (int i = 0; i <= grid_.Nx; ++i) f.at(i, j) = interior[unknown(grid_, i, j)];
  return f;
}

Field2D LaplaceSolver::solve(const Profile1D& dirichlet_S, const Profile1D& g,
                             double mu) const {
  if (!(mu > 0.0)) throw std::invalid_argument("LaplaceSolver::solve: mu must be > 0");
  for (double v : dirichlet_S.values)
    if (!std::isfinite(v))
      throw std::invalid_argument("LaplaceSolver::solve: dirichlet_S must be finite");
  Eigen::VectorXd rhs = assembleRhs(dirichlet_S, g, mu);
  Eigen::VectorXd u = factor_->solve(rhs);
  if (factor_->info() != Eigen::Success)
    throw std::runtime_error("LaplaceSolver::solve: back substitution failed");
  double rel = (op_ * u - rhs).norm() / std::max(rhs.norm(), 1e-300);
  if (rhs.norm() > 0.0 && rel > 1e-10)
    throw std::runtime_error("LaplaceSolver::solve: relative residual " + std::to_string(rel));
  return liftSolution(u, dirichlet_S);
}

Field2D LaplaceSolver::solve(const Profile1D& dirichlet_S, double g, double mu) const {
  return solve(dirichlet_S, Profile1D(grid_, g), mu);
}

double LaplaceSolver::residual(const Field2D& field, const Profile1D& dirichlet_S,
                               const Profile1D& g, double mu) const {
  Eigen::VectorXd u((grid_.Nx + 1) * grid_.Ny);
  for (int j = 1; j <= grid_.Ny; ++j)
    for (int i = 0; i <= grid_.Nx; ++i) u[unknown(grid_, i, j)] = field.at(i, j);
  Eigen::VectorXd rhs = assembleRhs(dirichlet_S, g, mu);
  return (op_ * u - rhs).norm() / std::max(rhs.norm(), 1e-300);
}

double LaplaceSolver::quadraticEnergy(const Field2D& field, const Profile1D& dirichlet_S,
                                      const Profile1D& g, double mu) const {
  Eigen::VectorXd u((grid_.Nx + 1) * grid_.Ny);
  for (int j = 1; j <= grid_.Ny; ++j)
    for (int i = 0; i <= grid_.Nx; ++i) u[unknown(grid_, i, j)] = field.at(i, j);
  Eigen::VectorXd rhs = assembleRhs(dirichlet_S, g, mu);
  return 0.5 * u.dot(op_ * u) - rhs.dot(u);
}

Profile1D normal_derivative_S(const Field2D& field) {
  const GridSpec& g = field.grid;
  if (g.Ny < 2) throw std::invalid_argument("normal_derivative_S: Ny must be >= 2");
  Profile1D d(g);
  const double dy = g.dy();
  for (int i = 0; i <= g.Nx; ++i)
    d[i] = (-3.0 * field.at(i, 0) + 4.0 * field.at(i, 1) - field.at(i, 2)) / (2.0 * dy);
  return d;
}

DtnMap build_dtn(const LaplaceSolver& solver) {
  const GridSpec& grid = solver.grid();
  const int n = grid.Nx + 1;
  DtnMap dtn;
  dtn.grid = grid;
  dtn.A.resize(n, n);
  Profile1D basis(grid, 0.0);
  for (int l = 0; l < n; ++l) {
    basis[l] = 1.0;
    Profile1D dcol = normal_derivative_S(solver.solve(basis, 0.0, 1.0));
    for (int k = 0; k < n; ++k) dtn.A(k, l) = dcol[k];
    basis[l] = 0.0;
  }
  Profile1D rcol = normal_derivative_S(solver.solve(Profile1D(grid, 0.0), 1.0, 1.0));
  dtn.r = Eigen::Map<const Eigen::VectorXd>(rcol.values.data(), n);
  return dtn;
}

DtnMap build_dtn(const GridSpec& grid) { return build_dtn(LaplaceSolver(grid)); }

double elastic_energy(const Field2D& field, const Profile1D& g_on_top, double mu) {
  const GridSpec& g = field.grid;
  const double dx = g.dx(), dy = g.dy();
  double quad = 0.0;
  for (int j = 0; j < g.Ny; ++j) {
    for (int i = 0; i < g.Nx; ++i) {
      double ux = 0.5 * ((field.at(i + 1, j) - field.at(i, j)) +
                         (field.at(i + 1, j + 1) - field.at(i, j + 1))) / dx;
      double uy = 0.5 * ((field.at(i, j + 1) - field.at(i, j)) +
                         (field.at(i + 1, j + 1) - field.at(i + 1, j))) / dy;
      quad += (ux * ux + uy * uy) * dx * dy;
    }
  }
  double traction = 0.0;
  for (int i = 0; i <= g.Nx; ++i) {
    double w = (i == 0 || i == g.Nx) ? 0.5 : 1.0;
    traction += w * g_on_top[i] * field.at(i, g.Ny) * dx;
  }
  return mu * quad - 2.0 * traction;
}

double elastic_energy(const Field2D& field, double g, double mu) {
  return elastic_energy(field, Profile1D(field.grid, g), mu);
}

}  // namespace disloc
