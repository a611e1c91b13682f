#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>
#include <memory>

#include "disloc/core.hpp"

namespace disloc {

/// Five-point discrete Laplacian on the grid with the slip boundary S (y=0)
/// eliminated as Dirichlet data, ghost-node reflection for u_x = 0 on the
/// lateral sides and mu u_y = g on the top. Rows carry finite-volume weights
/// (1/2 on boundary lines) so the operator is symmetric positive definite.
/// The factorization is computed once per grid and reused for every solve.
class LaplaceSolver {
 public:
  explicit LaplaceSolver(const GridSpec& grid);

  const GridSpec& grid() const { return grid_; }

  /// Solves with Dirichlet data on S and spatially uniform traction g.
  Field2D solve(const Profile1D& dirichlet_S, double g, double mu) const;

  /// Spatially varying traction profile on Gamma1 (extension mode).
  Field2D solve(const Profile1D& dirichlet_S, const Profile1D& g, double mu) const;

  /// Relative residual of the eliminated linear system for a solved field.
  double residual(const Field2D& field, const Profile1D& dirichlet_S,
                  const Profile1D& g, double mu) const;

  /// Discrete quadratic energy 1/2 v^T M v - rhs^T v of the eliminated
  /// system, evaluated on the interior values of a full nodal field.
  double quadraticEnergy(const Field2D& field, const Profile1D& dirichlet_S,
                         const Profile1D& g, double mu) const;

 private:
  Eigen::VectorXd assembleRhs(const Profile1D& dirichlet_S, const Profile1D& g,
                              double mu) const;
  Field2D liftSolution(const Eigen::VectorXd& interior, const Profile1D& dirichlet_S) const;

  GridSpec grid_;
  Eigen::SparseMatrix<double> op_;
  std::unique_ptr<Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>>> factor_;
};

/// One-sided second-order normal derivative u_y(x_i, 0) on S:
/// (-3 u_{i,0} + 4 u_{i,1} - u_{i,2}) / (2 dy). Exact for quadratics in y.
Profile1D normal_derivative_S(const Field2D& field);

/// Discrete Dirichlet-to-Neumann reduction of the slip boundary:
/// normal_derivative_S(solve(d, g, mu)) = A d + (g/mu) r.
struct DtnMap {
  GridSpec grid;
  Eigen::MatrixXd A;  // (Nx+1) x (Nx+1)
  Eigen::VectorXd r;  // traction response per unit g/mu

  Eigen::VectorXd apply(const Eigen::VectorXd& dirichlet_S, double g_over_mu) const {
    return A * dirichlet_S + g_over_mu * r;
  }
};

/// Builds the DtN map column by column from Nx+1 solves with the shared
/// factorization.
DtnMap build_dtn(const GridSpec& grid);
DtnMap build_dtn(const LaplaceSolver& solver);

/// E1(u) = mu * Q(u) - 2 * trapezoid(g * u on Gamma1), with Q the
/// cell-centered quadrature of |grad u|^2 (edge-difference averages).
double elastic_energy(const Field2D& field, const Profile1D& g_on_top, double mu);
double elastic_energy(const Field2D& field, double g, double mu);

}  // namespace disloc
