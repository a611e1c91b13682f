#pragma once

#include <Eigen/Dense>
#include <stdexcept>

namespace disloc {

using Vec3 = Eigen::Vector3d;

/// Symmetric 3x3 tensor stored by its six independent components.
struct SymTensor3 {
  double s11 = 0, s22 = 0, s33 = 0, s12 = 0, s13 = 0, s23 = 0;

  static SymTensor3 fromMatrix(const Eigen::Matrix3d& m) {
    return {m(0, 0), m(1, 1), m(2, 2),
            0.5 * (m(0, 1) + m(1, 0)), 0.5 * (m(0, 2) + m(2, 0)),
            0.5 * (m(1, 2) + m(2, 1))};
  }

  Eigen::Matrix3d toMatrix() const {
    Eigen::Matrix3d m;
    m << s11, s12, s13, s12, s22, s23, s13, s23, s33;
    return m;
  }

  double trace() const { return s11 + s22 + s33; }

  /// Frobenius inner product a:b = a_ij b_ij.
  double contract(const SymTensor3& o) const {
    return s11 * o.s11 + s22 * o.s22 + s33 * o.s33 +
           2.0 * (s12 * o.s12 + s13 * o.s13 + s23 * o.s23);
  }

  double normSquared() const { return contract(*this); }

  Vec3 apply(const Vec3& v) const { return toMatrix() * v; }
};

/// Isotropic elasticity: lambda >= 0, mu > 0. Positivity holds with c* = 2 mu.
struct IsotropicElasticity {
  double lambda;
  double mu;

  IsotropicElasticity(double lambda_, double mu_) : lambda(lambda_), mu(mu_) {
    if (lambda < 0.0) throw std::invalid_argument("IsotropicElasticity: lambda must be >= 0");
    if (!(mu > 0.0)) throw std::invalid_argument("IsotropicElasticity: mu must be > 0");
  }
};

/// e = (grad_u + grad_u^T) / 2.
SymTensor3 strain(const Eigen::Matrix3d& grad_u);

/// sigma = lambda tr(e) I + 2 mu e.
SymTensor3 isotropic_stress(const SymTensor3& e, const IsotropicElasticity& C);

/// w = lambda tr(e)^2 / 2 + mu |e|^2 = (sigma : e) / 2.
double strain_energy_density(const SymTensor3& e, const IsotropicElasticity& C);

/// Peach-Koehler force F = tau x (sigma b). tau must be a unit vector.
Vec3 pk_force(const SymTensor3& sigma, const Vec3& b, const Vec3& tau);

/// Glide component f = (sigma nu) . b. nu must be a unit vector.
double glide_force(const SymTensor3& sigma, const Vec3& b, const Vec3& nu);

}  // namespace disloc
