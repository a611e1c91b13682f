#include "disloc/elastica.hpp"

#include <cmath>

namespace disloc {

namespace {
void requireUnit(const Vec3& v, const char* name) {
  if (std::abs(v.norm() - 1.0) > 1e-12)
    throw std::invalid_argument(std::string(name) + " must be a unit vector");
}
}  // namespace

SymTensor3 strain(const Eigen::Matrix3d& grad_u) {
  return SymTensor3::fromMatrix(0.5 * (grad_u + grad_u.transpose()));
}

SymTensor3 isotropic_stress(const SymTensor3& e, const IsotropicElasticity& C) {
  double p = C.lambda * e.trace();
  return {p + 2.0 * C.mu * e.s11, p + 2.0 * C.mu * e.s22, p + 2.0 * C.mu * e.s33,
          2.0 * C.mu * e.s12, 2.0 * C.mu * e.s13, 2.0 * C.mu * e.s23};
}

double strain_energy_density(const SymTensor3& e, const IsotropicElasticity& C) {
  double tr = e.trace();
  return 0.5 * C.lambda * tr * tr + C.mu * e.normSquared();
}

Vec3 pk_force(const SymTensor3& sigma, const Vec3& b, const Vec3& tau) {
  requireUnit(tau, "tau");
  return tau.cross(sigma.apply(b));
}

double glide_force(const SymTensor3& sigma, const Vec3& b, const Vec3& nu) {
  requireUnit(nu, "nu");
  return sigma.apply(nu).dot(b);
}

}  // namespace disloc
