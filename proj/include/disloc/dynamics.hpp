#pragma once

#include <Eigen/Dense>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "disloc/core.hpp"
#include "disloc/elliptic.hpp"

namespace disloc {

/// Double well W(s) = (4 beta / b^2) s^2 (b/2 - s)^2 with wells at 0 and b/2.
struct Potential {
  double beta;
  double b;

  double coefficient() const { return 4.0 * beta / (b * b); }
  double W(double s) const {
    double q = b / 2.0 - s;
    return coefficient() * s * s * q * q;
  }
  double dW(double s) const {
    double q = b / 2.0 - s;
    return coefficient() * (2.0 * s * q * q - 2.0 * s * s * q);
  }
  double ddW(double s) const {
    double q = b / 2.0 - s;
    return coefficient() * (2.0 * q * q - 8.0 * s * q + 2.0 * s * s);
  }
};

struct StepStats {
  long accepted = 0;
  long rejected = 0;
  long newton_iterations = 0;

  bool operator==(const StepStats&) const = default;
};

struct SimState {
  double t = 0.0;
  Profile1D u;
  StepStats stats;
};

struct EnergyReport {
  double t = 0.0;
  double E0 = 0.0;
  double E1 = 0.0;
  double total = 0.0;
  /// Centered finite difference of total in t; absent without neighbors.
  std::optional<double> dissipation_lhs;
  /// -alpha (4/b^2) trapezoid(u_t^2) with u_t from the model right-hand side.
  double dissipation_rhs = 0.0;
};

struct PositionTrack {
  std::optional<double> x;       // leftmost crossing of the b/4 level
  bool multiple_crossings = false;
};

struct Sample {
  double t = 0.0;
  Profile1D u;
  PositionTrack position;
  EnergyReport energy;
};

struct TimeSeries {
  std::vector<Sample> samples;
  StepStats stats;
};

class IntegrationError : public std::runtime_error {
 public:
  IntegrationError(const std::string& msg, SimState state)
      : std::runtime_error(msg), state(std::move(state)) {}
  SimState state;
};

/// u_t = (eps D_xx u - W'(u) + gamma (A u + (g(t)/mu) r)) / alpha,
/// with D_xx the second difference under ghost-reflected Neumann ends.
Profile1D rhs(const Profile1D& u_S, double t, const DtnMap& dtn,
              const ModelParams& params, const LoadSpec& load);

Eigen::VectorXd rhs_vec(const Eigen::VectorXd& u, double t, const DtnMap& dtn,
                        const ModelParams& params, const LoadSpec& load);

/// Exact Jacobian of rhs: (eps D_xx - diag W''(u) + gamma A) / alpha.
Eigen::MatrixXd rhs_jacobian(const Eigen::VectorXd& u, const DtnMap& dtn,
                             const ModelParams& params);

struct IntegrateOptions {
  double rel_tol = 1e-6;
  double abs_tol = 1e-9;
  double min_step = 1e-12;
  long max_steps = 2'000'000;
};

using SampleObserver = std::function<void(const Sample&)>;

/// Advances the slip-boundary profile from state0.t to the last entry of
/// record_times with a variable-step BDF1/BDF2 scheme, recording the profile
/// and tracked position exactly at each requested time. record_times must be
/// strictly increasing and start at state0.t. Deterministic.
TimeSeries integrate(const SimState& state0, const ModelParams& params,
                     const DtnMap& dtn, const LoadSpec& load,
                     std::span<const double> record_times,
                     const IntegrateOptions& opts = {},
                     const SampleObserver& observer = nullptr);

/// E0 at phi = 2 u / b: trapezoid of eps/2 phi_x^2 + beta F(phi),
/// F(s) = s^2 (1-s)^2, with centered interior and one-sided end differences.
double interface_energy(const Profile1D& u_S, const ModelParams& params);

/// Solves the 2D field for the current slip data and load, then reports
/// E0, E1, their sum, and the instantaneous dissipation rate.
EnergyReport total_energy(const Profile1D& u_S, double t, const LaplaceSolver& solver,
                          const DtnMap& dtn, const ModelParams& params,
                          const LoadSpec& load);

/// Fills the energy reports of a recorded series, including the centered
/// finite-difference dissipation_lhs at interior samples.
void annotate_energies(TimeSeries& series, const LaplaceSolver& solver,
                       const DtnMap& dtn, const ModelParams& params,
                       const LoadSpec& load);

/// Leftmost crossing of the level b/4 of the linearly interpolated profile.
PositionTrack track_position(const Profile1D& u_S, const ModelParams& params);

}  // namespace disloc
