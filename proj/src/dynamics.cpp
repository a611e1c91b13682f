#include "disloc/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace disloc {

namespace {

Eigen::VectorXd toVec(const Profile1D& p) {
  return Eigen::Map<const Eigen::VectorXd>(p.values.data(), p.size());
}

Profile1D toProfile(const GridSpec& grid, const Eigen::VectorXd& v) {
  Profile1D p(grid);
  Eigen::Map<Eigen::VectorXd>(p.values.data(), p.size()) = v;
  return p;
}

// Second difference with ghost-reflected Neumann ends.
Eigen::VectorXd secondDifference(const Eigen::VectorXd& u, double dx) {
  const auto n = u.size();
  Eigen::VectorXd out(n);
  const double inv = 1.0 / (dx * dx);
  out[0] = 2.0 * (u[1] - u[0]) * inv;
  for (Eigen::Index i = 1; i + 1 < n; ++i) out[i] = (u[i - 1] - 2.0 * u[i] + u[i + 1]) * inv;
  out[n - 1] = 2.0 * (u[n - 2] - u[n - 1]) * inv;
  return out;
}

double trapezoid(const Eigen::VectorXd& v, double dx) {
  double s = 0.5 * (v[0] + v[v.size() - 1]);
  for (Eigen::Index i = 1; i + 1 < v.size(); ++i) s += v[i];
  return s * dx;
}

}  // namespace

Eigen::VectorXd rhs_vec(const Eigen::VectorXd& u, double t, const DtnMap& dtn,
                        const ModelParams& params, const LoadSpec& load) {
  const Potential pot{params.beta, params.b};
  Eigen::VectorXd out = params.eps * secondDifference(u, dtn.grid.dx());
  for (Eigen::Index i = 0; i < u.size(); ++i) out[i] -= pot.dW(u[i]);
  out += params.gamma() * dtn.apply(u, load(t) / params.mu);
  return out / params.alpha;
}

Profile1D rhs(const Profile1D& u_S, double t, const DtnMap& dtn,
              const ModelParams& params, const LoadSpec& load) {
  return toProfile(u_S.grid, rhs_vec(toVec(u_S), t, dtn, params, load));
}

Eigen::MatrixXd rhs_jacobian(const Eigen::VectorXd& u, const DtnMap& dtn,
                             const ModelParams& params) {
  const Potential pot{params.beta, params.b};
  const double inv = 1.0 / (dtn.grid.dx() * dtn.grid.dx());
  const auto n = u.size();
  Eigen::MatrixXd J = params.gamma() * dtn.A;
  J(0, 0) += -2.0 * params.eps * inv;
  J(0, 1) += 2.0 * params.eps * inv;
  for (Eigen::Index i = 1; i + 1 < n; ++i) {
    J(i, i - 1) += params.eps * inv;
    J(i, i) += -2.0 * params.eps * inv;
    J(i, i + 1) += params.eps * inv;
  }
  J(n - 1, n - 2) += 2.0 * params.eps * inv;
  J(n - 1, n - 1) += -2.0 * params.eps * inv;
  for (Eigen::Index i = 0; i < n; ++i) J(i, i) -= pot.ddW(u[i]);
  return J / params.alpha;
}

namespace {

class BdfIntegrator {
 public:
  BdfIntegrator(const ModelParams& params, const DtnMap& dtn, const LoadSpec& load,
                const IntegrateOptions& opts)
      : params_(params), dtn_(dtn), load_(load), opts_(opts) {}

  // Advances (t, u) exactly to t_target.
  void advanceTo(double& t, Eigen::VectorXd& u, double t_target, StepStats& stats) {
    if (t_target <= t) return;
    if (!have_history_ || t != t_hist_) {
      have_history_ = false;  // restart after an externally imposed stop
    }
    if (h_ <= 0.0) h_ = initialStep(t, u, t_target);
    while (t < t_target - 1e-14 * std::max(1.0, std::abs(t_target))) {
      double h = std::min(h_, t_target - t);
      bool last = h >= t_target - t - 1e-300;
      StepResult res = tryStep(t, u, h, stats);
      if (!res.accepted) {
        ++stats.rejected;
        h_ = std::max(h * res.scale, opts_.min_step);
        if (h_ < 2.0 * opts_.min_step && h <= 2.0 * opts_.min_step)
          throw IntegrationError("integrate: step size underflow at t = " + std::to_string(t),
                                 SimState{t, toProfile(dtn_.grid, u), stats});
        continue;
      }
      ++stats.accepted;
      u_prev_ = u;
      h_prev_ = h;
      u = res.u;
      t = last ? t_target : t + h;
      t_hist_ = t;
      have_history_ = true;
      h_ = std::max(opts_.min_step, h * res.scale);
      if (stats.accepted + stats.rejected > opts_.max_steps)
        throw IntegrationError("integrate: exceeded max step count",
                               SimState{t, toProfile(dtn_.grid, u), stats});
    }
    t = t_target;
  }

 private:
  struct StepResult {
    bool accepted = false;
    double scale = 0.5;
    Eigen::VectorXd u;
  };

  double wrms(const Eigen::VectorXd& v, const Eigen::VectorXd& ref) const {
    double s = 0.0;
    for (Eigen::Index i = 0; i < v.size(); ++i) {
      double w = opts_.abs_tol + opts_.rel_tol * std::abs(ref[i]);
      double q = v[i] / w;
      s += q * q;
    }
    return std::sqrt(s / static_cast<double>(v.size()));
  }

  double initialStep(double t, const Eigen::VectorXd& u, double t_target) const {
    Eigen::VectorXd f = rhs_vec(u, t, dtn_, params_, load_);
    double d = wrms(f, u);
    double h = d > 0.0 ? 0.01 / d : 1e-6;
    return std::min(h, (t_target - t) / 10.0);
  }

  // One BDF step of order 1 (no history) or 2, with Newton on the exact
  // Jacobian evaluated at the predictor.
  StepResult tryStep(double t, const Eigen::VectorXd& u, double h, StepStats& stats) {
    StepResult res;
    const double tn1 = t + h;
    double a0;
    Eigen::VectorXd history, pred;
    bool second_order = have_history_;
    if (second_order) {
      double rho = h / h_prev_;
      a0 = (1.0 + 2.0 * rho) / (1.0 + rho);
      history = -(1.0 + rho) * u + (rho * rho / (1.0 + rho)) * u_prev_;
      pred = u + rho * (u - u_prev_);
    } else {
      a0 = 1.0;
      history = -u;
      pred = u;
    }

    Eigen::VectorXd v = pred;
    Eigen::MatrixXd newton = -h * rhs_jacobian(v, dtn_, params_);
    newton.diagonal().array() += a0;
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(newton);

    bool converged = false;
    for (int it = 0; it < 8; ++it) {
      ++stats.newton_iterations;
      Eigen::VectorXd G = a0 * v + history - h * rhs_vec(v, tn1, dtn_, params_, load_);
      Eigen::VectorXd delta = lu.solve(G);
      v -= delta;
      if (wrms(delta, v) < 1e-2) {
        converged = true;
        break;
      }
    }
    if (!converged || !v.allFinite()) {
      res.accepted = false;
      res.scale = 0.25;
      return res;
    }

    // Predictor-corrector difference controls the local error.
    double err = wrms(v - pred, v) / (second_order ? 3.0 : 2.0);
    if (err > 1.0) {
      res.accepted = false;
      res.scale = std::max(0.2, 0.9 * std::pow(err, -1.0 / (second_order ? 3.0 : 2.0)));
      return res;
    }
    res.accepted = true;
    res.u = std::move(v);
    double grow = err > 0.0 ? 0.9 * std::pow(err, -1.0 / (second_order ? 3.0 : 2.0)) : 4.0;
    res.scale = std::clamp(grow, 0.2, 4.0);
    return res;
  }

  const ModelParams& params_;
  const DtnMap& dtn_;
  const LoadSpec& load_;
  const IntegrateOptions& opts_;

  double h_ = -1.0;
  double h_prev_ = 0.0;
  double t_hist_ = std::numeric_limits<double>::quiet_NaN();
  bool have_history_ = false;
  Eigen::VectorXd u_prev_;
};

}  // namespace

TimeSeries integrate(const SimState& state0, const ModelParams& params,
                     const DtnMap& dtn, const LoadSpec& load,
                     std::span<const double> record_times, const IntegrateOptions& opts,
                     const SampleObserver& observer) {
  if (record_times.empty())
    throw std::invalid_argument("integrate: record_times must not be empty");
  if (std::abs(record_times.front() - state0.t) > 1e-12)
    throw std::invalid_argument("integrate: record_times must start at the initial time");
  for (size_t k = 1; k < record_times.size(); ++k)
    if (!(record_times[k] > record_times[k - 1]))
      throw std::invalid_argument("integrate: record_times must be strictly increasing");

  TimeSeries series;
  series.stats = state0.stats;
  double t = state0.t;
  Eigen::VectorXd u = toVec(state0.u);

  auto record = [&](double tt, const Eigen::VectorXd& uu) {
    Sample s;
    s.t = tt;
    s.u = toProfile(dtn.grid, uu);
    s.position = track_position(s.u, params);
    series.samples.push_back(std::move(s));
    if (observer) observer(series.samples.back());
  };

  record(t, u);
  BdfIntegrator stepper(params, dtn, load, opts);
  for (size_t k = 1; k < record_times.size(); ++k) {
    stepper.advanceTo(t, u, record_times[k], series.stats);
    record(t, u);
  }
  return series;
}

double interface_energy(const Profile1D& u_S, const ModelParams& params) {
  const GridSpec& g = u_S.grid;
  const double dx = g.dx();
  const int n = u_S.size();
  Eigen::VectorXd phi(n);
  for (int i = 0; i < n; ++i) phi[i] = 2.0 * u_S[i] / params.b;
  Eigen::VectorXd integrand(n);
  for (int i = 0; i < n; ++i) {
    double phix;
    if (i == 0)
      phix = (phi[1] - phi[0]) / dx;
    else if (i == n - 1)
      phix = (phi[n - 1] - phi[n - 2]) / dx;
    else
      phix = (phi[i + 1] - phi[i - 1]) / (2.0 * dx);
    double F = phi[i] * phi[i] * (1.0 - phi[i]) * (1.0 - phi[i]);
    integrand[i] = 0.5 * params.eps * phix * phix + params.beta * F;
  }
  return trapezoid(integrand, dx);
}

EnergyReport total_energy(const Profile1D& u_S, double t, const LaplaceSolver& solver,
                          const DtnMap& dtn, const ModelParams& params,
                          const LoadSpec& load) {
  EnergyReport rep;
  rep.t = t;
  rep.E0 = interface_energy(u_S, params);
  const double g = load(t);
  Field2D field = solver.solve(u_S, g, params.mu);
  rep.E1 = elastic_energy(field, g, params.mu);
  rep.total = rep.E0 + rep.E1;
  Eigen::VectorXd ut = rhs_vec(toVec(u_S), t, dtn, params, load);
  Eigen::VectorXd ut2 = ut.array().square();
  rep.dissipation_rhs =
      -params.alpha * 4.0 / (params.b * params.b) * trapezoid(ut2, u_S.grid.dx());
  return rep;
}

void annotate_energies(TimeSeries& series, const LaplaceSolver& solver,
                       const DtnMap& dtn, const ModelParams& params,
                       const LoadSpec& load) {
  for (auto& s : series.samples)
    s.energy = total_energy(s.u, s.t, solver, dtn, params, load);
  for (size_t k = 0; k < series.samples.size(); ++k) {
    if (k == 0 || k + 1 == series.samples.size()) continue;
    const auto& prev = series.samples[k - 1];
    const auto& next = series.samples[k + 1];
    series.samples[k].energy.dissipation_lhs =
        (next.energy.total - prev.energy.total) / (next.t - prev.t);
  }
}

PositionTrack track_position(const Profile1D& u_S, const ModelParams& params) {
  const GridSpec& g = u_S.grid;
  const double level = params.b / 4.0;
  PositionTrack track;
  for (int i = 0; i < g.Nx; ++i) {
    double a = u_S[i] - level;
    double c = u_S[i + 1] - level;
    if (a == 0.0 || a * c < 0.0) {
      double x = a == 0.0 ? g.x(i) : g.x(i) + g.dx() * a / (a - c);
      if (!track.x) {
        track.x = x;
      } else {
        track.multiple_crossings = true;
        break;
      }
    }
  }
  if (!track.x && u_S[g.Nx] - level == 0.0) track.x = g.x(g.Nx);
  return track;
}

}  // namespace disloc
