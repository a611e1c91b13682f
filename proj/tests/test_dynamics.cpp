#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstring>
#include <random>

#include "disloc/dynamics.hpp"

using namespace disloc;

namespace {

const GridSpec kSmallGrid(2.0, 2.0, 64, 32);

ModelParams tableParams() { return ModelParams{}; }

std::vector<double> linspace(double a, double b, int n) {
  std::vector<double> out(static_cast<size_t>(n));
  for (int k = 0; k < n; ++k) out[static_cast<size_t>(k)] = a + (b - a) * k / (n - 1);
  return out;
}

}  // namespace

TEST_CASE("Potential: wells, midpoint, frozen value") {
  Potential W{10.0, 0.06};
  CHECK(W.W(0.0) == 0.0);
  CHECK(W.W(0.03) == 0.0);
  CHECK(W.W(0.015) == doctest::Approx(5.625e-4).epsilon(1e-14));
  CHECK(std::abs(W.dW(0.015)) <= 1e-14);
  CHECK(W.dW(0.0) == 0.0);
  CHECK(W.dW(0.03) == 0.0);
}

TEST_CASE("Potential: W' matches centered differences of W") {
  Potential W{10.0, 0.06};
  std::mt19937 rng(31337);
  std::uniform_real_distribution<double> d(-0.06, 0.06);
  double h = 1e-6 * 0.06;
  for (int k = 0; k < 64; ++k) {
    double s = d(rng);
    double fd = (W.W(s + h) - W.W(s - h)) / (2.0 * h);
    double exact = W.dW(s);
    CHECK(std::abs(fd - exact) <= 1e-6 * (std::abs(exact) + 1e-8));
  }
}

TEST_CASE("rhs: equilibria and the uniform-load value") {
  DtnMap dtn = build_dtn(kSmallGrid);
  ModelParams p = tableParams();

  Profile1D zero(kSmallGrid);
  Profile1D out = rhs(zero, 0.0, dtn, p, LoadSpec::constant(0.0));
  for (int i = 0; i < out.size(); ++i) CHECK(std::abs(out[i]) <= 1e-12);

  Profile1D well(kSmallGrid, p.b / 2.0);
  out = rhs(well, 0.0, dtn, p, LoadSpec::constant(0.0));
  for (int i = 0; i < out.size(); ++i) CHECK(std::abs(out[i]) <= 1e-10);

  // gamma (g/mu) r / alpha = 0.018 * 0.05 / 0.01 = 0.09, uniform.
  out = rhs(zero, 1.3, dtn, p, LoadSpec::constant(0.5));
  for (int i = 0; i < out.size(); ++i) CHECK(out[i] == doctest::Approx(0.09).epsilon(1e-8));
}

TEST_CASE("rhs_jacobian matches directional finite differences") {
  GridSpec grid(2.0, 2.0, 24, 12);
  DtnMap dtn = build_dtn(grid);
  ModelParams p = tableParams();
  LoadSpec load = LoadSpec::constant(0.5);
  std::mt19937 rng(2718);
  std::normal_distribution<double> d(0.0, 0.01);
  int n = grid.Nx + 1;
  for (int trial = 0; trial < 5; ++trial) {
    Eigen::VectorXd u(n), v(n);
    for (int i = 0; i < n; ++i) {
      u[i] = d(rng);
      v[i] = d(rng);
    }
    v.normalize();
    Eigen::MatrixXd J = rhs_jacobian(u, dtn, p);
    double h = 1e-7;
    Eigen::VectorXd fd =
        (rhs_vec(u + h * v, 0.0, dtn, p, load) - rhs_vec(u - h * v, 0.0, dtn, p, load)) /
        (2.0 * h);
    Eigen::VectorXd jv = J * v;
    CHECK((fd - jv).norm() <= 1e-5 * (jv.norm() + 1.0));
  }
}

TEST_CASE("integrate: both wells are fixed points over T = 4") {
  DtnMap dtn = build_dtn(kSmallGrid);
  ModelParams p = tableParams();
  LoadSpec load = LoadSpec::constant(0.0);
  std::vector<double> times = {0.0, 2.0, 4.0};
  for (double level : {0.0, tableParams().b / 2.0}) {
    SimState s0;
    s0.u = Profile1D(kSmallGrid, level);
    TimeSeries ts = integrate(s0, p, dtn, load, times);
    REQUIRE(ts.samples.size() == 3);
    for (const Sample& s : ts.samples)
      for (int i = 0; i < s.u.size(); ++i)
        CHECK(std::abs(s.u[i] - level) <= 1e-8);
  }
}

TEST_CASE("integrate: rejects bad record times") {
  DtnMap dtn = build_dtn(kSmallGrid);
  SimState s0;
  s0.u = Profile1D(kSmallGrid);
  std::vector<double> bad = {0.0, 2.0, 1.0};
  CHECK_THROWS_AS(integrate(s0, tableParams(), dtn, LoadSpec::constant(0.0), bad),
                  std::invalid_argument);
  std::vector<double> wrongStart = {0.5, 1.0};
  CHECK_THROWS_AS(integrate(s0, tableParams(), dtn, LoadSpec::constant(0.0), wrongStart),
                  std::invalid_argument);
}

TEST_CASE("interface_energy: constant-profile values") {
  ModelParams p = tableParams();
  CHECK(interface_energy(Profile1D(kSmallGrid), p) == 0.0);
  CHECK(std::abs(interface_energy(Profile1D(kSmallGrid, p.b / 2.0), p)) <= 1e-13);
  // phi = 1/2: beta F(1/2) (2L) = 10 / 16 * 4 = 2.5.
  CHECK(interface_energy(Profile1D(kSmallGrid, p.b / 4.0), p) == doctest::Approx(2.5).epsilon(1e-12));
}

TEST_CASE("total_energy: zero state and linear-field traction term") {
  GridSpec grid(2.0, 2.0, 32, 16);
  LaplaceSolver solver(grid);
  DtnMap dtn = build_dtn(solver);
  ModelParams p = tableParams();

  EnergyReport r = total_energy(Profile1D(grid), 0.0, solver, dtn, p, LoadSpec::constant(0.0));
  CHECK(r.E0 == 0.0);
  CHECK(std::abs(r.E1) <= 1e-12);
  CHECK(std::abs(r.total) <= 1e-12);

  r = total_energy(Profile1D(grid), 0.0, solver, dtn, p, LoadSpec::constant(0.5));
  CHECK(r.E1 == doctest::Approx(-0.2).epsilon(1e-9));

  r = total_energy(Profile1D(grid, p.b / 2.0), 0.0, solver, dtn, p, LoadSpec::constant(0.0));
  CHECK(std::abs(r.dissipation_rhs) <= 1e-12);
}

TEST_CASE("track_position: step profile and degenerate profiles") {
  ModelParams p = tableParams();
  GridSpec grid(2.0, 2.0, 64, 32);
  Profile1D step(grid);
  double x0 = grid.x(48);  // = 1.0
  for (int i = 0; i <= grid.Nx; ++i) step[i] = grid.x(i) > x0 ? p.b / 2.0 : 0.0;
  PositionTrack tr = track_position(step, p);
  REQUIRE(tr.x.has_value());
  CHECK(std::abs(*tr.x - x0) <= grid.dx());
  CHECK_FALSE(tr.multiple_crossings);

  CHECK_FALSE(track_position(Profile1D(grid), p).x.has_value());
  CHECK_FALSE(track_position(Profile1D(grid, p.b / 2.0), p).x.has_value());

  // Two interfaces: leftmost crossing wins and multiplicity is flagged.
  Profile1D bump(grid);
  for (int i = 0; i <= grid.Nx; ++i)
    bump[i] = (grid.x(i) > -1.0 && grid.x(i) < 1.0) ? p.b / 2.0 : 0.0;
  tr = track_position(bump, p);
  REQUIRE(tr.x.has_value());
  CHECK(std::abs(*tr.x - (-1.0)) <= grid.dx());
  CHECK(tr.multiple_crossings);
}

TEST_CASE("integrate: energy monotone and dissipation identity on a small run") {
  // The identity needs a resolved interface; coarser grids pin the front and
  // the energy descends in grid-scale steps.
  GridSpec grid(2.0, 2.0, 128, 64);
  LaplaceSolver solver(grid);
  DtnMap dtn = build_dtn(solver);
  ModelParams p = tableParams();
  p.T = 1.0;
  LoadSpec load = LoadSpec::constant(0.5);

  SimState s0;
  s0.u = initial_profile(grid, InitialCondition{1.0, InitialCondition::Amplitude::FullBurgers}, p.b);
  TimeSeries ts = integrate(s0, p, dtn, load, linspace(0.0, p.T, 41));
  annotate_energies(ts, solver, dtn, p, load);

  for (size_t k = 1; k < ts.samples.size(); ++k) {
    double prev = ts.samples[k - 1].energy.total;
    CHECK(ts.samples[k].energy.total <= prev + 1e-8 * (1.0 + std::abs(prev)));
  }
  int checked = 0;
  for (size_t k = 1; k + 1 < ts.samples.size(); ++k) {
    const EnergyReport& e = ts.samples[k].energy;
    if (e.t <= 0.2) continue;  // initial transient of the full-b step
    REQUIRE(e.dissipation_lhs.has_value());
    CHECK(std::abs(*e.dissipation_lhs - e.dissipation_rhs) <=
          0.1 * std::abs(e.dissipation_rhs) + 1e-8);
    ++checked;
  }
  CHECK(checked >= 20);
}

TEST_CASE("integrate: mirror equivariance under uniform load") {
  GridSpec grid(2.0, 2.0, 64, 32);
  DtnMap dtn = build_dtn(grid);
  ModelParams p = tableParams();
  LoadSpec load = LoadSpec::constant(0.5);
  std::vector<double> times = {0.0, 0.25, 0.5};

  SimState fwd, mir;
  fwd.u = Profile1D(grid);
  mir.u = Profile1D(grid);
  for (int i = 0; i <= grid.Nx; ++i) {
    double v = grid.x(i) > 1.0 ? p.b / 2.0 : 0.0;
    fwd.u[i] = v;
    mir.u[grid.Nx - i] = v;
  }
  TimeSeries a = integrate(fwd, p, dtn, load, times);
  TimeSeries b = integrate(mir, p, dtn, load, times);
  for (size_t k = 0; k < times.size(); ++k)
    for (int i = 0; i <= grid.Nx; ++i)
      CHECK(std::abs(a.samples[k].u[i] - b.samples[k].u[grid.Nx - i]) <= 1e-7);
  // Tracked positions negate (single interface throughout).
  for (size_t k = 0; k < times.size(); ++k) {
    REQUIRE(a.samples[k].position.x.has_value());
    REQUIRE(b.samples[k].position.x.has_value());
    CHECK(std::abs(*a.samples[k].position.x + *b.samples[k].position.x) <= 1e-5);
  }
}

TEST_CASE("integrate is deterministic") {
  GridSpec grid(2.0, 2.0, 48, 24);
  DtnMap dtn = build_dtn(grid);
  ModelParams p = tableParams();
  LoadSpec load = LoadSpec::constant(0.5);
  SimState s0;
  s0.u = initial_profile(grid, InitialCondition{0.5, InitialCondition::Amplitude::HalfBurgers}, p.b);
  std::vector<double> times = linspace(0.0, 0.5, 11);
  TimeSeries a = integrate(s0, p, dtn, load, times);
  TimeSeries b = integrate(s0, p, dtn, load, times);
  CHECK(a.stats == b.stats);
  REQUIRE(a.samples.size() == b.samples.size());
  for (size_t k = 0; k < a.samples.size(); ++k) {
    REQUIRE(a.samples[k].u.size() == b.samples[k].u.size());
    CHECK(std::memcmp(a.samples[k].u.values.data(), b.samples[k].u.values.data(),
                      a.samples[k].u.values.size() * sizeof(double)) == 0);
  }
}
