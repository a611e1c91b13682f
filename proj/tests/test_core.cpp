#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstring>
#include <numbers>

#include "disloc/core.hpp"

using namespace disloc;

TEST_CASE("eval_load: constant is time-independent") {
  LoadSpec load = LoadSpec::constant(0.5);
  CHECK(eval_load(load, 3.7) == 0.5);
  CHECK(eval_load(load, 0.0) == 0.5);
}

TEST_CASE("eval_load: cosine") {
  LoadSpec load = LoadSpec::cosine(1.0, 0.5);
  CHECK(eval_load(load, 0.0) == 1.0);
  CHECK(eval_load(load, 2.0 * std::numbers::pi) == doctest::Approx(-1.0).epsilon(1e-15));
}

TEST_CASE("eval_load: tabulated interpolation and range errors") {
  LoadSpec load = LoadSpec::table({0.0, 1.0, 3.0}, {0.0, 2.0, 4.0});
  CHECK(load(0.5) == doctest::Approx(1.0));
  CHECK(load(2.0) == doctest::Approx(3.0));
  CHECK(load(1.0) == doctest::Approx(2.0));
  CHECK_THROWS_AS(load(3.5), std::out_of_range);
  CHECK_THROWS_AS(load(-0.1), std::out_of_range);
  CHECK_THROWS_AS(LoadSpec::table({0.0, 0.0}, {1.0, 2.0}), std::invalid_argument);
}

TEST_CASE("eval_load is deterministic") {
  LoadSpec load = LoadSpec::cosine(0.3, 1.7);
  double a = eval_load(load, 1.234567);
  double b = eval_load(load, 1.234567);
  CHECK(std::memcmp(&a, &b, sizeof a) == 0);
}

TEST_CASE("gamma derives from mu and b") {
  ModelParams p;
  p.mu = 10.0;
  p.b = 0.06;
  CHECK(p.gamma() == doctest::Approx(0.018).epsilon(1e-15));
}

TEST_CASE("parse_config: empty document gives Table 1 defaults") {
  Config c = parse_config("");
  CHECK(c.params.T == 4.0);
  CHECK(c.grid.L == 2.0);
  CHECK(c.grid.H == 2.0);
  CHECK(c.grid.Nx == 256);
  CHECK(c.grid.Ny == 128);
  CHECK(c.params.b == 0.06);
  CHECK(c.params.eps == 0.04);
  CHECK(c.params.beta == 10.0);
  CHECK(c.params.mu == 10.0);
  CHECK(c.params.alpha == 0.01);
  CHECK(c.output.snapshots == 50);
}

TEST_CASE("parse_config: invariant violation names the key") {
  CHECK_THROWS_WITH_AS(parse_config(R"({"Nx": 0})"), doctest::Contains("Nx"), ConfigError);
  CHECK_THROWS_WITH_AS(parse_config(R"({"mu": -1})"), doctest::Contains("mu"), ConfigError);
  CHECK_THROWS_WITH_AS(parse_config(R"({"ic.x0": 5})"), doctest::Contains("ic.x0"), ConfigError);
}

TEST_CASE("parse_config: unknown key and malformed document") {
  CHECK_THROWS_WITH_AS(parse_config(R"({"Nz": 3})"), doctest::Contains("Nz"), ConfigError);
  CHECK_THROWS_AS(parse_config("{not json"), ConfigError);
}

TEST_CASE("parse_config: single override keeps other defaults") {
  Config c = parse_config(R"({"T": 25.132741228718345})");
  CHECK(c.params.T == doctest::Approx(8.0 * std::numbers::pi).epsilon(1e-15));
  CHECK(c.grid.Nx == 256);
}

TEST_CASE("render/parse round trip") {
  Config cases[3];
  cases[0] = Config{};
  cases[1].grid = GridSpec(1.5, 3.0, 48, 24);
  cases[1].params.T = 8.0 * std::numbers::pi;
  cases[1].load = LoadSpec::cosine(1.0, 0.5);
  cases[1].ic = {0.0, InitialCondition::Amplitude::HalfBurgers};
  cases[1].output = {25, "elsewhere", true};
  cases[2].load = LoadSpec::table({0.0, 0.7, 2.0}, {0.1, -0.3, 0.25});
  cases[2].ic.x0 = -1.25;
  for (const Config& c : cases) {
    Config back = parse_config(render_config(c));
    CHECK(back == c);
  }
}

TEST_CASE("initial_profile: Heaviside step at x0") {
  GridSpec grid(2.0, 2.0, 8, 4);
  InitialCondition ic{0.0, InitialCondition::Amplitude::FullBurgers};
  Profile1D u = initial_profile(grid, ic, 0.06);
  CHECK(u[0] == 0.0);
  CHECK(u[4] == 0.0);  // H(0) = 0 at the node itself
  CHECK(u[5] == 0.06);
  CHECK(u[8] == 0.06);
  ic.amplitude = InitialCondition::Amplitude::HalfBurgers;
  CHECK(initial_profile(grid, ic, 0.06)[8] == 0.03);
}

TEST_CASE("GridSpec invariants") {
  CHECK_THROWS_AS(GridSpec(0.0, 2.0, 8, 8), std::invalid_argument);
  CHECK_THROWS_AS(GridSpec(2.0, 2.0, 3, 8), std::invalid_argument);
  GridSpec g(2.0, 2.0, 8, 4);
  CHECK(g.dx() == 0.5);
  CHECK(g.dy() == 0.5);
  CHECK(g.x(0) == -2.0);
  CHECK(g.x(8) == 2.0);
}
