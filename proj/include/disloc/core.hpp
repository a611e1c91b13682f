#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace disloc {

/// Node-centered rectangular grid on (-L,L) x (0,H) with Nx x Ny cells.
/// Nodes are x_i = -L + i*dx (0 <= i <= Nx), y_j = j*dy (0 <= j <= Ny).
struct GridSpec {
  double L = 2.0;
  double H = 2.0;
  int Nx = 256;
  int Ny = 128;

  GridSpec() = default;
  GridSpec(double L_, double H_, int Nx_, int Ny_) : L(L_), H(H_), Nx(Nx_), Ny(Ny_) {
    validate();
  }

  void validate() const {
    if (!(L > 0.0)) throw std::invalid_argument("GridSpec: L must be > 0");
    if (!(H > 0.0)) throw std::invalid_argument("GridSpec: H must be > 0");
    if (Nx < 4) throw std::invalid_argument("GridSpec: Nx must be >= 4");
    if (Ny < 4) throw std::invalid_argument("GridSpec: Ny must be >= 4");
  }

  double dx() const { return 2.0 * L / Nx; }
  double dy() const { return H / Ny; }
  double x(int i) const { return -L + i * dx(); }
  double y(int j) const { return j * dy(); }
  int numNodesX() const { return Nx + 1; }
  int numNodesY() const { return Ny + 1; }
  int numNodes() const { return numNodesX() * numNodesY(); }
  /// Row-major by y then x.
  int node(int i, int j) const { return j * numNodesX() + i; }

  bool operator==(const GridSpec&) const = default;
};

/// Physical and phase-field constants. gamma is always derived from mu and b.
struct ModelParams {
  double alpha = 0.01;  // mobility coefficient
  double eps = 0.04;    // interface coefficient
  double beta = 10.0;   // potential coefficient
  double mu = 10.0;     // shear modulus
  double b = 0.06;      // Burgers-vector magnitude
  double T = 4.0;       // final time

  void validate() const {
    if (!(alpha > 0.0)) throw std::invalid_argument("ModelParams: alpha must be > 0");
    if (!(eps > 0.0)) throw std::invalid_argument("ModelParams: eps must be > 0");
    if (!(beta > 0.0)) throw std::invalid_argument("ModelParams: beta must be > 0");
    if (!(mu > 0.0)) throw std::invalid_argument("ModelParams: mu must be > 0");
    if (!(b > 0.0)) throw std::invalid_argument("ModelParams: b must be > 0");
    if (!(T > 0.0)) throw std::invalid_argument("ModelParams: T must be > 0");
  }

  double gamma() const { return mu * b * b / 2.0; }

  bool operator==(const ModelParams&) const = default;
};

/// Spatially uniform anti-plane traction on Gamma1 as a function of time.
class LoadSpec {
 public:
  enum class Kind { Constant, Cosine, Table };

  static LoadSpec constant(double g0) {
    LoadSpec l;
    l.kind_ = Kind::Constant;
    l.g0_ = g0;
    return l;
  }
  static LoadSpec cosine(double amplitude, double omega) {
    LoadSpec l;
    l.kind_ = Kind::Cosine;
    l.amplitude_ = amplitude;
    l.omega_ = omega;
    return l;
  }
  static LoadSpec table(std::vector<double> times, std::vector<double> values);

  Kind kind() const { return kind_; }
  double g0() const { return g0_; }
  double amplitude() const { return amplitude_; }
  double omega() const { return omega_; }
  const std::vector<double>& times() const { return times_; }
  const std::vector<double>& values() const { return values_; }

  /// g(t). Tabulated loads interpolate linearly; queries outside the sample
  /// range throw std::out_of_range.
  double operator()(double t) const;

  bool operator==(const LoadSpec&) const = default;

 private:
  Kind kind_ = Kind::Constant;
  double g0_ = 0.5;
  double amplitude_ = 0.0;
  double omega_ = 0.0;
  std::vector<double> times_;
  std::vector<double> values_;
};

inline double eval_load(const LoadSpec& load, double t) { return load(t); }

/// Scalar field on all grid nodes, row-major by y then x.
struct Field2D {
  GridSpec grid;
  std::vector<double> values;

  Field2D() = default;
  explicit Field2D(const GridSpec& g, double fill = 0.0)
      : grid(g), values(static_cast<size_t>(g.numNodes()), fill) {}

  double& at(int i, int j) { return values[static_cast<size_t>(grid.node(i, j))]; }
  double at(int i, int j) const { return values[static_cast<size_t>(grid.node(i, j))]; }
};

/// Scalar profile on the slip-boundary nodes (y = 0), Nx+1 entries.
struct Profile1D {
  GridSpec grid;
  std::vector<double> values;

  Profile1D() = default;
  explicit Profile1D(const GridSpec& g, double fill = 0.0)
      : grid(g), values(static_cast<size_t>(g.numNodesX()), fill) {}

  int size() const { return static_cast<int>(values.size()); }
  double& operator[](int i) { return values[static_cast<size_t>(i)]; }
  double operator[](int i) const { return values[static_cast<size_t>(i)]; }
};

/// Shifted and scaled Heaviside initial profile u0(x) = A * H(x - x0),
/// with A = b (paper-literal) or A = b/2 (on the potential wells).
struct InitialCondition {
  enum class Amplitude { FullBurgers, HalfBurgers };
  double x0 = 1.8;
  Amplitude amplitude = Amplitude::FullBurgers;

  bool operator==(const InitialCondition&) const = default;
};

struct OutputSpec {
  int snapshots = 50;
  std::string dir = "out";
  bool full_field = false;

  bool operator==(const OutputSpec&) const = default;
};

struct Config {
  GridSpec grid;
  ModelParams params;
  LoadSpec load = LoadSpec::constant(0.5);
  InitialCondition ic;
  OutputSpec output;

  bool operator==(const Config&) const = default;
};

/// Thrown by parse_config; what() names the offending key.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Parses a flat JSON document with dotted keys (see README for the schema).
/// Missing keys take the defaults above; unknown keys and invariant
/// violations raise ConfigError.
Config parse_config(const std::string& text);

/// Serializes a configuration so that parse_config(render_config(c)) == c.
std::string render_config(const Config& config);

Profile1D initial_profile(const GridSpec& grid, const InitialCondition& ic, double b);

}  // namespace disloc
