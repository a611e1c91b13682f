#include "disloc/core.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include <json.hpp>

namespace disloc {

using nlohmann::json;

LoadSpec LoadSpec::table(std::vector<double> times, std::vector<double> values) {
  if (times.size() != values.size() || times.empty())
    throw std::invalid_argument("LoadSpec::table: times and values must have equal nonzero size");
  for (size_t k = 1; k < times.size(); ++k)
    if (!(times[k] > times[k - 1]))
      throw std::invalid_argument("LoadSpec::table: sample times must be strictly increasing");
  LoadSpec l;
  l.kind_ = Kind::Table;
  l.times_ = std::move(times);
  l.values_ = std::move(values);
  return l;
}

double LoadSpec::operator()(double t) const {
  switch (kind_) {
    case Kind::Constant:
      return g0_;
    case Kind::Cosine:
      return amplitude_ * std::cos(omega_ * t);
    case Kind::Table: {
      if (t < times_.front() || t > times_.back())
        throw std::out_of_range("LoadSpec: query time outside tabulated range");
      auto it = std::lower_bound(times_.begin(), times_.end(), t);
      if (it == times_.begin()) return values_.front();
      size_t hi = static_cast<size_t>(it - times_.begin());
      size_t lo = hi - 1;
      double w = (t - times_[lo]) / (times_[hi] - times_[lo]);
      return (1.0 - w) * values_[lo] + w * values_[hi];
    }
  }
  return 0.0;  // unreachable
}

namespace {

const std::set<std::string> kKnownKeys = {
    "L", "H", "Nx", "Ny", "T", "alpha", "eps", "beta", "mu", "b",
    "load.kind", "load.g0", "load.amplitude", "load.omega",
    "load.times", "load.values",
    "ic.kind", "ic.x0", "ic.amplitude",
    "output.snapshots", "output.dir", "output.full_field"};

double getNumber(const json& j, const std::string& key) {
  if (!j.at(key).is_number()) throw ConfigError("config key \"" + key + "\": expected a number");
  return j.at(key).get<double>();
}

int getInt(const json& j, const std::string& key) {
  if (!j.at(key).is_number_integer())
    throw ConfigError("config key \"" + key + "\": expected an integer");
  return j.at(key).get<int>();
}

std::string getString(const json& j, const std::string& key) {
  if (!j.at(key).is_string()) throw ConfigError("config key \"" + key + "\": expected a string");
  return j.at(key).get<std::string>();
}

}  // namespace

Config parse_config(const std::string& text) {
  json j;
  try {
    j = text.empty() ? json::object() : json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("malformed configuration document: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("configuration document must be a JSON object");

  for (const auto& [key, _] : j.items())
    if (!kKnownKeys.count(key)) throw ConfigError("unknown config key \"" + key + "\"");

  Config c;
  try {
    if (j.contains("L")) c.grid.L = getNumber(j, "L");
    if (j.contains("H")) c.grid.H = getNumber(j, "H");
    if (j.contains("Nx")) c.grid.Nx = getInt(j, "Nx");
    if (j.contains("Ny")) c.grid.Ny = getInt(j, "Ny");
    c.grid.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("invalid grid configuration: ") + e.what());
  }

  try {
    if (j.contains("T")) c.params.T = getNumber(j, "T");
    if (j.contains("alpha")) c.params.alpha = getNumber(j, "alpha");
    if (j.contains("eps")) c.params.eps = getNumber(j, "eps");
    if (j.contains("beta")) c.params.beta = getNumber(j, "beta");
    if (j.contains("mu")) c.params.mu = getNumber(j, "mu");
    if (j.contains("b")) c.params.b = getNumber(j, "b");
    c.params.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("invalid model parameters: ") + e.what());
  }

  std::string loadKind = j.contains("load.kind") ? getString(j, "load.kind") : "constant";
  if (loadKind == "constant") {
    c.load = LoadSpec::constant(j.contains("load.g0") ? getNumber(j, "load.g0") : 0.5);
  } else if (loadKind == "cosine") {
    double a = j.contains("load.amplitude") ? getNumber(j, "load.amplitude") : 1.0;
    double w = j.contains("load.omega") ? getNumber(j, "load.omega") : 0.5;
    c.load = LoadSpec::cosine(a, w);
  } else if (loadKind == "table") {
    if (!j.contains("load.times") || !j.contains("load.values"))
      throw ConfigError("config key \"load.times\"/\"load.values\": required for load.kind=table");
    std::vector<double> ts, vs;
    try {
      ts = j.at("load.times").get<std::vector<double>>();
      vs = j.at("load.values").get<std::vector<double>>();
      c.load = LoadSpec::table(std::move(ts), std::move(vs));
    } catch (const std::exception& e) {
      throw ConfigError(std::string("config key \"load.times\": ") + e.what());
    }
  } else {
    throw ConfigError("config key \"load.kind\": must be constant, cosine, or table");
  }

  if (j.contains("ic.kind") && getString(j, "ic.kind") != "heaviside")
    throw ConfigError("config key \"ic.kind\": only \"heaviside\" is supported");
  if (j.contains("ic.x0")) c.ic.x0 = getNumber(j, "ic.x0");
  if (!(c.ic.x0 > -c.grid.L && c.ic.x0 < c.grid.L))
    throw ConfigError("config key \"ic.x0\": must lie strictly inside (-L, L)");
  if (j.contains("ic.amplitude")) {
    std::string a = getString(j, "ic.amplitude");
    if (a == "b")
      c.ic.amplitude = InitialCondition::Amplitude::FullBurgers;
    else if (a == "b_half")
      c.ic.amplitude = InitialCondition::Amplitude::HalfBurgers;
    else
      throw ConfigError("config key \"ic.amplitude\": must be \"b\" or \"b_half\"");
  }

  if (j.contains("output.snapshots")) {
    c.output.snapshots = getInt(j, "output.snapshots");
    if (c.output.snapshots < 2)
      throw ConfigError("config key \"output.snapshots\": must be >= 2");
  }
  if (j.contains("output.dir")) c.output.dir = getString(j, "output.dir");
  if (j.contains("output.full_field")) {
    if (!j.at("output.full_field").is_boolean())
      throw ConfigError("config key \"output.full_field\": expected a boolean");
    c.output.full_field = j.at("output.full_field").get<bool>();
  }

  return c;
}

std::string render_config(const Config& c) {
  json j;
  j["L"] = c.grid.L;
  j["H"] = c.grid.H;
  j["Nx"] = c.grid.Nx;
  j["Ny"] = c.grid.Ny;
  j["T"] = c.params.T;
  j["alpha"] = c.params.alpha;
  j["eps"] = c.params.eps;
  j["beta"] = c.params.beta;
  j["mu"] = c.params.mu;
  j["b"] = c.params.b;
  switch (c.load.kind()) {
    case LoadSpec::Kind::Constant:
      j["load.kind"] = "constant";
      j["load.g0"] = c.load.g0();
      break;
    case LoadSpec::Kind::Cosine:
      j["load.kind"] = "cosine";
      j["load.amplitude"] = c.load.amplitude();
      j["load.omega"] = c.load.omega();
      break;
    case LoadSpec::Kind::Table:
      j["load.kind"] = "table";
      j["load.times"] = c.load.times();
      j["load.values"] = c.load.values();
      break;
  }
  j["ic.kind"] = "heaviside";
  j["ic.x0"] = c.ic.x0;
  j["ic.amplitude"] =
      c.ic.amplitude == InitialCondition::Amplitude::FullBurgers ? "b" : "b_half";
  j["output.snapshots"] = c.output.snapshots;
  j["output.dir"] = c.output.dir;
  j["output.full_field"] = c.output.full_field;
  return j.dump(2) + "\n";
}

Profile1D initial_profile(const GridSpec& grid, const InitialCondition& ic, double b) {
  double amp = ic.amplitude == InitialCondition::Amplitude::FullBurgers ? b : b / 2.0;
  Profile1D u(grid);
  for (int i = 0; i <= grid.Nx; ++i) u[i] = grid.x(i) > ic.x0 ? amp : 0.0;
  return u;
}

}  // namespace disloc
