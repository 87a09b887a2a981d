#pragma once

#include "nlspec/geometry.hpp"
#include "nlspec/heat_kernel.hpp"
#include "nlspec/spectra.hpp"

#include "json.hpp"

#include <array>
#include <optional>
#include <string>
#include <vector>

namespace nlspec::app {

using Json = nlohmann::ordered_json;

/// Thrown for anything wrong with the configuration file or flags (exit code 1).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct SolverConfig {
  int grid_n = 64;     // rectangle
  int m_max = 60;      // disk
  int k_max = 10000;   // disk
  int count = 500;     // interval
};

struct TraceConfig {
  std::optional<double> t_min;
  std::optional<double> t_max;
  int samples = 32;
  std::optional<double> max_relative_error;  // threshold on |a0_hat/a0 - 1| and |a1_hat/a1 - 1|
};

struct OutputConfig {
  std::string dir = "nlspec-out";
  std::vector<std::string> formats = {"json", "csv"};
  bool wants(const std::string& format) const;
};

struct SymbolConfig {
  int samples = 1000;
  std::vector<int> dims = {2, 3, 4};
  std::vector<std::string> fields = {"flat", "polar", "sphere"};
  std::vector<double> xi = {1.0, 0.5};
  std::array<double, 2> tau = {0.0, 4.0};  // real, imaginary
  double max_inverse_error = 1e-12;
  double flat_defect = 1e-10;
  double curved_defect = 1e-5;
};

struct HearConfig {
  std::string spectrum;  // CSV path
  int n = 2;
  double tolerance = 0.05;
};

struct RunConfig {
  unsigned long long seed = 20240607ULL;
  LameParameters lame{1.0, 1.0};
  std::optional<Domain> domain;
  BoundaryCondition bc = BoundaryCondition::Dirichlet;
  SolverConfig solver;
  TraceConfig trace;
  OutputConfig output;
  SymbolConfig symbol;
  HearConfig hear;
};

/// Parses a configuration document; unknown keys and wrong types raise ConfigError.
RunConfig parse_config(const Json& doc);
RunConfig load_config(const std::string& path);

/// Canonical form with every default filled in; parse_config(to_json(c)) reproduces c.
Json to_json(const RunConfig& c);

Json domain_to_json(const Domain& d);
Domain domain_from_json(const Json& j);

}  // namespace nlspec::app
