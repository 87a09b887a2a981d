#include "config.hpp"

#include "nlspec/errors.hpp"

#include <algorithm>
#include <fstream>
#include <set>

namespace nlspec::app {

namespace {

void only_keys(const Json& obj, const std::string& where, std::initializer_list<const char*> allowed) {
  if (!obj.is_object()) throw ConfigError("'" + where + "' must be an object");
  const std::set<std::string> ok(allowed.begin(), allowed.end());
  for (const auto& item : obj.items()) {
    if (!ok.count(item.key())) throw ConfigError("unknown key '" + where + "." + item.key() + "'");
  }
}

double get_number(const Json& obj, const std::string& where, const char* key) {
  const Json& v = obj.at(key);
  if (!v.is_number()) throw ConfigError("'" + where + "." + key + "' must be a number");
  return v.get<double>();
}

int get_int(const Json& obj, const std::string& where, const char* key) {
  const Json& v = obj.at(key);
  if (!v.is_number_integer()) throw ConfigError("'" + where + "." + key + "' must be an integer");
  return v.get<int>();
}

std::string get_string(const Json& obj, const std::string& where, const char* key) {
  const Json& v = obj.at(key);
  if (!v.is_string()) throw ConfigError("'" + where + "." + key + "' must be a string");
  return v.get<std::string>();
}

template <class T>
void maybe(const Json& obj, const char* key, T& target, T (*read)(const Json&, const std::string&, const char*),
           const std::string& where) {
  if (obj.contains(key)) target = read(obj, where, key);
}

void positive_int(int v, const std::string& what, int minimum = 1) {
  if (v < minimum) throw ConfigError("'" + what + "' must be >= " + std::to_string(minimum));
}

}  // namespace

bool OutputConfig::wants(const std::string& format) const {
  return std::find(formats.begin(), formats.end(), format) != formats.end();
}

Json domain_to_json(const Domain& d) {
  Json j;
  std::visit(
      [&](const auto& s) {
        using S = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<S, Interval>) {
          j["kind"] = "interval";
          j["dims"] = {s.length};
        } else if constexpr (std::is_same_v<S, Rectangle>) {
          j["kind"] = "rectangle";
          j["dims"] = {s.a, s.b};
        } else if constexpr (std::is_same_v<S, Disk>) {
          j["kind"] = "disk";
          j["dims"] = {s.radius};
        } else {
          j["kind"] = "unspecified";
          j["dims"] = {s.dim};
        }
      },
      d.shape());
  return j;
}

Domain domain_from_json(const Json& j) {
  only_keys(j, "domain", {"kind", "dims"});
  if (!j.contains("kind") || !j.contains("dims")) throw ConfigError("'domain' needs 'kind' and 'dims'");
  const std::string kind = get_string(j, "domain", "kind");
  const Json& dims = j.at("dims");
  if (!dims.is_array() || !std::all_of(dims.begin(), dims.end(), [](const Json& v) { return v.is_number(); }))
    throw ConfigError("'domain.dims' must be an array of numbers");
  std::vector<double> v = dims.get<std::vector<double>>();
  auto expect = [&](std::size_t count) {
    if (v.size() != count)
      throw ConfigError("'domain.dims' for " + kind + " needs " + std::to_string(count) + " value(s)");
  };
  try {
    if (kind == "interval") {
      expect(1);
      return Domain(Interval{v[0]});
    }
    if (kind == "rectangle") {
      expect(2);
      return Domain(Rectangle{v[0], v[1]});
    }
    if (kind == "disk") {
      expect(1);
      return Domain(Disk{v[0]});
    }
  } catch (const Error& e) {
    throw ConfigError(std::string("domain: ") + e.what());
  }
  throw ConfigError("unknown domain kind '" + kind + "' (expected interval, rectangle or disk)");
}

RunConfig parse_config(const Json& doc) {
  RunConfig c;
  only_keys(doc, "config", {"seed", "lame", "domain", "bc", "solver", "trace", "output", "symbol", "hear"});
  try {
    if (doc.contains("seed")) {
      if (!doc.at("seed").is_number_unsigned()) throw ConfigError("'seed' must be a nonnegative integer");
      c.seed = doc.at("seed").get<unsigned long long>();
    }
    if (doc.contains("lame")) {
      const Json& j = doc.at("lame");
      only_keys(j, "lame", {"mu", "lambda"});
      maybe(j, "mu", c.lame.mu, get_number, "lame");
      maybe(j, "lambda", c.lame.lambda, get_number, "lame");
    }
    try {
      c.lame.validate();
    } catch (const Error& e) {
      throw ConfigError(std::string("lame: ") + e.what());
    }
    if (doc.contains("domain")) c.domain = domain_from_json(doc.at("domain"));
    if (doc.contains("bc")) {
      if (!doc.at("bc").is_string()) throw ConfigError("'bc' must be a string");
      try {
        c.bc = parse_boundary_condition(doc.at("bc").get<std::string>());
      } catch (const Error& e) {
        throw ConfigError(e.what());
      }
    }
    if (doc.contains("solver")) {
      const Json& j = doc.at("solver");
      only_keys(j, "solver", {"grid_n", "m_max", "k_max", "count"});
      maybe(j, "grid_n", c.solver.grid_n, get_int, "solver");
      maybe(j, "m_max", c.solver.m_max, get_int, "solver");
      maybe(j, "k_max", c.solver.k_max, get_int, "solver");
      maybe(j, "count", c.solver.count, get_int, "solver");
    }
    positive_int(c.solver.m_max, "solver.m_max");
    positive_int(c.solver.k_max, "solver.k_max");
    positive_int(c.solver.count, "solver.count");
    positive_int(c.solver.grid_n, "solver.grid_n", kMinFdGrid);
    if (doc.contains("trace")) {
      const Json& j = doc.at("trace");
      only_keys(j, "trace", {"t_min", "t_max", "samples", "max_relative_error"});
      if (j.contains("t_min")) c.trace.t_min = get_number(j, "trace", "t_min");
      if (j.contains("t_max")) c.trace.t_max = get_number(j, "trace", "t_max");
      if (j.contains("max_relative_error")) c.trace.max_relative_error = get_number(j, "trace", "max_relative_error");
      maybe(j, "samples", c.trace.samples, get_int, "trace");
    }
    positive_int(c.trace.samples, "trace.samples", 8);
    if (c.trace.t_min && !(*c.trace.t_min > 0.0)) throw ConfigError("'trace.t_min' must be positive");
    if (c.trace.t_max && !(*c.trace.t_max > 0.0)) throw ConfigError("'trace.t_max' must be positive");
    if (c.trace.t_min && c.trace.t_max && !(*c.trace.t_min < *c.trace.t_max))
      throw ConfigError("'trace.t_min' must be below 'trace.t_max'");
    if (doc.contains("output")) {
      const Json& j = doc.at("output");
      only_keys(j, "output", {"dir", "formats"});
      maybe(j, "dir", c.output.dir, get_string, "output");
      if (j.contains("formats")) {
        const Json& f = j.at("formats");
        if (!f.is_array() || !std::all_of(f.begin(), f.end(), [](const Json& v) { return v.is_string(); }))
          throw ConfigError("'output.formats' must be an array of strings");
        c.output.formats = f.get<std::vector<std::string>>();
        for (const auto& name : c.output.formats)
          if (name != "json" && name != "csv") throw ConfigError("unknown output format '" + name + "'");
      }
    }
    if (doc.contains("symbol")) {
      const Json& j = doc.at("symbol");
      only_keys(j, "symbol", {"samples", "dims", "fields", "xi", "tau", "max_inverse_error", "flat_defect",
                              "curved_defect"});
      maybe(j, "samples", c.symbol.samples, get_int, "symbol");
      maybe(j, "max_inverse_error", c.symbol.max_inverse_error, get_number, "symbol");
      maybe(j, "flat_defect", c.symbol.flat_defect, get_number, "symbol");
      maybe(j, "curved_defect", c.symbol.curved_defect, get_number, "symbol");
      auto number_array = [&](const char* key) {
        const Json& a = j.at(key);
        if (!a.is_array() || !std::all_of(a.begin(), a.end(), [](const Json& v) { return v.is_number(); }))
          throw ConfigError(std::string("'symbol.") + key + "' must be an array of numbers");
        return a.get<std::vector<double>>();
      };
      if (j.contains("dims")) {
        c.symbol.dims.clear();
        for (double d : number_array("dims")) {
          if (d != static_cast<int>(d) || d < 1 || d > 8) throw ConfigError("'symbol.dims' entries must be in 1..8");
          c.symbol.dims.push_back(static_cast<int>(d));
        }
        if (c.symbol.dims.empty()) throw ConfigError("'symbol.dims' must not be empty");
      }
      if (j.contains("fields")) {
        const Json& f = j.at("fields");
        if (!f.is_array() || !std::all_of(f.begin(), f.end(), [](const Json& v) { return v.is_string(); }))
          throw ConfigError("'symbol.fields' must be an array of strings");
        c.symbol.fields = f.get<std::vector<std::string>>();
        for (const auto& name : c.symbol.fields)
          if (name != "flat" && name != "polar" && name != "sphere")
            throw ConfigError("unknown field '" + name + "' (expected flat, polar or sphere)");
      }
      if (j.contains("xi")) {
        c.symbol.xi = number_array("xi");
        if (c.symbol.xi.size() != 2) throw ConfigError("'symbol.xi' needs 2 components");
      }
      if (j.contains("tau")) {
        const auto t = number_array("tau");
        if (t.size() != 2) throw ConfigError("'symbol.tau' must be [real, imaginary]");
        c.symbol.tau = {t[0], t[1]};
      }
    }
    positive_int(c.symbol.samples, "symbol.samples", 0);
    if (doc.contains("hear")) {
      const Json& j = doc.at("hear");
      only_keys(j, "hear", {"spectrum", "n", "tolerance"});
      maybe(j, "spectrum", c.hear.spectrum, get_string, "hear");
      maybe(j, "n", c.hear.n, get_int, "hear");
      maybe(j, "tolerance", c.hear.tolerance, get_number, "hear");
    }
    positive_int(c.hear.n, "hear.n");
    if (!(c.hear.tolerance > 0.0 && c.hear.tolerance < 0.5)) throw ConfigError("'hear.tolerance' must lie in (0, 0.5)");
  } catch (const Json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  return c;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config '" + path + "'");
  Json doc;
  try {
    doc = Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw ConfigError("config '" + path + "' is not valid JSON: " + e.what());
  }
  return parse_config(doc);
}

Json to_json(const RunConfig& c) {
  Json j;
  j["seed"] = c.seed;
  j["lame"] = {{"mu", c.lame.mu}, {"lambda", c.lame.lambda}};
  if (c.domain) j["domain"] = domain_to_json(*c.domain);
  j["bc"] = to_string(c.bc);
  j["solver"] = {{"grid_n", c.solver.grid_n}, {"m_max", c.solver.m_max}, {"k_max", c.solver.k_max},
                 {"count", c.solver.count}};
  Json trace;
  if (c.trace.t_min) trace["t_min"] = *c.trace.t_min;
  if (c.trace.t_max) trace["t_max"] = *c.trace.t_max;
  trace["samples"] = c.trace.samples;
  if (c.trace.max_relative_error) trace["max_relative_error"] = *c.trace.max_relative_error;
  j["trace"] = trace;
  j["output"] = {{"dir", c.output.dir}, {"formats", c.output.formats}};
  j["symbol"] = {{"samples", c.symbol.samples},
                 {"dims", c.symbol.dims},
                 {"fields", c.symbol.fields},
                 {"xi", c.symbol.xi},
                 {"tau", {c.symbol.tau[0], c.symbol.tau[1]}},
                 {"max_inverse_error", c.symbol.max_inverse_error},
                 {"flat_defect", c.symbol.flat_defect},
                 {"curved_defect", c.symbol.curved_defect}};
  j["hear"] = {{"spectrum", c.hear.spectrum}, {"n", c.hear.n}, {"tolerance", c.hear.tolerance}};
  return j;
}

}  // namespace nlspec::app
