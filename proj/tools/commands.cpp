#include "commands.hpp"

#include "nlspec/format.hpp"
#include "nlspec/heat_kernel.hpp"
#include "nlspec/inverse.hpp"
#include "nlspec/spectrum_io.hpp"
#include "nlspec/symbol.hpp"
#include "nlspec/trace.hpp"

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>

namespace nlspec::app {

namespace {

Json header(const std::string& command, const RunConfig& c, const Environment& env) {
  Json j;
  j["command"] = command;
  j["version"] = NLSPEC_VERSION;
  j["seed"] = c.seed;
  j["environment"] = {{"output_dir", env.resolve_output_dir(c)}, {"threads", env.threads}};
  j["config"] = to_json(c);
  return j;
}

// Runs body and turns library and config errors into a structured report.
CommandResult guarded(const std::string& command, const RunConfig& c, const Environment& env,
                      const std::function<void(CommandResult&)>& body) {
  CommandResult r;
  r.report = header(command, c, env);
  try {
    body(r);
    if (!r.report.contains("status")) r.report["status"] = r.exit_code == kExitOk ? "ok" : "threshold_violation";
  } catch (const Error& e) {
    r.exit_code = exit_code_for(e.kind());
    r.report["status"] = "error";
    r.report["error"] = {{"kind", std::string(to_string(e.kind()))}, {"message", e.what()}};
    r.files.clear();
  } catch (const ConfigError& e) {
    r.exit_code = kExitConfig;
    r.report["status"] = "error";
    r.report["error"] = {{"kind", "ConfigError"}, {"message", e.what()}};
    r.files.clear();
  }
  return r;
}

const Domain& require_domain(const RunConfig& c) {
  if (!c.domain) throw ConfigError("this command needs a 'domain' section");
  return *c.domain;
}

Json prediction_json(const CoefficientPrediction& p) {
  return {{"a0", p.a0}, {"a1", p.a1}, {"n", p.n}, {"vol", p.vol}, {"boundary_vol", p.boundary_vol}};
}

double relative_error(double value, double reference) { return std::abs(value / reference - 1.0); }

Spectrum load_spectrum(const RunConfig& c, const Environment& env, const std::optional<std::string>& path) {
  if (path && !path->empty()) return spectrum_import(*path);
  return compute_spectrum(c, env);
}

std::string plot_csv(const Spectrum& s, const CoefficientFit& fit) {
  std::ostringstream os;
  os << "t,trace,fitted,predicted\n";
  const int n = fit.n;
  const int rows = 200;
  const double ratio = fit.t_window.t_max / fit.t_window.t_min;
  for (int k = 0; k < rows; ++k) {
    const double t = fit.t_window.t_min * std::pow(ratio, static_cast<double>(k) / (rows - 1));
    const double value = heat_trace(s, t).value;
    const double fitted = fit.a0_hat * std::pow(t, -0.5 * n) + fit.sign * fit.a1_hat * std::pow(t, -0.5 * (n - 1)) +
                          fit.nuisance * std::pow(t, -0.5 * (n - 2));
    os << format_double(t) << ',' << format_double(value) << ',' << format_double(fitted) << ',';
    if (fit.prediction) os << format_double(fit.prediction->model(t, boundary_sign(s.bc)));
    os << '\n';
  }
  return os.str();
}

MetricField field_by_name(const std::string& name) {
  if (name == "flat") return euclidean_field(2);
  if (name == "polar") return polar_field();
  return sphere_field(1.0);
}

Vector default_point(const std::string& name) {
  Vector x(2);
  if (name == "sphere") {
    x << std::numbers::pi / 4.0, 0.2;
  } else {
    x << 2.0, 0.3;
  }
  return x;
}

}  // namespace

int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidArgument:
    case ErrorKind::InvalidMetric:
    case ErrorKind::ChartError:
    case ErrorKind::PoleProximity:
    case ErrorKind::DiscretizationTooCoarse:
    case ErrorKind::MalformedFile:
    case ErrorKind::SortedViolation:
      return kExitConfig;
    case ErrorKind::RootBracketFailure:
    case ErrorKind::EigensolverFailure:
    case ErrorKind::TruncationDominated:
    case ErrorKind::IllConditionedFit:
      return kExitSolver;
  }
  return kExitSolver;
}

Environment Environment::from_process() {
  Environment env;
  if (const char* dir = std::getenv("NLSPEC_OUTPUT_DIR"); dir && *dir) env.output_dir = dir;
  if (const char* threads = std::getenv("NLSPEC_THREADS"); threads && *threads) {
    char* end = nullptr;
    const long v = std::strtol(threads, &end, 10);
    if (*end != '\0' || v < 1 || v > 1024) throw ConfigError("NLSPEC_THREADS must be an integer in 1..1024");
    env.threads = static_cast<int>(v);
  }
  return env;
}

std::string Environment::resolve_output_dir(const RunConfig& c) const { return output_dir ? *output_dir : c.output.dir; }

Spectrum compute_spectrum(const RunConfig& c, const Environment& env) {
  const Domain& d = require_domain(c);
  if (const auto* s = std::get_if<Interval>(&d.shape())) return interval_spectrum(s->length, c.lame, c.bc, c.solver.count);
  if (const auto* s = std::get_if<Disk>(&d.shape())) {
    if (c.bc != BoundaryCondition::Dirichlet) throw ConfigError("the disk solver supports the dirichlet condition only");
    return disk_spectrum(s->radius, c.lame, c.solver.m_max, c.solver.k_max);
  }
  if (const auto* s = std::get_if<Rectangle>(&d.shape())) {
    FdOptions opts;
    opts.threads = env.threads;
    return rectangle_fd_spectrum(s->a, s->b, c.lame, c.bc, c.solver.grid_n, opts);
  }
  throw ConfigError("cannot solve on an unspecified domain");
}

CommandResult cmd_symbol_verify(const RunConfig& c, const Environment& env) {
  return guarded("symbol-verify", c, env, [&](CommandResult& r) {
    const SymbolConfig& sc = c.symbol;
    std::mt19937_64 rng(c.seed);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    double inverse_error = 0.0, trace_error = 0.0, homogeneity_error = 0.0;
    for (int s = 0; s < sc.samples; ++s) {
      const int n = sc.dims[static_cast<std::size_t>(s) % sc.dims.size()];
      Matrix a(n, n);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) a(i, j) = unit(rng);
      const Matrix g = a * a.transpose() / n + 0.5 * Matrix::Identity(n, n);
      Vector xi(n);
      for (int i = 0; i < n; ++i) xi[i] = unit(rng);
      LameParameters p;
      p.mu = 0.5 + 0.75 * (unit(rng) + 1.0);
      p.lambda = -p.mu + 0.05 + 1.5 * (unit(rng) + 1.0);
      const MetricJet jet = MetricJet::constant(g);
      const double q = cometric_norm2(inverse_metric(jet), xi);
      const double im = (0.2 + 0.4 * (unit(rng) + 1.0)) * (unit(rng) < 0.0 ? -1.0 : 1.0);
      const Complex tau = (1.0 + q) * Complex(2.0 * unit(rng) + 1.0, im);

      const SymbolMatrix inv = invert_a2(jet, p, xi, tau);
      const SymbolMatrix a2 = split_symbol(jet, p, xi, tau).a2;
      const SymbolMatrix id = SymbolMatrix::Identity(n, n);
      inverse_error = std::max({inverse_error, (a2 * inv - id).rowwise().lpNorm<1>().maxCoeff(),
                                (inv * a2 - id).rowwise().lpNorm<1>().maxCoeff()});
      trace_error = std::max(trace_error, std::abs(trace_q2(jet, p, xi, tau) - inv.trace()) / std::abs(inv.trace()));
      const double scale = 1.7;
      const SymbolMatrix scaled = invert_a2(jet, p, scale * xi, scale * scale * tau) * (scale * scale);
      homogeneity_error = std::max(homogeneity_error, (scaled - inv).cwiseAbs().maxCoeff());
    }

    Json defects = Json::object();
    bool defects_ok = true;
    Vector xi(2);
    xi << sc.xi[0], sc.xi[1];
    const Complex tau(sc.tau[0], sc.tau[1]);
    for (const std::string& name : sc.fields) {
      const MetricField field = field_by_name(name);
      const Vector x = default_point(name);
      const double defect = parametrix_defect(field, c.lame, x, xi, tau, kMaxParametrixOrder);
      const double limit = name == "flat" ? sc.flat_defect : sc.curved_defect;
      defects_ok = defects_ok && defect < limit;
      defects[name] = {{"point", {x[0], x[1]}}, {"order", kMaxParametrixOrder}, {"defect", defect}, {"limit", limit}};
    }
    const bool inverse_ok = inverse_error < sc.max_inverse_error;
    r.report["result"] = {{"samples", sc.samples},
                          {"max_inverse_error", inverse_error},
                          {"max_trace_error", trace_error},
                          {"max_homogeneity_error", homogeneity_error},
                          {"inverse_limit", sc.max_inverse_error},
                          {"defects", defects},
                          {"passed", inverse_ok && defects_ok}};
    r.exit_code = inverse_ok && defects_ok ? kExitOk : kExitThreshold;
  });
}

CommandResult cmd_predict(const RunConfig& c, const Environment& env) {
  return guarded("predict", c, env, [&](CommandResult& r) {
    const Domain& d = require_domain(c);
    const int n = d.dim();
    const CoefficientPrediction p = predict_coefficients(n, c.lame, d.volume(), d.boundary_volume());
    Json result = prediction_json(p);
    result["domain"] = d.describe();
    result["weyl_coefficient"] = weyl_coefficient(n, c.lame, d.volume());
    result["laplacian_limit"] = c.lame.laplacian_limit();
    r.report["result"] = result;
  });
}

CommandResult cmd_eigs(const RunConfig& c, const Environment& env) {
  return guarded("eigs", c, env, [&](CommandResult& r) {
    const Spectrum s = compute_spectrum(c, env);
    Json result = {{"domain", s.domain.describe()},
                   {"bc", to_string(s.bc)},
                   {"method", to_string(s.method)},
                   {"distinct", s.eigenvalues.size()},
                   {"count", s.count()}};
    if (!s.empty()) {
      result["tau_1"] = s.eigenvalues.front();
      result["tau_max"] = s.eigenvalues.back();
      result["resolved_ceiling"] = s.resolved_ceiling();
    }
    if (c.output.wants("csv")) {
      r.files.emplace_back("spectrum.csv", spectrum_to_csv(s));
      result["spectrum_file"] = "spectrum.csv";
    }
    r.report["result"] = result;
  });
}

CommandResult cmd_trace_fit(const RunConfig& c, const Environment& env, const std::optional<std::string>& spectrum_path) {
  return guarded("trace-fit", c, env, [&](CommandResult& r) {
    const Spectrum s = load_spectrum(c, env, spectrum_path);
    FitOptions opts;
    opts.t_min = c.trace.t_min;
    opts.t_max = c.trace.t_max;
    opts.samples = c.trace.samples;
    const CoefficientFit fit = fit_spectrum(s, opts);
    Json result = {{"a0_hat", fit.a0_hat},
                   {"a1_hat", fit.a1_hat},
                   {"sign", fit.sign},
                   {"t_window", {fit.t_window.t_min, fit.t_window.t_max}},
                   {"residual_norm", fit.residual_norm},
                   {"nuisance", fit.nuisance},
                   {"condition", fit.condition},
                   {"spectrum", {{"domain", s.domain.describe()}, {"bc", to_string(s.bc)}, {"count", s.count()}}}};
    bool within = true;
    if (fit.prediction) {
      const double e0 = relative_error(fit.a0_hat, fit.prediction->a0);
      const double e1 = relative_error(fit.a1_hat, fit.prediction->a1);
      result["prediction"] = {{"a0", fit.prediction->a0}, {"a1", fit.prediction->a1}};
      result["relative_errors"] = {{"a0", e0}, {"a1", e1}};
      result["expected_sign"] = boundary_sign(s.bc);
      if (c.trace.max_relative_error)
        within = e0 <= *c.trace.max_relative_error && e1 <= *c.trace.max_relative_error && fit.sign == boundary_sign(s.bc);
    } else {
      result["prediction"] = nullptr;
      result["relative_errors"] = nullptr;
    }
    r.report["result"] = result;
    if (c.output.wants("csv")) r.files.emplace_back("trace_plot.csv", plot_csv(s, fit));
    if (!within) r.exit_code = kExitThreshold;
  });
}

CommandResult cmd_weyl(const RunConfig& c, const Environment& env, const std::optional<std::string>& spectrum_path) {
  return guarded("weyl", c, env, [&](CommandResult& r) {
    const Spectrum s = load_spectrum(c, env, spectrum_path);
    const double ratio = weyl_check(s);
    r.report["result"] = {{"ratio", ratio},
                          {"weyl_coefficient", weyl_constant_for(s)},
                          {"count", s.count()},
                          {"resolved_ceiling", s.resolved_ceiling()}};
    if (c.trace.max_relative_error && std::abs(ratio - 1.0) > *c.trace.max_relative_error) r.exit_code = kExitThreshold;
  });
}

CommandResult cmd_hear(const RunConfig& c, const Environment& env, const std::optional<std::string>& spectrum_path) {
  return guarded("hear", c, env, [&](CommandResult& r) {
    const std::string path = spectrum_path && !spectrum_path->empty() ? *spectrum_path : c.hear.spectrum;
    if (path.empty()) throw ConfigError("hear needs a spectrum file (--spectrum or hear.spectrum)");
    const Spectrum s = spectrum_import(path);
    FitOptions opts;
    opts.t_min = c.trace.t_min;
    opts.t_max = c.trace.t_max;
    opts.samples = c.trace.samples;
    const GeometryEstimate e = estimate_geometry(s, c.lame, c.hear.n, opts);
    const RigidityVerdict v = ball_rigidity_verdict(e, c.hear.tolerance);
    Json result = {{"vol_hat", e.vol_hat},
                   {"boundary_vol_hat", e.boundary_vol_hat},
                   {"ratio", v.ratio},
                   {"ball_ratio", v.ball_ratio},
                   {"verdict", to_string(v.verdict)},
                   {"margin", v.margin},
                   {"confidence", e.confidence},
                   {"tolerance", v.tolerance},
                   {"bc_sign", e.bc_sign},
                   {"t_window", {e.fit.t_window.t_min, e.fit.t_window.t_max}}};
    if (!v.warning.empty()) result["warning"] = v.warning;
    r.report["result"] = result;
  });
}

std::vector<std::string> write_outputs(const std::string& command, const CommandResult& result, const RunConfig& c,
                                       const Environment& env) {
  namespace fs = std::filesystem;
  const fs::path dir(env.resolve_output_dir(c));
  std::vector<std::string> written;
  if (c.output.wants("json")) {
    const fs::path p = dir / (command + ".json");
    write_file_atomic(p.string(), result.report.dump(2) + "\n");
    written.push_back(p.string());
  }
  for (const auto& [name, contents] : result.files) {
    const fs::path p = dir / name;
    write_file_atomic(p.string(), contents);
    written.push_back(p.string());
  }
  return written;
}

}  // namespace nlspec::app
