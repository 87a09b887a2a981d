#include "doctest.h"

#include "commands.hpp"

#include "nlspec/spectrum_io.hpp"
#include "nlspec/trace.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <map>
#include <numbers>

using namespace nlspec;
using namespace nlspec::app;
namespace fs = std::filesystem;

namespace {

RunConfig config(const char* text) { return parse_config(Json::parse(text)); }

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / "nlspec-cli-test" / name;
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

const Environment kEnv{};

}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("configuration parsing is strict") {
    CHECK_THROWS_AS(config(R"({"lame": {"mu": 1, "lamda": 1}})"), ConfigError);
    CHECK_THROWS_AS(config(R"({"solver": {"grid": 64}})"), ConfigError);
    CHECK_THROWS_AS(config(R"({"lame": {"mu": -1, "lambda": 1}})"), ConfigError);
    CHECK_THROWS_AS(config(R"({"lame": {"mu": "1"}})"), ConfigError);
    CHECK_THROWS_AS(config(R"({"domain": {"kind": "disk", "dims": [1, 2]}})"), ConfigError);
    CHECK_THROWS_AS(config(R"({"domain": {"kind": "ellipse", "dims": [1, 2]}})"), ConfigError);
    CHECK_THROWS_AS(config(R"({"bc": "robin"})"), ConfigError);
    CHECK_THROWS_AS(config(R"({"solver": {"grid_n": 8}})"), ConfigError);
    CHECK_THROWS_AS(config(R"({"output": {"formats": ["pdf"]}})"), ConfigError);
    CHECK_THROWS_AS(load_config("/nonexistent/config.json"), ConfigError);

    const RunConfig c = config(R"({"seed": 5, "lame": {"mu": 2, "lambda": 0.5},
                                   "domain": {"kind": "rectangle", "dims": [2, 1]}, "bc": "neumann",
                                   "trace": {"t_min": 1e-4, "t_max": 1e-2}})");
    CHECK(c.seed == 5);
    CHECK(c.lame.mu == 2.0);
    CHECK(c.bc == BoundaryCondition::NeumannTraction);
    REQUIRE(c.domain.has_value());
    CHECK(*c.domain == Domain(Rectangle{2.0, 1.0}));
    CHECK(to_json(parse_config(to_json(c))) == to_json(c));
  }

  TEST_CASE("exit codes by error kind") {
    CHECK(exit_code_for(ErrorKind::PoleProximity) == kExitConfig);
    CHECK(exit_code_for(ErrorKind::MalformedFile) == kExitConfig);
    CHECK(exit_code_for(ErrorKind::DiscretizationTooCoarse) == kExitConfig);
    CHECK(exit_code_for(ErrorKind::TruncationDominated) == kExitSolver);
    CHECK(exit_code_for(ErrorKind::EigensolverFailure) == kExitSolver);
    CHECK(exit_code_for(ErrorKind::RootBracketFailure) == kExitSolver);
    CHECK(exit_code_for(ErrorKind::IllConditionedFit) == kExitSolver);
  }

  TEST_CASE("symbol-verify") {
    const CommandResult ok = cmd_symbol_verify(RunConfig{}, kEnv);
    CHECK(ok.exit_code == kExitOk);
    CHECK(ok.report["status"] == "ok");
    CHECK(ok.report["result"]["max_inverse_error"].get<double>() < 1e-12);
    CHECK(ok.report["result"]["samples"] == 1000);

    const CommandResult flat = cmd_symbol_verify(config(R"({"symbol": {"samples": 20, "fields": ["flat"]}})"), kEnv);
    CHECK(flat.exit_code == kExitOk);
    CHECK(flat.report["result"]["defects"]["flat"]["defect"].get<double>() < 1e-10);

    const CommandResult pole =
        cmd_symbol_verify(config(R"({"symbol": {"samples": 20, "fields": ["flat"], "xi": [1, 0], "tau": [1, 0]}})"), kEnv);
    CHECK(pole.exit_code == kExitConfig);
    CHECK(pole.report["status"] == "error");
    CHECK(pole.report["error"]["kind"] == "PoleProximity");

    const CommandResult strict = cmd_symbol_verify(config(R"({"symbol": {"samples": 50, "max_inverse_error": 1e-30}})"), kEnv);
    CHECK(strict.exit_code == kExitThreshold);
    CHECK(strict.report["status"] == "threshold_violation");
  }

  TEST_CASE("predict") {
    const CommandResult disk = cmd_predict(config(R"({"domain": {"kind": "disk", "dims": [1]}})"), kEnv);
    REQUIRE(disk.exit_code == kExitOk);
    CHECK(disk.report["result"]["a0"].get<double>() == doctest::Approx(0.333333).epsilon(1e-6));
    CHECK(disk.report["result"]["a1"].get<double>() == doctest::Approx(0.698945).epsilon(1e-6));
    CHECK(disk.report["result"]["weyl_coefficient"].get<double>() == doctest::Approx(1.0 / 3.0).epsilon(1e-14));

    const CommandResult square = cmd_predict(config(R"({"domain": {"kind": "rectangle", "dims": [1, 1]}})"), kEnv);
    CHECK(square.report["result"]["a0"].get<double>() == doctest::Approx(0.106103).epsilon(1e-6));
    CHECK(square.report["result"]["a1"].get<double>() == doctest::Approx(0.444962).epsilon(1e-6));

    const CommandResult lap =
        cmd_predict(config(R"({"lame": {"mu": 1, "lambda": -1}, "domain": {"kind": "rectangle", "dims": [1, 1]}})"), kEnv);
    CHECK(lap.report["result"]["a0"].get<double>() == doctest::Approx(0.159155).epsilon(1e-6));
    CHECK(lap.report["result"]["laplacian_limit"] == true);

    CHECK(cmd_predict(RunConfig{}, kEnv).exit_code == kExitConfig);
  }

  TEST_CASE("eigs") {
    const CommandResult line =
        cmd_eigs(config(R"({"lame": {"mu": 1, "lambda": 0}, "domain": {"kind": "interval", "dims": [3.141592653589793]},
                            "solver": {"count": 20}})"),
                 kEnv);
    REQUIRE(line.exit_code == kExitOk);
    CHECK(line.report["result"]["tau_1"].get<double>() == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(line.report["result"]["count"] == 20);
    REQUIRE(line.files.size() == 1);
    CHECK(line.files[0].first == "spectrum.csv");
    CHECK(spectrum_from_csv(line.files[0].second).eigenvalues.size() == 20);

    const CommandResult disk = cmd_eigs(config(R"({"domain": {"kind": "disk", "dims": [1]}, "solver": {"m_max": 10, "k_max": 10}})"), kEnv);
    CHECK(disk.report["result"]["tau_1"].get<double>() == doctest::Approx(11.322145).epsilon(1e-6));

    const CommandResult square =
        cmd_eigs(config(R"({"domain": {"kind": "rectangle", "dims": [1, 1]}, "bc": "neumann", "solver": {"grid_n": 16}})"), kEnv);
    REQUIRE(square.exit_code == kExitOk);
    const Spectrum s = spectrum_from_csv(square.files[0].second);
    const auto zeros = std::count_if(s.eigenvalues.begin(), s.eigenvalues.end(), [&](double v) { return v < 1e-8 * s.eigenvalues[3]; });
    CHECK(zeros == 3);

    const CommandResult neumann_disk = cmd_eigs(config(R"({"domain": {"kind": "disk", "dims": [1]}, "bc": "neumann"})"), kEnv);
    CHECK(neumann_disk.exit_code == kExitConfig);
  }

  TEST_CASE("trace-fit") {
    const char* interval = R"({"lame": {"mu": 1, "lambda": 0}, "domain": {"kind": "interval", "dims": [3.141592653589793]},
                               "solver": {"count": 500}})";
    const CommandResult fit = cmd_trace_fit(config(interval), kEnv, std::nullopt);
    REQUIRE(fit.exit_code == kExitOk);
    CHECK(fit.report["result"]["sign"] == -1);
    CHECK(fit.report["result"]["relative_errors"]["a0"].get<double>() < kTruncationTolerance);
    CHECK(fit.report["result"]["relative_errors"]["a1"].get<double>() < 10.0 * kTruncationTolerance);
    REQUIRE(fit.files.size() == 1);
    CHECK(fit.files[0].first == "trace_plot.csv");
    CHECK(std::count(fit.files[0].second.begin(), fit.files[0].second.end(), '\n') == 201);

    // From a file written by eigs, with the geometry withheld.
    const fs::path dir = scratch("trace-fit");
    Spectrum blind = interval_spectrum(std::numbers::pi, {1.0, 0.0}, BoundaryCondition::Dirichlet, 500);
    blind.domain = Domain(UnspecifiedDomain{1});
    spectrum_export(blind, (dir / "blind.csv").string());
    const CommandResult from_file = cmd_trace_fit(RunConfig{}, kEnv, (dir / "blind.csv").string());
    REQUIRE(from_file.exit_code == kExitOk);
    CHECK(from_file.report["result"]["prediction"].is_null());
    CHECK(from_file.report["result"]["a0_hat"] == fit.report["result"]["a0_hat"]);

    RunConfig strict = config(interval);
    strict.trace.max_relative_error = 1e-15;
    CHECK(cmd_trace_fit(strict, kEnv, std::nullopt).exit_code == kExitThreshold);

    RunConfig shortc = config(interval);
    shortc.solver.count = 10;
    shortc.trace.t_min = 1e-6;
    shortc.trace.t_max = 1e-2;
    const CommandResult trunc = cmd_trace_fit(shortc, kEnv, std::nullopt);
    CHECK(trunc.exit_code == kExitSolver);
    CHECK(trunc.report["error"]["kind"] == "TruncationDominated");
    CHECK(trunc.report["error"]["message"].get<std::string>().find("increase") != std::string::npos);

    CHECK(cmd_trace_fit(RunConfig{}, kEnv, "/nonexistent.csv").exit_code == kExitConfig);
  }

  TEST_CASE("weyl") {
    const CommandResult w = cmd_weyl(config(R"({"lame": {"mu": 1, "lambda": 3}, "domain": {"kind": "interval", "dims": [2]},
                                                "solver": {"count": 1000}})"),
                                     kEnv, std::nullopt);
    REQUIRE(w.exit_code == kExitOk);
    CHECK(std::abs(w.report["result"]["ratio"].get<double>() - 1.0) < 0.02);
  }

  TEST_CASE("hear on synthetic and discretised rectangles") {
    const fs::path dir = scratch("hear");
    // Separable Dirichlet vector-Laplacian spectrum of the 2 x 1 rectangle.
    std::map<double, int> levels;
    const double pi2 = std::numbers::pi * std::numbers::pi;
    for (int j = 1; j < 200; ++j)
      for (int k = 1; k < 200; ++k) {
        const double tau = pi2 * (j * j / 4.0 + k * k);
        if (tau <= 4e4) levels[tau] += 2;
      }
    Spectrum exact;
    for (const auto& [tau, m] : levels) {
      exact.eigenvalues.push_back(tau);
      exact.multiplicities.push_back(m);
    }
    exact.params = {1.0, -1.0};
    spectrum_export(exact, (dir / "exact.csv").string());
    RunConfig c = config(R"({"lame": {"mu": 1, "lambda": -1}})");
    const CommandResult r = cmd_hear(c, kEnv, (dir / "exact.csv").string());
    REQUIRE(r.exit_code == kExitOk);
    CHECK(r.report["result"]["vol_hat"].get<double>() == doctest::Approx(2.0).epsilon(kTruncationTolerance));
    CHECK(r.report["result"]["boundary_vol_hat"].get<double>() == doctest::Approx(6.0).epsilon(10.0 * kTruncationTolerance));
    CHECK(r.report["result"]["verdict"] == "NotBall");
    for (const char* key : {"ratio", "ball_ratio", "margin", "confidence"}) CHECK(r.report["result"].contains(key));

    const Spectrum fd = rectangle_fd_spectrum(2.0, 1.0, {1.0, 1.0}, BoundaryCondition::Dirichlet, 48);
    spectrum_export(fd, (dir / "fd.csv").string());
    const CommandResult rect = cmd_hear(RunConfig{}, kEnv, (dir / "fd.csv").string());
    REQUIRE(rect.exit_code == kExitOk);
    CHECK(rect.report["result"]["verdict"] == "NotBall");

    CHECK(cmd_hear(RunConfig{}, kEnv, std::nullopt).exit_code == kExitConfig);
  }

  TEST_CASE("environment overrides are echoed") {
    Environment env;
    env.output_dir = "/tmp/elsewhere";
    env.threads = 3;
    const CommandResult r = cmd_predict(config(R"({"domain": {"kind": "disk", "dims": [1]}})"), env);
    CHECK(r.report["environment"]["output_dir"] == "/tmp/elsewhere");
    CHECK(r.report["environment"]["threads"] == 3);
    CHECK(r.report["version"] == NLSPEC_VERSION);

    ::setenv("NLSPEC_OUTPUT_DIR", "/tmp/from-env", 1);
    ::setenv("NLSPEC_THREADS", "2", 1);
    const Environment from = Environment::from_process();
    CHECK(from.output_dir == std::optional<std::string>("/tmp/from-env"));
    CHECK(from.threads == 2);
    ::setenv("NLSPEC_THREADS", "zero", 1);
    CHECK_THROWS_AS(Environment::from_process(), ConfigError);
    ::unsetenv("NLSPEC_THREADS");
    ::unsetenv("NLSPEC_OUTPUT_DIR");
    CHECK_FALSE(Environment::from_process().output_dir.has_value());
  }

  TEST_CASE("reports are deterministic and reproducible from their echoed config") {
    const RunConfig c = config(R"({"seed": 42, "symbol": {"samples": 60, "fields": ["flat", "polar"]}})");
    const CommandResult a = cmd_symbol_verify(c, kEnv);
    const CommandResult b = cmd_symbol_verify(c, kEnv);
    CHECK(a.report.dump() == b.report.dump());
    const CommandResult again = cmd_symbol_verify(parse_config(a.report["config"]), kEnv);
    CHECK(again.report.dump() == a.report.dump());
    CHECK(a.report["seed"] == 42);

    const CommandResult other = cmd_symbol_verify(config(R"({"seed": 43, "symbol": {"samples": 60, "fields": ["flat", "polar"]}})"), kEnv);
    CHECK(other.report["result"]["max_inverse_error"] != a.report["result"]["max_inverse_error"]);
  }

  TEST_CASE("outputs are written under the resolved directory") {
    const fs::path dir = scratch("outputs");
    RunConfig c = config(R"({"lame": {"mu": 1, "lambda": 0}, "domain": {"kind": "interval", "dims": [1]}, "solver": {"count": 5}})");
    Environment env;
    env.output_dir = (dir / "nested" / "run").string();
    const CommandResult r = cmd_eigs(c, env);
    const auto paths = write_outputs("eigs", r, c, env);
    REQUIRE(paths.size() == 2);
    for (const auto& p : paths) CHECK(fs::exists(p));
    CHECK(fs::exists(dir / "nested" / "run" / "eigs.json"));
    CHECK(spectrum_import((dir / "nested" / "run" / "spectrum.csv").string()).eigenvalues.size() == 5);
    const Json echoed = Json::parse(read_file((dir / "nested" / "run" / "eigs.json").string()));
    CHECK(echoed["environment"]["output_dir"] == env.output_dir.value());

    c.output.formats = {"csv"};
    const auto only_csv = write_outputs("eigs", r, c, env);
    REQUIRE(only_csv.size() == 1);
    CHECK(only_csv[0].find("spectrum.csv") != std::string::npos);
  }
}
