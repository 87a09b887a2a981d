#include "commands.hpp"

#include "CLI11.hpp"

#include <iostream>

using namespace nlspec::app;

int main(int argc, char** argv) {
  CLI::App app{"Heat-trace asymptotics and spectra of the Navier-Lame operator"};
  app.set_version_flag("--version", std::string(NLSPEC_VERSION));
  app.require_subcommand(1);

  std::string config_path, spectrum_path, out_dir;
  bool quiet = false;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("-c,--config", config_path, "JSON configuration file")->check(CLI::ExistingFile);
    sub->add_option("-o,--out", out_dir, "output directory (overrides config and NLSPEC_OUTPUT_DIR)");
    sub->add_flag("-q,--quiet", quiet, "do not print the report");
  };
  auto add_spectrum = [&](CLI::App* sub) {
    sub->add_option("-s,--spectrum", spectrum_path, "spectrum CSV (v1) to analyse")->check(CLI::ExistingFile);
  };

  auto* symbol = app.add_subcommand("symbol-verify", "randomised symbol-inverse suite and parametrix defects");
  auto* predict = app.add_subcommand("predict", "two-term heat coefficients and Weyl constant of a domain");
  auto* eigs = app.add_subcommand("eigs", "eigenvalues of the configured domain as spectrum CSV");
  auto* fit = app.add_subcommand("trace-fit", "fit heat-trace coefficients to a spectrum");
  auto* weyl = app.add_subcommand("weyl", "Weyl-law ratio of a spectrum");
  auto* hear = app.add_subcommand("hear", "estimate volume and boundary measure, then the ball verdict");
  for (auto* sub : {symbol, predict, eigs, fit, weyl, hear}) add_common(sub);
  for (auto* sub : {fit, weyl, hear}) add_spectrum(sub);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  RunConfig config;
  Environment env;
  try {
    if (!config_path.empty()) config = load_config(config_path);
    env = Environment::from_process();
    if (!out_dir.empty()) env.output_dir = out_dir;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  }

  const std::optional<std::string> spectrum =
      spectrum_path.empty() ? std::nullopt : std::optional<std::string>(spectrum_path);
  std::string name;
  CommandResult result;
  if (symbol->parsed()) {
    name = "symbol-verify";
    result = cmd_symbol_verify(config, env);
  } else if (predict->parsed()) {
    name = "predict";
    result = cmd_predict(config, env);
  } else if (eigs->parsed()) {
    name = "eigs";
    result = cmd_eigs(config, env);
  } else if (fit->parsed()) {
    name = "trace-fit";
    result = cmd_trace_fit(config, env, spectrum);
  } else if (weyl->parsed()) {
    name = "weyl";
    result = cmd_weyl(config, env, spectrum);
  } else {
    name = "hear";
    result = cmd_hear(config, env, spectrum);
  }

  if (!quiet) std::cout << result.report.dump(2) << '\n';
  if (result.report.contains("error")) std::cerr << name << ": " << result.report["error"]["message"].get<std::string>() << '\n';
  try {
    for (const auto& path : write_outputs(name, result, config, env)) std::cerr << "wrote " << path << '\n';
  } catch (const std::exception& e) {
    std::cerr << "cannot write outputs: " << e.what() << '\n';
    return result.exit_code == kExitOk ? kExitConfig : result.exit_code;
  }
  return result.exit_code;
}
