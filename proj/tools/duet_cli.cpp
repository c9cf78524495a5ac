#include <duet/scenarios.hpp>

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

namespace {

std::string read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot read '" + path + "'");
  std::ostringstream buf;
  buf << f.rdbuf();
  return buf.str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"duet: pulse-schedule dynamics and CSV scenario runner"};
  app.require_subcommand(1);

  auto* run = app.add_subcommand("run", "execute one scenario from a config");
  std::string config_path;
  run->add_option("--config", config_path, "key = value config file")
      ->required();
  std::string scenario, out;
  double delta_over_g = 0.0, omega_over_g = 0.0;
  long seed = 0;
  auto* opt_scenario =
      run->add_option("--scenario", scenario, "override the scenario name");
  auto* opt_out = run->add_option("--out", out, "override the output path");
  auto* opt_delta = run->add_option("--delta-over-g", delta_over_g,
                                    "override the bus detuning, units of g");
  auto* opt_omega = run->add_option("--omega-over-g", omega_over_g,
                                    "override the drive strength, units of g");
  auto* opt_seed = run->add_option("--seed", seed, "override the RNG seed");

  CLI11_PARSE(app, argc, argv);

  try {
    std::vector<std::pair<std::string, std::string>> overrides;
    if (*opt_scenario) overrides.emplace_back("scenario", scenario);
    if (*opt_out) overrides.emplace_back("out", out);
    if (*opt_delta)
      overrides.emplace_back("delta_over_g", duet::format_real(delta_over_g));
    if (*opt_omega)
      overrides.emplace_back("omega_over_g", duet::format_real(omega_over_g));
    if (*opt_seed) overrides.emplace_back("seed", std::to_string(seed));

    duet::ScenarioConfig cfg =
        duet::parse_config(read_file(config_path), overrides);
    duet::run_scenario(cfg, std::cerr);
    std::cout << "wrote " << cfg.out << "\n";
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
