#include <CLI11.hpp>

#include "commands.hpp"
#include "triform/version.hpp"

int main(int argc, char** argv) {
  using namespace triform::cli;

  CLI::App app{"formation-control dynamics on triangulated Laman graphs"};
  app.set_version_flag("--version", triform::kVersion);
  app.require_subcommand(1);

  CommonOptions common;
  std::uint64_t gen_seed = 1;
  int gen_n = 0;
  std::filesystem::path gen_out = "graph.txt";
  std::filesystem::path p0_path, config_path;
  double min_target_fraction = 0.97;

  auto add_common = [&](CLI::App* cmd, bool needs_scenario = true) {
    auto* opt = cmd->add_option("--scenario", common.scenario,
                                "scenario JSON file");
    if (needs_scenario) opt->required();
    cmd->add_option("--out-dir", common.out_dir, "output directory");
    cmd->add_option("--format", common.format, "output format")
        ->check(CLI::IsMember({"text", "rows"}));
    cmd->add_option("--seed", [&](const std::vector<std::string>& v) {
      common.seed = std::stoull(v[0]);
      return true;
    }, "master seed override");
    cmd->add_option("--trials", [&](const std::vector<std::string>& v) {
      common.trials = std::stoi(v[0]);
      return true;
    }, "Monte Carlo trial count");
    cmd->add_option("--tol", [&](const std::vector<std::string>& v) {
      common.tol = std::stod(v[0]);
      return true;
    }, "equilibrium tolerance override");
  };

  auto* generate = app.add_subcommand("generate", "random graph spec file");
  generate->add_option("--n", gen_n, "vertex count")->required();
  generate->add_option("--seed", gen_seed, "construction seed");
  generate->add_option("--out", gen_out, "output file");

  auto* validate = app.add_subcommand("validate", "validate a scenario");
  add_common(validate);

  auto* simulate = app.add_subcommand("simulate", "integrate the gradient flow");
  add_common(simulate);
  simulate->add_option("--p0", p0_path, "initial configuration file");

  auto* equilibria =
      app.add_subcommand("equilibria", "search collinear equilibria");
  add_common(equilibria);

  auto* partition =
      app.add_subcommand("partition", "independent partition of a configuration");
  add_common(partition);
  partition->add_option("--config", config_path, "configuration file")->required();

  auto* spectrum =
      app.add_subcommand("spectrum", "Hessian spectrum and classification");
  add_common(spectrum);
  spectrum->add_option("--config", config_path, "equilibrium file")->required();

  auto* enumerate_cmd =
      app.add_subcommand("enumerate", "enumerate the target-orbit catalog");
  add_common(enumerate_cmd);

  auto* basin = app.add_subcommand("basin", "basin-of-attraction Monte Carlo");
  add_common(basin);

  auto* verify = app.add_subcommand("verify", "full verification suite");
  add_common(verify);
  verify->add_option("--min-target-fraction", min_target_fraction,
                     "basin pass threshold");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (generate->parsed()) return run_generate(gen_n, gen_seed, gen_out);
    if (validate->parsed()) return run_validate(common);
    if (simulate->parsed())
      return run_simulate(common, p0_path.empty()
                                      ? std::nullopt
                                      : std::optional<std::filesystem::path>(p0_path));
    if (equilibria->parsed()) return run_equilibria(common);
    if (partition->parsed()) return run_partition(common, config_path);
    if (spectrum->parsed()) return run_spectrum(common, config_path);
    if (enumerate_cmd->parsed()) return run_enumerate(common);
    if (basin->parsed()) return run_basin(common);
    if (verify->parsed()) return run_verify(common, min_target_fraction);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumerical;
  }
  return kExitUsage;
}
