#include <CLI11.hpp>

#include <iostream>

#include "heatcert/cli.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Computer-assisted enclosure of the Fujita equation u_t - Delta u = u^2 on the unit cube"};
  app.require_subcommand(1);

  std::string config_path;
  std::string output_dir;
  auto* run = app.add_subcommand("run", "Solve and verify the run described by a key=value config file");
  run->add_option("config", config_path, "Config file")->required();
  run->add_option("-o,--output-dir", output_dir, "Override output_dir from the config");

  std::string dir_a, dir_b;
  auto* compare = app.add_subcommand("compare", "Compare the artifacts of two finished runs");
  compare->add_option("dirA", dir_a, "Output directory of run A")->required();
  compare->add_option("dirB", dir_b, "Output directory of run B")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : heatcert::kUsageOrIoError;
  }

  try {
    if (*run) {
      std::optional<std::filesystem::path> override_dir;
      if (!output_dir.empty()) override_dir = output_dir;
      return heatcert::run_command(config_path, override_dir, heatcert::threads_from_env(), std::cout, std::cerr);
    }
    return heatcert::compare_command(dir_a, dir_b, std::cout, std::cerr);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return heatcert::kUsageOrIoError;
  }
}
