#include <iostream>

#include "CLI11.hpp"
#include "nlchns/cli.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Nonlocal Cahn-Hilliard-Navier-Stokes simulator and verification harness"};
  app.require_subcommand(1);
  std::string config_path, output;
  for (const auto& name : nlchns::subcommands()) {
    auto* sub = app.add_subcommand(name);
    sub->add_option("-c,--config", config_path, "JSON run configuration")->required();
    sub->add_option("-o,--output", output, "output directory (overrides output.directory)");
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : nlchns::kExitValidation;
  }
  const std::string sub = app.get_subcommands().front()->get_name();
  return nlchns::run_subcommand(sub, config_path, std::cout, std::cerr, output);
}
