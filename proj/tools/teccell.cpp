#include <CLI11.hpp>
#include <exception>
#include <iostream>
#include <string>

#include "tec/cli.hpp"

int main(int argc, char** argv) {
  CLI::App app{"thermoelectrochemical cell simulator and certificate checker"};
  app.require_subcommand(1);

  std::string config_path;
  bool symbolic = false;
  std::string param;
  double from = 0.0, to = 1.0;
  int steps = 0;

  auto* run = app.add_subcommand("run", "advance the coupled transient and export results");
  run->add_option("config", config_path, "JSON configuration file")->required();

  auto* certify = app.add_subcommand("certify", "evaluate the existence certificate");
  certify->add_option("config", config_path, "JSON configuration file")->required();
  certify->add_flag("--symbolic", symbolic,
                    "extract coefficient table with symbolic analysis constants");

  auto* sweep = app.add_subcommand("sweep", "repeat certification across a parameter range");
  sweep->add_option("config", config_path, "JSON configuration file")->required();
  sweep->add_option("--param", param, "dotted config key, e.g. material.overrides.peltier_max")
      ->required();
  sweep->add_option("--from", from, "range start")->required();
  sweep->add_option("--to", to, "range end")->required();
  sweep->add_option("--steps", steps, "number of samples")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) return tec::run_command(config_path).exit_code;
    if (certify->parsed()) return tec::certify_command(config_path, symbolic).exit_code;
    if (sweep->parsed())
      return tec::sweep_command(config_path, param, from, to, steps).exit_code;
  } catch (const tec::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
