#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "catube/commands.hpp"
#include "catube/scene_config.hpp"

int main(int argc, char** argv) {
  CLI::App app{"catube: curvature-adapted tube hypersurfaces in products of space forms"};
  app.require_subcommand(1);

  struct Args {
    std::string config;
    std::string out;
  };
  Args args;

  auto add = [&](const char* name, const char* help) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->add_option("--config", args.config, "scene configuration (JSON)")
        ->required()
        ->check(CLI::ExistingFile);
    sub->add_option("--out", args.out, "output directory (overrides config)");
    return sub;
  };

  CLI::App* construct = add("construct", "build and validate a scene, print its spectra");
  CLI::App* verify = add("verify", "compare closed-form spectra against the FD oracle");
  CLI::App* sweep = add("sweep", "theta sweep of product angle and spectra to CSV");
  CLI::App* focal = add("focal", "tabulate focal radii and the admissible bound");

  CLI11_PARSE(app, argc, argv);

  catube::cli::SceneConfig cfg;
  try {
    cfg = catube::cli::load_scene_config(args.config);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  if (!args.out.empty()) cfg.out_dir = args.out;

  using catube::cli::Command;
  Command cmd = Command::construct;
  if (verify->parsed()) cmd = Command::verify;
  if (sweep->parsed()) cmd = Command::sweep;
  if (focal->parsed()) cmd = Command::focal;
  (void)construct;

  return catube::cli::run_command(cmd, cfg, std::cout, std::cerr);
}
