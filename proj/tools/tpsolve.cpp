#include "tpsolve/experiment.hpp"

#include <CLI11.hpp>

#include <exception>
#include <iostream>
#include <string>

int main(int argc, char** argv) {
  CLI::App app{"Time-periodic solver experiments"};
  std::string config_path;
  std::string out_dir = "out";
  int workers_flag = 0;
  app.add_option("--config", config_path, "Experiment configuration (JSON)")
      ->required();
  app.add_option("--workers", workers_flag,
                 "Worker threads (overrides the config file and "
                 "TPSOLVE_WORKERS)")
      ->check(CLI::PositiveNumber);
  app.add_option("--out", out_dir, "Output directory")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& error) {
    const int code = app.exit(error);
    return code == 0 ? 0 : 1;
  }

  try {
    tpsolve::ExperimentConfig config = tpsolve::load_config(config_path);
    if (workers_flag > 0) {
      config.workers = workers_flag;
    }
    return tpsolve::run_experiment(config, out_dir, std::cout);
  } catch (const std::exception& error) {
    std::cerr << "error: " << error.what() << "\n";
    return 1;
  }
}
