#include <CLI11.hpp>
#include <cstdio>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "mplab/lab.hpp"

int main(int argc, char** argv) {
  CLI::App app{"mplab - ground states of spin-1/2 gases with self-generated magnetic fields"};
  app.require_subcommand(1);

  auto* run = app.add_subcommand("run", "run a scenario file and write CSV tables");
  std::string scenario_path, out_dir;
  long long seed_override = -1;
  int threads = 0;
  run->add_option("--scenario", scenario_path, "scenario file (flat key = value)")->required();
  run->add_option("--out", out_dir, "output directory")->required();
  run->add_option("--seed", seed_override, "override the scenario seed");
  run->add_option("--threads", threads, "worker threads for operator applications");

  CLI11_PARSE(app, argc, argv);

  try {
#ifdef _OPENMP
    if (threads > 0) omp_set_num_threads(threads);
#endif
    mplab::lab::Scenario s = mplab::lab::Scenario::from_file(scenario_path);
    if (seed_override >= 0) s.set("seed", std::to_string(seed_override));
    mplab::lab::ExperimentResult res = mplab::lab::run_scenario(s);
    mplab::lab::write_results(res, s, out_dir);
    for (const auto& a : res.assertions)
      std::printf("%s %s: %s\n", a.pass ? "PASS" : "FAIL", a.name.c_str(), a.detail.c_str());
    return res.all_pass() ? 0 : 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
}
