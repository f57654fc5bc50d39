#include <fstream>
#include <iostream>
#include <thread>

#include <CLI11.hpp>

#include "strategem/csv.hpp"
#include "strategem/errors.hpp"
#include "strategem/ldim.hpp"
#include "strategem/sweep.hpp"
#include "strategem/verify.hpp"

using namespace strategem;

namespace {

// Writes to --out when given, else stdout.
template <typename F>
void emit(const std::string& path, F&& write) {
  if (path.empty()) {
    write(std::cout);
    return;
  }
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write '" + path + "'");
  write(out);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Online strategic classification simulator"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_path;
  std::string grid_path;
  std::string class_path;
  std::size_t jobs = std::max(1U, std::thread::hardware_concurrency());

  auto* run = app.add_subcommand("run", "Play one game and write its transcript as CSV");
  run->add_option("config", config_path, "Config file")->required();
  run->add_option("--out", out_path, "Output CSV (default stdout)");

  auto* sweep = app.add_subcommand("sweep", "Play every point of a parameter grid");
  sweep->add_option("config", config_path, "Base config file")->required();
  sweep->add_option("--grid", grid_path, "Grid file")->required();
  sweep->add_option("--out", out_path, "Output CSV (default stdout)");
  sweep->add_option("--jobs", jobs, "Games in flight");

  auto* verify_cmd = app.add_subcommand("verify", "Play one game and check every applicable invariant");
  verify_cmd->add_option("config", config_path, "Config file")->required();

  auto* ldim_cmd = app.add_subcommand("ldim", "Littlestone dimension of a class file");
  ldim_cmd->add_option("classfile", class_path, "One 0/1 string per line")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) {
      const auto transcript = run_game(load_config(config_path));
      emit(out_path, [&](std::ostream& os) { write_transcript_csv(os, transcript); });
      std::cerr << transcript.total_mistakes << " mistakes in " << transcript.rows.size() << " rounds ("
                << transcript.end_reason << ")\n";
      if (transcript.learner_error) std::cerr << "learner stopped: " << *transcript.learner_error << '\n';
    } else if (*sweep) {
      const auto base = load_config(config_path);
      const auto grid = load_grid(grid_path);
      const auto rows = run_sweep(base, grid, jobs);
      emit(out_path, [&](std::ostream& os) { write_sweep_csv(os, grid, rows); });
    } else if (*verify_cmd) {
      const auto report = verify(load_config(config_path));
      report.print(std::cout);
      return report.passed() ? 0 : 2;
    } else if (*ldim_cmd) {
      HypothesisClass H = [&] {
        try {
          return read_class_file(class_path);
        } catch (const std::invalid_argument& e) {
          throw ConfigError(e.what());
        }
      }();
      std::cout << ldim(H) << '\n';
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
