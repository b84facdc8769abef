#ifndef FUSEREG_COMMANDS_HPP
#define FUSEREG_COMMANDS_HPP

#include <ostream>

#include "fusereg/bootstrap.hpp"
#include "fusereg/config.hpp"
#include "fusereg/report.hpp"

namespace fusereg::cli {

struct FitOutput {
  bootstrap::InferenceResult inference;
  PreprocessReport preprocess;
  std::vector<std::string> coef_names;
  std::vector<std::string> warnings;
};

// load -> preprocess -> propensity -> point fits -> bootstrap -> inference.
FitOutput run_fit(const RunConfig& cfg);

sim::McMetricsTable run_simulate(const RunConfig& cfg);

// Full commands: run, render tables to `out`, and write the machine-readable
// CSV into cfg.output_dir (estimates.csv for fit, metrics.csv for simulate).
void fit_command(const RunConfig& cfg, std::ostream& out);
void simulate_command(const RunConfig& cfg, std::ostream& out);

// Exit code for a failed run: 2 config, 3 data, 4 solver.
int exit_code(const Error& err);

}  // namespace fusereg::cli

#endif  // FUSEREG_COMMANDS_HPP
