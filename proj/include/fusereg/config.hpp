#ifndef FUSEREG_CONFIG_HPP
#define FUSEREG_CONFIG_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "fusereg/preprocess.hpp"

namespace fusereg::cli {

// Everything a run needs, collected from a JSON config file and/or command
// line flags (flags win).
struct RunConfig {
  std::string command;  // "fit" or "simulate"

  // fit inputs: either one pooled file with a source column, two files, or
  // one fully observed file plus a random split.
  std::string data_path;
  std::string target_path;
  std::string external_path;
  std::string source_col = "R";
  std::string outcome_col = "Y";
  std::string z_col = "Z";
  std::vector<std::string> covariates;
  double cutoff = 0.0;
  std::string model = "normal";
  std::string propensity = "logistic";
  int split_n = 0;
  std::uint64_t split_seed = 0;
  PreprocessOptions prep;

  // simulate inputs
  std::string design = "sim2";
  std::string scenario = "II";
  int reps = 1000;
  int n_target = 500;
  double pi = 0.5;

  // shared
  int bootstrap_B = 1000;
  std::uint64_t seed = 1;
  int threads = 0;  // 0 keeps the runtime default
  std::string output_dir = ".";
};

// Parses the JSON document at `path` into `cfg`, overwriting only the keys
// present in the file.
void apply_config_file(RunConfig& cfg, const std::string& path);
void apply_config_text(RunConfig& cfg, const std::string& json_text);

void validate_fit_config(const RunConfig& cfg);
void validate_simulate_config(const RunConfig& cfg);

}  // namespace fusereg::cli

#endif  // FUSEREG_CONFIG_HPP
