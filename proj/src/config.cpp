#include "fusereg/config.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

namespace fusereg::cli {

namespace {

using nlohmann::json;

std::vector<std::string> string_list(const json& j, const std::string& key) {
  std::vector<std::string> out;
  for (const auto& item : j.at(key)) out.push_back(item.get<std::string>());
  return out;
}

}  // namespace

void apply_config_text(RunConfig& cfg, const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::exception& e) {
    throw config_error(std::string("config is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw config_error("config root must be a JSON object");

  try {
    if (j.contains("command")) cfg.command = j["command"].get<std::string>();
    if (j.contains("data")) cfg.data_path = j["data"].get<std::string>();
    if (j.contains("target")) cfg.target_path = j["target"].get<std::string>();
    if (j.contains("external")) cfg.external_path = j["external"].get<std::string>();
    if (j.contains("source_col")) cfg.source_col = j["source_col"].get<std::string>();
    if (j.contains("outcome_col")) cfg.outcome_col = j["outcome_col"].get<std::string>();
    if (j.contains("z_col")) cfg.z_col = j["z_col"].get<std::string>();
    if (j.contains("covariates")) cfg.covariates = string_list(j, "covariates");
    if (j.contains("cutoff")) cfg.cutoff = j["cutoff"].get<double>();
    if (j.contains("model")) cfg.model = j["model"].get<std::string>();
    if (j.contains("propensity")) cfg.propensity = j["propensity"].get<std::string>();
    if (j.contains("split_n")) cfg.split_n = j["split_n"].get<int>();
    if (j.contains("split_seed")) cfg.split_seed = j["split_seed"].get<std::uint64_t>();

    if (j.contains("log_transform")) cfg.prep.log_transform = string_list(j, "log_transform");
    if (j.contains("standardize")) cfg.prep.standardize = j["standardize"].get<bool>();
    if (j.contains("binary_covariates"))
      cfg.prep.binary_covariates = string_list(j, "binary_covariates");
    if (j.contains("sd_threshold")) cfg.prep.sd_threshold = j["sd_threshold"].get<double>();
    if (j.contains("valid_codes")) {
      if (!j["valid_codes"].is_object())
        throw config_error("valid_codes must map column names to code lists");
      for (const auto& [name, codes] : j["valid_codes"].items()) {
        std::vector<double> list;
        for (const auto& code : codes) list.push_back(code.get<double>());
        cfg.prep.valid_codes[name] = std::move(list);
      }
    }

    if (j.contains("design")) cfg.design = j["design"].get<std::string>();
    if (j.contains("scenario")) cfg.scenario = j["scenario"].get<std::string>();
    if (j.contains("reps")) cfg.reps = j["reps"].get<int>();
    if (j.contains("n_target")) cfg.n_target = j["n_target"].get<int>();
    if (j.contains("pi")) cfg.pi = j["pi"].get<double>();

    if (j.contains("bootstrap_B")) cfg.bootstrap_B = j["bootstrap_B"].get<int>();
    if (j.contains("seed")) cfg.seed = j["seed"].get<std::uint64_t>();
    if (j.contains("threads")) cfg.threads = j["threads"].get<int>();
    if (j.contains("output_dir")) cfg.output_dir = j["output_dir"].get<std::string>();
  } catch (const json::exception& e) {
    throw config_error(std::string("bad config value: ") + e.what());
  }
}

void apply_config_file(RunConfig& cfg, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw config_error("cannot open config '" + path + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  apply_config_text(cfg, buffer.str());
}

void validate_fit_config(const RunConfig& cfg) {
  bool pooled = !cfg.data_path.empty();
  bool pair = !cfg.target_path.empty() || !cfg.external_path.empty();
  if (pooled == pair)
    throw config_error("fit needs either a pooled data file or a target/external file pair");
  if (pair && (cfg.target_path.empty() || cfg.external_path.empty()))
    throw config_error("fit with two files needs both target and external paths");
  if (cfg.split_n > 0 && !pooled)
    throw config_error("a random split applies only to a single pooled file");
  if (cfg.covariates.empty()) throw config_error("fit needs at least one covariate column");
  if (cfg.bootstrap_B < 100) throw config_error("bootstrap_B must be at least 100");
  if (cfg.propensity != "constant" && cfg.propensity != "logistic" &&
      cfg.propensity != "sim2-ratio")
    throw config_error("unknown propensity strategy '" + cfg.propensity + "'");
}

void validate_simulate_config(const RunConfig& cfg) {
  if (cfg.design != "sim1" && cfg.design != "sim2")
    throw config_error("design must be sim1 or sim2");
  if (cfg.reps < 100) throw config_error("reps must be at least 100");
  if (cfg.bootstrap_B < 100) throw config_error("bootstrap_B must be at least 100");
  if (cfg.n_target < 10) throw config_error("n_target must be at least 10");
  if (!(cfg.pi > 0.0) || !(cfg.pi < 1.0)) throw config_error("pi must lie in (0, 1)");
}

}  // namespace fusereg::cli
