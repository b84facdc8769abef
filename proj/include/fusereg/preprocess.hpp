#ifndef FUSEREG_PREPROCESS_HPP
#define FUSEREG_PREPROCESS_HPP

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "fusereg/dataset.hpp"

namespace fusereg::cli {

struct PreprocessOptions {
  std::vector<std::string> log_transform;        // covariate names to log
  bool standardize = true;                       // center/scale continuous covariates
  std::vector<std::string> binary_covariates;    // exempt from scaling and the sd rule
  std::map<std::string, std::vector<double>> valid_codes;  // categorical validity filter
  double sd_threshold = 4.0;                     // |standardized value| cut for exclusions
};

struct ColumnTransform {
  std::string name;
  bool log_applied = false;
  bool standardized = false;
  double mean = 0.0;   // first pass, before the sd exclusions
  double sd = 1.0;
  double mean2 = 0.0;  // second pass, on the retained rows
  double sd2 = 1.0;
};

struct PreprocessReport {
  std::size_t rows_read = 0;
  std::size_t rows_final = 0;
  std::vector<std::pair<std::string, std::size_t>> exclusions;  // rule -> count
  std::vector<ColumnTransform> columns;

  std::size_t total_excluded() const;
  std::string summary() const;
};

struct PreprocessResult {
  FusedDataset data;
  PreprocessReport report;
};

// In order: (1) drop rows with invalid categorical codes, (2) log-transform
// the configured columns, (3) standardize continuous covariates on pooled
// mean/sd, (4) drop rows with any standardized covariate beyond the sd
// threshold (one pass), (5) re-standardize the retained rows.
PreprocessResult preprocess(const FusedDataset& data, const PreprocessOptions& opts);

}  // namespace fusereg::cli

#endif  // FUSEREG_PREPROCESS_HPP
