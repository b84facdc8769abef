#include "fusereg/preprocess.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace fusereg::cli {

namespace {

Eigen::Index column_index(const FusedDataset& data, const std::string& name) {
  for (std::size_t j = 0; j < data.covariate_names.size(); ++j)
    if (data.covariate_names[j] == name) return static_cast<Eigen::Index>(j);
  throw config_error("unknown covariate '" + name + "' in preprocessing options");
}

bool contains(const std::vector<std::string>& names, const std::string& name) {
  return std::find(names.begin(), names.end(), name) != names.end();
}

struct Moments {
  double mean;
  double sd;
};

Moments column_moments(const Eigen::MatrixXd& X, Eigen::Index col) {
  const auto n = static_cast<double>(X.rows());
  double mean = X.col(col).mean();
  double ssq = (X.col(col).array() - mean).square().sum();
  double sd = n > 1.0 ? std::sqrt(ssq / (n - 1.0)) : 0.0;
  return {mean, sd};
}

}  // namespace

std::size_t PreprocessReport::total_excluded() const {
  std::size_t n = 0;
  for (const auto& [rule, count] : exclusions) n += count;
  return n;
}

std::string PreprocessReport::summary() const {
  char buf[160];
  std::string out;
  std::snprintf(buf, sizeof buf, "rows read: %zu\n", rows_read);
  out += buf;
  for (const auto& [rule, count] : exclusions) {
    std::snprintf(buf, sizeof buf, "excluded (%s): %zu\n", rule.c_str(), count);
    out += buf;
  }
  std::snprintf(buf, sizeof buf, "rows retained: %zu\n", rows_final);
  out += buf;
  for (const auto& c : columns) {
    if (!c.log_applied && !c.standardized) continue;
    std::snprintf(buf, sizeof buf, "%s:%s%s mean=%.4g sd=%.4g\n", c.name.c_str(),
                  c.log_applied ? " log" : "", c.standardized ? " standardized" : "", c.mean2,
                  c.sd2);
    out += buf;
  }
  return out;
}

PreprocessResult preprocess(const FusedDataset& data, const PreprocessOptions& opts) {
  PreprocessReport report;
  report.rows_read = static_cast<std::size_t>(data.size());

  FusedDataset work = data;
  const Eigen::Index p = work.dim();

  // (1) categorical validity
  for (const auto& [name, codes] : opts.valid_codes) {
    Eigen::Index col = column_index(work, name);
    std::vector<bool> keep(static_cast<std::size_t>(work.size()), true);
    std::size_t dropped = 0;
    for (Eigen::Index i = 0; i < work.size(); ++i) {
      double v = work.X(i, col);
      bool valid = std::find(codes.begin(), codes.end(), v) != codes.end();
      if (!valid) {
        keep[static_cast<std::size_t>(i)] = false;
        ++dropped;
      }
    }
    if (dropped > 0) work = work.filter(keep);
    report.exclusions.emplace_back("invalid " + name + " code", dropped);
  }

  // (2) log transform
  std::vector<bool> logged(static_cast<std::size_t>(p), false);
  for (const auto& name : opts.log_transform) {
    Eigen::Index col = column_index(work, name);
    if (col == 0) throw config_error("cannot log-transform the intercept");
    for (Eigen::Index i = 0; i < work.size(); ++i) {
      if (!(work.X(i, col) > 0.0))
        throw data_error("log transform of " + name + ": nonpositive value at row " +
                         std::to_string(i + 1));
    }
    work.X.col(col) = work.X.col(col).array().log();
    logged[static_cast<std::size_t>(col)] = true;
  }

  // Continuous covariates: everything except the intercept and the declared
  // binary columns. The sd rule always measures in sd units, whether or not
  // the standardized values are kept.
  std::vector<Eigen::Index> continuous;
  for (Eigen::Index j = 1; j < p; ++j)
    if (!contains(opts.binary_covariates, work.covariate_names[static_cast<std::size_t>(j)]))
      continuous.push_back(j);

  report.columns.resize(static_cast<std::size_t>(p));
  for (Eigen::Index j = 0; j < p; ++j) {
    auto& ct = report.columns[static_cast<std::size_t>(j)];
    ct.name = work.covariate_names[static_cast<std::size_t>(j)];
    ct.log_applied = logged[static_cast<std::size_t>(j)];
  }

  // (3) first standardization pass
  std::vector<Moments> first(static_cast<std::size_t>(p), {0.0, 1.0});
  for (Eigen::Index col : continuous) {
    Moments m = column_moments(work.X, col);
    if (!(m.sd > 0.0))
      throw data_error("column " + work.covariate_names[static_cast<std::size_t>(col)] +
                       " has zero spread; cannot standardize");
    first[static_cast<std::size_t>(col)] = m;
    auto& ct = report.columns[static_cast<std::size_t>(col)];
    ct.mean = m.mean;
    ct.sd = m.sd;
    if (opts.standardize) {
      work.X.col(col) = (work.X.col(col).array() - m.mean) / m.sd;
      ct.standardized = true;
    }
  }

  // (4) sd-threshold exclusions, one pass
  std::size_t dropped = 0;
  if (std::isfinite(opts.sd_threshold)) {
    std::vector<bool> keep(static_cast<std::size_t>(work.size()), true);
    for (Eigen::Index i = 0; i < work.size(); ++i) {
      for (Eigen::Index col : continuous) {
        const Moments& m = first[static_cast<std::size_t>(col)];
        double zed = opts.standardize ? work.X(i, col) : (work.X(i, col) - m.mean) / m.sd;
        if (std::fabs(zed) > opts.sd_threshold) {
          keep[static_cast<std::size_t>(i)] = false;
          ++dropped;
          break;
        }
      }
    }
    if (dropped > 0) work = work.filter(keep);
  }
  char rule[64];
  std::snprintf(rule, sizeof rule, "beyond %g sd", opts.sd_threshold);
  report.exclusions.emplace_back(rule, dropped);

  // (5) re-standardize the retained rows
  for (Eigen::Index col : continuous) {
    Moments m = column_moments(work.X, col);
    auto& ct = report.columns[static_cast<std::size_t>(col)];
    if (opts.standardize) {
      if (!(m.sd > 0.0))
        throw data_error("column " + work.covariate_names[static_cast<std::size_t>(col)] +
                         " lost all spread after exclusions");
      work.X.col(col) = (work.X.col(col).array() - m.mean) / m.sd;
      // Chain the two affine maps so the report shows raw-scale parameters.
      ct.mean2 = ct.mean + ct.sd * m.mean;
      ct.sd2 = ct.sd * m.sd;
    } else {
      ct.mean2 = m.mean;
      ct.sd2 = m.sd;
    }
  }

  report.rows_final = static_cast<std::size_t>(work.size());
  work.validate();
  return {std::move(work), std::move(report)};
}

}  // namespace fusereg::cli
