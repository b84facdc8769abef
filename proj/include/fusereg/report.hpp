#ifndef FUSEREG_REPORT_HPP
#define FUSEREG_REPORT_HPP

#include <string>
#include <vector>

#include "fusereg/estimators.hpp"
#include "fusereg/sim_engine.hpp"

namespace fusereg::cli {

// One aligned Est/ESE/Lower95/Upper95 block per estimator.
std::string render_fit_tables(const std::vector<estimators::FitReport>& reports,
                              const std::vector<std::string>& coef_names);

// Bias/SSD/ESE/CR95 rows per estimator and coefficient.
std::string render_metrics_table(const sim::McMetricsTable& table);

// Machine-readable forms. Full double precision so identical runs produce
// identical bytes.
std::string estimates_csv(const std::vector<estimators::FitReport>& reports,
                          const std::vector<std::string>& coef_names);
std::string metrics_csv(const sim::McMetricsTable& table);

void write_text_file(const std::string& path, const std::string& content);

}  // namespace fusereg::cli

#endif  // FUSEREG_REPORT_HPP
