#include "fusereg/report.hpp"

#include <cstdarg>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <system_error>

namespace fusereg::cli {

namespace {

void append_line(std::string& out, const char* fmt, ...) {
  char buf[256];
  va_list args;
  va_start(args, fmt);
  std::vsnprintf(buf, sizeof buf, fmt, args);
  va_end(args);
  out += buf;
  out += '\n';
}

std::string full(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

std::string render_fit_tables(const std::vector<estimators::FitReport>& reports,
                              const std::vector<std::string>& coef_names) {
  std::string out;
  for (const auto& rep : reports) {
    append_line(out, "Estimator: %s", rep.name.c_str());
    append_line(out, "  %-12s %10s %10s %10s %10s", "Coef", "Est", "ESE", "Lower95", "Upper95");
    for (Eigen::Index j = 0; j < rep.beta.size(); ++j) {
      const char* name =
          j < static_cast<Eigen::Index>(coef_names.size()) ? coef_names[j].c_str() : "?";
      append_line(out, "  %-12s %10.3f %10.3f %10.3f %10.3f", name, rep.beta[j], rep.ese[j],
                  rep.lower95[j], rep.upper95[j]);
    }
    if (rep.diagnostics.iterations > 0 || rep.diagnostics.score_norm > 0.0)
      append_line(out, "  solver: %d iterations, %d dampings, score norm %.2e",
                  rep.diagnostics.iterations, rep.diagnostics.dampings,
                  rep.diagnostics.score_norm);
    out += '\n';
  }
  return out;
}

std::string render_metrics_table(const sim::McMetricsTable& table) {
  std::string out;
  append_line(out, "Design: %s   Scenario: %s   reps=%d   B=%d   seed=%llu",
              table.which == sim::SimDesign::Sim1 ? "sim1" : "sim2",
              sim::scenario_name(table.scenario).c_str(), table.reps, table.bootstrap_B,
              static_cast<unsigned long long>(table.seed));
  if (table.failed_reps > 0)
    append_line(out, "failed replications: %d", table.failed_reps);
  append_line(out, "external z=1 rate: %.3f", table.external_z1_rate);
  if (table.sim1_caveat)
    append_line(out,
                "note: sim1 runs with the error mixture recentered to mean zero; "
                "summary rates shift accordingly");
  append_line(out, "  %-10s %-6s %10s %10s %10s %10s", "Estimator", "Coef", "Bias", "SSD", "ESE",
              "CR95");
  for (const auto& cell : table.cells)
    append_line(out, "  %-10s b%-5d %10.3f %10.3f %10.3f %10.3f", cell.estimator.c_str(),
                cell.coef, cell.bias, cell.ssd, cell.ese, cell.cr95);
  return out;
}

std::string estimates_csv(const std::vector<estimators::FitReport>& reports,
                          const std::vector<std::string>& coef_names) {
  std::string out = "estimator,coef,est,ese,lower95,upper95\n";
  for (const auto& rep : reports) {
    for (Eigen::Index j = 0; j < rep.beta.size(); ++j) {
      const std::string name =
          j < static_cast<Eigen::Index>(coef_names.size()) ? coef_names[j] : "?";
      out += rep.name + ',' + name + ',' + full(rep.beta[j]) + ',' + full(rep.ese[j]) + ',' +
             full(rep.lower95[j]) + ',' + full(rep.upper95[j]) + '\n';
    }
  }
  return out;
}

std::string metrics_csv(const sim::McMetricsTable& table) {
  std::string out = "scenario,estimator,coef,bias,ssd,ese,cr95\n";
  for (const auto& cell : table.cells) {
    out += sim::scenario_name(table.scenario) + ',' + cell.estimator + ",beta" +
           std::to_string(cell.coef) + ',' + full(cell.bias) + ',' + full(cell.ssd) + ',' +
           full(cell.ese) + ',' + full(cell.cr95) + '\n';
  }
  return out;
}

void write_text_file(const std::string& path, const std::string& content) {
  std::error_code ec;
  auto dir = std::filesystem::path(path).parent_path();
  if (!dir.empty()) std::filesystem::create_directories(dir, ec);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw data_error("cannot write '" + path + "'");
  out << content;
  if (!out) throw data_error("failed while writing '" + path + "'");
}

}  // namespace fusereg::cli
