#include "fusereg/csv_io.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <numeric>

#include "fusereg/rng.hpp"

namespace fusereg::cli {

namespace {

constexpr double kMissing = std::numeric_limits<double>::quiet_NaN();

struct Table {
  std::string path;
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;  // NaN marks an empty cell
};

std::string trim(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  std::size_t b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    std::size_t comma = line.find(',', start);
    if (comma == std::string::npos) {
      out.push_back(trim(line.substr(start)));
      break;
    }
    out.push_back(trim(line.substr(start, comma - start)));
    start = comma + 1;
  }
  return out;
}

Table read_table(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw data_error("cannot open '" + path + "'");

  Table table;
  table.path = path;
  std::string line;
  if (!std::getline(in, line)) throw data_error("'" + path + "' is empty");
  table.header = split_line(line);

  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    auto cells = split_line(line);
    if (cells.size() != table.header.size())
      throw data_error("'" + path + "' line " + std::to_string(lineno) + ": expected " +
                       std::to_string(table.header.size()) + " cells, got " +
                       std::to_string(cells.size()));
    std::vector<double> row(cells.size(), kMissing);
    for (std::size_t j = 0; j < cells.size(); ++j) {
      if (cells[j].empty()) continue;
      char* end = nullptr;
      double v = std::strtod(cells[j].c_str(), &end);
      if (end == cells[j].c_str() || *end != '\0')
        throw data_error("'" + path + "' line " + std::to_string(lineno) + ", column " +
                         table.header[j] + ": non-numeric cell '" + cells[j] + "'");
      row[j] = v;
    }
    table.rows.push_back(std::move(row));
  }
  if (table.rows.empty()) throw data_error("'" + path + "' has no data rows");
  return table;
}

std::size_t find_col(const Table& table, const std::string& name) {
  for (std::size_t j = 0; j < table.header.size(); ++j)
    if (table.header[j] == name) return j;
  throw data_error("'" + table.path + "' is missing column '" + name + "'");
}

void append_rows(std::vector<FusedObservation>& out, const Table& table, const ColumnRoles& roles,
                 int forced_r) {
  if (roles.covariates.empty()) throw config_error("no covariate columns configured");
  const bool has_source = forced_r < 0;
  std::size_t source_col = has_source ? find_col(table, roles.source) : 0;
  // The outcome column is optional in an external-only file, and the
  // dichotomized column is optional in a target-only file.
  bool need_y = has_source || forced_r == 1;
  bool need_z = has_source || forced_r == 0;
  std::size_t y_col = need_y ? find_col(table, roles.outcome) : 0;
  std::size_t z_col = need_z ? find_col(table, roles.z) : 0;
  std::vector<std::size_t> x_cols;
  for (const auto& name : roles.covariates) x_cols.push_back(find_col(table, name));

  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    const auto& cells = table.rows[i];
    const std::string where = "'" + table.path + "' data row " + std::to_string(i + 1);
    FusedObservation obs;

    if (has_source) {
      double rv = cells[source_col];
      if (!(rv == 0.0 || rv == 1.0))
        throw data_error(where + ": source flag must be 0 or 1");
      obs.r = static_cast<int>(rv);
    } else {
      obs.r = forced_r;
    }

    obs.x.resize(static_cast<Eigen::Index>(x_cols.size()) + 1);
    obs.x[0] = 1.0;
    for (std::size_t k = 0; k < x_cols.size(); ++k) {
      double v = cells[x_cols[k]];
      if (std::isnan(v))
        throw data_error(where + ": missing covariate " + roles.covariates[k]);
      obs.x[static_cast<Eigen::Index>(k) + 1] = v;
    }

    if (obs.r == 1) {
      double yv = cells[y_col];
      if (std::isnan(yv)) throw data_error(where + ": target row lacks the outcome");
      obs.y = yv;
    } else {
      double zv = cells[z_col];
      if (std::isnan(zv)) throw data_error(where + ": external row lacks the dichotomized outcome");
      if (zv != 0.0 && zv != 1.0)
        throw data_error(where + ": dichotomized outcome must be 0 or 1");
      obs.z = static_cast<int>(zv);
    }
    out.push_back(std::move(obs));
  }
}

FusedDataset finish(std::vector<FusedObservation> rows, const ColumnRoles& roles) {
  FusedDataset ds = FusedDataset::from_rows(rows, roles.cutoff);
  ds.covariate_names.assign(1, "Intercept");
  ds.covariate_names.insert(ds.covariate_names.end(), roles.covariates.begin(),
                            roles.covariates.end());
  return ds;
}

}  // namespace

FusedDataset load_csv(const std::string& path, const ColumnRoles& roles) {
  Table table = read_table(path);
  std::vector<FusedObservation> rows;
  append_rows(rows, table, roles, -1);
  return finish(std::move(rows), roles);
}

FusedDataset load_csv_pair(const std::string& target_path, const std::string& external_path,
                           const ColumnRoles& roles) {
  Table target = read_table(target_path);
  Table external = read_table(external_path);
  std::vector<FusedObservation> rows;
  append_rows(rows, target, roles, 1);
  append_rows(rows, external, roles, 0);
  return finish(std::move(rows), roles);
}

FusedDataset load_csv_split(const std::string& path, const ColumnRoles& roles, int split_n,
                            std::uint64_t split_seed) {
  Table table = read_table(path);
  const auto n = static_cast<int>(table.rows.size());
  if (split_n < 1 || split_n >= n)
    throw config_error("split size must lie strictly between 0 and the row count " +
                       std::to_string(n));

  // Everything loads as a target row first (the outcome must be present
  // everywhere), then the complement of the random draw is dichotomized.
  std::vector<FusedObservation> rows;
  append_rows(rows, table, roles, 1);

  std::vector<int> order(rows.size());
  std::iota(order.begin(), order.end(), 0);
  RngStream rng(split_seed);
  for (int i = n - 1; i > 0; --i) {
    int j = static_cast<int>(rng.uniform() * (i + 1));
    std::swap(order[static_cast<std::size_t>(i)], order[static_cast<std::size_t>(j)]);
  }
  for (int k = split_n; k < n; ++k) {
    auto& obs = rows[static_cast<std::size_t>(order[static_cast<std::size_t>(k)])];
    obs.r = 0;
    obs.z = obs.y <= roles.cutoff ? 1 : 0;
    obs.y = kMissing;
  }
  return finish(std::move(rows), roles);
}

void write_dataset_csv(const FusedDataset& data, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw data_error("cannot write '" + path + "'");

  out << "R,Y,Z";
  for (std::size_t j = 1; j < data.covariate_names.size(); ++j)
    out << ',' << data.covariate_names[j];
  out << '\n';

  char buf[40];
  for (Eigen::Index i = 0; i < data.size(); ++i) {
    out << data.r[i] << ',';
    if (data.r[i] == 1) {
      std::snprintf(buf, sizeof buf, "%.17g", data.y[i]);
      out << buf;
    }
    out << ',' << data.z[i];
    for (Eigen::Index j = 1; j < data.dim(); ++j) {
      std::snprintf(buf, sizeof buf, "%.17g", data.X(i, j));
      out << ',' << buf;
    }
    out << '\n';
  }
  if (!out) throw data_error("failed while writing '" + path + "'");
}

}  // namespace fusereg::cli
