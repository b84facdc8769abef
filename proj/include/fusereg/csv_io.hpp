#ifndef FUSEREG_CSV_IO_HPP
#define FUSEREG_CSV_IO_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "fusereg/dataset.hpp"

namespace fusereg::cli {

struct ColumnRoles {
  std::string source = "R";   // 1 = target, 0 = external
  std::string outcome = "Y";  // required on target rows
  std::string z = "Z";        // required on external rows
  std::vector<std::string> covariates;
  double cutoff = 0.0;
};

// Pooled file with a source column. Empty cells are missing; target rows need
// the outcome, external rows need the dichotomized column.
FusedDataset load_csv(const std::string& path, const ColumnRoles& roles);

// Two files: every row of the first is a target row, every row of the second
// an external row; neither needs the source column.
FusedDataset load_csv_pair(const std::string& target_path, const std::string& external_path,
                           const ColumnRoles& roles);

// A fully observed file split at random: split_n rows keep their outcome, the
// rest keep only its dichotomization at the cutoff.
FusedDataset load_csv_split(const std::string& path, const ColumnRoles& roles, int split_n,
                            std::uint64_t split_seed);

// Writes R,Y,Z plus the covariate columns (intercept omitted); Y is empty on
// external rows. A written dataset reloads into identical numbers.
void write_dataset_csv(const FusedDataset& data, const std::string& path);

}  // namespace fusereg::cli

#endif  // FUSEREG_CSV_IO_HPP
