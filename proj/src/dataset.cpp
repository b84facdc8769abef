#include "fusereg/dataset.hpp"

#include <cmath>

namespace fusereg {

FusedDataset FusedDataset::from_rows(const std::vector<FusedObservation>& rows, double cutoff) {
  if (rows.empty()) throw data_error("dataset has no rows");
  const Eigen::Index n = static_cast<Eigen::Index>(rows.size());
  const Eigen::Index p = rows.front().x.size();

  FusedDataset ds;
  ds.cutoff = cutoff;
  ds.X.resize(n, p);
  ds.y.resize(n);
  ds.r.resize(n);
  ds.z.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& row = rows[static_cast<std::size_t>(i)];
    if (row.x.size() != p)
      throw data_error("row " + std::to_string(i + 1) + ": covariate length differs");
    ds.X.row(i) = row.x.transpose();
    ds.r[i] = row.r;
    if (row.r == 1) {
      ds.y[i] = row.y;
      ds.z[i] = row.y <= cutoff ? 1 : 0;
    } else {
      ds.y[i] = std::numeric_limits<double>::quiet_NaN();
      ds.z[i] = row.z;
    }
  }
  ds.covariate_names.assign(static_cast<std::size_t>(p), "");
  ds.covariate_names[0] = "Intercept";
  for (Eigen::Index j = 1; j < p; ++j)
    ds.covariate_names[static_cast<std::size_t>(j)] = "x" + std::to_string(j);
  ds.validate();
  return ds;
}

FusedDataset FusedDataset::filter(const std::vector<bool>& keep) const {
  if (static_cast<Eigen::Index>(keep.size()) != size())
    throw data_error("filter mask length differs from dataset size");
  Eigen::Index kept = 0;
  for (bool k : keep) kept += k ? 1 : 0;
  if (kept == 0) throw data_error("filter would drop every row");

  FusedDataset out;
  out.cutoff = cutoff;
  out.covariate_names = covariate_names;
  out.X.resize(kept, dim());
  out.y.resize(kept);
  out.r.resize(kept);
  out.z.resize(kept);
  Eigen::Index at = 0;
  for (Eigen::Index i = 0; i < size(); ++i) {
    if (!keep[static_cast<std::size_t>(i)]) continue;
    out.X.row(at) = X.row(i);
    out.y[at] = y[i];
    out.r[at] = r[i];
    out.z[at] = z[i];
    ++at;
  }
  return out;
}

void FusedDataset::validate() const {
  if (size() == 0) throw data_error("dataset has no rows");
  if (dim() == 0) throw data_error("dataset has no covariates");
  for (Eigen::Index i = 0; i < size(); ++i) {
    const std::string where = "row " + std::to_string(i + 1);
    if (X(i, 0) != 1.0) throw data_error(where + ": design matrix must start with 1");
    if (r[i] != 0 && r[i] != 1) throw data_error(where + ": source flag must be 0 or 1");
    if (r[i] == 1 && !std::isfinite(y[i]))
      throw data_error(where + ": target row lacks a finite outcome");
    if (z[i] != 0 && z[i] != 1)
      throw data_error(where + ": dichotomized outcome must be 0 or 1");
    if (!X.row(i).allFinite()) throw data_error(where + ": non-finite covariate");
  }
}

}  // namespace fusereg
