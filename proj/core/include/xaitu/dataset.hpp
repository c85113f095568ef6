#ifndef XAITU_DATASET_HPP
#define XAITU_DATASET_HPP

#include <filesystem>
#include <string>
#include <vector>

namespace xaitu {

/// A t x n feature matrix with named columns. Rows double as the background
/// sample for interventional expectations.
struct Dataset {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;

  int n() const { return static_cast<int>(columns.size()); }
  int t() const { return static_cast<int>(rows.size()); }

  /// Enforces the type invariants: t >= 1, n >= 1, rectangular rows,
  /// unique column names, all entries finite.
  void validate() const;
};

/// Per-column means over all rows.
std::vector<double> column_means(const Dataset& ds);
/// Per-column population (1/t) standard deviations.
std::vector<double> column_stddevs(const Dataset& ds);

/// CSV ingestion: header row, decimal reals, UTF-8. Empty cells and
/// non-numeric tokens are rejected with their row/column location.
Dataset load_csv(const std::filesystem::path& path);
void save_csv(const Dataset& ds, const std::filesystem::path& path);

}  // namespace xaitu

#endif
