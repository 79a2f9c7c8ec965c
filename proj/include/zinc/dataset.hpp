#ifndef ZINC_DATASET_HPP
#define ZINC_DATASET_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "zinc/linalg.hpp"

namespace zinc {

enum class Family { linear, poisson, negbin, zip, zinb };

Family family_from_string(const std::string& s);
std::string to_string(Family f);
bool is_zero_inflated(Family f);
bool is_count_family(Family f);  // poisson/negbin/zip/zinb

// Immutable per-module defect table: one row per software module, numeric
// metric columns plus the non-negative integer "bugs" response.
struct Dataset {
  std::vector<std::string> module_id;       // one per row
  std::vector<std::string> metric_names;    // column order as loaded
  std::vector<Vector> metric_columns;       // metric_columns[c][row]
  std::vector<long long> bugs;

  std::size_t n() const { return bugs.size(); }
  bool has_metric(const std::string& name) const;
  const Vector& metric(const std::string& name) const;

  bool operator==(const Dataset&) const = default;
};

struct ModelSpec {
  Family family = Family::poisson;
  std::vector<std::string> count_covariates;
  std::vector<std::string> zero_covariates;

  // Throws UnknownCovariate / ZeroCovariatesForNonZIFamily on a bad spec.
  void validate(const Dataset& d) const;
};

// Regression views over a Dataset: X carries a leading intercept column, Z is
// present only for zip/zinb. Column names (with "intercept" first) ride along
// so fitted models can be serialized and re-applied by name.
struct DesignMatrices {
  Matrix X;
  std::optional<Matrix> Z;
  std::vector<long long> y;
  std::vector<std::string> x_names;
  std::vector<std::string> z_names;

  std::size_t n() const { return y.size(); }
};

// Load a flat CSV export: header row, one row per module, a required
// non-negative integer "bugs" column, an optional string "id" column, all
// other columns numeric. `required` lists columns that must be present
// (besides "bugs", which is always required). Rows with missing cells are
// rejected.
Dataset load_csv(const std::string& path, const std::vector<std::string>& required = {});
Dataset read_csv_stream(std::istream& in, const std::string& origin,
                        const std::vector<std::string>& required = {});

void write_csv(const Dataset& d, std::ostream& out);
// Atomic write: temp file + rename.
void write_csv_file(const Dataset& d, const std::string& path);

DesignMatrices build_design(const Dataset& d, const ModelSpec& spec);

struct HistogramBin {
  long long value = 0;
  std::size_t count = 0;
  bool operator==(const HistogramBin&) const = default;
};

// One bin per distinct value, ascending; drop_zeros removes the zero bin.
std::vector<HistogramBin> histogram(const std::vector<long long>& y, bool drop_zeros);

}  // namespace zinc

#endif  // ZINC_DATASET_HPP
