#pragma once

#include <Eigen/Core>
#include <string>
#include <vector>

namespace ironq {

struct DatasetSchema {
  std::string response;
  std::vector<std::string> covariates;
  bool intercept = true;  // prepend a constant column
};

struct Dataset {
  std::vector<double> y;
  Eigen::MatrixXd X;                   // n x (intercept + covariates)
  std::vector<std::string> colnames;   // matches X columns
  std::string response_name;
  std::size_t n_dropped = 0;           // rows lost to missing/non-finite cells
  std::vector<std::size_t> dropped_rows;  // 1-based data row numbers
};

// RFC-4180-style CSV with a header row: quoted fields, doubled-quote escapes,
// CR/LF tolerant. Rows with missing or non-finite values in used columns are
// dropped and counted; zero or negative responses are a hard error listing
// the offending rows.
Dataset ingest_csv(const std::string& path, const DatasetSchema& schema);

// Low-level record splitter, exposed for the CSV tests.
std::vector<std::vector<std::string>> parse_csv(const std::string& text);

struct ColumnSummary {
  std::string name;
  double mean, median, sd, cv, cs, ck, min, max;
  std::size_t n;
  bool cv_defined;  // false when the mean is zero
};

// Mean, median, SD (n-1), CV, moment skewness m3/m2^{3/2}, kurtosis m4/m2^2,
// min, max. Requires n >= 2.
ColumnSummary summarize(const std::string& name, std::vector<double> values);

// Response first, then the covariate columns (the intercept is skipped).
std::vector<ColumnSummary> describe(const Dataset& data);

}  // namespace ironq
