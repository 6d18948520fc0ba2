#include "ironq/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace ironq {

namespace {

bool parse_double(const std::string& field, double* out) {
  if (field.empty()) return false;
  try {
    std::size_t pos = 0;
    const double v = std::stod(field, &pos);
    while (pos < field.size() && std::isspace(static_cast<unsigned char>(field[pos]))) {
      ++pos;
    }
    if (pos != field.size()) return false;
    *out = v;
    return std::isfinite(v);
  } catch (const std::exception&) {
    return false;
  }
}

}  // namespace

std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
  std::vector<std::vector<std::string>> records;
  std::vector<std::string> fields;
  std::string field;
  bool in_quotes = false;
  bool field_started = false;

  auto end_field = [&] {
    fields.push_back(field);
    field.clear();
    field_started = false;
  };
  auto end_record = [&] {
    end_field();
    const bool blank = fields.size() == 1 && fields[0].empty();
    if (!blank) records.push_back(fields);
    fields.clear();
  };

  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (in_quotes) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field.push_back('"');
          ++i;
        } else {
          in_quotes = false;
        }
      } else {
        field.push_back(c);
      }
    } else if (c == '"' && !field_started) {
      in_quotes = true;
      field_started = true;
    } else if (c == ',') {
      end_field();
    } else if (c == '\n') {
      if (!field.empty() && field.back() == '\r') field.pop_back();
      end_record();
    } else {
      field.push_back(c);
      field_started = true;
    }
  }
  if (!field.empty() || !fields.empty()) {
    if (!field.empty() && field.back() == '\r') field.pop_back();
    end_record();
  }
  return records;
}

Dataset ingest_csv(const std::string& path, const DatasetSchema& schema) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("ingest_csv: cannot open '" + path + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  const auto records = parse_csv(buffer.str());
  if (records.empty()) throw std::runtime_error("ingest_csv: empty file");

  const auto& header = records[0];
  auto column_of = [&](const std::string& name) -> std::size_t {
    const auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) {
      throw std::invalid_argument("ingest_csv: missing column '" + name + "'");
    }
    return static_cast<std::size_t>(it - header.begin());
  };

  const std::size_t y_col = column_of(schema.response);
  std::vector<std::size_t> x_cols;
  for (const auto& name : schema.covariates) x_cols.push_back(column_of(name));

  std::vector<double> y;
  std::vector<std::vector<double>> rows;
  std::vector<std::size_t> dropped;
  std::vector<std::size_t> bad_response_rows;

  for (std::size_t r = 1; r < records.size(); ++r) {
    const auto& rec = records[r];
    double yv = 0.0;
    bool ok = y_col < rec.size() && parse_double(rec[y_col], &yv);
    std::vector<double> xv(x_cols.size());
    for (std::size_t j = 0; ok && j < x_cols.size(); ++j) {
      ok = x_cols[j] < rec.size() && parse_double(rec[x_cols[j]], &xv[j]);
    }
    if (!ok) {
      dropped.push_back(r);  // 1-based data row = header-relative index
      continue;
    }
    if (yv <= 0.0) {
      bad_response_rows.push_back(r);
      continue;
    }
    y.push_back(yv);
    rows.push_back(std::move(xv));
  }

  if (!bad_response_rows.empty()) {
    std::ostringstream msg;
    msg << "ingest_csv: response must be positive; offending rows:";
    for (const auto r : bad_response_rows) msg << ' ' << r;
    throw std::invalid_argument(msg.str());
  }
  if (y.empty()) {
    throw std::runtime_error("ingest_csv: no usable rows after ingestion policy");
  }

  Dataset data;
  data.response_name = schema.response;
  data.y = std::move(y);
  data.n_dropped = dropped.size();
  data.dropped_rows = std::move(dropped);
  const std::size_t n = data.y.size();
  const std::size_t p_cov = schema.covariates.size();
  const std::size_t p = p_cov + (schema.intercept ? 1 : 0);
  data.X.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(p));
  std::size_t offset = 0;
  if (schema.intercept) {
    data.X.col(0).setOnes();
    data.colnames.push_back("(intercept)");
    offset = 1;
  }
  for (std::size_t j = 0; j < p_cov; ++j) {
    data.colnames.push_back(schema.covariates[j]);
    for (std::size_t i = 0; i < n; ++i) {
      data.X(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j + offset)) =
          rows[i][j];
    }
  }
  return data;
}

ColumnSummary summarize(const std::string& name, std::vector<double> values) {
  const std::size_t n = values.size();
  if (n < 2) throw std::invalid_argument("summarize: require n >= 2");
  ColumnSummary s;
  s.name = name;
  s.n = n;
  const double nd = static_cast<double>(n);

  double sum = 0.0;
  for (const double v : values) sum += v;
  s.mean = sum / nd;

  double m2 = 0.0, m3 = 0.0, m4 = 0.0, ss = 0.0;
  for (const double v : values) {
    const double d = v - s.mean;
    m2 += d * d;
    m3 += d * d * d;
    m4 += d * d * d * d;
    ss += d * d;
  }
  m2 /= nd;
  m3 /= nd;
  m4 /= nd;
  s.sd = std::sqrt(ss / (nd - 1.0));
  s.cv_defined = s.mean != 0.0;
  s.cv = s.cv_defined ? s.sd / s.mean : std::numeric_limits<double>::quiet_NaN();
  s.cs = m2 > 0.0 ? m3 / std::pow(m2, 1.5) : 0.0;
  s.ck = m2 > 0.0 ? m4 / (m2 * m2) : 0.0;

  std::sort(values.begin(), values.end());
  s.min = values.front();
  s.max = values.back();
  s.median = (n % 2 == 1) ? values[n / 2]
                          : 0.5 * (values[n / 2 - 1] + values[n / 2]);
  return s;
}

std::vector<ColumnSummary> describe(const Dataset& data) {
  std::vector<ColumnSummary> out;
  out.push_back(summarize(data.response_name, data.y));
  for (std::size_t j = 0; j < data.colnames.size(); ++j) {
    if (data.colnames[j] == "(intercept)") continue;
    const Eigen::VectorXd col = data.X.col(static_cast<Eigen::Index>(j));
    out.push_back(summarize(
        data.colnames[j],
        std::vector<double>(col.data(), col.data() + col.size())));
  }
  return out;
}

}  // namespace ironq
