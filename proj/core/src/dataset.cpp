#include "xaitu/dataset.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "xaitu/errors.hpp"

namespace xaitu {

void Dataset::validate() const {
  if (columns.empty()) throw DataError("dataset must have at least one column");
  if (rows.empty()) throw DataError("dataset must have at least one row");
  std::set<std::string> seen(columns.begin(), columns.end());
  if (seen.size() != columns.size())
    throw DataError("dataset column names must be unique");
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != columns.size())
      throw DataError("row " + std::to_string(i + 1) + " has " +
                      std::to_string(rows[i].size()) + " entries, expected " +
                      std::to_string(columns.size()));
    for (std::size_t j = 0; j < rows[i].size(); ++j)
      if (!std::isfinite(rows[i][j]))
        throw DataError("non-finite value at row " + std::to_string(i + 1) +
                        ", column " + columns[j]);
  }
}

std::vector<double> column_means(const Dataset& ds) {
  std::vector<double> mu(static_cast<std::size_t>(ds.n()), 0.0);
  for (const auto& row : ds.rows)
    for (std::size_t j = 0; j < mu.size(); ++j) mu[j] += row[j];
  for (double& m : mu) m /= static_cast<double>(ds.t());
  return mu;
}

std::vector<double> column_stddevs(const Dataset& ds) {
  const auto mu = column_means(ds);
  std::vector<double> var(mu.size(), 0.0);
  for (const auto& row : ds.rows)
    for (std::size_t j = 0; j < mu.size(); ++j) {
      const double d = row[j] - mu[j];
      var[j] += d * d;
    }
  for (double& v : var) v = std::sqrt(v / static_cast<double>(ds.t()));
  return var;
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      fields.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur.push_back(c);
    }
  }
  fields.push_back(cur);
  return fields;
}

std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t");
  return s.substr(b, e - b + 1);
}

double parse_real(const std::string& token, std::size_t line_no,
                  const std::string& col) {
  const std::string t = trim(token);
  if (t.empty())
    throw SchemaError("missing value at line " + std::to_string(line_no) +
                      ", column " + col);
  double out = 0.0;
  const char* first = t.data();
  const char* last = t.data() + t.size();
  auto [ptr, ec] = std::from_chars(first, last, out);
  if (ec != std::errc() || ptr != last)
    throw SchemaError("cannot parse '" + t + "' as a real at line " +
                      std::to_string(line_no) + ", column " + col);
  return out;
}

}  // namespace

Dataset load_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open dataset file: " + path.string());
  Dataset ds;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || (line.size() == 1 && line[0] == '\r')) continue;
    auto fields = split_csv_line(line);
    if (ds.columns.empty()) {
      for (auto& f : fields) ds.columns.push_back(trim(f));
      continue;
    }
    if (fields.size() != ds.columns.size())
      throw SchemaError("line " + std::to_string(line_no) + " has " +
                        std::to_string(fields.size()) + " fields, expected " +
                        std::to_string(ds.columns.size()));
    std::vector<double> row(fields.size());
    for (std::size_t j = 0; j < fields.size(); ++j)
      row[j] = parse_real(fields[j], line_no, ds.columns[j]);
    ds.rows.push_back(std::move(row));
  }
  ds.validate();
  return ds;
}

void save_csv(const Dataset& ds, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write dataset file: " + path.string());
  for (std::size_t j = 0; j < ds.columns.size(); ++j)
    out << (j ? "," : "") << ds.columns[j];
  out << "\n";
  char buf[64];
  for (const auto& row : ds.rows) {
    for (std::size_t j = 0; j < row.size(); ++j) {
      std::snprintf(buf, sizeof buf, "%.17g", row[j]);
      out << (j ? "," : "") << buf;
    }
    out << "\n";
  }
}

}  // namespace xaitu
