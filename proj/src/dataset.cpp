#include "zinc/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "zinc/errors.hpp"

namespace zinc {

Family family_from_string(const std::string& s) {
  if (s == "linear") return Family::linear;
  if (s == "poisson") return Family::poisson;
  if (s == "negbin") return Family::negbin;
  if (s == "zip") return Family::zip;
  if (s == "zinb") return Family::zinb;
  throw ValidationError("unknown family: " + s);
}

std::string to_string(Family f) {
  switch (f) {
    case Family::linear: return "linear";
    case Family::poisson: return "poisson";
    case Family::negbin: return "negbin";
    case Family::zip: return "zip";
    case Family::zinb: return "zinb";
  }
  return "?";
}

bool is_zero_inflated(Family f) { return f == Family::zip || f == Family::zinb; }
bool is_count_family(Family f) { return f != Family::linear; }

bool Dataset::has_metric(const std::string& name) const {
  return std::find(metric_names.begin(), metric_names.end(), name) != metric_names.end();
}

const Vector& Dataset::metric(const std::string& name) const {
  for (std::size_t c = 0; c < metric_names.size(); ++c)
    if (metric_names[c] == name) return metric_columns[c];
  throw UnknownCovariate(name);
}

void ModelSpec::validate(const Dataset& d) const {
  if (!zero_covariates.empty() && !is_zero_inflated(family))
    throw ZeroCovariatesForNonZIFamily();
  std::set<std::string> seen;
  for (const auto& c : count_covariates) {
    if (!d.has_metric(c)) throw UnknownCovariate(c);
    if (!seen.insert(c).second)
      throw ValidationError("duplicate count covariate: " + c);
  }
  seen.clear();
  for (const auto& z : zero_covariates) {
    if (!d.has_metric(z)) throw UnknownCovariate(z);
    if (!seen.insert(z).second)
      throw ValidationError("duplicate zero covariate: " + z);
  }
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string cur;
  for (char ch : line) {
    if (ch == ',') {
      cells.push_back(cur);
      cur.clear();
    } else if (ch != '\r') {
      cur.push_back(ch);
    }
  }
  cells.push_back(cur);
  return cells;
}

std::string trim(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t");
  if (a == std::string::npos) return "";
  std::size_t b = s.find_last_not_of(" \t");
  return s.substr(a, b - a + 1);
}

bool parse_double(const std::string& s, double& out) {
  const std::string t = trim(s);
  if (t.empty()) return false;
  const char* begin = t.data();
  const char* end = begin + t.size();
  auto [ptr, ec] = std::from_chars(begin, end, out);
  if (ec != std::errc() || ptr != end) return false;
  return std::isfinite(out);
}

std::string format_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  (void)ec;
  return std::string(buf, ptr);
}

}  // namespace

Dataset read_csv_stream(std::istream& in, const std::string& origin,
                        const std::vector<std::string>& required) {
  std::string line;
  if (!std::getline(in, line)) throw EmptyFile(origin);
  const std::vector<std::string> header_raw = split_csv_line(line);
  std::vector<std::string> header;
  header.reserve(header_raw.size());
  for (const auto& h : header_raw) header.push_back(trim(h));

  std::set<std::string> names(header.begin(), header.end());
  if (names.size() != header.size())
    throw ValidationError(origin + ": duplicate column names in header");

  long long bugs_col = -1, id_col = -1;
  for (std::size_t c = 0; c < header.size(); ++c) {
    if (header[c] == "bugs") bugs_col = static_cast<long long>(c);
    if (header[c] == "id") id_col = static_cast<long long>(c);
  }
  if (bugs_col < 0) throw MissingColumn("bugs");
  for (const auto& r : required)
    if (r != "bugs" && !names.count(r)) throw MissingColumn(r);

  Dataset d;
  for (std::size_t c = 0; c < header.size(); ++c) {
    if (static_cast<long long>(c) == bugs_col || static_cast<long long>(c) == id_col) continue;
    d.metric_names.push_back(header[c]);
    d.metric_columns.emplace_back();
  }

  std::size_t row = 0;
  while (std::getline(in, line)) {
    if (line.empty() || line == "\r") continue;
    ++row;
    const std::vector<std::string> cells = split_csv_line(line);
    if (cells.size() != header.size())
      throw NonNumericCell(origin + " row " + std::to_string(row) + ": expected " +
                           std::to_string(header.size()) + " cells, got " +
                           std::to_string(cells.size()));
    std::size_t mc = 0;
    for (std::size_t c = 0; c < header.size(); ++c) {
      if (static_cast<long long>(c) == id_col) continue;
      double v;
      if (!parse_double(cells[c], v))
        throw NonNumericCell(origin + " row " + std::to_string(row) + ", column '" +
                             header[c] + "': '" + trim(cells[c]) + "'");
      if (static_cast<long long>(c) == bugs_col) {
        if (v < 0 || v != std::floor(v))
          throw NonIntegerBugs(origin + " row " + std::to_string(row) + ": '" +
                               trim(cells[c]) + "'");
        d.bugs.push_back(static_cast<long long>(v));
      } else {
        d.metric_columns[mc++].push_back(v);
      }
    }
    d.module_id.push_back(id_col >= 0 ? trim(cells[static_cast<std::size_t>(id_col)])
                                      : std::to_string(row));
  }
  if (d.bugs.empty()) throw EmptyFile(origin);
  return d;
}

Dataset load_csv(const std::string& path, const std::vector<std::string>& required) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open file: " + path);
  return read_csv_stream(in, path, required);
}

void write_csv(const Dataset& d, std::ostream& out) {
  out << "id";
  for (const auto& m : d.metric_names) out << ',' << m;
  out << ",bugs\n";
  for (std::size_t j = 0; j < d.n(); ++j) {
    out << d.module_id[j];
    for (const auto& col : d.metric_columns) out << ',' << format_double(col[j]);
    out << ',' << d.bugs[j] << '\n';
  }
}

void write_csv_file(const Dataset& d, const std::string& path) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp);
    if (!out) throw ValidationError("cannot write file: " + tmp);
    write_csv(d, out);
  }
  std::filesystem::rename(tmp, path);
}

DesignMatrices build_design(const Dataset& d, const ModelSpec& spec) {
  spec.validate(d);
  const std::size_t n = d.n();

  DesignMatrices dm;
  dm.y = d.bugs;
  dm.X = Matrix(n, 1 + spec.count_covariates.size(), 0.0);
  dm.x_names.push_back("intercept");
  for (std::size_t j = 0; j < n; ++j) dm.X(j, 0) = 1.0;
  for (std::size_t c = 0; c < spec.count_covariates.size(); ++c) {
    const Vector& col = d.metric(spec.count_covariates[c]);
    dm.x_names.push_back(spec.count_covariates[c]);
    for (std::size_t j = 0; j < n; ++j) dm.X(j, c + 1) = col[j];
  }

  if (is_zero_inflated(spec.family)) {
    Matrix Z(n, 1 + spec.zero_covariates.size(), 0.0);
    dm.z_names.push_back("intercept");
    for (std::size_t j = 0; j < n; ++j) Z(j, 0) = 1.0;
    for (std::size_t c = 0; c < spec.zero_covariates.size(); ++c) {
      const Vector& col = d.metric(spec.zero_covariates[c]);
      dm.z_names.push_back(spec.zero_covariates[c]);
      for (std::size_t j = 0; j < n; ++j) Z(j, c + 1) = col[j];
    }
    dm.Z = std::move(Z);
  }
  return dm;
}

std::vector<HistogramBin> histogram(const std::vector<long long>& y, bool drop_zeros) {
  std::map<long long, std::size_t> counts;
  for (long long v : y) {
    if (v < 0) throw DomainError("histogram expects non-negative integers");
    if (drop_zeros && v == 0) continue;
    ++counts[v];
  }
  std::vector<HistogramBin> bins;
  bins.reserve(counts.size());
  for (const auto& [value, count] : counts) bins.push_back({value, count});
  return bins;
}

}  // namespace zinc
