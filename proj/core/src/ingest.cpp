#include "ot/ingest.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>

namespace ot {

namespace {

std::string trim(std::string s) {
  auto not_space = [](unsigned char c) { return !std::isspace(c); };
  s.erase(s.begin(), std::find_if(s.begin(), s.end(), not_space));
  s.erase(std::find_if(s.rbegin(), s.rend(), not_space).base(), s.end());
  return s;
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::stringstream ss(line);
  while (std::getline(ss, field, ',')) fields.push_back(trim(field));
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  return fields;
}

std::vector<std::string> read_lines(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw IoError("cannot open '" + path + "' for reading");
  }
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(line);
  }
  if (!lines.empty() && lines[0].size() >= 3 && lines[0].compare(0, 3, "\xEF\xBB\xBF") == 0) {
    lines[0].erase(0, 3);  // UTF-8 BOM
  }
  return lines;
}

bool parse_int(const std::string& s, long long& out) {
  const char* begin = s.data();
  const char* end = begin + s.size();
  auto [ptr, ec] = std::from_chars(begin, end, out);
  return ec == std::errc() && ptr == end && !s.empty();
}

bool is_missing_code(const std::string& value, const std::vector<std::string>& codes) {
  return std::find(codes.begin(), codes.end(), value) != codes.end();
}

ObservedSample ingest_long(const std::vector<std::string>& lines, const DatasetSpec& spec) {
  if (spec.k < 2) {
    throw ParseError("long format requires the category count (K >= 2)");
  }
  auto header = split_csv_line(lines[0]);
  auto value_it = std::find(header.begin(), header.end(), "value");
  if (value_it == header.end()) {
    throw ParseError("row 1: header has no 'value' column");
  }
  auto value_col = static_cast<size_t>(value_it - header.begin());

  std::vector<std::int64_t> counts(spec.k, 0);
  std::int64_t missing = 0;
  bool any = false;
  for (size_t row = 1; row < lines.size(); ++row) {
    if (trim(lines[row]).empty()) continue;
    auto fields = split_csv_line(lines[row]);
    if (value_col >= fields.size()) {
      throw ParseError("row " + std::to_string(row + 1) + ": missing column " +
                       std::to_string(value_col + 1) + " ('value')");
    }
    const std::string& cell = fields[value_col];
    any = true;
    if (is_missing_code(cell, spec.missing_codes)) {
      ++missing;
      continue;
    }
    long long category = 0;
    if (!parse_int(cell, category)) {
      throw ParseError("row " + std::to_string(row + 1) + ", column " +
                       std::to_string(value_col + 1) + ": '" + cell +
                       "' is neither a category nor a missing code");
    }
    if (category < 1 || category > spec.k) {
      throw OutOfRangeCategoryError("row " + std::to_string(row + 1) + ": category " +
                                    std::to_string(category) + " outside 1.." +
                                    std::to_string(spec.k));
    }
    ++counts[category - 1];
  }
  if (!any) {
    throw EmptyFileError("no data rows");
  }
  return ObservedSample::from_counts(std::move(counts), missing);
}

ObservedSample ingest_counts(const std::vector<std::string>& lines, const DatasetSpec& spec) {
  auto header = split_csv_line(lines[0]);
  if (header.size() < 2 || header[0] != "category" || header[1] != "count") {
    throw ParseError("row 1: expected header 'category,count'");
  }

  struct Row {
    long long category;  // 0 stands for the missing row
    long long count;
  };
  std::vector<Row> rows;
  long long max_category = 0;
  for (size_t row = 1; row < lines.size(); ++row) {
    if (trim(lines[row]).empty()) continue;
    auto fields = split_csv_line(lines[row]);
    if (fields.size() < 2) {
      throw ParseError("row " + std::to_string(row + 1) + ": expected 'category,count'");
    }
    long long count = 0;
    if (!parse_int(fields[1], count) || count < 0) {
      throw ParseError("row " + std::to_string(row + 1) + ", column 2: '" + fields[1] +
                       "' is not a nonnegative count");
    }
    if (fields[0] == "missing" || is_missing_code(fields[0], spec.missing_codes)) {
      rows.push_back({0, count});
      continue;
    }
    long long category = 0;
    if (!parse_int(fields[0], category)) {
      throw ParseError("row " + std::to_string(row + 1) + ", column 1: '" + fields[0] +
                       "' is neither a category nor 'missing'");
    }
    if (category < 1) {
      throw OutOfRangeCategoryError("row " + std::to_string(row + 1) + ": category " +
                                    std::to_string(category) + " must be >= 1");
    }
    max_category = std::max(max_category, category);
    rows.push_back({category, count});
  }
  if (rows.empty()) {
    throw EmptyFileError("no data rows");
  }

  long long k = spec.k > 0 ? spec.k : max_category;
  if (k < 2) {
    throw ParseError("fewer than 2 categories present; pass the category count explicitly");
  }
  if (max_category > k) {
    throw OutOfRangeCategoryError("category " + std::to_string(max_category) + " outside 1.." +
                                  std::to_string(k));
  }
  std::vector<std::int64_t> counts(k, 0);
  std::int64_t missing = 0;
  std::vector<bool> seen(k + 1, false);
  for (const Row& r : rows) {
    if (seen[r.category]) {
      throw ParseError(r.category == 0
                           ? std::string("duplicate 'missing' row")
                           : "duplicate row for category " + std::to_string(r.category));
    }
    seen[r.category] = true;
    if (r.category == 0) {
      missing = r.count;
    } else {
      counts[r.category - 1] = r.count;
    }
  }
  return ObservedSample::from_counts(std::move(counts), missing);
}

}  // namespace

ObservedSample ingest(const DatasetSpec& spec) {
  auto lines = read_lines(spec.path);
  // Drop fully empty trailing content before the emptiness check.
  while (!lines.empty() && trim(lines.back()).empty()) lines.pop_back();
  if (lines.empty()) {
    throw EmptyFileError("'" + spec.path + "' is empty");
  }

  DatasetFormat format = spec.format;
  if (format == DatasetFormat::Auto) {
    auto header = split_csv_line(lines[0]);
    if (std::find(header.begin(), header.end(), "value") != header.end()) {
      format = DatasetFormat::Long;
    } else if (header.size() >= 2 && header[0] == "category" && header[1] == "count") {
      format = DatasetFormat::Counts;
    } else {
      throw ParseError("row 1: header matches neither 'value' (long) nor 'category,count'");
    }
  }
  return format == DatasetFormat::Long ? ingest_long(lines, spec) : ingest_counts(lines, spec);
}

void write_counts_csv(const ObservedSample& s, std::ostream& out) {
  out << "category,count\n";
  for (int k = 0; k < s.categories(); ++k) {
    out << (k + 1) << "," << s.counts()[k] << "\n";
  }
  out << "missing," << s.missing() << "\n";
}

std::string counts_csv(const ObservedSample& s) {
  std::ostringstream out;
  write_counts_csv(s, out);
  return out.str();
}

}  // namespace ot
