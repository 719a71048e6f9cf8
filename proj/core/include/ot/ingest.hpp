// CSV ingestion for the two supported layouts, plus the inverse counts
// writer used for round-trips.
//
//   long:    header "value"; one respondent per row, "value" holding a
//            category in 1..K or a configured missing code.
//   counts:  header "category,count"; one row per category plus an optional
//            "missing,<count>" row.
//
// Files are UTF-8, comma-delimited, header row required. A leading BOM and
// trailing CR are tolerated.

#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "ot/types.hpp"

namespace ot {

enum class DatasetFormat { Auto, Long, Counts };

struct DatasetSpec {
  DatasetFormat format = DatasetFormat::Auto;
  std::string path;
  int k = 0;  // required for long; inferred from the rows for counts when 0
  std::vector<std::string> missing_codes = default_missing_codes();

  static std::vector<std::string> default_missing_codes() {
    return {"*", "NA", "", "98", "99"};
  }
};

ObservedSample ingest(const DatasetSpec& spec);

// Counts layout emitted from a sample; ingest() of the result reproduces the
// sample exactly.
void write_counts_csv(const ObservedSample& s, std::ostream& out);
std::string counts_csv(const ObservedSample& s);

}  // namespace ot
