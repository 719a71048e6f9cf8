// Full-analysis report: every computed object plus an input echo, serialized
// to a versioned snake_case JSON document (schema/report.schema.json in the
// repository describes the layout).

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ot/inference.hpp"
#include "ot/partialid.hpp"
#include "ot/types.hpp"

namespace ot {

struct DatasetEcho {
  std::string path;
  std::string format;  // "long" or "counts"
  int k = 0;
  std::vector<std::string> missing_codes;
};

struct ReportInputs {
  DatasetEcho source;
  DatasetEcho target;
  double alpha = 0.05;
  int replications = 0;  // 0 disables inference
  std::uint64_t seed = 0;
  std::optional<double> p_override;
  std::optional<double> q_override;
};

struct MaxMobilitySection {
  double value;
  double normalized_value;
  Coupling coupling;
};

struct Report {
  ReportInputs inputs;
  ObservedSample source;
  ObservedSample target;
  MarginalBox box_source;
  MarginalBox box_target;
  std::vector<Interval> cdf_source;
  std::vector<Interval> cdf_target;
  IdentifiedInterval interval;
  EndpointCouplingBounds lower;
  EndpointCouplingBounds upper;
  // Point benchmarks on the observed-respondent distributions; absent when a
  // side has no observed units at all.
  std::optional<MaxMobilitySection> max_mobility_section;
  std::optional<CellBoundsMatrix> frechet;
  std::optional<InferenceReport> inference;
  std::vector<std::string> figures;
};

// Runs the whole pipeline (bounds, endpoint couplings, point benchmarks, and
// the bootstrap when inputs.replications >= 1).
Report build_report(const ReportInputs& inputs, const ObservedSample& source,
                    const ObservedSample& target);

std::string report_json(const Report& report);

// Writes atomically (temp file, then rename), creating directories.
void write_report_json(const Report& report, const std::string& path);

}  // namespace ot
