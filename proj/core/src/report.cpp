#include "ot/report.hpp"

#include <filesystem>
#include <fstream>

#include <json.hpp>

#include "ot/transport.hpp"
#include "ot/version.hpp"

namespace ot {

namespace {

using nlohmann::json;

constexpr double kFlowEps = 1e-9;

json to_json(const Interval& iv) { return json{{"lo", iv.lo}, {"hi", iv.hi}}; }

json to_json(const std::vector<Interval>& intervals) {
  json arr = json::array();
  for (const auto& iv : intervals) arr.push_back(to_json(iv));
  return arr;
}

json matrix_json(const Matrix& m) {
  json rows = json::array();
  for (int i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (int j = 0; j < m.cols(); ++j) row.push_back(m.at(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

json cell_bounds_json(const CellBoundsMatrix& b) {
  int k = b.categories();
  json lower = json::array(), upper = json::array();
  for (int i = 0; i < k; ++i) {
    json lo_row = json::array(), hi_row = json::array();
    for (int j = 0; j < k; ++j) {
      lo_row.push_back(b.at(i, j).lo);
      hi_row.push_back(b.at(i, j).hi);
    }
    lower.push_back(std::move(lo_row));
    upper.push_back(std::move(hi_row));
  }
  return json{{"cell_lower", std::move(lower)}, {"cell_upper", std::move(upper)}};
}

json sample_json(const ObservedSample& s) {
  json out{{"counts", s.counts()},
           {"missing", s.missing()},
           {"n", s.n()},
           {"response_rate", s.response_rate()}};
  if (s.observed() > 0) {
    out["observed_distribution"] = s.observed_distribution().probs();
  } else {
    out["observed_distribution"] = nullptr;
  }
  return out;
}

json dataset_echo_json(const DatasetEcho& d) {
  return json{{"path", d.path},
              {"format", d.format},
              {"k", d.k},
              {"missing_codes", d.missing_codes}};
}

json box_json(const MarginalBox& b) {
  return json{{"lower", b.lower()}, {"upper", b.upper()}};
}

json witness_json(const std::pair<OrdinalDistribution, OrdinalDistribution>& w) {
  return json{{"source", w.first.probs()}, {"target", w.second.probs()}};
}

// Cells whose bounds force or forbid a flow, stated per the endpoint's
// interpretation: a strictly positive lower bound means every configuration
// attaining the endpoint moves mass along that transition; an upper bound of
// zero means none does.
json endpoint_json(const EndpointCouplingBounds& e) {
  int k = e.bounds.categories();
  const char* attaining = e.endpoint == Endpoint::Lower
                              ? "every minimal-mobility configuration"
                              : "every configuration attaining the upper endpoint";
  const char* none = e.endpoint == Endpoint::Lower
                         ? "no minimal-mobility configuration"
                         : "no configuration attaining the upper endpoint";
  json required = json::array(), excluded = json::array(), statements = json::array();
  for (int i = 0; i < k; ++i) {
    for (int j = 0; j < k; ++j) {
      if (i == j) continue;
      const Interval& cell = e.bounds.at(i, j);
      if (cell.lo > kFlowEps) {
        required.push_back(json{{"from", i + 1}, {"to", j + 1}, {"at_least", cell.lo}});
        statements.push_back(std::string(attaining) + " must move at least " +
                             std::to_string(cell.lo) + " from category " + std::to_string(i + 1) +
                             " to category " + std::to_string(j + 1));
      } else if (cell.hi <= kFlowEps) {
        excluded.push_back(json{{"from", i + 1}, {"to", j + 1}});
        statements.push_back(std::string(none) + " moves mass from category " +
                             std::to_string(i + 1) + " to category " + std::to_string(j + 1));
      }
    }
  }
  json out = cell_bounds_json(e.bounds);
  out["endpoint_value"] = e.endpoint_value;
  out["representative"] = matrix_json(e.representative.mass());
  out["representative_cost"] = transport_cost(e.representative);
  out["required_flows"] = std::move(required);
  out["excluded_flows"] = std::move(excluded);
  out["statements"] = std::move(statements);
  return out;
}

json inference_json(const InferenceReport& inf, double alpha, int replications, int k) {
  json log = json::array();
  for (const auto& [lo, up] : inf.replication_log) log.push_back(json::array({lo, up}));
  json retries = json::array();
  for (const auto& [rep, attempts] : inf.retry_log) {
    retries.push_back(json{{"replication", rep}, {"attempts", attempts}});
  }
  return json{
      {"alpha", alpha},
      {"replications", replications},
      {"ci_d", to_json(inf.ci_d)},
      {"normalized_ci_d",
       json{{"lo", normalized_discrepancy(inf.ci_d.lo, k)},
            {"hi", normalized_discrepancy(inf.ci_d.hi, k)}}},
      {"cell_cis", json{{"lower", cell_bounds_json(inf.cell_cis_lower)},
                        {"upper", cell_bounds_json(inf.cell_cis_upper)}}},
      {"simultaneous_cis", json{{"lower", cell_bounds_json(inf.simultaneous_cis_lower)},
                                {"upper", cell_bounds_json(inf.simultaneous_cis_upper)}}},
      {"replication_log", std::move(log)},
      {"retries", std::move(retries)},
  };
}

}  // namespace

Report build_report(const ReportInputs& inputs, const ObservedSample& source,
                    const ObservedSample& target) {
  if (source.categories() != target.categories()) {
    throw DimensionMismatchError("samples have different category counts");
  }
  int k = source.categories();

  MarginalBox box_source = inputs.p_override ? identified_set(source, *inputs.p_override)
                                             : identified_set(source);
  MarginalBox box_target = inputs.q_override ? identified_set(target, *inputs.q_override)
                                             : identified_set(target);
  std::vector<Interval> cdf_source = cdf_bounds(box_source);
  std::vector<Interval> cdf_target = cdf_bounds(box_target);
  IdentifiedInterval interval = discrepancy_endpoints(box_source, box_target);
  EndpointCouplingBounds lower =
      endpoint_coupling_bounds(box_source, box_target, Endpoint::Lower, interval);
  EndpointCouplingBounds upper =
      endpoint_coupling_bounds(box_source, box_target, Endpoint::Upper, interval);

  std::optional<MaxMobilitySection> max_section;
  std::optional<CellBoundsMatrix> frechet;
  if (source.observed() > 0 && target.observed() > 0) {
    OrdinalDistribution mu = source.observed_distribution();
    OrdinalDistribution nu = target.observed_distribution();
    auto [value, coupling] = max_mobility(mu, nu);
    max_section = MaxMobilitySection{value, normalized_discrepancy(value, k),
                                     std::move(coupling)};
    frechet = frechet_cell_bounds(mu, nu);
  }

  std::optional<InferenceReport> inference;
  if (inputs.replications >= 1) {
    BootstrapConfig cfg{inputs.replications, inputs.alpha, inputs.seed};
    ResponseOverrides overrides{inputs.p_override, inputs.q_override};
    inference = run_inference(source, target, cfg, overrides);
  }

  return Report{inputs,
                source,
                target,
                std::move(box_source),
                std::move(box_target),
                std::move(cdf_source),
                std::move(cdf_target),
                std::move(interval),
                std::move(lower),
                std::move(upper),
                std::move(max_section),
                std::move(frechet),
                std::move(inference),
                {}};
}

std::string report_json(const Report& report) {
  int k = report.source.categories();
  json doc;
  doc["schema_version"] = 1;
  doc["tool"] = json{{"name", "ordinal-transport"}, {"version", kVersion}};
  doc["seed"] = report.inputs.seed;
  doc["inputs"] = json{
      {"source", dataset_echo_json(report.inputs.source)},
      {"target", dataset_echo_json(report.inputs.target)},
      {"alpha", report.inputs.alpha},
      {"replications", report.inputs.replications},
      {"p_override", report.inputs.p_override ? json(*report.inputs.p_override) : json(nullptr)},
      {"q_override", report.inputs.q_override ? json(*report.inputs.q_override) : json(nullptr)},
  };
  doc["samples"] = json{{"source", sample_json(report.source)},
                        {"target", sample_json(report.target)}};
  doc["identified_sets"] = json{{"source", box_json(report.box_source)},
                                {"target", box_json(report.box_target)}};
  doc["cdf_bounds"] = json{{"source", to_json(report.cdf_source)},
                           {"target", to_json(report.cdf_target)}};
  doc["discrepancy_interval"] = json{
      {"d_low", report.interval.d_low},
      {"d_up", report.interval.d_up},
      {"normalized_d_low", normalized_discrepancy(report.interval.d_low, k)},
      {"normalized_d_up", normalized_discrepancy(report.interval.d_up, k)},
      {"witness_low", witness_json(report.interval.witness_low)},
      {"witness_up", witness_json(report.interval.witness_up)},
      // With identical feasible marginals no reallocation is required, and
      // endpoint couplings stop restricting the transition structure.
      {"degenerate_lower_endpoint", report.interval.d_low <= kFlowEps},
  };
  doc["endpoint_couplings"] = json{{"lower", endpoint_json(report.lower)},
                                   {"upper", endpoint_json(report.upper)}};
  if (report.max_mobility_section) {
    doc["max_mobility"] = json{{"value", report.max_mobility_section->value},
                               {"normalized_value", report.max_mobility_section->normalized_value},
                               {"coupling", matrix_json(report.max_mobility_section->coupling.mass())}};
  } else {
    doc["max_mobility"] = nullptr;
  }
  if (report.frechet) {
    doc["frechet_bounds"] = cell_bounds_json(*report.frechet);
  } else {
    doc["frechet_bounds"] = nullptr;
  }
  if (report.inference) {
    doc["inference"] =
        inference_json(*report.inference, report.inputs.alpha, report.inputs.replications, k);
  } else {
    doc["inference"] = nullptr;
  }
  doc["figures"] = report.figures;
  return doc.dump(2) + "\n";
}

void write_report_json(const Report& report, const std::string& path) {
  std::string content = report_json(report);
  std::filesystem::path target(path);
  std::error_code ec;
  if (target.has_parent_path()) {
    std::filesystem::create_directories(target.parent_path(), ec);
    if (ec) throw IoError("cannot create directory '" + target.parent_path().string() + "'");
  }
  std::filesystem::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open '" + tmp.string() + "' for writing");
    out << content;
    if (!out) throw IoError("failed writing '" + tmp.string() + "'");
  }
  std::filesystem::rename(tmp, target, ec);
  if (ec) throw IoError("cannot move '" + tmp.string() + "' into place: " + ec.message());
}

}  // namespace ot
