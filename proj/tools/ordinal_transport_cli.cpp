// Command-line front end. Subcommands:
//
//   distance   D and its normalization for fully observed inputs
//   bounds     identified interval for D plus CDF bounds under nonresponse
//   couplings  endpoint-conditioned cell bounds, representatives, heatmaps
//   infer      bootstrap confidence sets
//   report     everything above into one JSON document plus figures
//
// Exit codes: 0 success, 1 data or usage error, 2 internal fault.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "ot/heatmap.hpp"
#include "ot/ingest.hpp"
#include "ot/report.hpp"
#include "ot/transport.hpp"
#include "ot/version.hpp"

namespace {

using nlohmann::json;

struct CommonOptions {
  std::string source_path;
  std::string target_path;
  std::string source_format = "auto";
  std::string target_format = "auto";
  int k = 0;
  std::string missing_codes;
  bool missing_codes_set = false;
  double alpha = 0.05;
  int reps = 499;
  std::uint64_t seed = 0;
  std::optional<double> p_override;
  std::optional<double> q_override;
  std::string out_dir = "out";
  std::string format = "text";
  std::string figures = "none";
};

std::vector<std::string> split_codes(const std::string& joined) {
  std::vector<std::string> codes;
  std::string code;
  std::stringstream ss(joined);
  while (std::getline(ss, code, ',')) codes.push_back(code);
  if (!joined.empty() && joined.back() == ',') codes.emplace_back();
  return codes;
}

ot::DatasetFormat parse_format(const std::string& name) {
  if (name == "long") return ot::DatasetFormat::Long;
  if (name == "counts") return ot::DatasetFormat::Counts;
  return ot::DatasetFormat::Auto;
}

void add_common_options(CLI::App* cmd, CommonOptions& opt, bool with_inference,
                        bool with_figures) {
  cmd->add_option("--source", opt.source_path, "Source (origin) dataset CSV")->required();
  cmd->add_option("--target", opt.target_path, "Target (destination) dataset CSV")->required();
  cmd->add_option("--source-format", opt.source_format, "Source layout")
      ->check(CLI::IsMember({"auto", "long", "counts"}))
      ->capture_default_str();
  cmd->add_option("--target-format", opt.target_format, "Target layout")
      ->check(CLI::IsMember({"auto", "long", "counts"}))
      ->capture_default_str();
  cmd->add_option("--k", opt.k, "Number of ordered categories (required for long files)");
  cmd->add_option("--missing-codes", opt.missing_codes,
                  "Comma-separated values treated as nonresponse (default '*,NA,,98,99')")
      ->each([&opt](const std::string&) { opt.missing_codes_set = true; });
  cmd->add_option("--p-override", opt.p_override,
                  "Known source response probability (otherwise estimated)")
      ->check(CLI::Range(0.0, 1.0));
  cmd->add_option("--q-override", opt.q_override,
                  "Known target response probability (otherwise estimated)")
      ->check(CLI::Range(0.0, 1.0));
  cmd->add_option("--format", opt.format, "Stdout format")
      ->check(CLI::IsMember({"json", "text"}))
      ->capture_default_str();
  cmd->add_option("--out", opt.out_dir, "Output directory for files")->capture_default_str();
  if (with_inference) {
    cmd->add_option("--alpha", opt.alpha, "Bootstrap confidence level is 1 - alpha")
        ->check(CLI::Range(1e-9, 1.0 - 1e-9))
        ->capture_default_str();
    cmd->add_option("--reps", opt.reps, "Bootstrap replications (0 disables inference)")
        ->check(CLI::Range(0, 1000000))
        ->capture_default_str();
    cmd->add_option("--seed", opt.seed, "Seed for all randomness")->capture_default_str();
  }
  if (with_figures) {
    cmd->add_option("--figures", opt.figures, "Figure output mode")
        ->check(CLI::IsMember({"none", "svg", "ascii"}))
        ->capture_default_str();
  }
}

ot::DatasetSpec dataset_spec(const CommonOptions& opt, bool source) {
  ot::DatasetSpec spec;
  spec.path = source ? opt.source_path : opt.target_path;
  spec.format = parse_format(source ? opt.source_format : opt.target_format);
  spec.k = opt.k;
  if (opt.missing_codes_set) spec.missing_codes = split_codes(opt.missing_codes);
  return spec;
}

ot::ReportInputs report_inputs(const CommonOptions& opt, const ot::ObservedSample& source,
                               int reps) {
  auto echo = [&](const ot::DatasetSpec& spec) {
    ot::DatasetEcho e;
    e.path = spec.path;
    e.format = spec.format == ot::DatasetFormat::Long ? "long" : "counts";
    e.k = source.categories();
    e.missing_codes = spec.missing_codes;
    return e;
  };
  ot::DatasetSpec s = dataset_spec(opt, true);
  ot::DatasetSpec t = dataset_spec(opt, false);
  // Echo the resolved layout rather than "auto".
  if (s.format == ot::DatasetFormat::Auto) s.format = ot::DatasetFormat::Counts;
  if (t.format == ot::DatasetFormat::Auto) t.format = ot::DatasetFormat::Counts;
  ot::ReportInputs inputs;
  inputs.source = echo(s);
  inputs.target = echo(t);
  inputs.alpha = opt.alpha;
  inputs.replications = reps;
  inputs.seed = opt.seed;
  inputs.p_override = opt.p_override;
  inputs.q_override = opt.q_override;
  return inputs;
}

std::pair<ot::ObservedSample, ot::ObservedSample> load_samples(const CommonOptions& opt) {
  ot::ObservedSample source = ot::ingest(dataset_spec(opt, true));
  ot::ObservedSample target = ot::ingest(dataset_spec(opt, false));
  if (source.categories() != target.categories()) {
    throw ot::DimensionMismatchError(
        "source and target have different category counts (" +
        std::to_string(source.categories()) + " vs " + std::to_string(target.categories()) +
        "); pass --k to fix a common count");
  }
  return {std::move(source), std::move(target)};
}

std::string fixed(double v, int digits = 6) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.*f", digits, v);
  return buf;
}

void print_matrix(std::ostream& out, const ot::Matrix& m, const std::string& name) {
  out << name << ":\n";
  for (int i = 0; i < m.rows(); ++i) {
    out << " ";
    for (int j = 0; j < m.cols(); ++j) out << " " << fixed(m.at(i, j), 4);
    out << "\n";
  }
}

void print_cell_bounds(std::ostream& out, const ot::CellBoundsMatrix& b, const std::string& name) {
  out << name << " (lower bound .. upper bound per cell):\n";
  for (int i = 0; i < b.categories(); ++i) {
    out << " ";
    for (int j = 0; j < b.categories(); ++j) {
      out << " " << fixed(b.at(i, j).lo, 4) << ".." << fixed(b.at(i, j).hi, 4);
    }
    out << "\n";
  }
}

// Emits the endpoint representative heatmaps and records their relative
// paths in the report.
void emit_figures(ot::Report& report, const CommonOptions& opt) {
  if (opt.figures == "none") return;
  ot::HeatmapMode mode = opt.figures == "svg" ? ot::HeatmapMode::Svg : ot::HeatmapMode::Ascii;
  const char* ext = opt.figures == "svg" ? "svg" : "txt";
  std::filesystem::path dir = std::filesystem::path(opt.out_dir) / "figures";
  struct Item {
    const ot::Matrix& matrix;
    std::string title;
    std::string file;
  };
  std::vector<Item> items = {
      {report.lower.representative.mass(),
       "lower-endpoint coupling (cost " + fixed(report.interval.d_low, 3) + ")",
       std::string("representative_lower.") + ext},
      {report.upper.representative.mass(),
       "upper-endpoint coupling (cost " + fixed(report.interval.d_up, 3) + ")",
       std::string("representative_upper.") + ext},
  };
  for (const auto& item : items) {
    ot::emit_heatmap(item.matrix, item.title, (dir / item.file).string(), mode);
    report.figures.push_back((std::filesystem::path("figures") / item.file).string());
  }
}

json full_json(const ot::Report& report) { return json::parse(ot::report_json(report)); }

int cmd_distance(const CommonOptions& opt) {
  auto [source, target] = load_samples(opt);
  if (source.missing() > 0 || target.missing() > 0) {
    throw ot::DataError(
        "inputs carry nonresponse, so D is not point-identified; use the bounds subcommand");
  }
  ot::OrdinalDistribution mu = source.observed_distribution();
  ot::OrdinalDistribution nu = target.observed_distribution();
  double d = ot::discrepancy(mu, nu);
  double normalized = ot::normalized_discrepancy(d, mu.categories());
  if (opt.format == "json") {
    json out{{"d", d}, {"normalized_d", normalized}, {"k", mu.categories()}};
    std::cout << out.dump(2) << "\n";
  } else {
    std::cout << "discrepancy D = " << fixed(d) << "\n";
    std::cout << "normalized by the maximum (K-1 = " << (mu.categories() - 1)
              << "): " << fixed(normalized) << "\n";
  }
  return 0;
}

int cmd_bounds(const CommonOptions& opt) {
  auto [source, target] = load_samples(opt);
  ot::Report report = ot::build_report(report_inputs(opt, source, 0), source, target);
  if (opt.format == "json") {
    json doc = full_json(report);
    json out{{"discrepancy_interval", doc["discrepancy_interval"]},
             {"identified_sets", doc["identified_sets"]},
             {"cdf_bounds", doc["cdf_bounds"]}};
    std::cout << out.dump(2) << "\n";
    return 0;
  }
  std::cout << "identified interval for D: [" << fixed(report.interval.d_low) << ", "
            << fixed(report.interval.d_up) << "]\n";
  std::cout << "normalized: ["
            << fixed(ot::normalized_discrepancy(report.interval.d_low, source.categories()))
            << ", "
            << fixed(ot::normalized_discrepancy(report.interval.d_up, source.categories()))
            << "]\n";
  auto print_cdf = [&](const std::vector<ot::Interval>& intervals, const char* name) {
    std::cout << "CDF bounds, " << name << ":";
    for (size_t t = 0; t < intervals.size(); ++t) {
      std::cout << "  k<=" << (t + 1) << ": [" << fixed(intervals[t].lo, 4) << ", "
                << fixed(intervals[t].hi, 4) << "]";
    }
    std::cout << "\n";
  };
  print_cdf(report.cdf_source, "source");
  print_cdf(report.cdf_target, "target");
  return 0;
}

int cmd_couplings(CommonOptions& opt) {
  auto [source, target] = load_samples(opt);
  ot::Report report = ot::build_report(report_inputs(opt, source, 0), source, target);
  emit_figures(report, opt);
  if (opt.format == "json") {
    json doc = full_json(report);
    json out{{"discrepancy_interval", doc["discrepancy_interval"]},
             {"endpoint_couplings", doc["endpoint_couplings"]},
             {"figures", doc["figures"]}};
    std::cout << out.dump(2) << "\n";
    return 0;
  }
  for (const auto* side : {&report.lower, &report.upper}) {
    const char* name = side->endpoint == ot::Endpoint::Lower ? "lower" : "upper";
    std::cout << name << " endpoint, value " << fixed(side->endpoint_value) << "\n";
    print_cell_bounds(std::cout, side->bounds, std::string("  cell bounds (") + name + ")");
    print_matrix(std::cout, side->representative.mass(),
                 std::string("  representative coupling (") + name + ")");
  }
  for (const auto& f : report.figures) {
    std::cout << "figure: " << (std::filesystem::path(opt.out_dir) / f).string() << "\n";
  }
  return 0;
}

int cmd_infer(const CommonOptions& opt) {
  auto [source, target] = load_samples(opt);
  if (opt.reps < 1) {
    throw ot::DataError("infer requires --reps >= 1");
  }
  ot::Report report = ot::build_report(report_inputs(opt, source, opt.reps), source, target);
  if (opt.format == "json") {
    json doc = full_json(report);
    json out{{"discrepancy_interval", doc["discrepancy_interval"]},
             {"inference", doc["inference"]},
             {"seed", doc["seed"]}};
    std::cout << out.dump(2) << "\n";
    return 0;
  }
  const ot::InferenceReport& inf = *report.inference;
  std::cout << "plug-in interval: [" << fixed(report.interval.d_low) << ", "
            << fixed(report.interval.d_up) << "]\n";
  std::cout << "confidence set for the interval (alpha " << fixed(opt.alpha, 3) << ", B "
            << opt.reps << "): [" << fixed(inf.ci_d.lo) << ", " << fixed(inf.ci_d.hi) << "]\n";
  print_cell_bounds(std::cout, inf.cell_cis_lower, "per-cell CIs, lower endpoint");
  print_cell_bounds(std::cout, inf.cell_cis_upper, "per-cell CIs, upper endpoint");
  print_cell_bounds(std::cout, inf.simultaneous_cis_lower, "simultaneous CIs, lower endpoint");
  print_cell_bounds(std::cout, inf.simultaneous_cis_upper, "simultaneous CIs, upper endpoint");
  return 0;
}

int cmd_report(CommonOptions& opt) {
  auto [source, target] = load_samples(opt);
  ot::Report report = ot::build_report(report_inputs(opt, source, opt.reps), source, target);
  emit_figures(report, opt);
  std::filesystem::path path = std::filesystem::path(opt.out_dir) / "report.json";
  ot::write_report_json(report, path.string());
  if (opt.format == "json") {
    std::cout << json{{"report", path.string()}, {"figures", report.figures}}.dump(2) << "\n";
  } else {
    std::cout << "report written to " << path.string() << "\n";
    for (const auto& f : report.figures) {
      std::cout << "figure: " << (std::filesystem::path(opt.out_dir) / f).string() << "\n";
    }
    std::cout << "interval for D: [" << fixed(report.interval.d_low) << ", "
              << fixed(report.interval.d_up) << "]\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Distributional change between ordinal distributions: transport bounds under "
               "nonresponse with bootstrap inference"};
  app.set_version_flag("--version", std::string("ordinal-transport ") + ot::kVersion);
  app.require_subcommand(1);

  CommonOptions opt;
  CLI::App* distance = app.add_subcommand("distance", "Discrepancy for fully observed inputs");
  add_common_options(distance, opt, false, false);
  CLI::App* bounds = app.add_subcommand("bounds", "Identified interval and CDF bounds");
  add_common_options(bounds, opt, false, false);
  CLI::App* couplings =
      app.add_subcommand("couplings", "Endpoint-conditioned cell bounds and representatives");
  add_common_options(couplings, opt, false, true);
  CLI::App* infer = app.add_subcommand("infer", "Bootstrap confidence sets");
  add_common_options(infer, opt, true, false);
  CLI::App* report = app.add_subcommand("report", "Full JSON report plus figures");
  add_common_options(report, opt, true, true);
  report->get_option("--figures")->default_str("svg");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (distance->parsed()) return cmd_distance(opt);
    if (bounds->parsed()) return cmd_bounds(opt);
    if (couplings->parsed()) return cmd_couplings(opt);
    if (infer->parsed()) return cmd_infer(opt);
    if (report->parsed()) {
      if (report->get_option("--figures")->count() == 0) opt.figures = "svg";
      return cmd_report(opt);
    }
    return 1;
  } catch (const ot::InternalError& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 2;
  } catch (const ot::DataError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 2;
  }
}
