// roby: decision-boundary robustness statistics from embedding dumps.
//
//   roby compute   <embeddings> --distance p=2|inf [-o report] [--format json|csv]
//   roby correlate <table.csv>... --targets A,B --against C [--summary]
//   roby rank      <table.csv> --column C [--ascending]
//   roby synth     -o <file> [--classes K --samples n --dims M --separation s --spread σ --seed S]
//   roby validate  <embeddings> [--num-classes K]
//
// Exit codes: 0 success, 2 input or usage error, 1 internal failure.

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "roby/roby.hpp"

namespace {

constexpr int kExitInternal = 1;
constexpr int kExitInput = 2;

struct ComputeArgs {
  std::filesystem::path input;
  std::string distance = "p=2";
  std::optional<std::filesystem::path> output;
  std::string format = "json";
  unsigned threads = std::max(1u, std::thread::hardware_concurrency());
  std::optional<std::size_t> num_classes;
  bool drop_misclassified = false;
};

struct CorrelateArgs {
  std::vector<std::filesystem::path> tables;
  std::vector<std::string> targets;
  std::vector<std::string> against;
  bool summary = false;
  std::optional<std::filesystem::path> output;
  std::string format = "csv";
};

struct RankArgs {
  std::filesystem::path table;
  std::string column;
  bool ascending = false;
  std::optional<std::filesystem::path> output;
};

struct SynthArgs {
  roby::SynthSpec spec;
  std::filesystem::path output;
  std::optional<std::string> format;
};

struct ValidateArgs {
  std::filesystem::path input;
  std::optional<std::size_t> num_classes;
};

int run_compute(const ComputeArgs& a) {
  const auto spec = roby::DistanceSpec::parse(a.distance);
  const auto format = roby::io::parse_report_format(a.format);
  roby::io::LoadOptions opts;
  opts.num_classes = a.num_classes;
  opts.drop_misclassified = a.drop_misclassified;
  const auto ds = roby::io::load_embeddings(a.input, opts);
  const auto report = roby::evaluate(ds, spec, roby::Parallelism{a.threads});
  if (a.output) roby::io::write_report(report, *a.output, format);
  std::cout << "FSA=" << roby::io::format_real(report.fsa) << " FSD=" << roby::io::format_real(report.fsd)
            << " ROBY=" << roby::io::format_real(report.roby) << '\n';
  if (report.warning) std::cerr << "warning: " << *report.warning << '\n';
  return 0;
}

int run_correlate(const CorrelateArgs& a) {
  const auto format = roby::io::parse_report_format(a.format);
  std::vector<roby::ModelMetricsTable> tables;
  for (const auto& p : a.tables) tables.push_back(roby::io::load_metrics_table(p));

  std::vector<roby::CorrelationResult> results;
  for (const auto& t : tables) {
    for (const auto& y : a.against) {
      const auto block = roby::correlation_matrix(t, a.targets, y);
      results.insert(results.end(), block.begin(), block.end());
    }
  }
  if (a.summary) {
    for (const auto& y : a.against)
      for (const auto& x : a.targets) results.push_back(roby::mean_correlation(tables, x, y));
  }

  for (const auto& r : results) {
    std::cout << r.dataset << ' ' << r.column_x << " vs " << r.column_y << " r=" << roby::io::format_real(r.r)
              << " n=" << r.n << '\n';
  }
  if (a.output) roby::io::write_report(results, *a.output, format);
  return 0;
}

int run_rank(const RankArgs& a) {
  const auto table = roby::io::load_metrics_table(a.table);
  const auto order = roby::rank_models(table, a.column, !a.ascending);
  std::string text;
  for (const auto& name : order) text += name + '\n';
  std::cout << text;
  if (a.output) roby::io::write_file(*a.output, text);
  return 0;
}

int run_synth(const SynthArgs& a) {
  const auto ds = roby::generate_blobs(a.spec);
  roby::io::EmbeddingFormat fmt = roby::io::guess_format(a.output);
  if (a.format) {
    if (*a.format == "csv") {
      fmt = roby::io::EmbeddingFormat::Csv;
    } else if (*a.format == "binary") {
      fmt = roby::io::EmbeddingFormat::Binary;
    } else {
      throw roby::Error(roby::ErrorCode::InvalidSpec, "unknown embedding format '" + *a.format + "'");
    }
  }
  roby::io::write_embeddings(ds, a.output, fmt);
  std::cout << "wrote " << ds.size() << " records (K=" << ds.num_classes() << ", M=" << ds.dims() << ") to "
            << a.output.string() << '\n';
  return 0;
}

int run_validate(const ValidateArgs& a) {
  roby::io::LoadOptions opts;
  opts.num_classes = a.num_classes;
  const auto ds = roby::io::load_embeddings(a.input, opts);
  std::cout << "OK " << a.input.string() << ": K=" << ds.num_classes() << " M=" << ds.dims()
            << " N=" << ds.size() << '\n';
  for (std::size_t k = 0; k < ds.num_classes(); ++k) {
    std::cout << "  class " << k << ": " << ds.class_size(k) << '\n';
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Decision-boundary robustness statistics (FSA, FSD, ROBY) from embedding dumps"};
  app.require_subcommand(1);

  ComputeArgs compute;
  auto* c = app.add_subcommand("compute", "Compute FSA/FSD/ROBY for one embedding file");
  c->add_option("input", compute.input, "Embedding file (.csv or binary)")->required();
  c->add_option("--distance", compute.distance, "Minkowski order: p=<real> (p >= 1) or inf")
      ->capture_default_str();
  c->add_option("-o,--output", compute.output, "Report file");
  c->add_option("--format", compute.format, "Report format")->check(CLI::IsMember({"json", "csv"}))
      ->capture_default_str();
  c->add_option("--threads", compute.threads, "Worker threads")
      ->envname("ROBY_THREADS")
      ->check(CLI::PositiveNumber);
  c->add_option("--num-classes", compute.num_classes, "Declared class count K (default: max label + 1)");
  c->add_flag("--drop-misclassified", compute.drop_misclassified,
              "Drop records whose predicted label differs from the CSV truth column");

  CorrelateArgs correlate;
  auto* r = app.add_subcommand("correlate", "Pearson correlation between metric columns of model tables");
  r->add_option("tables", correlate.tables, "Metrics table CSV files, one per dataset")->required();
  r->add_option("--targets", correlate.targets, "Columns to correlate")->required()->delimiter(',');
  r->add_option("--against", correlate.against, "Reference columns (e.g. ASR_INF)")->required()->delimiter(',');
  r->add_flag("--summary", correlate.summary, "Also average r across all tables");
  r->add_option("-o,--output", correlate.output, "Result file");
  r->add_option("--format", correlate.format, "Result format")->check(CLI::IsMember({"json", "csv"}))
      ->capture_default_str();

  RankArgs rank;
  auto* k = app.add_subcommand("rank", "Order models by a metric column");
  k->add_option("table", rank.table, "Metrics table CSV")->required();
  k->add_option("--column", rank.column, "Column to sort by")->required();
  k->add_flag("--ascending", rank.ascending, "Smallest first (default: largest first)");
  k->add_option("-o,--output", rank.output, "Write the ranking here as well");

  SynthArgs synth;
  auto* s = app.add_subcommand("synth", "Write a seeded Gaussian-blob embedding dataset");
  s->add_option("-o,--output", synth.output, "Output file (.csv or binary)")->required();
  s->add_option("--classes", synth.spec.num_classes, "K")->capture_default_str();
  s->add_option("--samples", synth.spec.samples_per_class, "Samples per class")->capture_default_str();
  s->add_option("--dims", synth.spec.dims, "Embedding dimension M")->capture_default_str();
  s->add_option("--separation", synth.spec.separation, "Center separation")->capture_default_str();
  s->add_option("--spread", synth.spec.spread, "Per-coordinate standard deviation")->capture_default_str();
  s->add_option("--seed", synth.spec.seed, "RNG seed")->capture_default_str();
  s->add_option("--format", synth.format, "csv or binary (default: from the extension)");

  ValidateArgs validate;
  auto* v = app.add_subcommand("validate", "Check that an embedding file is ready for metric computation");
  v->add_option("input", validate.input, "Embedding file (.csv or binary)")->required();
  v->add_option("--num-classes", validate.num_classes, "Declared class count K");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitInput;
  }

  try {
    if (*c) return run_compute(compute);
    if (*r) return run_correlate(correlate);
    if (*k) return run_rank(rank);
    if (*s) return run_synth(synth);
    if (*v) return run_validate(validate);
  } catch (const roby::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInput;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return kExitInternal;
  }
  return kExitInternal;
}
