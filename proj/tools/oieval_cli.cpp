// oieval: evaluate named-entity extraction against IOB2 ground truth.
//
//   oieval evaluate    --labels DIR --predictions DIR [--format json] ...
//   oieval shuffle     --labels DIR --predictions DIR --output-dir OUT [--seed N]
//   oieval by-category --labels DIR --predictions DIR [--categories a,b]
//   oieval correlate   --labels DIR --predictions DIR
//
// Exit codes: 0 success, 2 input/config error, 3 data-insufficiency error.
// Options also read OIEVAL_* environment variables; flags take precedence.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "oieval/oieval.hpp"

namespace fs = std::filesystem;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInput = 2;
constexpr int kExitData = 3;
constexpr std::uint64_t kDefaultSeed = 42;

struct CommonOptions {
  std::string labels;
  std::string predictions;
  std::string mode = "dir";
  std::string format = "markdown";
  std::string output;
  bool nfc = false;
};

void add_common(CLI::App* cmd, CommonOptions& o, bool with_format = true) {
  cmd->add_option("-l,--labels", o.labels, "Reference IOB2 directory (or file in single mode)")
      ->required()
      ->check(CLI::ExistingPath);
  cmd->add_option("-p,--predictions", o.predictions, "Predicted IOB2 directory (or file)")
      ->required()
      ->check(CLI::ExistingPath);
  cmd->add_option("--mode", o.mode, "Input layout: dir (one file per document) or single")
      ->check(CLI::IsMember({"dir", "single"}))
      ->envname("OIEVAL_MODE")
      ->capture_default_str();
  cmd->add_flag("--nfc", o.nfc, "Apply Unicode NFC to all tokens")->envname("OIEVAL_NFC");
  if (with_format) {
    cmd->add_option("-f,--format", o.format, "Output format: markdown, csv or json")
        ->check(CLI::IsMember({"markdown", "csv", "json"}))
        ->envname("OIEVAL_FORMAT")
        ->capture_default_str();
    cmd->add_option("-o,--output", o.output, "Write the report to this file instead of stdout");
  }
}

oieval::OutputFormat parse_format(const std::string& f) {
  if (f == "json") return oieval::OutputFormat::Json;
  if (f == "csv") return oieval::OutputFormat::Csv;
  return oieval::OutputFormat::Markdown;
}

oieval::Corpus load(const CommonOptions& o) {
  const auto mode = o.mode == "single" ? oieval::InputMode::SingleFile : oieval::InputMode::Directory;
  return oieval::load_corpus(o.labels, o.predictions, mode, oieval::LoadOptions{o.nfc});
}

void emit(const CommonOptions& o, const std::string& text) {
  if (o.output.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(o.output, std::ios::binary);
  if (!out) throw oieval::LoadError("cannot write '" + o.output + "'");
  out << text;
  if (!out) throw oieval::LoadError("failed writing '" + o.output + "'");
}

void write_text(const fs::path& path, const std::string& text) {
  std::error_code ec;
  fs::create_directories(path.parent_path(), ec);
  if (ec) throw oieval::LoadError("cannot create '" + path.parent_path().string() + "': " + ec.message());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw oieval::LoadError("cannot write '" + path.string() + "'");
  out << text;
  if (!text.empty()) out << '\n';
  if (!out) throw oieval::LoadError("failed writing '" + path.string() + "'");
}

void validate_thresholds(const std::vector<double>& thresholds) {
  if (thresholds.empty()) throw std::invalid_argument("at least one --threshold is required");
  for (double t : thresholds)
    if (!(t >= 0.0 && t <= 1.0))
      throw std::invalid_argument("--threshold values must lie in [0, 1], got " + oieval::format_full(t));
}

void validate_metrics(const std::vector<std::string>& metrics) {
  for (const std::string& m : metrics)
    if (!oieval::is_metric_name(m)) throw std::invalid_argument("unknown metric '" + m + "'");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Reading-order-independent evaluation of named-entity extraction"};
  app.set_version_flag("--version", std::string(oieval::kToolVersion));
  app.require_subcommand(1);

  // evaluate
  CommonOptions eval_opts;
  std::vector<double> thresholds{0.30};
  std::vector<std::string> metrics = oieval::all_metric_names();
  bool per_document = false;
  bool with_ci = false;
  std::size_t resamples = 1000;
  std::optional<std::uint64_t> eval_seed;
  unsigned threads = 0;
  CLI::App* evaluate = app.add_subcommand("evaluate", "Compute all metrics for a corpus");
  add_common(evaluate, eval_opts);
  evaluate->add_option("-t,--threshold", thresholds, "Nerval CER threshold(s) in [0,1]; several values sweep")
      ->delimiter(',')
      ->envname("OIEVAL_THRESHOLD");
  evaluate->add_option("-m,--metrics", metrics, "Metrics to report (comma separated)")->delimiter(',');
  evaluate->add_flag("--per-document", per_document, "Include per-document scores");
  evaluate->add_flag("--ci", with_ci, "Bootstrap 95% confidence intervals");
  evaluate->add_option("--resamples", resamples, "Bootstrap resamples")
      ->check(CLI::PositiveNumber)
      ->envname("OIEVAL_RESAMPLES")
      ->capture_default_str();
  evaluate->add_option("--seed", eval_seed, "Bootstrap seed")->envname("OIEVAL_SEED");
  evaluate->add_option("-j,--threads", threads, "Worker threads (0: all cores)")->envname("OIEVAL_THREADS");

  // shuffle
  CommonOptions shuffle_opts;
  std::string output_dir;
  std::optional<std::uint64_t> shuffle_seed;
  std::string scope = "hypothesis";
  CLI::App* shuffle = app.add_subcommand("shuffle", "Shuffle entity blocks and write IOB2 files");
  add_common(shuffle, shuffle_opts, false);
  shuffle->add_option("-d,--output-dir", output_dir, "Directory receiving the shuffled files")->required();
  shuffle->add_option("--seed", shuffle_seed, "Shuffle seed")->envname("OIEVAL_SEED");
  shuffle->add_option("--scope", scope, "Which side to shuffle: hypothesis or both")
      ->check(CLI::IsMember({"hypothesis", "both"}))
      ->capture_default_str();

  // by-category
  CommonOptions cat_opts;
  std::vector<std::string> categories;
  CLI::App* by_category = app.add_subcommand("by-category", "Per-category CER/WER");
  add_common(by_category, cat_opts);
  by_category->add_option("-c,--categories", categories, "Only report these categories")->delimiter(',');

  // correlate
  CommonOptions corr_opts;
  double corr_threshold = 0.30;
  std::vector<std::string> corr_metrics = oieval::all_metric_names();
  CLI::App* correlate = app.add_subcommand("correlate", "Pearson and Spearman correlation between metrics");
  add_common(correlate, corr_opts);
  correlate->add_option("-t,--threshold", corr_threshold, "Nerval CER threshold in [0,1]")
      ->envname("OIEVAL_THRESHOLD")
      ->capture_default_str();
  correlate->add_option("-m,--metrics", corr_metrics, "Metrics to correlate")->delimiter(',');

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInput;
  }

  try {
    if (*evaluate) {
      validate_thresholds(thresholds);
      validate_metrics(metrics);
      const oieval::Corpus corpus = load(eval_opts);
      oieval::ReportOptions options;
      options.metrics = metrics;
      options.evaluation.thresholds = thresholds;
      options.evaluation.threads = threads;
      options.per_document = per_document;
      if (with_ci) {
        if (!eval_seed) std::cerr << "oieval: using default seed " << kDefaultSeed << '\n';
        options.bootstrap = oieval::BootstrapConfig{0.95, resamples, eval_seed.value_or(kDefaultSeed)};
      }
      oieval::MetricReport report = oieval::build_report(corpus, options);
      report.mode = eval_opts.mode;
      report.nfc = eval_opts.nfc;
      report.labels = {eval_opts.labels, oieval::input_checksum(eval_opts.labels)};
      report.predictions = {eval_opts.predictions, oieval::input_checksum(eval_opts.predictions)};
      emit(eval_opts, oieval::render(report, parse_format(eval_opts.format)));
    } else if (*shuffle) {
      const std::uint64_t seed = shuffle_seed.value_or(kDefaultSeed);
      if (!shuffle_seed) std::cerr << "oieval: using default seed " << seed << '\n';
      const oieval::Corpus corpus = load(shuffle_opts);
      const oieval::ShuffleConfig cfg{seed, scope == "both" ? oieval::ShuffleScope::Both
                                                            : oieval::ShuffleScope::HypothesisOnly};
      const oieval::Corpus shuffled = oieval::shuffle_corpus(corpus, cfg);
      const fs::path out = output_dir;
      const bool both = cfg.scope == oieval::ShuffleScope::Both;
      if (shuffle_opts.mode == "dir") {
        for (const oieval::DocumentPair& p : shuffled) {
          write_text(out / "predictions" / (p.hypothesis.id + ".bio"), oieval::serialize_iob2(p.hypothesis));
          if (both) write_text(out / "labels" / (p.reference.id + ".bio"), oieval::serialize_iob2(p.reference));
        }
      } else {
        std::vector<oieval::Document> hyps, refs;
        for (const oieval::DocumentPair& p : shuffled) {
          hyps.push_back(p.hypothesis);
          refs.push_back(p.reference);
        }
        write_text(out / "predictions.bio", oieval::serialize_iob2_blocks(hyps));
        if (both) write_text(out / "labels.bio", oieval::serialize_iob2_blocks(refs));
      }
    } else if (*by_category) {
      const oieval::Corpus corpus = load(cat_opts);
      std::vector<std::string> unknown;
      const oieval::CategoryReport report =
          oieval::filter_categories(oieval::per_category_breakdown(corpus), categories, &unknown);
      if (!unknown.empty()) {
        std::string names;
        for (const std::string& u : unknown) names += (names.empty() ? "" : ", ") + u;
        throw std::invalid_argument("unknown category: " + names);
      }
      emit(cat_opts, oieval::render(report, parse_format(cat_opts.format)));
    } else if (*correlate) {
      validate_thresholds({corr_threshold});
      validate_metrics(corr_metrics);
      const oieval::Corpus corpus = load(corr_opts);
      oieval::EvaluationOptions eval;
      eval.thresholds = {corr_threshold};
      const auto docs = oieval::evaluate_documents(corpus, eval);
      const oieval::MetricTable table =
          oieval::per_document_metric_table(std::span<const oieval::DocumentScores>(docs), corr_metrics);
      const std::vector<oieval::CorrelationMatrix> matrices = {
          oieval::correlate(table, oieval::CorrelationKind::Pearson),
          oieval::correlate(table, oieval::CorrelationKind::Spearman)};
      emit(corr_opts, oieval::render(matrices, parse_format(corr_opts.format)));
    }
  } catch (const oieval::InsufficientDataError& e) {
    std::cerr << "oieval: " << e.what() << '\n';
    return kExitData;
  } catch (const std::exception& e) {
    std::cerr << "oieval: " << e.what() << '\n';
    return kExitInput;
  }
  return kExitOk;
}
