#pragma once

// Machine-readable reports (JSON, CSV, markdown) for evaluations, category
// breakdowns and correlation matrices.

#include <array>
#include <charconv>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include <json.hpp>

#include "oieval/analysis.hpp"
#include "oieval/corpus.hpp"
#include "oieval/evaluate.hpp"
#include "oieval/random.hpp"

namespace oieval {

inline constexpr std::string_view kToolName = "oieval";
inline constexpr std::string_view kToolVersion = "0.1.0";
inline constexpr int kReportSchemaVersion = 1;

enum class OutputFormat { Markdown, Csv, Json };

/// One decimal, ties to even on the exact binary value.
inline std::string format_percent(double value) {
  std::array<char, 64> buf{};
  const auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value,
                                       std::chars_format::fixed, 1);
  if (ec != std::errc{}) return "nan";
  std::string s(buf.data(), end);
  if (s == "-0.0") s = "0.0";
  return s;
}

/// Shortest representation that round-trips.
inline std::string format_full(double value) {
  std::array<char, 64> buf{};
  const auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  if (ec != std::errc{}) return "nan";
  return std::string(buf.data(), end);
}

inline std::string format_threshold(double t) { return format_full(t); }

/// CRC-32 of a file, or of a directory's regular files (sorted by name;
/// each contributes its name, a NUL, its bytes and a NUL).
inline std::string input_checksum(const std::filesystem::path& path) {
  namespace fs = std::filesystem;
  std::string stream;
  if (fs::is_directory(path)) {
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(path))
      if (entry.is_regular_file()) files.push_back(entry.path());
    std::sort(files.begin(), files.end());
    for (const fs::path& f : files) {
      stream += f.filename().string();
      stream += '\0';
      stream += read_file(f);
      stream += '\0';
    }
  } else {
    stream = read_file(path);
  }
  std::array<char, 9> hex{};
  std::snprintf(hex.data(), hex.size(), "%08x", crc32(stream));
  return std::string(hex.data(), 8);
}

// ---------------------------------------------------------------------------
// Evaluation report

struct MetricEntry {
  std::string name;
  std::optional<double> value;  // empty when undefined on this data
  std::optional<ConfidenceInterval> ci;
};

struct ThresholdSweepEntry {
  double threshold = 0.0;
  std::vector<MetricEntry> metrics;
};

struct DocumentRow {
  std::string id;
  std::size_t reference_entities = 0;
  std::size_t hypothesis_entities = 0;
  /// Excluded from per-document tables: no reference entities.
  bool excluded = false;
  std::vector<MetricEntry> metrics;
};

struct InputDescriptor {
  std::string path;
  std::string crc32;
};

struct MetricReport {
  // provenance
  std::string mode;
  std::vector<double> thresholds;
  bool nfc = false;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> resamples;
  InputDescriptor labels;
  InputDescriptor predictions;

  Totals totals;
  std::vector<MetricEntry> metrics;
  std::vector<ThresholdSweepEntry> sweep;
  std::vector<DocumentRow> documents;
  std::vector<std::string> notes;
};

struct ReportOptions {
  std::vector<std::string> metrics = all_metric_names();
  EvaluationOptions evaluation;
  bool per_document = false;
  /// Bootstrap intervals for every corpus metric when set.
  std::optional<BootstrapConfig> bootstrap;
};

namespace detail {

inline std::optional<double> try_metric(const Totals& t, std::string_view name, std::size_t ti) {
  try {
    return metric_value(t, name, ti);
  } catch (const InsufficientDataError&) {
    return std::nullopt;
  }
}

}  // namespace detail

/// Evaluates a corpus and assembles the report. Throws InsufficientDataError
/// when the corpus has no reference entities at all.
inline MetricReport build_report(const Corpus& corpus, const ReportOptions& options) {
  for (const std::string& name : options.metrics)
    if (!is_metric_name(name)) throw std::invalid_argument("unknown metric '" + name + "'");

  const std::vector<DocumentScores> docs = evaluate_documents(corpus, options.evaluation);
  MetricReport report;
  report.thresholds = options.evaluation.thresholds;
  report.totals = sum_totals(docs);
  if (report.totals.reference_entities == 0)
    throw InsufficientDataError("no reference entities in the corpus");
  if (options.bootstrap) {
    report.seed = options.bootstrap->seed;
    report.resamples = options.bootstrap->resamples;
  }

  for (const std::string& name : options.metrics)
    report.metrics.push_back({name, detail::try_metric(report.totals, name, 0), std::nullopt});
  if (options.bootstrap && docs.size() >= 2) {
    const auto intervals = bootstrap_cis(
        std::span<const DocumentScores>(docs),
        [&](std::span<const DocumentScores> sample) {
          const Totals t = sum_totals(sample);
          std::vector<std::optional<double>> values;
          for (const std::string& name : options.metrics) values.push_back(detail::try_metric(t, name, 0));
          return values;
        },
        *options.bootstrap);
    for (std::size_t i = 0; i < intervals.size(); ++i) report.metrics[i].ci = intervals[i];
  }

  if (options.evaluation.thresholds.size() > 1) {
    for (std::size_t ti = 0; ti < options.evaluation.thresholds.size(); ++ti) {
      ThresholdSweepEntry sweep{options.evaluation.thresholds[ti], {}};
      for (const std::string& name : options.metrics)
        if (is_threshold_metric(name))
          sweep.metrics.push_back({name, detail::try_metric(report.totals, name, ti), std::nullopt});
      report.sweep.push_back(std::move(sweep));
    }
  }

  std::size_t excluded = 0;
  if (options.per_document) {
    for (const DocumentScores& d : docs) {
      DocumentRow row{d.id, d.totals.reference_entities, d.totals.hypothesis_entities,
                      d.totals.reference_entities == 0, {}};
      if (row.excluded) ++excluded;
      for (const std::string& name : options.metrics)
        row.metrics.push_back({name, row.excluded ? std::nullopt : detail::try_metric(d.totals, name, 0),
                               std::nullopt});
      report.documents.push_back(std::move(row));
    }
  } else {
    for (const DocumentScores& d : docs)
      if (d.totals.reference_entities == 0) ++excluded;
  }
  if (excluded > 0)
    report.notes.push_back(std::to_string(excluded) +
                           " document(s) without reference entities are excluded from per-document "
                           "scores; their costs still enter corpus totals");
  if (report.totals.hypothesis_repairs + report.totals.reference_repairs > 0)
    report.notes.push_back("stray I- tags opened new entities: " +
                           std::to_string(report.totals.reference_repairs) + " in labels, " +
                           std::to_string(report.totals.hypothesis_repairs) + " in predictions");
  return report;
}

namespace detail {

using ordered_json = nlohmann::ordered_json;

inline ordered_json json_value(const std::optional<double>& v) {
  return v ? ordered_json(*v) : ordered_json(nullptr);
}

inline ordered_json metric_json(const MetricEntry& m) {
  ordered_json j;
  j["name"] = m.name;
  j["value"] = json_value(m.value);
  j["display"] = m.value ? ordered_json(format_percent(*m.value)) : ordered_json(nullptr);
  if (m.ci) {
    j["ci"] = {{"level", m.ci->level},
               {"low", m.ci->low},
               {"high", m.ci->high},
               {"resamples", m.ci->resamples}};
  }
  return j;
}

inline std::string display(const std::optional<double>& v) {
  return v ? format_percent(*v) : "-";
}

inline std::string csv_escape(std::string_view s) {
  if (s.find_first_of(",\"\n\r") == std::string_view::npos) return std::string(s);
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

inline std::string md_escape(std::string_view s) {
  std::string out;
  for (char c : s) {
    if (c == '|') out += '\\';
    out += c;
  }
  return out;
}

}  // namespace detail

inline std::string to_json(const MetricReport& r) {
  using detail::ordered_json;
  ordered_json j;
  j["schema_version"] = kReportSchemaVersion;
  j["tool"] = {{"name", kToolName}, {"version", kToolVersion}};
  ordered_json config;
  config["mode"] = r.mode;
  config["thresholds"] = r.thresholds;
  config["nfc"] = r.nfc;
  config["seed"] = r.seed ? ordered_json(*r.seed) : ordered_json(nullptr);
  config["resamples"] = r.resamples ? ordered_json(*r.resamples) : ordered_json(nullptr);
  j["config"] = config;
  j["inputs"] = {{"labels", {{"path", r.labels.path}, {"crc32", r.labels.crc32}}},
                 {"predictions", {{"path", r.predictions.path}, {"crc32", r.predictions.crc32}}}};
  j["corpus"] = {{"documents", r.totals.documents},
                 {"reference_entities", r.totals.reference_entities},
                 {"hypothesis_entities", r.totals.hypothesis_entities},
                 {"repaired_tags", {{"labels", r.totals.reference_repairs},
                                    {"predictions", r.totals.hypothesis_repairs}}}};
  ordered_json metrics = ordered_json::array();
  for (const MetricEntry& m : r.metrics) metrics.push_back(detail::metric_json(m));
  j["metrics"] = metrics;
  if (!r.sweep.empty()) {
    ordered_json sweep = ordered_json::array();
    for (const ThresholdSweepEntry& s : r.sweep) {
      ordered_json e;
      e["threshold"] = s.threshold;
      ordered_json ms = ordered_json::array();
      for (const MetricEntry& m : s.metrics) ms.push_back(detail::metric_json(m));
      e["metrics"] = ms;
      sweep.push_back(e);
    }
    j["threshold_sweep"] = sweep;
  }
  if (!r.documents.empty()) {
    ordered_json docs = ordered_json::array();
    for (const DocumentRow& d : r.documents) {
      ordered_json e;
      e["id"] = d.id;
      e["reference_entities"] = d.reference_entities;
      e["hypothesis_entities"] = d.hypothesis_entities;
      e["excluded"] = d.excluded;
      ordered_json ms = ordered_json::object();
      for (const MetricEntry& m : d.metrics) ms[m.name] = detail::json_value(m.value);
      e["metrics"] = ms;
      docs.push_back(e);
    }
    j["documents"] = docs;
  }
  j["notes"] = r.notes;
  return j.dump(2) + "\n";
}

/// Long format: scope,metric,value,display[,ci_low,ci_high].
inline std::string to_csv(const MetricReport& r) {
  bool with_ci = false;
  for (const MetricEntry& m : r.metrics) with_ci = with_ci || m.ci.has_value();
  std::string out = "scope,metric,value,display";
  if (with_ci) out += ",ci_low,ci_high";
  out += '\n';
  auto row = [&](std::string_view scope, const std::string& metric, const MetricEntry& m) {
    out += detail::csv_escape(scope) + ',' + detail::csv_escape(metric) + ',';
    out += m.value ? format_full(*m.value) : "";
    out += ',';
    out += m.value ? format_percent(*m.value) : "";
    if (with_ci) {
      out += ',';
      if (m.ci) out += format_full(m.ci->low) + ',' + format_full(m.ci->high);
      else out += ',';
    }
    out += '\n';
  };
  for (const MetricEntry& m : r.metrics) row("corpus", m.name, m);
  for (const ThresholdSweepEntry& s : r.sweep)
    for (const MetricEntry& m : s.metrics) row("corpus", m.name + "@" + format_threshold(s.threshold), m);
  for (const DocumentRow& d : r.documents)
    for (const MetricEntry& m : d.metrics) row("document:" + d.id, m.name, m);
  return out;
}

inline std::string to_markdown(const MetricReport& r) {
  bool with_ci = false;
  for (const MetricEntry& m : r.metrics) with_ci = with_ci || m.ci.has_value();
  std::string out;
  out += "| Metric | Value |";
  if (with_ci) out += " 95% CI |";
  out += "\n|:--|--:|";
  if (with_ci) out += ":--|";
  out += '\n';
  for (const MetricEntry& m : r.metrics) {
    out += "| " + m.name + " | " + detail::display(m.value) + " |";
    if (with_ci)
      out += m.ci ? " [" + format_percent(m.ci->low) + ", " + format_percent(m.ci->high) + "] |" : " |";
    out += '\n';
  }
  if (!r.sweep.empty()) {
    out += "\n| Threshold |";
    for (const MetricEntry& m : r.sweep.front().metrics) out += ' ' + m.name + " |";
    out += "\n|--:|";
    for (std::size_t i = 0; i < r.sweep.front().metrics.size(); ++i) out += "--:|";
    out += '\n';
    for (const ThresholdSweepEntry& s : r.sweep) {
      out += "| " + format_threshold(s.threshold) + " |";
      for (const MetricEntry& m : s.metrics) out += ' ' + detail::display(m.value) + " |";
      out += '\n';
    }
  }
  if (!r.documents.empty()) {
    out += "\n| Document |";
    for (const MetricEntry& m : r.documents.front().metrics) out += ' ' + m.name + " |";
    out += "\n|:--|";
    for (std::size_t i = 0; i < r.documents.front().metrics.size(); ++i) out += "--:|";
    out += '\n';
    for (const DocumentRow& d : r.documents) {
      out += "| " + detail::md_escape(d.id) + (d.excluded ? " (excluded)" : "") + " |";
      for (const MetricEntry& m : d.metrics) out += ' ' + detail::display(m.value) + " |";
      out += '\n';
    }
  }
  out += "\n" + std::to_string(r.totals.documents) + " documents, " +
         std::to_string(r.totals.reference_entities) + " reference entities, " +
         std::to_string(r.totals.hypothesis_entities) + " predicted entities; " + std::string(kToolName) +
         " " + std::string(kToolVersion) + ", thresholds";
  for (double t : r.thresholds) out += ' ' + format_threshold(t);
  out += ", labels crc32 " + r.labels.crc32 + ", predictions crc32 " + r.predictions.crc32 + "\n";
  for (const std::string& note : r.notes) out += "\nNote: " + note + "\n";
  return out;
}

inline std::string render(const MetricReport& r, OutputFormat format) {
  switch (format) {
    case OutputFormat::Json: return to_json(r);
    case OutputFormat::Csv: return to_csv(r);
    case OutputFormat::Markdown: break;
  }
  return to_markdown(r);
}

// ---------------------------------------------------------------------------
// Category report

inline std::string render(const CategoryReport& r, OutputFormat format) {
  const std::string note =
      "entities are paired within each category by an order-independent assignment; per-category "
      "values can differ slightly under other pairing conventions";
  switch (format) {
    case OutputFormat::Json: {
      detail::ordered_json j;
      j["schema_version"] = kReportSchemaVersion;
      j["tool"] = {{"name", kToolName}, {"version", kToolVersion}};
      detail::ordered_json rows = detail::ordered_json::array();
      for (const CategoryRow& row : r.rows) {
        rows.push_back({{"category", row.category},
                        {"cer", row.cer_percent()},
                        {"wer", row.wer_percent()},
                        {"cer_display", format_percent(row.cer_percent())},
                        {"wer_display", format_percent(row.wer_percent())},
                        {"reference_entities", row.reference_entities}});
      }
      j["categories"] = rows;
      const double cer = 100.0 * r.total_chars.rate().value;
      const double wer = 100.0 * r.total_words.rate().value;
      j["total"] = {{"cer", cer},
                    {"wer", wer},
                    {"cer_display", format_percent(cer)},
                    {"wer_display", format_percent(wer)},
                    {"reference_entities", r.reference_entities()}};
      j["notes"] = {note};
      return j.dump(2) + "\n";
    }
    case OutputFormat::Csv: {
      std::string out = "category,cer,wer,reference_entities\n";
      for (const CategoryRow& row : r.rows)
        out += detail::csv_escape(row.category) + ',' + format_full(row.cer_percent()) + ',' +
               format_full(row.wer_percent()) + ',' + std::to_string(row.reference_entities) + '\n';
      out += "total (including untagged words)," + format_full(100.0 * r.total_chars.rate().value) +
             ',' + format_full(100.0 * r.total_words.rate().value) + ",\n";
      return out;
    }
    case OutputFormat::Markdown: break;
  }
  std::string out = "| Category | CER | WER | Number of entities |\n|:--|--:|--:|--:|\n";
  for (const CategoryRow& row : r.rows)
    out += "| " + detail::md_escape(row.category) + " | " + format_percent(row.cer_percent()) + " | " +
           format_percent(row.wer_percent()) + " | " + std::to_string(row.reference_entities) + " |\n";
  out += "| total (including untagged words) | " + format_percent(100.0 * r.total_chars.rate().value) +
         " | " + format_percent(100.0 * r.total_words.rate().value) + " | - |\n";
  out += "\nNote: " + note + "\n";
  return out;
}

/// Keeps only the named categories; unknown names are reported back.
inline CategoryReport filter_categories(const CategoryReport& r, const std::vector<std::string>& keep,
                                        std::vector<std::string>* unknown = nullptr) {
  if (keep.empty()) return r;
  CategoryReport out;
  out.total_chars = r.total_chars;
  out.total_words = r.total_words;
  for (const std::string& name : keep) {
    if (const CategoryRow* row = r.find(name)) out.rows.push_back(*row);
    else if (unknown) unknown->push_back(name);
  }
  std::sort(out.rows.begin(), out.rows.end(),
            [](const CategoryRow& a, const CategoryRow& b) { return a.category < b.category; });
  return out;
}

// ---------------------------------------------------------------------------
// Correlation

/// Per-document metric table over documents with reference entities.
inline MetricTable per_document_metric_table(std::span<const DocumentScores> docs,
                                             const std::vector<std::string>& metrics) {
  MetricTable table;
  table.names = metrics;
  table.columns.resize(metrics.size());
  for (const DocumentScores& d : docs) {
    if (d.totals.reference_entities == 0) continue;
    for (std::size_t i = 0; i < metrics.size(); ++i)
      table.columns[i].push_back(metric_value(d.totals, metrics[i], 0));
  }
  return table;
}

inline std::string render(const std::vector<CorrelationMatrix>& matrices, OutputFormat format) {
  auto kind_name = [](CorrelationKind k) { return k == CorrelationKind::Pearson ? "pearson" : "spearman"; };
  switch (format) {
    case OutputFormat::Json: {
      detail::ordered_json j;
      j["schema_version"] = kReportSchemaVersion;
      j["tool"] = {{"name", kToolName}, {"version", kToolVersion}};
      detail::ordered_json arr = detail::ordered_json::array();
      for (const CorrelationMatrix& m : matrices) {
        detail::ordered_json e;
        e["kind"] = kind_name(m.kind);
        e["samples"] = m.samples;
        e["metrics"] = m.names;
        detail::ordered_json coef = detail::ordered_json::array();
        detail::ordered_json pv = detail::ordered_json::array();
        for (std::size_t i = 0; i < m.size(); ++i) {
          detail::ordered_json crow = detail::ordered_json::array();
          detail::ordered_json prow = detail::ordered_json::array();
          for (std::size_t k = 0; k < m.size(); ++k) {
            crow.push_back(detail::json_value(m.coefficient(i, k)));
            prow.push_back(detail::json_value(m.p_value(i, k)));
          }
          coef.push_back(crow);
          pv.push_back(prow);
        }
        e["coefficients"] = coef;
        e["p_values"] = pv;
        arr.push_back(e);
      }
      j["correlations"] = arr;
      return j.dump(2) + "\n";
    }
    case OutputFormat::Csv: {
      std::string out = "kind,metric_a,metric_b,coefficient,p_value,stars\n";
      for (const CorrelationMatrix& m : matrices)
        for (std::size_t i = 0; i < m.size(); ++i)
          for (std::size_t k = 0; k < m.size(); ++k) {
            const auto& c = m.coefficient(i, k);
            const auto& p = m.p_value(i, k);
            out += std::string(kind_name(m.kind)) + ',' + detail::csv_escape(m.names[i]) + ',' +
                   detail::csv_escape(m.names[k]) + ',' + (c ? format_full(*c) : "") + ',' +
                   (p ? format_full(*p) : "") + ',' + (p ? significance_stars(*p) : "") + '\n';
          }
      return out;
    }
    case OutputFormat::Markdown: break;
  }
  std::string out;
  for (const CorrelationMatrix& m : matrices) {
    out += std::string("Absolute ") + (m.kind == CorrelationKind::Pearson ? "linear (Pearson)" : "rank (Spearman)") +
           " correlation, " + std::to_string(m.samples) + " documents\n\n|  |";
    for (const std::string& n : m.names) out += ' ' + n + " |";
    out += "\n|:--|";
    for (std::size_t i = 0; i < m.size(); ++i) out += "--:|";
    out += '\n';
    for (std::size_t i = 0; i < m.size(); ++i) {
      out += "| " + m.names[i] + " |";
      for (std::size_t k = 0; k < m.size(); ++k) {
        const auto& c = m.coefficient(i, k);
        const auto& p = m.p_value(i, k);
        if (!c) {
          out += "  |";
          continue;
        }
        std::array<char, 32> buf{};
        std::snprintf(buf.data(), buf.size(), "%.2f", std::abs(*c));
        out += ' ' + std::string(buf.data()) + (p ? significance_stars(*p) : "") + " |";
      }
      out += '\n';
    }
    out += '\n';
  }
  return out;
}

}  // namespace oieval
