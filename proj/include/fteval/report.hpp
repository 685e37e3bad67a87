#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "fteval/core.hpp"
#include "fteval/ingest.hpp"

namespace fteval {

inline constexpr const char* kToolName = "fteval";
inline constexpr const char* kToolVersion = "0.1.0";

enum class Direction { kHigher, kLower };

struct MetricInfo {
  std::string key;
  std::string label;
  Direction direction;
};

/// Every metric a report can carry, in column order.
const std::vector<MetricInfo>& metric_catalog();
const MetricInfo& metric_info(const std::string& key);

/// A report cell: a number, "absent" (inputs not supplied or entry failed),
/// or "identical" (PSNR of identical frames).
class MetricValue {
 public:
  enum class State { kAbsent, kNumber, kIdentical };

  MetricValue() = default;
  static MetricValue absent() { return {}; }
  static MetricValue number(double v) { return MetricValue(State::kNumber, v); }
  static MetricValue identical() { return MetricValue(State::kIdentical, 0.0); }

  State state() const noexcept { return state_; }
  bool present() const noexcept { return state_ != State::kAbsent; }
  bool is_number() const noexcept { return state_ == State::kNumber; }
  double value() const;

  friend bool operator==(const MetricValue&, const MetricValue&) = default;

 private:
  MetricValue(State s, double v) : state_(s), value_(v) {}
  State state_ = State::kAbsent;
  double value_ = 0.0;
};

/// Rounds to 6 significant digits (round-half-even on the exact binary value).
double round6(double v);
/// 6 significant digits as text ("%.6g").
std::string format6(double v);

struct ManifestEntry {
  std::string id;
  std::optional<std::filesystem::path> gen_landmarks;
  std::optional<std::filesystem::path> gt_landmarks;
  std::optional<std::filesystem::path> gen_frames;
  std::optional<std::filesystem::path> gt_frames;
  std::optional<std::filesystem::path> gen_features;
  std::optional<std::filesystem::path> gt_features;
  std::optional<std::filesystem::path> audio_embed;
  std::optional<std::filesystem::path> visual_embed;
};

struct EvaluationOptions {
  std::string scheme = "ibug68";
  std::vector<std::size_t> mouth_indices;
  std::optional<std::filesystem::path> scheme_dir;
  AdfdWeights weights;
  MismatchPolicy mismatch = MismatchPolicy::kStrict;
  int max_offset = 15;
  int hop = 1;
  double fid_eps = 1e-6;
  CsvGeometry csv;
  std::string feature_provenance;
};

struct EvaluationManifest {
  std::string name = "run";
  EvaluationOptions options;
  std::vector<ManifestEntry> entries;

  /// Non-empty, unique ids, and every entry holds at least one complete
  /// input pair and no half pairs. Throws InputError.
  void validate() const;
};

/// Relative paths are resolved against `base_dir`.
EvaluationManifest parse_manifest(const nlohmann::json& doc,
                                  const std::filesystem::path& base_dir);
EvaluationManifest load_manifest(const std::filesystem::path& path);

struct EntryError {
  enum class Class { kInput, kPrecondition };
  Class cls = Class::kInput;
  std::string message;
};

struct EntryResult {
  std::string id;
  std::optional<EntryError> error;
  std::map<std::string, MetricValue> metrics;
  nlohmann::json details = nlohmann::json::object();
  std::vector<std::string> warnings;
};

struct MetricReport {
  std::string name;
  nlohmann::json metadata = nlohmann::json::object();
  std::vector<EntryResult> entries;
  std::map<std::string, MetricValue> aggregate;
  /// Number of entries contributing to each aggregate.
  std::map<std::string, std::size_t> support;

  /// Metrics whose aggregate is present.
  std::set<std::string> metric_set() const;
};

/// Computes every metric whose inputs an entry supplies. Failures are
/// recorded on the entry; never throws for a single bad entry.
EntryResult evaluate_entry(const ManifestEntry& entry, const EvaluationOptions& options);

/// Evaluates entries on up to `jobs` threads; output is independent of
/// `jobs`. Throws when the manifest is invalid or every entry failed.
MetricReport evaluate(const EvaluationManifest& manifest, int jobs = 1);

/// Recomputes aggregates from the entries.
void aggregate(MetricReport& report);

nlohmann::json to_json(const MetricReport& report);
MetricReport report_from_json(const nlohmann::json& doc);
/// Canonical text: sorted keys, 2-space indent, values rounded by round6.
std::string dump_report(const MetricReport& report);

enum class TableFormat { kMarkdown, kCsv, kJson };
TableFormat parse_table_format(const std::string& text);

/// One row per report; in markdown the best value of each column is bold.
/// All reports must carry the same metric set.
std::string render_table(const std::vector<MetricReport>& reports, TableFormat format);

}  // namespace fteval
