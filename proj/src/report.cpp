#include "fteval/report.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <limits>
#include <thread>

#include "fteval/adfd.hpp"
#include "fteval/errors.hpp"
#include "fteval/frechet.hpp"
#include "fteval/image_metrics.hpp"
#include "fteval/landmark_metrics.hpp"
#include "fteval/sync.hpp"

namespace fteval {

namespace fs = std::filesystem;
using nlohmann::json;

const std::vector<MetricInfo>& metric_catalog() {
  static const std::vector<MetricInfo> catalog = {
      {"psnr", "PSNR", Direction::kHigher},  {"ssim", "SSIM", Direction::kHigher},
      {"m_lmd", "M-LMD", Direction::kLower}, {"f_lmd", "F-LMD", Direction::kLower},
      {"fid", "FID", Direction::kLower},     {"lse_c", "SyncNet", Direction::kHigher},
      {"lse_d", "LSE-D", Direction::kLower}, {"adfd", "ADFD", Direction::kHigher},
  };
  return catalog;
}

const MetricInfo& metric_info(const std::string& key) {
  for (const auto& m : metric_catalog()) {
    if (m.key == key) return m;
  }
  throw PreconditionError("unknown metric '" + key + "'");
}

double MetricValue::value() const {
  if (state_ != State::kNumber) {
    throw PreconditionError("metric value is not a number");
  }
  return value_;
}

std::string format6(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

double round6(double v) {
  if (!std::isfinite(v)) return v;
  return std::strtod(format6(v).c_str(), nullptr);
}

namespace {

const char* arrow(Direction d) { return d == Direction::kHigher ? "↑" : "↓"; }

json value_to_json(const MetricValue& v) {
  switch (v.state()) {
    case MetricValue::State::kAbsent: return "absent";
    case MetricValue::State::kIdentical: return "identical";
    case MetricValue::State::kNumber: return round6(v.value());
  }
  return "absent";
}

MetricValue value_from_json(const json& j, const std::string& key) {
  if (j.is_number()) return MetricValue::number(j.get<double>());
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "absent") return MetricValue::absent();
    if (s == "identical") return MetricValue::identical();
  }
  throw InputError("report: metric '" + key + "' has an unrecognised value " + j.dump());
}

std::map<std::string, MetricValue> all_absent() {
  std::map<std::string, MetricValue> m;
  for (const auto& info : metric_catalog()) m[info.key] = MetricValue::absent();
  return m;
}

std::optional<fs::path> optional_path(const json& entry, const char* key, const fs::path& base) {
  if (!entry.contains(key) || entry[key].is_null()) return std::nullopt;
  if (!entry[key].is_string()) {
    throw InputError(std::string("manifest: '") + key + "' must be a string path");
  }
  fs::path p = entry[key].get<std::string>();
  if (p.is_relative()) p = base / p;
  return p.lexically_normal();
}

template <typename T>
T option_value(const json& opts, const char* key, T fallback) {
  if (!opts.contains(key)) return fallback;
  try {
    return opts[key].get<T>();
  } catch (const json::exception&) {
    throw InputError(std::string("manifest: option '") + key + "' has the wrong type");
  }
}

void check_pair(const ManifestEntry& e, const std::optional<fs::path>& a,
                const std::optional<fs::path>& b, const char* a_name, const char* b_name) {
  if (a.has_value() != b.has_value()) {
    throw InputError("manifest entry '" + e.id + "': '" + (a ? a_name : b_name) +
                     "' is given without '" + (a ? b_name : a_name) + "'");
  }
}

json parameters_json(const EvaluationOptions& o) {
  json scheme = {{"name", o.scheme}};
  if (!o.mouth_indices.empty()) scheme["mouth_indices"] = o.mouth_indices;
  if (o.scheme != "generic") {
    try {
      const auto resolved = resolve_scheme(o.scheme, o.scheme_dir, o.mouth_indices);
      scheme["name"] = resolved.name;
      scheme["total"] = resolved.total;
      scheme["mouth_indices"] = resolved.mouth_indices;
    } catch (const Error&) {
      scheme["unresolved"] = true;
    }
  }
  return {
      {"adfd",
       {{"w1", o.weights.w1},
        {"w2", o.weights.w2},
        {"spatial", "mean per-landmark euclidean error / frame diagonal, clamped to [0,1], "
                    "mean over frames"},
        {"motion", "(cos + 1) / 2 of flattened per-transition displacement fields, mean over "
                   "T-1 transitions"},
        {"zero_motion", "both still -> 1.0, one still -> 0.5"},
        {"single_frame_motion", 1.0},
        {"score", "w1 * spatial * w2 * motion"}}},
      {"lmd", {{"scheme", scheme}, {"units", "pixels"}}},
      {"psnr", {{"peak", 255}, {"identical_frames", "excluded from mean, counted"}}},
      {"ssim",
       {{"window", SsimParams::kWindow},
        {"sigma", SsimParams::kSigma},
        {"k1", SsimParams::kK1},
        {"k2", SsimParams::kK2},
        {"luma", "rec601"},
        {"border", "valid"}}},
      {"fid",
       {{"eps", o.fid_eps},
        {"covariance", "unbiased (N-1)"},
        {"sqrtm", "jacobi eigendecomposition of Sa^1/2 Sb Sa^1/2"},
        {"negative_eigen_tolerance", 1e-8},
        {"feature_provenance", o.feature_provenance}}},
      {"sync",
       {{"max_offset", o.max_offset},
        {"hop", o.hop},
        {"distance", "mean euclidean distance of l2-normalised pairs"},
        {"min_overlap", kMinSyncOverlap},
        {"tie_break", "smallest |offset|, then negative"},
        {"confidence", "median - min of distance curve"}}},
      {"mismatch", to_string(o.mismatch)},
  };
}

std::vector<std::string> metric_keys_in(const std::map<std::string, MetricValue>& m) {
  std::vector<std::string> keys;
  for (const auto& info : metric_catalog()) {
    auto it = m.find(info.key);
    if (it != m.end() && it->second.present()) keys.push_back(info.key);
  }
  return keys;
}

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string cell_text(const MetricValue& v) {
  switch (v.state()) {
    case MetricValue::State::kAbsent: return "absent";
    case MetricValue::State::kIdentical: return "identical";
    case MetricValue::State::kNumber: return format6(v.value());
  }
  return "absent";
}

/// Comparable score where larger is always better.
double goodness(const MetricValue& v, Direction d) {
  double x = 0.0;
  if (v.state() == MetricValue::State::kIdentical) {
    x = std::numeric_limits<double>::infinity();
  } else {
    x = round6(v.value());
  }
  return d == Direction::kHigher ? x : -x;
}

}  // namespace

void EvaluationManifest::validate() const {
  if (entries.empty()) {
    throw InputError("manifest has no entries");
  }
  std::set<std::string> ids;
  for (const auto& e : entries) {
    if (e.id.empty()) throw InputError("manifest entry with an empty id");
    if (!ids.insert(e.id).second) throw InputError("duplicate manifest id '" + e.id + "'");
    check_pair(e, e.gen_landmarks, e.gt_landmarks, "gen_landmarks", "gt_landmarks");
    check_pair(e, e.gen_frames, e.gt_frames, "gen_frames", "gt_frames");
    check_pair(e, e.gen_features, e.gt_features, "gen_features", "gt_features");
    check_pair(e, e.audio_embed, e.visual_embed, "audio_embed", "visual_embed");
    if (!e.gen_landmarks && !e.gen_frames && !e.gen_features && !e.audio_embed) {
      throw InputError("manifest entry '" + e.id + "' has no evaluable inputs");
    }
  }
}

EvaluationManifest parse_manifest(const json& doc, const fs::path& base_dir) {
  if (!doc.is_object() || !doc.contains("entries") || !doc["entries"].is_array()) {
    throw InputError("manifest must be an object with an 'entries' array");
  }
  EvaluationManifest m;
  m.name = option_value<std::string>(doc, "name", m.name);
  if (doc.contains("options")) {
    const auto& o = doc["options"];
    if (!o.is_object()) throw InputError("manifest: 'options' must be an object");
    static const std::set<std::string> known = {
        "scheme", "mouth_indices", "w1", "w2",     "mismatch", "max_offset",
        "hop",    "fid_eps",       "width", "height", "fps",   "feature_provenance"};
    for (const auto& [key, _] : o.items()) {
      if (!known.count(key)) throw InputError("manifest: unknown option '" + key + "'");
    }
    auto& opt = m.options;
    opt.scheme = option_value<std::string>(o, "scheme", opt.scheme);
    opt.mouth_indices = option_value<std::vector<std::size_t>>(o, "mouth_indices", {});
    opt.weights.w1 = option_value<double>(o, "w1", opt.weights.w1);
    opt.weights.w2 = option_value<double>(o, "w2", opt.weights.w2);
    if (o.contains("mismatch")) {
      try {
        opt.mismatch = parse_mismatch_policy(option_value<std::string>(o, "mismatch", ""));
      } catch (const PreconditionError& e) {
        throw InputError(std::string("manifest: ") + e.what());
      }
    }
    opt.max_offset = option_value<int>(o, "max_offset", opt.max_offset);
    opt.hop = option_value<int>(o, "hop", opt.hop);
    opt.fid_eps = option_value<double>(o, "fid_eps", opt.fid_eps);
    if (o.contains("width")) opt.csv.width = option_value<int>(o, "width", 0);
    if (o.contains("height")) opt.csv.height = option_value<int>(o, "height", 0);
    opt.csv.fps = option_value<double>(o, "fps", opt.csv.fps);
    opt.feature_provenance =
        option_value<std::string>(o, "feature_provenance", opt.feature_provenance);
  }
  static const std::set<std::string> entry_keys = {
      "id",          "gen_landmarks", "gt_landmarks", "gen_frames",  "gt_frames",
      "gen_features", "gt_features",  "audio_embed",  "visual_embed"};
  for (const auto& e : doc["entries"]) {
    if (!e.is_object()) throw InputError("manifest entries must be objects");
    for (const auto& [key, _] : e.items()) {
      if (!entry_keys.count(key)) throw InputError("manifest: unknown entry field '" + key + "'");
    }
    ManifestEntry entry;
    if (!e.contains("id") || !e["id"].is_string()) {
      throw InputError("manifest entry needs a string 'id'");
    }
    entry.id = e["id"].get<std::string>();
    entry.gen_landmarks = optional_path(e, "gen_landmarks", base_dir);
    entry.gt_landmarks = optional_path(e, "gt_landmarks", base_dir);
    entry.gen_frames = optional_path(e, "gen_frames", base_dir);
    entry.gt_frames = optional_path(e, "gt_frames", base_dir);
    entry.gen_features = optional_path(e, "gen_features", base_dir);
    entry.gt_features = optional_path(e, "gt_features", base_dir);
    entry.audio_embed = optional_path(e, "audio_embed", base_dir);
    entry.visual_embed = optional_path(e, "visual_embed", base_dir);
    m.entries.push_back(std::move(entry));
  }
  m.validate();
  return m;
}

EvaluationManifest load_manifest(const fs::path& path) {
  const auto text = read_file_bytes(path);
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(ParseErrorKind::kMalformedLine, SourceLocation{path.string(), {}, e.byte},
                     e.what());
  }
  return parse_manifest(doc, path.parent_path());
}

EntryResult evaluate_entry(const ManifestEntry& entry, const EvaluationOptions& options) {
  EntryResult out;
  out.id = entry.id;
  out.metrics = all_absent();
  try {
    if (entry.gen_landmarks) {
      LandmarkReadOptions read_opts;
      read_opts.csv = options.csv;
      const auto gen = read_landmarks(*entry.gen_landmarks, read_opts);
      const auto gt = read_landmarks(*entry.gt_landmarks, read_opts);
      for (const auto* s : {&gen, &gt}) {
        if (s->out_of_frame_points() > 0) {
          out.warnings.push_back((s == &gen ? "generated" : "ground-truth") +
                                 std::string(" landmarks: ") +
                                 std::to_string(s->out_of_frame_points()) +
                                 " points outside the frame");
        }
      }
      auto pair = validate_pair(gen, gt, options.mismatch);
      for (auto& w : pair.warnings) out.warnings.push_back("landmarks " + w);

      const auto breakdown = adfd(pair.gen, pair.gt, options.weights);
      out.metrics["adfd"] = MetricValue::number(breakdown.score);
      out.details["adfd"] = {{"spatial", round6(breakdown.spatial)},
                             {"motion", round6(breakdown.motion)},
                             {"frames", pair.gt.frame_count()}};

      const auto scheme = resolve_scheme(options.scheme, options.scheme_dir,
                                         options.mouth_indices, pair.gt.landmark_count());
      const auto distances = lmd(pair.gen, pair.gt, scheme);
      out.metrics["f_lmd"] = MetricValue::number(distances.f_lmd);
      out.metrics["m_lmd"] = MetricValue::number(distances.m_lmd);
      out.details["lmd"] = {{"scheme", scheme.name}};
    }

    if (entry.gen_frames) {
      auto gen_dir = read_frame_directory(*entry.gen_frames);
      auto gt_dir = read_frame_directory(*entry.gt_frames);
      for (auto* d : {&gen_dir, &gt_dir}) {
        for (auto& w : d->warnings) out.warnings.push_back(w);
      }
      FrameSource gen = std::move(gen_dir.frames);
      FrameSource gt = std::move(gt_dir.frames);
      if (gen.frame_count() != gt.frame_count()) {
        if (options.mismatch == MismatchPolicy::kStrict) {
          throw PreconditionError("frame count mismatch: generated has " +
                                  std::to_string(gen.frame_count()) + ", ground truth has " +
                                  std::to_string(gt.frame_count()));
        }
        const auto common = std::min(gen.frame_count(), gt.frame_count());
        out.warnings.push_back("frames truncated to " + std::to_string(common));
        auto head = [common](const FrameSource& f) {
          std::vector<FrameSource::Raster> r(f.frames().begin(),
                                             f.frames().begin() + static_cast<long>(common));
          return FrameSource(std::move(r), f.width(), f.height(), f.channels());
        };
        gen = head(gen);
        gt = head(gt);
      }
      const auto p = psnr(gen, gt);
      out.metrics["psnr"] =
          p.mean_db ? MetricValue::number(*p.mean_db) : MetricValue::identical();
      const auto s = ssim(gen, gt);
      out.metrics["ssim"] = MetricValue::number(s.mean);
      out.details["frames"] = {{"count", gt.frame_count()},
                               {"psnr_identical_frames", p.identical_frames}};
    }

    if (entry.gen_features) {
      const auto gen = read_features(*entry.gen_features);
      const auto gt = read_features(*entry.gt_features);
      out.metrics["fid"] = MetricValue::number(fid(gen, gt, options.fid_eps));
      out.details["fid"] = {{"gen_rows", gen.rows()}, {"gt_rows", gt.rows()}, {"dim", gen.dim()}};
    }

    if (entry.audio_embed) {
      const EmbeddingStream audio(read_features(*entry.audio_embed), options.hop);
      const EmbeddingStream visual(read_features(*entry.visual_embed), options.hop);
      const auto r = sync_score(audio, visual, options.max_offset);
      out.metrics["lse_c"] = MetricValue::number(r.lse_c);
      out.metrics["lse_d"] = MetricValue::number(r.lse_d);
      out.details["sync"] = {{"best_offset", r.best_offset}};
    }
  } catch (const PreconditionError& e) {
    out.error = EntryError{EntryError::Class::kPrecondition, e.what()};
  } catch (const std::exception& e) {
    out.error = EntryError{EntryError::Class::kInput, e.what()};
  }
  if (out.error) {
    out.metrics = all_absent();
    out.details = json::object();
  }
  return out;
}

std::set<std::string> MetricReport::metric_set() const {
  const auto keys = metric_keys_in(aggregate);
  return {keys.begin(), keys.end()};
}

void aggregate(MetricReport& report) {
  report.aggregate.clear();
  report.support.clear();
  for (const auto& info : metric_catalog()) {
    double sum = 0.0;
    std::size_t numbers = 0;
    std::size_t identical = 0;
    for (const auto& e : report.entries) {
      auto it = e.metrics.find(info.key);
      if (it == e.metrics.end()) continue;
      if (it->second.is_number()) {
        sum += it->second.value();
        ++numbers;
      } else if (it->second.state() == MetricValue::State::kIdentical) {
        ++identical;
      }
    }
    if (numbers > 0) {
      report.aggregate[info.key] = MetricValue::number(sum / static_cast<double>(numbers));
    } else if (identical > 0) {
      report.aggregate[info.key] = MetricValue::identical();
    } else {
      report.aggregate[info.key] = MetricValue::absent();
    }
    report.support[info.key] = numbers + identical;
  }
}

MetricReport evaluate(const EvaluationManifest& manifest, int jobs) {
  manifest.validate();
  if (jobs < 1) throw PreconditionError("jobs must be at least 1");

  const std::size_t n = manifest.entries.size();
  std::vector<EntryResult> results(n);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next.fetch_add(1); i < n; i = next.fetch_add(1)) {
      results[i] = evaluate_entry(manifest.entries[i], manifest.options);
    }
  };
  const auto threads = std::min<std::size_t>(static_cast<std::size_t>(jobs), n);
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
  }

  MetricReport report;
  report.name = manifest.name;
  report.entries = std::move(results);

  const bool all_failed = std::all_of(report.entries.begin(), report.entries.end(),
                                      [](const EntryResult& e) { return e.error.has_value(); });
  if (all_failed) {
    std::string msg = "every manifest entry failed:";
    for (const auto& e : report.entries) msg += "\n  " + e.id + ": " + e.error->message;
    if (report.entries.front().error->cls == EntryError::Class::kPrecondition) {
      throw PreconditionError(msg);
    }
    throw InputError(msg);
  }

  aggregate(report);
  json warnings = json::array();
  for (const auto& e : report.entries) {
    for (const auto& w : e.warnings) warnings.push_back(e.id + ": " + w);
  }
  report.metadata = {{"tool", kToolName},
                     {"version", kToolVersion},
                     {"parameters", parameters_json(manifest.options)},
                     {"warnings", warnings}};
  return report;
}

json to_json(const MetricReport& report) {
  json entries = json::array();
  for (const auto& e : report.entries) {
    json metrics = json::object();
    for (const auto& [k, v] : e.metrics) metrics[k] = value_to_json(v);
    json j = {{"id", e.id},
              {"status", e.error ? "error" : "ok"},
              {"metrics", metrics},
              {"details", e.details},
              {"warnings", e.warnings}};
    if (e.error) {
      j["error"] = {
          {"class", e.error->cls == EntryError::Class::kInput ? "input" : "precondition"},
          {"message", e.error->message}};
    }
    entries.push_back(std::move(j));
  }
  json aggregate_json = json::object();
  for (const auto& [k, v] : report.aggregate) aggregate_json[k] = value_to_json(v);
  json metrics = json::object();
  for (const auto& info : metric_catalog()) {
    metrics[info.key] = {{"label", info.label},
                         {"direction", info.direction == Direction::kHigher ? "higher" : "lower"},
                         {"arrow", arrow(info.direction)}};
  }
  return {{"name", report.name},
          {"metadata", report.metadata},
          {"metrics", metrics},
          {"entries", entries},
          {"aggregate", aggregate_json},
          {"support", report.support}};
}

MetricReport report_from_json(const json& doc) {
  if (!doc.is_object() || !doc.contains("aggregate") || !doc["aggregate"].is_object()) {
    throw InputError("report: expected an object with an 'aggregate' block");
  }
  MetricReport r;
  r.name = doc.value("name", std::string("report"));
  r.metadata = doc.value("metadata", json::object());
  for (const auto& [k, v] : doc["aggregate"].items()) {
    metric_info(k);
    r.aggregate[k] = value_from_json(v, k);
  }
  if (doc.contains("support") && doc["support"].is_object()) {
    for (const auto& [k, v] : doc["support"].items()) r.support[k] = v.get<std::size_t>();
  }
  if (doc.contains("entries") && doc["entries"].is_array()) {
    for (const auto& e : doc["entries"]) {
      EntryResult entry;
      entry.id = e.value("id", std::string());
      if (e.contains("metrics")) {
        for (const auto& [k, v] : e["metrics"].items()) entry.metrics[k] = value_from_json(v, k);
      }
      entry.details = e.value("details", json::object());
      entry.warnings = e.value("warnings", std::vector<std::string>{});
      if (e.contains("error")) {
        const auto& err = e["error"];
        entry.error = EntryError{err.value("class", "input") == "precondition"
                                     ? EntryError::Class::kPrecondition
                                     : EntryError::Class::kInput,
                                 err.value("message", std::string())};
      }
      r.entries.push_back(std::move(entry));
    }
  }
  return r;
}

std::string dump_report(const MetricReport& report) { return to_json(report).dump(2) + "\n"; }

TableFormat parse_table_format(const std::string& text) {
  if (text == "markdown" || text == "md") return TableFormat::kMarkdown;
  if (text == "csv") return TableFormat::kCsv;
  if (text == "json") return TableFormat::kJson;
  throw PreconditionError("unknown table format '" + text + "' (expected json|csv|markdown)");
}

std::string render_table(const std::vector<MetricReport>& reports, TableFormat format) {
  if (reports.empty()) throw PreconditionError("table: no reports given");
  const auto reference = reports.front().metric_set();
  for (std::size_t r = 1; r < reports.size(); ++r) {
    const auto other = reports[r].metric_set();
    if (other == reference) continue;
    std::vector<std::string> diff;
    std::set_symmetric_difference(reference.begin(), reference.end(), other.begin(), other.end(),
                                  std::back_inserter(diff));
    std::string listed;
    for (const auto& d : diff) listed += (listed.empty() ? "" : ", ") + d;
    throw PreconditionError("table: reports '" + reports.front().name + "' and '" +
                            reports[r].name + "' carry different metrics: " + listed);
  }
  const auto keys = metric_keys_in(reports.front().aggregate);

  // best[key] holds the indices of the rows tied for the best value.
  std::map<std::string, std::set<std::size_t>> best;
  for (const auto& key : keys) {
    const auto dir = metric_info(key).direction;
    double top = -std::numeric_limits<double>::infinity();
    for (const auto& rep : reports) top = std::max(top, goodness(rep.aggregate.at(key), dir));
    for (std::size_t r = 0; r < reports.size(); ++r) {
      if (goodness(reports[r].aggregate.at(key), dir) == top) best[key].insert(r);
    }
  }

  if (format == TableFormat::kJson) {
    json columns = json::array();
    for (const auto& key : keys) {
      const auto& info = metric_info(key);
      columns.push_back({{"key", key},
                         {"label", info.label},
                         {"direction", info.direction == Direction::kHigher ? "higher" : "lower"},
                         {"arrow", arrow(info.direction)}});
    }
    json rows = json::array();
    for (std::size_t r = 0; r < reports.size(); ++r) {
      json values = json::object();
      json best_keys = json::array();
      for (const auto& key : keys) {
        values[key] = value_to_json(reports[r].aggregate.at(key));
        if (best[key].count(r)) best_keys.push_back(key);
      }
      rows.push_back({{"method", reports[r].name}, {"values", values}, {"best", best_keys}});
    }
    return json{{"columns", columns}, {"rows", rows}}.dump(2) + "\n";
  }

  if (format == TableFormat::kCsv) {
    std::string out = "method";
    for (const auto& key : keys) out += "," + key;
    out += "\n";
    for (const auto& rep : reports) {
      out += csv_escape(rep.name);
      for (const auto& key : keys) out += "," + cell_text(rep.aggregate.at(key));
      out += "\n";
    }
    return out;
  }

  // Markdown follows the comparison-table layout: M-LMD and F-LMD share a
  // column, LSE-D is left to the CSV/JSON outputs.
  struct Column {
    std::string header;
    std::vector<std::string> keys;
  };
  std::vector<Column> columns;
  const std::set<std::string> present(keys.begin(), keys.end());
  for (const auto& info : metric_catalog()) {
    if (!present.count(info.key) || info.key == "lse_d") continue;
    if (info.key == "f_lmd" && present.count("m_lmd")) continue;
    if (info.key == "m_lmd" && present.count("f_lmd")) {
      columns.push_back({"M/F-LMD↓", {"m_lmd", "f_lmd"}});
      continue;
    }
    columns.push_back({info.label + arrow(info.direction), {info.key}});
  }
  std::string out = "| Method |";
  std::string rule = "|---|";
  for (const auto& c : columns) {
    out += " " + c.header + " |";
    rule += "---|";
  }
  out += "\n" + rule + "\n";
  for (std::size_t r = 0; r < reports.size(); ++r) {
    out += "| " + reports[r].name + " |";
    for (const auto& c : columns) {
      std::string cell;
      for (std::size_t k = 0; k < c.keys.size(); ++k) {
        const auto text = cell_text(reports[r].aggregate.at(c.keys[k]));
        if (k) cell += "/";
        cell += best[c.keys[k]].count(r) ? "**" + text + "**" : text;
      }
      out += " " + cell + " |";
    }
    out += "\n";
  }
  return out;
}

}  // namespace fteval
