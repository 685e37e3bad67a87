// fteval: talking-face evaluation command line.
//
// Exit codes: 0 success, 1 usage error, 2 input/parse error,
// 3 metric-precondition error.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "fteval/adfd.hpp"
#include "fteval/errors.hpp"
#include "fteval/frechet.hpp"
#include "fteval/image_metrics.hpp"
#include "fteval/ingest.hpp"
#include "fteval/landmark_metrics.hpp"
#include "fteval/report.hpp"
#include "fteval/sync.hpp"
#include "fteval/synth.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct GlobalFlags {
  std::optional<std::string> scheme;
  std::vector<std::size_t> mouth_indices;
  std::optional<double> w1;
  std::optional<double> w2;
  std::optional<std::string> mismatch;
  std::optional<int> max_offset;
  std::optional<int> hop;
  std::optional<double> fid_eps;
  int jobs = 1;
  std::optional<std::string> format;
  std::optional<std::string> out;
  std::optional<int> width;
  std::optional<int> height;
  std::optional<double> fps;
  std::optional<std::string> feature_provenance;
};

/// Manifest options overlaid with whatever was given on the command line.
fteval::EvaluationOptions resolve_options(const GlobalFlags& g,
                                          fteval::EvaluationOptions base = {}) {
  if (g.scheme) base.scheme = *g.scheme;
  if (!g.mouth_indices.empty()) base.mouth_indices = g.mouth_indices;
  if (g.w1) base.weights.w1 = *g.w1;
  if (g.w2) base.weights.w2 = *g.w2;
  if (g.mismatch) base.mismatch = fteval::parse_mismatch_policy(*g.mismatch);
  if (g.max_offset) base.max_offset = *g.max_offset;
  if (g.hop) base.hop = *g.hop;
  if (g.fid_eps) base.fid_eps = *g.fid_eps;
  if (g.width) base.csv.width = *g.width;
  if (g.height) base.csv.height = *g.height;
  if (g.fps) base.csv.fps = *g.fps;
  if (g.feature_provenance) base.feature_provenance = *g.feature_provenance;
  if (const char* dir = std::getenv("FTEVAL_SCHEME_DIR"); dir && *dir) {
    base.scheme_dir = fs::path(dir);
  }
  base.weights.validate();
  return base;
}

void emit(const GlobalFlags& g, const std::string& text) {
  if (g.out) {
    fteval::write_file_bytes(*g.out, text);
  } else {
    std::cout << text;
  }
}

/// Single-metric summaries: JSON as-is, or the scalar fields as CSV or a
/// two-column markdown table.
std::string render_summary(const json& summary, const std::string& format) {
  if (format == "json") return summary.dump(2) + "\n";
  std::vector<std::pair<std::string, std::string>> rows;
  for (const auto& [key, value] : summary.items()) {
    if (value.is_number_float()) {
      rows.emplace_back(key, fteval::format6(value.get<double>()));
    } else if (value.is_primitive()) {
      rows.emplace_back(key, value.is_string() ? value.get<std::string>() : value.dump());
    }
  }
  std::string out;
  if (format == "csv") {
    out = "key,value\n";
    for (const auto& [k, v] : rows) out += k + "," + v + "\n";
    return out;
  }
  if (format == "markdown" || format == "md") {
    out = "| key | value |\n|---|---|\n";
    for (const auto& [k, v] : rows) out += "| " + k + " | " + v + " |\n";
    return out;
  }
  throw UsageError("unknown format '" + format + "' (expected json|csv|markdown)");
}

fteval::LandmarkReadOptions landmark_options(const fteval::EvaluationOptions& o) {
  fteval::LandmarkReadOptions r;
  r.csv = o.csv;
  return r;
}

json rounded(const std::vector<double>& values) {
  json out = json::array();
  for (double v : values) out.push_back(fteval::round6(v));
  return out;
}

int run(int argc, char** argv) {
  CLI::App app{"Talking-face video evaluation: ADFD, LMD, PSNR, SSIM, FID and sync scoring"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(fteval::kToolVersion));

  GlobalFlags g;
  app.add_option("--scheme", g.scheme,
                 "Landmark scheme: ibug68, generic, a scheme file, or a name in "
                 "$FTEVAL_SCHEME_DIR");
  app.add_option("--mouth-indices", g.mouth_indices, "Mouth landmark indices (overrides scheme)")
      ->delimiter(',');
  app.add_option("--w1", g.w1, "ADFD spatial weight")->check(CLI::NonNegativeNumber);
  app.add_option("--w2", g.w2, "ADFD motion weight")->check(CLI::NonNegativeNumber);
  app.add_option("--mismatch", g.mismatch, "Frame count mismatch policy")
      ->check(CLI::IsMember({"strict", "truncate"}));
  app.add_option("--max-offset", g.max_offset, "Sync search range in frames")
      ->check(CLI::NonNegativeNumber);
  app.add_option("--hop", g.hop, "Video frames per embedding vector")->check(CLI::PositiveNumber);
  app.add_option("--fid-eps", g.fid_eps, "Covariance regulariser for FID")
      ->check(CLI::NonNegativeNumber);
  app.add_option("--jobs", g.jobs, "Parallel manifest entries")->check(CLI::PositiveNumber);
  app.add_option("--format", g.format, "Output format")
      ->check(CLI::IsMember({"json", "csv", "markdown", "md"}));
  app.add_option("--out", g.out, "Write output to this file instead of stdout");
  app.add_option("--width", g.width, "Frame width (CSV landmarks, synth)")
      ->check(CLI::PositiveNumber);
  app.add_option("--height", g.height, "Frame height (CSV landmarks, synth)")
      ->check(CLI::PositiveNumber);
  app.add_option("--fps", g.fps, "Frame rate for CSV landmarks")->check(CLI::PositiveNumber);
  app.add_option("--feature-provenance", g.feature_provenance,
                 "Free-text description of the feature extractor, copied into reports");

  std::string gen_path;
  std::string gt_path;

  auto* adfd_cmd = app.add_subcommand("adfd", "Audio-driven facial dynamics score");
  auto* lmd_cmd = app.add_subcommand("lmd", "Mouth / full-face landmark distance");
  for (auto* cmd : {adfd_cmd, lmd_cmd}) {
    cmd->fallthrough();
    cmd->add_option("--gen", gen_path, "Generated landmarks (.jsonl or .csv)")->required();
    cmd->add_option("--gt", gt_path, "Ground-truth landmarks (.jsonl or .csv)")->required();
  }

  auto* psnr_cmd = app.add_subcommand("psnr", "Peak signal-to-noise ratio over PNG frames");
  auto* ssim_cmd = app.add_subcommand("ssim", "Structural similarity over PNG frames");
  for (auto* cmd : {psnr_cmd, ssim_cmd}) {
    cmd->fallthrough();
    cmd->add_option("--gen", gen_path, "Directory of generated frames")->required();
    cmd->add_option("--gt", gt_path, "Directory of ground-truth frames")->required();
  }

  std::string gen_stats;
  std::string gt_stats;
  auto* fid_cmd = app.add_subcommand("fid", "Frechet distance between feature sets");
  fid_cmd->fallthrough();
  fid_cmd->add_option("--gen", gen_path, "Generated features (.ftev or .csv)");
  fid_cmd->add_option("--gt", gt_path, "Ground-truth features (.ftev or .csv)");
  fid_cmd->add_option("--gen-stats", gen_stats, "Generated Gaussian stats JSON");
  fid_cmd->add_option("--gt-stats", gt_stats, "Ground-truth Gaussian stats JSON");

  std::string audio_path;
  std::string visual_path;
  auto* sync_cmd = app.add_subcommand("sync", "Audio-visual sync offset and confidence");
  sync_cmd->fallthrough();
  sync_cmd->add_option("--audio", audio_path, "Audio embeddings (.ftev or .csv)")->required();
  sync_cmd->add_option("--visual", visual_path, "Visual embeddings (.ftev or .csv)")->required();

  std::string manifest_path;
  fteval::ManifestEntry single;
  std::string single_id = "pair";
  std::string run_name;
  std::optional<std::string> e_gen_lm, e_gt_lm, e_gen_fr, e_gt_fr, e_gen_ft, e_gt_ft, e_audio,
      e_visual;
  auto* eval_cmd = app.add_subcommand("eval", "Evaluate a manifest (or a single pair)");
  eval_cmd->fallthrough();
  eval_cmd->add_option("--manifest", manifest_path, "Manifest JSON");
  eval_cmd->add_option("--name", run_name, "Method name shown in tables");
  eval_cmd->add_option("--id", single_id, "Entry id for single-pair runs");
  eval_cmd->add_option("--gen-landmarks", e_gen_lm);
  eval_cmd->add_option("--gt-landmarks", e_gt_lm);
  eval_cmd->add_option("--gen-frames", e_gen_fr);
  eval_cmd->add_option("--gt-frames", e_gt_fr);
  eval_cmd->add_option("--gen-features", e_gen_ft);
  eval_cmd->add_option("--gt-features", e_gt_ft);
  eval_cmd->add_option("--audio-embed", e_audio);
  eval_cmd->add_option("--visual-embed", e_visual);

  std::vector<std::string> report_paths;
  auto* table_cmd = app.add_subcommand("table", "Render reports as a comparison table");
  table_cmd->fallthrough();
  table_cmd->add_option("reports", report_paths, "Report JSON files, one row each")->required();

  auto* synth_cmd = app.add_subcommand("synth", "Write synthetic fixtures");
  synth_cmd->fallthrough();
  synth_cmd->require_subcommand(1);
  std::uint64_t seed = 0;

  fteval::SynthSpec spec;
  auto* synth_lm = synth_cmd->add_subcommand("landmarks", "Synthetic landmark sequence (JSONL)");
  synth_lm->fallthrough();
  synth_lm->add_option("--seed", seed);
  synth_lm->add_option("--frames", spec.frames)->check(CLI::PositiveNumber);
  synth_lm->add_option("--points", spec.landmarks);
  synth_lm->add_option("--drift-amplitude", spec.head_drift.amplitude);
  synth_lm->add_option("--drift-period", spec.head_drift.period);
  synth_lm->add_option("--mouth-open", spec.mouth_open, "Envelope samples in [0,1]")
      ->delimiter(',');
  synth_lm->add_option("--jitter", spec.jitter_sigma);

  std::size_t rows = 1000;
  std::size_t dim = 8;
  std::vector<double> mean;
  double scale = 1.0;
  auto* synth_ft = synth_cmd->add_subcommand("features", "Gaussian feature set (FTEV or CSV)");
  synth_ft->fallthrough();
  synth_ft->add_option("--seed", seed);
  synth_ft->add_option("--rows", rows);
  synth_ft->add_option("--dim", dim);
  synth_ft->add_option("--mean", mean, "Mean vector (default zeros)")->delimiter(',');
  synth_ft->add_option("--scale", scale);

  std::size_t frame_count = 10;
  int channels = 3;
  auto* synth_fr = synth_cmd->add_subcommand("frames", "Noise frames as a PNG directory");
  synth_fr->fallthrough();
  synth_fr->add_option("--seed", seed);
  synth_fr->add_option("--count", frame_count);
  synth_fr->add_option("--channels", channels)->check(CLI::IsMember({1, 3}));

  long shift = 0;
  std::string audio_out;
  std::string visual_out;
  auto* synth_em = synth_cmd->add_subcommand("embeddings", "Audio/visual stream pair (FTEV)");
  synth_em->fallthrough();
  synth_em->add_option("--seed", seed);
  synth_em->add_option("--count", frame_count);
  synth_em->add_option("--dim", dim);
  synth_em->add_option("--shift", shift, "Visual lag in frames");
  synth_em->add_option("--audio-out", audio_out)->required();
  synth_em->add_option("--visual-out", visual_out)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }

  const std::string format = g.format.value_or("json");

  if (*adfd_cmd || *lmd_cmd) {
    const auto opts = resolve_options(g);
    const auto read = landmark_options(opts);
    const auto gen = fteval::read_landmarks(gen_path, read);
    const auto gt = fteval::read_landmarks(gt_path, read);
    auto pair = fteval::validate_pair(gen, gt, opts.mismatch);
    json summary;
    if (*adfd_cmd) {
      const auto b = fteval::adfd(pair.gen, pair.gt, opts.weights);
      summary = {{"metric", "adfd"},
                 {"score", fteval::round6(b.score)},
                 {"spatial", fteval::round6(b.spatial)},
                 {"motion", fteval::round6(b.motion)},
                 {"w1", opts.weights.w1},
                 {"w2", opts.weights.w2},
                 {"frames", pair.gt.frame_count()},
                 {"per_frame_spatial", rounded(b.per_frame_spatial)},
                 {"per_transition_motion", rounded(b.per_transition_motion)}};
    } else {
      const auto scheme = fteval::resolve_scheme(opts.scheme, opts.scheme_dir,
                                                 opts.mouth_indices, pair.gt.landmark_count());
      const auto r = fteval::lmd(pair.gen, pair.gt, scheme);
      json per_frame = json::array();
      for (const auto& f : r.per_frame) {
        per_frame.push_back({fteval::round6(f.mouth), fteval::round6(f.full)});
      }
      summary = {{"metric", "lmd"},
                 {"m_lmd", fteval::round6(r.m_lmd)},
                 {"f_lmd", fteval::round6(r.f_lmd)},
                 {"scheme", scheme.name},
                 {"frames", pair.gt.frame_count()},
                 {"per_frame_m_f", per_frame}};
    }
    summary["warnings"] = pair.warnings;
    emit(g, render_summary(summary, format));
    return 0;
  }

  if (*psnr_cmd || *ssim_cmd) {
    const auto gen = fteval::read_frames(gen_path);
    const auto gt = fteval::read_frames(gt_path);
    json summary;
    if (*psnr_cmd) {
      const auto r = fteval::psnr(gen, gt);
      json per_frame = json::array();
      for (const auto& v : r.per_frame) {
        per_frame.push_back(v.identical() ? json("identical") : json(fteval::round6(*v.db)));
      }
      summary = {{"metric", "psnr"},
                 {"mean_db", r.mean_db ? json(fteval::round6(*r.mean_db)) : json("identical")},
                 {"identical_frames", r.identical_frames},
                 {"frames", gt.frame_count()},
                 {"per_frame", per_frame}};
    } else {
      const auto r = fteval::ssim(gen, gt);
      summary = {{"metric", "ssim"},
                 {"mean", fteval::round6(r.mean)},
                 {"frames", gt.frame_count()},
                 {"per_frame", rounded(r.per_frame)}};
    }
    emit(g, render_summary(summary, format));
    return 0;
  }

  if (*fid_cmd) {
    const auto opts = resolve_options(g);
    double value = 0.0;
    json summary = {{"metric", "fid"}};
    if (!gen_stats.empty() || !gt_stats.empty()) {
      if (gen_stats.empty() || gt_stats.empty() || !gen_path.empty() || !gt_path.empty()) {
        throw UsageError("fid: give either --gen/--gt feature files or both --gen-stats and "
                         "--gt-stats");
      }
      value = fteval::frechet_distance(fteval::load_gaussian_stats(gen_stats),
                                       fteval::load_gaussian_stats(gt_stats));
      summary["source"] = "stats";
    } else {
      if (gen_path.empty() || gt_path.empty()) {
        throw UsageError("fid: --gen and --gt feature files are required");
      }
      value = fteval::fid(fteval::read_features(gen_path), fteval::read_features(gt_path),
                          opts.fid_eps);
      summary["source"] = "features";
      summary["eps"] = opts.fid_eps;
    }
    summary["fid"] = fteval::round6(value);
    emit(g, render_summary(summary, format));
    return 0;
  }

  if (*sync_cmd) {
    const auto opts = resolve_options(g);
    const fteval::EmbeddingStream audio(fteval::read_features(audio_path), opts.hop);
    const fteval::EmbeddingStream visual(fteval::read_features(visual_path), opts.hop);
    const auto r = fteval::sync_score(audio, visual, opts.max_offset);
    json curve = json::array();
    for (const auto& p : r.distance_curve) {
      curve.push_back({{"offset", p.offset}, {"distance", fteval::round6(p.distance)}});
    }
    const json summary = {{"metric", "sync"},
                          {"best_offset", r.best_offset},
                          {"lse_c", fteval::round6(r.lse_c)},
                          {"lse_d", fteval::round6(r.lse_d)},
                          {"max_offset", opts.max_offset},
                          {"hop", opts.hop},
                          {"distance_curve", curve}};
    emit(g, render_summary(summary, format));
    return 0;
  }

  if (*eval_cmd) {
    fteval::EvaluationManifest manifest;
    if (!manifest_path.empty()) {
      if (e_gen_lm || e_gt_lm || e_gen_fr || e_gt_fr || e_gen_ft || e_gt_ft || e_audio ||
          e_visual) {
        throw UsageError("eval: --manifest cannot be combined with single-pair inputs");
      }
      manifest = fteval::load_manifest(manifest_path);
    } else {
      single.id = single_id;
      auto as_path = [](const std::optional<std::string>& s) -> std::optional<fs::path> {
        if (!s) return std::nullopt;
        return fs::path(*s);
      };
      single.gen_landmarks = as_path(e_gen_lm);
      single.gt_landmarks = as_path(e_gt_lm);
      single.gen_frames = as_path(e_gen_fr);
      single.gt_frames = as_path(e_gt_fr);
      single.gen_features = as_path(e_gen_ft);
      single.gt_features = as_path(e_gt_ft);
      single.audio_embed = as_path(e_audio);
      single.visual_embed = as_path(e_visual);
      manifest.entries.push_back(single);
    }
    if (!run_name.empty()) manifest.name = run_name;
    manifest.options = resolve_options(g, manifest.options);
    const auto report = fteval::evaluate(manifest, g.jobs);
    if (format == "json") {
      emit(g, fteval::dump_report(report));
    } else {
      emit(g, fteval::render_table({report}, fteval::parse_table_format(format)));
    }
    return 0;
  }

  if (*table_cmd) {
    std::vector<fteval::MetricReport> reports;
    for (const auto& p : report_paths) {
      const auto text = fteval::read_file_bytes(p);
      json doc;
      try {
        doc = json::parse(text);
      } catch (const json::parse_error& e) {
        throw fteval::ParseError(fteval::ParseErrorKind::kMalformedLine,
                                 fteval::SourceLocation{p, {}, e.byte}, e.what());
      }
      reports.push_back(fteval::report_from_json(doc));
    }
    emit(g, fteval::render_table(reports, fteval::parse_table_format(g.format.value_or("markdown"))));
    return 0;
  }

  if (*synth_cmd) {
    if (*synth_lm) {
      if (!g.out) throw UsageError("synth landmarks: --out is required");
      spec.seed = seed;
      spec.width = g.width.value_or(256);
      spec.height = g.height.value_or(256);
      const auto seq = fteval::synth_landmarks(spec);
      const auto fmt = fs::path(*g.out).extension() == ".csv" ? fteval::LandmarkFormat::kCsv
                                                               : fteval::LandmarkFormat::kJsonl;
      fteval::write_landmarks(*g.out, seq, fmt);
    } else if (*synth_ft) {
      if (!g.out) throw UsageError("synth features: --out is required");
      if (mean.empty()) mean.assign(dim, 0.0);
      const auto set = fteval::synth_features(seed, rows, dim, mean, scale);
      fteval::write_features(*g.out, set, fteval::feature_format_for(*g.out));
    } else if (*synth_fr) {
      if (!g.out) throw UsageError("synth frames: --out directory is required");
      const auto frames = fteval::synth_frames(seed, frame_count, g.width.value_or(64),
                                               g.height.value_or(64), channels);
      fteval::write_frames(*g.out, frames);
    } else if (*synth_em) {
      const auto [audio, visual] = fteval::synth_embedding_pair(seed, frame_count, dim, shift);
      auto to_set = [](const fteval::EmbeddingStream& s) {
        std::vector<double> values;
        for (std::size_t t = 0; t < s.size(); ++t) {
          const auto v = s.vector(t);
          values.insert(values.end(), v.begin(), v.end());
        }
        return fteval::FeatureSet(s.size(), s.dim(), std::move(values));
      };
      fteval::write_features(audio_out, to_set(audio), fteval::feature_format_for(audio_out));
      fteval::write_features(visual_out, to_set(visual), fteval::feature_format_for(visual_out));
    }
    return 0;
  }
  return 1;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 1;
  } catch (const fteval::PreconditionError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const fteval::InputError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 2;
  }
}
