#pragma once

// On-disk fixture sets for manifest-level tests.

#include <filesystem>
#include <string>

#include <json.hpp>

#include "fteval/ingest.hpp"
#include "fteval/synth.hpp"

namespace fteval::testing {

/// Writes `count` entries with landmarks, frames, features and embeddings
/// under `dir` and returns the manifest document (paths relative to `dir`).
/// Entry i uses perturbations that grow with i so aggregates are non-trivial.
inline nlohmann::json write_fixture_set(const std::filesystem::path& dir, std::size_t count,
                                        std::uint64_t seed = 0) {
  namespace fs = std::filesystem;
  fs::create_directories(dir);
  nlohmann::json entries = nlohmann::json::array();
  for (std::size_t i = 0; i < count; ++i) {
    const std::string id = "clip" + std::to_string(i);
    const fs::path sub = dir / id;
    fs::create_directories(sub);
    const std::uint64_t s = seed * 1000 + i;

    const SynthSpec spec{.seed = s, .frames = 12, .landmarks = 68, .head_drift = {3.0, 10.0},
                         .mouth_open = {0.0, 0.9, 0.2, 0.7}};
    const auto gt = synth_landmarks(spec);
    const auto gen = perturb(perturb(gt, Jitter{0.5 + 0.25 * static_cast<double>(i), s + 7}),
                             Translate{{static_cast<double>(i), 0.0}});
    write_landmarks(sub / "gt.jsonl", gt, LandmarkFormat::kJsonl);
    write_landmarks(sub / "gen.jsonl", gen, LandmarkFormat::kJsonl);

    write_frames(sub / "gt_frames", synth_frames(s, 2, 24, 24, 3));
    write_frames(sub / "gen_frames", synth_frames(s + 500, 2, 24, 24, 3));

    std::vector<double> mean(4, 0.0);
    mean[0] = 0.5 * static_cast<double>(i);
    write_features(sub / "gt.ftev", synth_features(s, 200, 4, std::vector<double>(4, 0.0), 1.0),
                   FeatureFormat::kFtev);
    write_features(sub / "gen.ftev", synth_features(s + 1, 200, 4, mean, 1.0),
                   FeatureFormat::kFtev);

    const auto [audio, visual] = synth_embedding_pair(s, 40, 8, static_cast<long>(i % 4));
    auto to_set = [](const EmbeddingStream& st) {
      std::vector<double> v;
      for (std::size_t t = 0; t < st.size(); ++t) {
        const auto row = st.vector(t);
        v.insert(v.end(), row.begin(), row.end());
      }
      return FeatureSet(st.size(), st.dim(), std::move(v));
    };
    write_features(sub / "audio.ftev", to_set(audio), FeatureFormat::kFtev);
    write_features(sub / "visual.ftev", to_set(visual), FeatureFormat::kFtev);

    entries.push_back({{"id", id},
                       {"gen_landmarks", id + "/gen.jsonl"},
                       {"gt_landmarks", id + "/gt.jsonl"},
                       {"gen_frames", id + "/gen_frames"},
                       {"gt_frames", id + "/gt_frames"},
                       {"gen_features", id + "/gen.ftev"},
                       {"gt_features", id + "/gt.ftev"},
                       {"audio_embed", id + "/audio.ftev"},
                       {"visual_embed", id + "/visual.ftev"}});
  }
  return {{"name", "fixture"}, {"options", {{"max_offset", 5}}}, {"entries", entries}};
}

}  // namespace fteval::testing
