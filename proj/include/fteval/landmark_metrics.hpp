#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "fteval/core.hpp"

namespace fteval {

struct LmdFrame {
  double full = 0.0;
  double mouth = 0.0;
};

/// Landmark distances in raw pixels, lower is better.
struct LmdResult {
  double f_lmd = 0.0;
  double m_lmd = 0.0;
  std::vector<LmdFrame> per_frame;
};

/// F-LMD averages per-landmark Euclidean error over every frame and
/// landmark; M-LMD does the same over `scheme.mouth_indices` only.
LmdResult lmd(const LandmarkSequence& gen, const LandmarkSequence& gt,
              const LandmarkScheme& scheme);

/// Reads {"name": ..., "total": ..., "mouth_indices": [...]}.
LandmarkScheme load_scheme(const std::filesystem::path& path);

/// Resolves a --scheme argument: a built-in name ("ibug68"), a path to a
/// scheme file, or `<scheme_dir>/<name>.json`. "generic" needs
/// `mouth_indices` and a landmark count.
LandmarkScheme resolve_scheme(const std::string& name_or_path,
                              const std::optional<std::filesystem::path>& scheme_dir,
                              const std::vector<std::size_t>& mouth_indices = {},
                              std::optional<std::size_t> total = std::nullopt);

}  // namespace fteval
