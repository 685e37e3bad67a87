#include "fteval/landmark_metrics.hpp"

#include <json.hpp>

#include "fteval/errors.hpp"
#include "fteval/ingest.hpp"

namespace fteval {

namespace fs = std::filesystem;

LmdResult lmd(const LandmarkSequence& gen, const LandmarkSequence& gt,
              const LandmarkScheme& scheme) {
  scheme.validate();
  if (gen.frame_count() != gt.frame_count() || gen.landmark_count() != gt.landmark_count()) {
    throw PreconditionError("LMD: sequences are not aligned (validate the pair first)");
  }
  if (scheme.total != gt.landmark_count()) {
    throw PreconditionError("LMD: scheme '" + scheme.name + "' expects " +
                            std::to_string(scheme.total) + " landmarks, sequences have " +
                            std::to_string(gt.landmark_count()));
  }
  const std::size_t frames = gt.frame_count();
  const std::size_t n = gt.landmark_count();
  const std::size_t mouth_n = scheme.mouth_indices.size();

  LmdResult out;
  out.per_frame.reserve(frames);
  double full_sum = 0.0;
  double mouth_sum = 0.0;
  for (std::size_t t = 0; t < frames; ++t) {
    const auto& a = gen.frame(t).points;
    const auto& b = gt.frame(t).points;
    double full = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      full += norm(a[i] - b[i]);
    }
    double mouth = 0.0;
    for (auto i : scheme.mouth_indices) {
      mouth += norm(a[i] - b[i]);
    }
    LmdFrame f{full / static_cast<double>(n), mouth / static_cast<double>(mouth_n)};
    full_sum += f.full;
    mouth_sum += f.mouth;
    out.per_frame.push_back(f);
  }
  out.f_lmd = full_sum / static_cast<double>(frames);
  out.m_lmd = mouth_sum / static_cast<double>(frames);
  return out;
}

LandmarkScheme load_scheme(const fs::path& path) {
  const auto text = read_file_bytes(path);
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(ParseErrorKind::kMalformedLine, SourceLocation{path.string(), {}, e.byte},
                     e.what());
  }
  LandmarkScheme scheme;
  try {
    scheme.name = doc.at("name").get<std::string>();
    scheme.total = doc.at("total").get<std::size_t>();
    scheme.mouth_indices = doc.at("mouth_indices").get<std::vector<std::size_t>>();
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(ParseErrorKind::kMissingHeader, SourceLocation{path.string(), {}, {}},
                     std::string("scheme needs name, total and mouth_indices: ") + e.what());
  }
  scheme.validate();
  return scheme;
}

LandmarkScheme resolve_scheme(const std::string& name_or_path,
                              const std::optional<fs::path>& scheme_dir,
                              const std::vector<std::size_t>& mouth_indices,
                              std::optional<std::size_t> total) {
  LandmarkScheme scheme;
  if (name_or_path == "ibug68") {
    scheme = LandmarkScheme::ibug68();
  } else if (name_or_path == "generic") {
    if (mouth_indices.empty() || !total) {
      throw PreconditionError(
          "the generic scheme needs user-supplied mouth indices and a landmark count");
    }
    scheme = LandmarkScheme{"generic", *total, mouth_indices};
  } else if (fs::is_regular_file(name_or_path)) {
    scheme = load_scheme(name_or_path);
  } else if (scheme_dir && fs::is_regular_file(*scheme_dir / (name_or_path + ".json"))) {
    scheme = load_scheme(*scheme_dir / (name_or_path + ".json"));
  } else {
    throw InputError("unknown landmark scheme '" + name_or_path +
                     "' (not built in, not a file, not found in the scheme directory)");
  }
  if (!mouth_indices.empty() && name_or_path != "generic") {
    scheme.mouth_indices = mouth_indices;
  }
  scheme.validate();
  return scheme;
}

}  // namespace fteval
