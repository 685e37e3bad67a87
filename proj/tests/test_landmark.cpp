#include <doctest.h>

#include <fstream>
#include <random>

#include "fteval/errors.hpp"
#include "fteval/landmark_metrics.hpp"
#include "fteval/synth.hpp"
#include "test_support.hpp"

using namespace fteval;
using fteval::testing::make_sequence;
using fteval::testing::random_table;
using fteval::testing::TempDir;

namespace {

LandmarkSequence face(std::uint64_t seed, std::size_t frames) {
  return synth_landmarks(SynthSpec{.seed = seed, .frames = frames, .landmarks = 68,
                                   .head_drift = {3.0, 20.0}, .mouth_open = {0.0, 1.0, 0.2},
                                   .jitter_sigma = 0.5});
}

}  // namespace

TEST_CASE("LMD identity is exactly zero") {
  const auto s = face(1, 8);
  const auto r = lmd(s, s, LandmarkScheme::ibug68());
  CHECK(r.f_lmd == 0.0);
  CHECK(r.m_lmd == 0.0);
  CHECK(r.per_frame.size() == 8);
}

TEST_CASE("LMD uniform offset gives the offset length") {
  const auto gt = face(2, 6);
  const auto gen = perturb(gt, Translate{{3.0, 0.0}});
  const auto r = lmd(gen, gt, LandmarkScheme::ibug68());
  CHECK(std::abs(r.f_lmd - 3.0) <= 1e-9);
  CHECK(std::abs(r.m_lmd - 3.0) <= 1e-9);

  const auto diag = lmd(perturb(gt, Translate{{3.0, 4.0}}), gt, LandmarkScheme::ibug68());
  CHECK(std::abs(diag.f_lmd - 5.0) <= 1e-9);
}

TEST_CASE("LMD mouth-only displacement weights by mouth share") {
  const auto gt = face(3, 4);
  std::vector<FrameLandmarks> frames;
  for (std::size_t t = 0; t < gt.frame_count(); ++t) {
    auto f = gt.frame(t);
    for (std::size_t i = 48; i < 68; ++i) f.points[i].y += 2.0;
    frames.push_back(f);
  }
  const LandmarkSequence gen(frames, gt.width(), gt.height());
  const auto r = lmd(gen, gt, LandmarkScheme::ibug68());
  CHECK(std::abs(r.m_lmd - 2.0) <= 1e-9);
  CHECK(std::abs(r.f_lmd - 2.0 * 20.0 / 68.0) <= 1e-9);
  CHECK(r.f_lmd == doctest::Approx(0.5882).epsilon(1e-4));
}

TEST_CASE("LMD symmetry and triangle bound") {
  std::mt19937_64 rng(17);
  const LandmarkScheme scheme{"small", 6, {4, 5}};
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t frames = 1 + rng() % 6;
    const auto a = make_sequence(random_table(rng, frames, 6, 80), 80, 80);
    const auto b = make_sequence(random_table(rng, frames, 6, 80), 80, 80);
    const auto c = make_sequence(random_table(rng, frames, 6, 80), 80, 80);
    const auto ab = lmd(a, b, scheme);
    const auto ba = lmd(b, a, scheme);
    CHECK(ab.f_lmd == ba.f_lmd);
    CHECK(ab.m_lmd == ba.m_lmd);
    const auto ac = lmd(a, c, scheme);
    const auto bc = lmd(b, c, scheme);
    CHECK(ac.f_lmd <= ab.f_lmd + bc.f_lmd + 1e-12);
    CHECK(ac.m_lmd <= ab.m_lmd + bc.m_lmd + 1e-12);
    CHECK(ab.f_lmd >= 0.0);
  }
}

TEST_CASE("LMD rejects a scheme sized for a different landmark count") {
  const auto s = make_sequence({{{1, 1}, {2, 2}, {3, 3}, {4, 4}}}, 10, 10);
  CHECK_THROWS_AS(lmd(s, s, LandmarkScheme::ibug68()), PreconditionError);
}

TEST_CASE("scheme resolution") {
  CHECK(resolve_scheme("ibug68", std::nullopt).mouth_indices.size() == 20);

  SUBCASE("generic needs indices and a count") {
    CHECK_THROWS_AS(resolve_scheme("generic", std::nullopt), PreconditionError);
    const auto g = resolve_scheme("generic", std::nullopt, {2, 3}, 4);
    CHECK(g.total == 4);
    CHECK(g.mouth_indices == std::vector<std::size_t>{2, 3});
  }
  SUBCASE("explicit indices override a named scheme") {
    const auto s = resolve_scheme("ibug68", std::nullopt, {60, 61});
    CHECK(s.mouth_indices == std::vector<std::size_t>{60, 61});
  }
  SUBCASE("scheme files by path and by directory") {
    TempDir dir;
    std::ofstream(dir / "five.json") << R"({"name": "five", "total": 5, "mouth_indices": [3, 4]})";
    const auto by_path = resolve_scheme((dir / "five.json").string(), std::nullopt);
    CHECK(by_path.name == "five");
    CHECK(by_path.total == 5);
    const auto by_name = resolve_scheme("five", dir.path());
    CHECK(by_name.mouth_indices == std::vector<std::size_t>{3, 4});
    CHECK_THROWS(resolve_scheme("missing", dir.path()));
  }
  SUBCASE("invalid scheme file") {
    TempDir dir;
    std::ofstream(dir / "bad.json") << R"({"name": "bad", "total": 3, "mouth_indices": [7]})";
    CHECK_THROWS(resolve_scheme((dir / "bad.json").string(), std::nullopt));
  }
}
