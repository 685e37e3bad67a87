#include <doctest.h>

#include <cmath>
#include <random>

#include "fteval/errors.hpp"
#include "fteval/image_metrics.hpp"
#include "fteval/synth.hpp"
#include "test_support.hpp"

using namespace fteval;
using fteval::testing::oracle_ssim;

namespace {

FrameSource constant(std::size_t count, int w, int h, int channels, std::uint8_t v) {
  std::vector<FrameSource::Raster> rasters(
      count, FrameSource::Raster(static_cast<std::size_t>(w) * h * channels, v));
  return FrameSource(std::move(rasters), w, h, channels);
}

std::vector<double> plane(const FrameSource& f, std::size_t t) {
  return to_luma(f.frames()[t], f.width(), f.height(), f.channels());
}

}  // namespace

TEST_CASE("PSNR closed forms") {
  SUBCASE("identical frames give the sentinel") {
    const auto a = constant(3, 8, 8, 3, 77);
    const auto r = psnr(a, a);
    CHECK(r.identical_frames == 3);
    CHECK_FALSE(r.mean_db.has_value());
    for (const auto& v : r.per_frame) CHECK(v.identical());
  }
  SUBCASE("uniform difference of one level") {
    const auto r = psnr(constant(2, 16, 16, 3, 101), constant(2, 16, 16, 3, 100));
    REQUIRE(r.mean_db.has_value());
    CHECK(std::abs(*r.mean_db - 20.0 * std::log10(255.0)) <= 1e-9);
    CHECK(std::abs(*r.mean_db - 48.1308) <= 1e-3);
  }
  SUBCASE("black vs white is 0 dB") {
    const auto r = psnr(constant(1, 4, 4, 1, 0), constant(1, 4, 4, 1, 255));
    CHECK(std::abs(*r.mean_db) <= 1e-12);
  }
  SUBCASE("identical frames are excluded from the mean") {
    std::vector<FrameSource::Raster> gen = {FrameSource::Raster(16, 5), FrameSource::Raster(16, 6)};
    std::vector<FrameSource::Raster> gt = {FrameSource::Raster(16, 5), FrameSource::Raster(16, 5)};
    const auto r = psnr(FrameSource(gen, 4, 4, 1), FrameSource(gt, 4, 4, 1));
    CHECK(r.identical_frames == 1);
    CHECK(std::abs(*r.mean_db - 20.0 * std::log10(255.0)) <= 1e-9);
  }
  SUBCASE("mismatches") {
    CHECK_THROWS_AS(psnr(constant(2, 4, 4, 1, 0), constant(3, 4, 4, 1, 0)), PreconditionError);
    CHECK_THROWS_AS(psnr(constant(1, 4, 4, 1, 0), constant(1, 4, 5, 1, 0)), PreconditionError);
    CHECK_THROWS_AS(psnr(constant(1, 4, 4, 1, 0), constant(1, 4, 4, 3, 0)), PreconditionError);
  }
}

TEST_CASE("Gaussian window") {
  const auto g = gaussian_window();
  REQUIRE(g.size() == 11);
  double sum = 0.0;
  for (double v : g) sum += v;
  CHECK(sum == doctest::Approx(1.0).epsilon(1e-15));
  for (int i = 0; i < 5; ++i) CHECK(g[i] == g[10 - i]);
  CHECK(g[5] > g[4]);
}

TEST_CASE("SSIM closed forms") {
  SUBCASE("constant 0 vs 255") {
    const double expected = 6.5025 / 65031.5025;
    const auto r = ssim(constant(1, 16, 16, 1, 0), constant(1, 16, 16, 1, 255));
    CHECK(std::abs(r.mean - expected) <= 1e-12);
    CHECK(std::abs(r.mean - 9.999e-5) <= 1e-7);
  }
  SUBCASE("constant 127 vs 128") {
    const double expected = (2.0 * 127 * 128 + 6.5025) / (127.0 * 127 + 128.0 * 128 + 6.5025);
    const auto r = ssim(constant(1, 16, 16, 1, 127), constant(1, 16, 16, 1, 128));
    CHECK(std::abs(r.mean - expected) <= 1e-12);
    CHECK(r.mean == doctest::Approx(0.99996925).epsilon(1e-8));
  }
  SUBCASE("RGB luma of a grey frame is the grey level") {
    const auto r = ssim(constant(1, 12, 12, 3, 0), constant(1, 12, 12, 3, 255));
    CHECK(std::abs(r.mean - 6.5025 / 65031.5025) <= 1e-9);
  }
  SUBCASE("window larger than the frame") {
    CHECK_THROWS_AS(ssim(constant(1, 10, 16, 1, 0), constant(1, 10, 16, 1, 0)),
                    PreconditionError);
  }
}

TEST_CASE("SSIM identity, symmetry and range on noise frames") {
  for (std::uint64_t seed = 0; seed < 8; ++seed) {
    const auto a = synth_frames(seed, 2, 32, 24, seed % 2 ? 3 : 1);
    const auto b = synth_frames(seed + 100, 2, 32, 24, seed % 2 ? 3 : 1);
    CHECK(std::abs(ssim(a, a).mean - 1.0) <= 1e-9);
    const double ab = ssim(a, b).mean;
    const double ba = ssim(b, a).mean;
    CHECK(std::abs(ab - ba) <= 1e-12);
    CHECK(ab <= 1.0);
    CHECK(ab >= -1.0);
  }
}

TEST_CASE("separable SSIM agrees with a direct 2-D window") {
  for (std::uint64_t seed = 0; seed < 4; ++seed) {
    const auto a = synth_frames(seed, 1, 20, 17, 1);
    // Correlated partner so the value is far from 0.
    const auto& raster = a.frames()[0];
    std::vector<std::uint8_t> shifted(raster.begin(), raster.end());
    PortableRng rng(seed);
    for (auto& v : shifted) v = static_cast<std::uint8_t>(std::min(255.0, v * 0.8 + 30 * rng.uniform()));
    const FrameSource b({shifted}, 20, 17, 1);
    const double got = ssim(a, b).mean;
    const double want = oracle_ssim(plane(a, 0), plane(b, 0), 20, 17);
    CHECK(std::abs(got - want) <= 1e-10);
  }
}

TEST_CASE("luma conversion") {
  const std::vector<std::uint8_t> rgb = {255, 0, 0, 0, 255, 0, 0, 0, 255, 10, 10, 10};
  const auto y = to_luma(rgb, 4, 1, 3);
  CHECK(y[0] == doctest::Approx(0.299 * 255));
  CHECK(y[1] == doctest::Approx(0.587 * 255));
  CHECK(y[2] == doctest::Approx(0.114 * 255));
  CHECK(y[3] == doctest::Approx(10.0).epsilon(1e-12));
}
