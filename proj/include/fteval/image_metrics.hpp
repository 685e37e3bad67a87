#pragma once

#include <optional>
#include <span>
#include <vector>

#include "fteval/core.hpp"

namespace fteval {

/// PSNR of one frame; `db` is empty when the frames are identical (MSE = 0).
struct PsnrValue {
  std::optional<double> db;

  bool identical() const noexcept { return !db.has_value(); }
};

struct PsnrResult {
  std::vector<PsnrValue> per_frame;
  /// Mean over non-identical frames; empty when every frame is identical.
  std::optional<double> mean_db;
  std::size_t identical_frames = 0;
};

struct SsimResult {
  std::vector<double> per_frame;
  double mean = 0.0;
};

struct ImageMetricResult {
  PsnrResult psnr;
  SsimResult ssim;
};

struct SsimParams {
  static constexpr int kWindow = 11;
  static constexpr double kSigma = 1.5;
  static constexpr double kK1 = 0.01;
  static constexpr double kK2 = 0.03;
  static constexpr double kPeak = 255.0;
};

/// 10 log10(255^2 / MSE) with MSE taken over all channels.
PsnrValue psnr_frame(std::span<const std::uint8_t> gen, std::span<const std::uint8_t> gt);
PsnrResult psnr(const FrameSource& gen, const FrameSource& gt);

/// Rec. 601 luma plane of a frame (returned as-is for 1 channel).
std::vector<double> to_luma(std::span<const std::uint8_t> frame, int width, int height,
                            int channels);

/// Normalised 11-tap Gaussian, sigma 1.5.
std::vector<double> gaussian_window();

/// Single-scale SSIM on two luma planes: 11x11 Gaussian window, valid
/// positions only, mean of the SSIM map.
double ssim_plane(std::span<const double> gen, std::span<const double> gt, int width,
                  int height);
SsimResult ssim(const FrameSource& gen, const FrameSource& gt);

ImageMetricResult image_metrics(const FrameSource& gen, const FrameSource& gt);

}  // namespace fteval
