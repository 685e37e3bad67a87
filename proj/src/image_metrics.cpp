#include "fteval/image_metrics.hpp"

#include <cmath>

#include "fteval/errors.hpp"

namespace fteval {

namespace {

void check_comparable(const FrameSource& gen, const FrameSource& gt, const char* metric) {
  if (gen.width() != gt.width() || gen.height() != gt.height() ||
      gen.channels() != gt.channels()) {
    throw PreconditionError(std::string(metric) + ": frame geometry differs (" +
                            std::to_string(gen.width()) + "x" + std::to_string(gen.height()) +
                            "x" + std::to_string(gen.channels()) + " vs " +
                            std::to_string(gt.width()) + "x" + std::to_string(gt.height()) +
                            "x" + std::to_string(gt.channels()) + ")");
  }
  if (gen.frame_count() != gt.frame_count()) {
    throw PreconditionError(std::string(metric) + ": frame counts differ (" +
                            std::to_string(gen.frame_count()) + " vs " +
                            std::to_string(gt.frame_count()) + ")");
  }
}

/// Separable valid-region filter: output is (width-10) x (height-10).
std::vector<double> filter_valid(std::span<const double> plane, int width, int height,
                                 const std::vector<double>& window) {
  const int k = SsimParams::kWindow;
  const int out_w = width - k + 1;
  const int out_h = height - k + 1;
  std::vector<double> rows(static_cast<std::size_t>(out_w) * height);
  for (int y = 0; y < height; ++y) {
    const double* src = plane.data() + static_cast<std::size_t>(y) * width;
    double* dst = rows.data() + static_cast<std::size_t>(y) * out_w;
    for (int x = 0; x < out_w; ++x) {
      double acc = 0.0;
      for (int j = 0; j < k; ++j) acc += window[j] * src[x + j];
      dst[x] = acc;
    }
  }
  std::vector<double> out(static_cast<std::size_t>(out_w) * out_h);
  for (int y = 0; y < out_h; ++y) {
    for (int x = 0; x < out_w; ++x) {
      double acc = 0.0;
      for (int j = 0; j < k; ++j) {
        acc += window[j] * rows[static_cast<std::size_t>(y + j) * out_w + x];
      }
      out[static_cast<std::size_t>(y) * out_w + x] = acc;
    }
  }
  return out;
}

}  // namespace

PsnrValue psnr_frame(std::span<const std::uint8_t> gen, std::span<const std::uint8_t> gt) {
  if (gen.size() != gt.size() || gen.empty()) {
    throw PreconditionError("PSNR: frames differ in size");
  }
  std::uint64_t sq = 0;
  for (std::size_t i = 0; i < gen.size(); ++i) {
    const int d = static_cast<int>(gen[i]) - static_cast<int>(gt[i]);
    sq += static_cast<std::uint64_t>(d * d);
  }
  if (sq == 0) return PsnrValue{};
  const double mse = static_cast<double>(sq) / static_cast<double>(gen.size());
  return PsnrValue{10.0 * std::log10(255.0 * 255.0 / mse)};
}

PsnrResult psnr(const FrameSource& gen, const FrameSource& gt) {
  check_comparable(gen, gt, "PSNR");
  PsnrResult out;
  double sum = 0.0;
  std::size_t counted = 0;
  for (std::size_t t = 0; t < gt.frame_count(); ++t) {
    const auto v = psnr_frame(gen.frames()[t], gt.frames()[t]);
    if (v.identical()) {
      ++out.identical_frames;
    } else {
      sum += *v.db;
      ++counted;
    }
    out.per_frame.push_back(v);
  }
  if (counted > 0) out.mean_db = sum / static_cast<double>(counted);
  return out;
}

std::vector<double> to_luma(std::span<const std::uint8_t> frame, int width, int height,
                            int channels) {
  const std::size_t pixels = static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
  if (frame.size() != pixels * static_cast<std::size_t>(channels)) {
    throw PreconditionError("luma: frame size does not match its geometry");
  }
  std::vector<double> luma(pixels);
  if (channels == 1) {
    for (std::size_t i = 0; i < pixels; ++i) luma[i] = frame[i];
    return luma;
  }
  for (std::size_t i = 0; i < pixels; ++i) {
    luma[i] = 0.299 * frame[3 * i] + 0.587 * frame[3 * i + 1] + 0.114 * frame[3 * i + 2];
  }
  return luma;
}

std::vector<double> gaussian_window() {
  const int k = SsimParams::kWindow;
  const double sigma = SsimParams::kSigma;
  std::vector<double> w(k);
  double sum = 0.0;
  for (int i = 0; i < k; ++i) {
    const double x = i - k / 2;
    w[i] = std::exp(-(x * x) / (2.0 * sigma * sigma));
    sum += w[i];
  }
  for (auto& v : w) v /= sum;
  return w;
}

double ssim_plane(std::span<const double> gen, std::span<const double> gt, int width,
                  int height) {
  const int k = SsimParams::kWindow;
  if (width < k || height < k) {
    throw PreconditionError("SSIM: frames must be at least 11x11, got " + std::to_string(width) +
                            "x" + std::to_string(height));
  }
  const std::size_t pixels = static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
  if (gen.size() != pixels || gt.size() != pixels) {
    throw PreconditionError("SSIM: planes do not match their geometry");
  }
  const auto window = gaussian_window();
  std::vector<double> gen_sq(pixels), gt_sq(pixels), cross(pixels);
  for (std::size_t i = 0; i < pixels; ++i) {
    gen_sq[i] = gen[i] * gen[i];
    gt_sq[i] = gt[i] * gt[i];
    cross[i] = gen[i] * gt[i];
  }
  const auto mu_a = filter_valid(gen, width, height, window);
  const auto mu_b = filter_valid(gt, width, height, window);
  const auto e_aa = filter_valid(gen_sq, width, height, window);
  const auto e_bb = filter_valid(gt_sq, width, height, window);
  const auto e_ab = filter_valid(cross, width, height, window);

  const double c1 = (SsimParams::kK1 * SsimParams::kPeak) * (SsimParams::kK1 * SsimParams::kPeak);
  const double c2 = (SsimParams::kK2 * SsimParams::kPeak) * (SsimParams::kK2 * SsimParams::kPeak);
  double total = 0.0;
  for (std::size_t i = 0; i < mu_a.size(); ++i) {
    const double ma = mu_a[i];
    const double mb = mu_b[i];
    const double var_a = e_aa[i] - ma * ma;
    const double var_b = e_bb[i] - mb * mb;
    const double cov = e_ab[i] - ma * mb;
    const double num = (2.0 * ma * mb + c1) * (2.0 * cov + c2);
    const double den = (ma * ma + mb * mb + c1) * (var_a + var_b + c2);
    total += num / den;
  }
  return total / static_cast<double>(mu_a.size());
}

SsimResult ssim(const FrameSource& gen, const FrameSource& gt) {
  check_comparable(gen, gt, "SSIM");
  if (gt.width() < SsimParams::kWindow || gt.height() < SsimParams::kWindow) {
    throw PreconditionError("SSIM: frames must be at least 11x11, got " +
                            std::to_string(gt.width()) + "x" + std::to_string(gt.height()));
  }
  SsimResult out;
  double sum = 0.0;
  for (std::size_t t = 0; t < gt.frame_count(); ++t) {
    const auto a = to_luma(gen.frames()[t], gen.width(), gen.height(), gen.channels());
    const auto b = to_luma(gt.frames()[t], gt.width(), gt.height(), gt.channels());
    const double v = ssim_plane(a, b, gt.width(), gt.height());
    out.per_frame.push_back(v);
    sum += v;
  }
  out.mean = sum / static_cast<double>(gt.frame_count());
  return out;
}

ImageMetricResult image_metrics(const FrameSource& gen, const FrameSource& gt) {
  return ImageMetricResult{psnr(gen, gt), ssim(gen, gt)};
}

}  // namespace fteval
