#include "dicer/sim/image.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace dicer {

FrameBuffer::FrameBuffer(int width, int height, std::vector<std::uint8_t> pixels, int channel,
                         std::uint64_t capture_tick)
    : width_(width), height_(height), channel_(channel), capture_tick_(capture_tick) {
  if (width < 0 || height < 0 ||
      pixels.size() != static_cast<std::size_t>(width) * static_cast<std::size_t>(height)) {
    throw std::invalid_argument("frame dimensions do not match pixel count");
  }
  storage_ = std::make_shared<Storage>();
  storage_->pixels = std::move(pixels);
  std::call_once(storage_->once, [] {});
}

FrameBuffer FrameBuffer::deferred(int width, int height, int channel, std::uint64_t capture_tick,
                                  Renderer render) {
  FrameBuffer f;
  f.width_ = width;
  f.height_ = height;
  f.channel_ = channel;
  f.capture_tick_ = capture_tick;
  f.storage_ = std::make_shared<Storage>();
  f.storage_->render = std::move(render);
  return f;
}

FrameBuffer FrameBuffer::uniform(int width, int height, std::uint8_t value) {
  return FrameBuffer(width, height,
                     std::vector<std::uint8_t>(static_cast<std::size_t>(width) * height, value));
}

std::span<const std::uint8_t> FrameBuffer::pixels() const {
  if (!storage_) return {};
  std::call_once(storage_->once, [this] {
    storage_->pixels = storage_->render();
    storage_->render = nullptr;
    if (storage_->pixels.size() != static_cast<std::size_t>(width_) * height_) {
      throw std::logic_error("deferred frame rendered with the wrong size");
    }
  });
  return storage_->pixels;
}

bool FrameBuffer::same_pixels(const FrameBuffer& other) const {
  if (width_ != other.width_ || height_ != other.height_) return false;
  auto a = pixels();
  auto b = other.pixels();
  return std::equal(a.begin(), a.end(), b.begin(), b.end());
}

namespace {

double parabolic_offset(double left, double centre, double right) {
  const double denom = left - 2.0 * centre + right;
  if (denom >= 0.0) return 0.0;
  return std::clamp(0.5 * (left - right) / denom, -0.5, 0.5);
}

}  // namespace

PatternMatch find_pattern(const FrameBuffer& frame, const FrameBuffer& templ, double threshold) {
  const int fw = frame.width(), fh = frame.height();
  const int tw = templ.width(), th = templ.height();
  if (tw <= 0 || th <= 0 || tw > fw || th > fh) {
    throw std::invalid_argument("template must be non-empty and no larger than the frame");
  }
  const auto f = frame.pixels();
  const auto t = templ.pixels();
  const double n = static_cast<double>(tw) * th;

  std::int64_t sum_t = 0, sum_t2 = 0;
  for (auto v : t) {
    sum_t += v;
    sum_t2 += static_cast<std::int64_t>(v) * v;
  }
  const double var_t = static_cast<double>(sum_t2) - static_cast<double>(sum_t) * sum_t / n;
  PatternMatch result;
  if (var_t <= 0.0) return result;

  // Integral images of f and f^2 for the window statistics.
  const int iw = fw + 1;
  std::vector<std::int64_t> s1(static_cast<std::size_t>(iw) * (fh + 1), 0);
  std::vector<std::int64_t> s2(s1.size(), 0);
  for (int y = 0; y < fh; ++y) {
    std::int64_t row1 = 0, row2 = 0;
    for (int x = 0; x < fw; ++x) {
      const std::int64_t v = f[static_cast<std::size_t>(y) * fw + x];
      row1 += v;
      row2 += v * v;
      s1[static_cast<std::size_t>(y + 1) * iw + x + 1] = s1[static_cast<std::size_t>(y) * iw + x + 1] + row1;
      s2[static_cast<std::size_t>(y + 1) * iw + x + 1] = s2[static_cast<std::size_t>(y) * iw + x + 1] + row2;
    }
  }
  auto box = [&](const std::vector<std::int64_t>& s, int x0, int y0) {
    const std::size_t a = static_cast<std::size_t>(y0) * iw + x0;
    const std::size_t b = static_cast<std::size_t>(y0 + th) * iw + x0;
    return s[b + tw] - s[b] - s[a + tw] + s[a];
  };

  const int nx = fw - tw + 1, ny = fh - th + 1;
  std::vector<double> scores(static_cast<std::size_t>(nx) * ny, 0.0);
  double best = -2.0;
  int bx = 0, by = 0;
  for (int y0 = 0; y0 < ny; ++y0) {
    for (int x0 = 0; x0 < nx; ++x0) {
      std::uint64_t cross = 0;
      for (int ty = 0; ty < th; ++ty) {
        const std::uint8_t* fr = f.data() + static_cast<std::size_t>(y0 + ty) * fw + x0;
        const std::uint8_t* tr = t.data() + static_cast<std::size_t>(ty) * tw;
        std::uint32_t row = 0;
        for (int tx = 0; tx < tw; ++tx) row += static_cast<std::uint32_t>(fr[tx]) * tr[tx];
        cross += row;
      }
      const double sf = static_cast<double>(box(s1, x0, y0));
      const double var_f = static_cast<double>(box(s2, x0, y0)) - sf * sf / n;
      double score = 0.0;
      if (var_f > 1e-9 * n) {
        const double num = static_cast<double>(cross) - sf * static_cast<double>(sum_t) / n;
        score = num / std::sqrt(var_f * var_t);
      }
      scores[static_cast<std::size_t>(y0) * nx + x0] = score;
      if (score > best) {
        best = score;
        bx = x0;
        by = y0;
      }
    }
  }

  auto s = [&](int x, int y) { return scores[static_cast<std::size_t>(y) * nx + x]; };
  double fx = 0.0, fy = 0.0;
  if (bx > 0 && bx + 1 < nx) fx = parabolic_offset(s(bx - 1, by), best, s(bx + 1, by));
  if (by > 0 && by + 1 < ny) fy = parabolic_offset(s(bx, by - 1), best, s(bx, by + 1));

  result.dx = bx + fx + tw / 2.0 - fw / 2.0;
  result.dy = by + fy + th / 2.0 - fh / 2.0;
  result.score = std::clamp(best, 0.0, 1.0);
  result.found = result.score >= threshold;
  return result;
}

EdgeResult find_groove(const FrameBuffer& frame, GrooveAxis axis, double expected, double window,
                       double min_contrast) {
  const int w = frame.width(), h = frame.height();
  const auto px = frame.pixels();
  const bool horizontal = axis == GrooveAxis::horizontal;
  const int len = horizontal ? h : w;
  const int span = horizontal ? w : h;

  std::vector<double> profile(static_cast<std::size_t>(len), 0.0);
  for (int i = 0; i < len; ++i) {
    double sum = 0.0;
    for (int j = 0; j < span; ++j) {
      sum += horizontal ? px[static_cast<std::size_t>(i) * w + j] : px[static_cast<std::size_t>(j) * w + i];
    }
    profile[static_cast<std::size_t>(i)] = sum / span;
  }

  const double centre = len / 2.0;
  const int lo = std::max(0, static_cast<int>(std::floor(centre + expected - window - 0.5)));
  const int hi = std::min(len - 1, static_cast<int>(std::ceil(centre + expected + window - 0.5)));
  EdgeResult result;
  if (lo > hi) return result;

  std::vector<double> win(profile.begin() + lo, profile.begin() + hi + 1);
  std::vector<double> sorted = win;
  std::nth_element(sorted.begin(), sorted.begin() + sorted.size() / 2, sorted.end());
  const double baseline = sorted[sorted.size() / 2];
  const auto min_it = std::min_element(win.begin(), win.end());
  const int imin = lo + static_cast<int>(min_it - win.begin());
  result.contrast = baseline - *min_it;
  if (result.contrast < min_contrast) return result;

  // Depth-weighted centroid over the contiguous dip around the minimum.
  const double half = result.contrast / 2.0;
  double wsum = 0.0, psum = 0.0;
  for (int i = imin; i >= lo && baseline - profile[static_cast<std::size_t>(i)] >= half; --i) {
    const double d = baseline - profile[static_cast<std::size_t>(i)];
    wsum += d;
    psum += d * (i + 0.5);
  }
  for (int i = imin + 1; i <= hi && baseline - profile[static_cast<std::size_t>(i)] >= half; ++i) {
    const double d = baseline - profile[static_cast<std::size_t>(i)];
    wsum += d;
    psum += d * (i + 0.5);
  }
  result.position = psum / wsum - centre;
  result.found = true;
  return result;
}

}  // namespace dicer
