#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <mutex>
#include <span>
#include <vector>

namespace dicer {

/// 8-bit grayscale frame. Pixels may be produced lazily: a frame captured by
/// the simulated framegrabber records the scene and renders on first access,
/// so live polling stays cheap. Copies share the (immutable) pixel storage.
class FrameBuffer {
 public:
  using Renderer = std::function<std::vector<std::uint8_t>()>;

  FrameBuffer() = default;
  FrameBuffer(int width, int height, std::vector<std::uint8_t> pixels, int channel = 0,
              std::uint64_t capture_tick = 0);

  static FrameBuffer deferred(int width, int height, int channel, std::uint64_t capture_tick,
                              Renderer render);
  static FrameBuffer uniform(int width, int height, std::uint8_t value);

  int width() const { return width_; }
  int height() const { return height_; }
  int channel() const { return channel_; }
  std::uint64_t capture_tick() const { return capture_tick_; }
  bool empty() const { return width_ == 0 || height_ == 0; }

  std::span<const std::uint8_t> pixels() const;
  std::uint8_t at(int x, int y) const { return pixels()[static_cast<std::size_t>(y) * width_ + x]; }

  bool same_pixels(const FrameBuffer& other) const;

 private:
  struct Storage {
    std::once_flag once;
    Renderer render;
    std::vector<std::uint8_t> pixels;
  };

  int width_ = 0;
  int height_ = 0;
  int channel_ = 0;
  std::uint64_t capture_tick_ = 0;
  std::shared_ptr<Storage> storage_;
};

/// Result of a template search. Offsets are of the template centre relative
/// to the frame centre, in pixels, with sub-pixel refinement.
struct PatternMatch {
  double dx = 0.0;
  double dy = 0.0;
  double score = 0.0;
  bool found = false;
};

/// Exhaustive normalized cross-correlation over every placement of `templ`
/// inside `frame`. Zero-variance windows score 0.
PatternMatch find_pattern(const FrameBuffer& frame, const FrameBuffer& templ, double threshold);

enum class GrooveAxis { horizontal, vertical };

struct EdgeResult {
  double position = 0.0;  // groove centre offset from frame centre, pixels
  double contrast = 0.0;
  bool found = false;
};

/// Locates a dark straight groove running along `axis` by averaging the
/// frame along the groove and searching the cross profile within
/// [expected - window, expected + window] pixels of the frame centre.
EdgeResult find_groove(const FrameBuffer& frame, GrooveAxis axis, double expected, double window,
                       double min_contrast);

}  // namespace dicer
