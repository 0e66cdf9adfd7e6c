#pragma once

#include <array>
#include <cstdint>

#include "dicer/sim/config.hpp"
#include "dicer/sim/image.hpp"
#include "dicer/sim/wafer_sim.hpp"

namespace dicer {

struct FgStatus {
  bool acquiring = false;
  std::uint64_t frame_count = 0;
  std::uint64_t last_capture_tick = 0;
};

// Two-camera framegrabber looking down on the chuck. Pixel x follows machine
// +x and pixel y follows machine +y; the optical axis sits between the four
// centre pixels.
class FrameGrabberSim {
 public:
  static constexpr int kChannels = 2;

  FrameGrabberSim(const std::array<CameraConfig, kChannels>& cameras, const ImageConfig& image);

  FrameBuffer capture(int channel, const WaferSim& wafer, Vec2 stage, double theta_deg, std::uint64_t tick);
  FgStatus status(int channel) const;

  FrameBuffer make_fiducial_template(int channel, const WaferGeometry& g) const;

  const CameraConfig& camera(int channel) const { return cameras_.at(static_cast<std::size_t>(channel)); }
  const ImageConfig& image() const { return image_; }

  // Harness fault: a dark camera returns a flat frame.
  void set_dark(int channel, bool dark) { dark_.at(static_cast<std::size_t>(channel)) = dark; }

 private:
  std::array<CameraConfig, kChannels> cameras_;
  ImageConfig image_;
  std::array<FgStatus, kChannels> status_{};
  std::array<bool, kChannels> dark_{};
};

void check_channel(int channel);

}  // namespace dicer
