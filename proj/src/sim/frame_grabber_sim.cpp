#include "dicer/sim/frame_grabber_sim.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace dicer {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

double pixel_noise(std::uint64_t seed, int channel, int x, int y, double amplitude) {
  if (amplitude == 0.0) return 0.0;
  const std::uint64_t h = splitmix64(seed ^ (static_cast<std::uint64_t>(channel) << 40) ^
                                     (static_cast<std::uint64_t>(y) << 20) ^ static_cast<std::uint64_t>(x));
  const double u = static_cast<double>(h >> 11) * (1.0 / 9007199254740992.0);
  return (2.0 * u - 1.0) * amplitude;
}

std::uint8_t to_gray(double v) { return static_cast<std::uint8_t>(std::clamp(std::lround(v), 0L, 255L)); }

bool cut_near(const CutRecordEntry& c, Vec2 centre, double r) {
  const double across = c.direction == CutDirection::x_pass ? centre.y : centre.x;
  const double along = c.direction == CutDirection::x_pass ? centre.x : centre.y;
  return std::abs(across - c.coordinate) <= r && c.to >= along - r && c.from <= along + r;
}

}  // namespace

void check_channel(int channel) {
  if (channel < 0 || channel >= FrameGrabberSim::kChannels) throw std::out_of_range("camera channel out of range");
}

FrameGrabberSim::FrameGrabberSim(const std::array<CameraConfig, kChannels>& cameras, const ImageConfig& image)
    : cameras_(cameras), image_(image) {}

FrameBuffer FrameGrabberSim::capture(int channel, const WaferSim& wafer, Vec2 stage, double theta_deg,
                                     std::uint64_t tick) {
  check_channel(channel);
  const CameraConfig cam = camera(channel);
  auto& st = status_[static_cast<std::size_t>(channel)];
  st.acquiring = true;
  st.frame_count++;
  st.last_capture_tick = tick;

  if (dark_[static_cast<std::size_t>(channel)]) {
    return FrameBuffer(cam.width, cam.height,
                       std::vector<std::uint8_t>(static_cast<std::size_t>(cam.width) * cam.height, 8), channel,
                       tick);
  }

  // Scene is frozen now; pixels are produced on first use.
  WaferSim scene(wafer.geometry(), wafer.misalignment());
  scene.set_blank(wafer.blank());
  const Vec2 centre = wafer.machine_to_wafer(cam.station(), stage, theta_deg);
  const double reach = std::hypot(cam.width, cam.height) * cam.mm_per_px / 2.0 + wafer.geometry().kerf_width;
  std::vector<CutRecordEntry> cuts;
  for (const auto& c : wafer.cuts()) {
    if (cut_near(c, centre, reach)) cuts.push_back(c);
  }
  const ImageConfig img = image_;
  const double total_deg = theta_deg + wafer.misalignment().dtheta_deg;

  return FrameBuffer::deferred(cam.width, cam.height, channel, tick,
                               [scene, cuts, cam, img, centre, total_deg, channel] {
    const int n = std::max(1, img.supersample);
    const double s = cam.mm_per_px;
    const double rad = deg_to_rad(-total_deg);
    const double c = std::cos(rad), sn = std::sin(rad);
    std::vector<std::uint8_t> px(static_cast<std::size_t>(cam.width) * cam.height);
    for (int y = 0; y < cam.height; ++y) {
      for (int x = 0; x < cam.width; ++x) {
        double sum = 0.0;
        for (int ky = 0; ky < n; ++ky) {
          const double oy = (y + (ky + 0.5) / n - cam.height / 2.0) * s;
          for (int kx = 0; kx < n; ++kx) {
            const double ox = (x + (kx + 0.5) / n - cam.width / 2.0) * s;
            const Vec2 w{centre.x + c * ox - sn * oy, centre.y + sn * ox + c * oy};
            sum += scene.shade_at(w, cuts);
          }
        }
        const double v = sum / (n * n) + pixel_noise(img.noise_seed, channel, x, y, img.noise_amplitude);
        px[static_cast<std::size_t>(y) * cam.width + x] = to_gray(v);
      }
    }
    return px;
  });
}

FgStatus FrameGrabberSim::status(int channel) const {
  check_channel(channel);
  return status_[static_cast<std::size_t>(channel)];
}

FrameBuffer FrameGrabberSim::make_fiducial_template(int channel, const WaferGeometry& g) const {
  const CameraConfig& cam = camera(channel);
  const int tw = cam.template_px;
  const int n = std::max(1, image_.supersample);
  std::vector<std::uint8_t> px(static_cast<std::size_t>(tw) * tw);
  for (int y = 0; y < tw; ++y) {
    for (int x = 0; x < tw; ++x) {
      double sum = 0.0;
      for (int ky = 0; ky < n; ++ky) {
        for (int kx = 0; kx < n; ++kx) {
          const Vec2 p{(x + (kx + 0.5) / n - tw / 2.0) * cam.mm_per_px, (y + (ky + 0.5) / n - tw / 2.0) * cam.mm_per_px};
          sum += WaferSim::in_cross(p, g) ? shade::fiducial : shade::wafer;
        }
      }
      px[static_cast<std::size_t>(y) * tw + x] = to_gray(sum / (n * n));
    }
  }
  return FrameBuffer(tw, tw, std::move(px), channel);
}

}  // namespace dicer
