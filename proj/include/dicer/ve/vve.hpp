#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>

#include "dicer/sim/equipment.hpp"

namespace dicer {

struct ChannelStatus {
  bool live = false;
  bool acquiring = false;
  FrameBuffer last_frame;
  std::uint64_t frame_count = 0;
  std::optional<double> score;  // only after a find on the current frame
  double found_dx = 0.0;        // px
  double found_dy = 0.0;
  bool found = false;
  double edge_position = 0.0;  // px
  double edge_contrast = 0.0;
  bool edge_found = false;
  double processing_time_s = 0.0;
  std::uint64_t not_found_count = 0;
  std::uint64_t last_update_tick = 0;
};

// Virtual vision equipment.
class Vve {
 public:
  static constexpr int kChannels = FrameGrabberSim::kChannels;

  explicit Vve(PhysicalEquipment& pe);

  void register_template(const std::string& id, FrameBuffer templ);
  bool has_template(const std::string& id) const { return templates_.count(id) != 0; }

  void set_live(int channel, bool on);
  bool live(int channel) const { return status(channel).live; }
  std::size_t live_count() const;

  // Live monitoring: capture plus acquisition status for every live channel.
  void poll_live();

  PatternMatch capture_and_find(int channel, const std::string& template_id);
  EdgeResult capture_and_find_edge(int channel, GrooveAxis axis, double expected_px, double window_px);

  const ChannelStatus& status(int channel) const;
  const std::array<ChannelStatus, kChannels>& channels() const { return status_; }
  std::uint64_t not_found_total() const;

 private:
  void capture(int channel);

  PhysicalEquipment& pe_;
  std::map<std::string, FrameBuffer> templates_;
  std::array<ChannelStatus, kChannels> status_{};
};

}  // namespace dicer
