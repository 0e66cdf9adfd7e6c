#include "dicer/ve/vve.hpp"

#include <stdexcept>

namespace dicer {

namespace {
constexpr double kOpsPerSecond = 2e9;
}

Vve::Vve(PhysicalEquipment& pe) : pe_(pe) {}

void Vve::register_template(const std::string& id, FrameBuffer templ) {
  if (templ.empty()) throw std::invalid_argument("empty template " + id);
  templates_[id] = std::move(templ);
}

void Vve::set_live(int channel, bool on) {
  check_channel(channel);
  status_[static_cast<std::size_t>(channel)].live = on;
}

std::size_t Vve::live_count() const {
  std::size_t n = 0;
  for (const auto& s : status_) n += s.live ? 1 : 0;
  return n;
}

const ChannelStatus& Vve::status(int channel) const {
  check_channel(channel);
  return status_[static_cast<std::size_t>(channel)];
}

std::uint64_t Vve::not_found_total() const {
  std::uint64_t n = 0;
  for (const auto& s : status_) n += s.not_found_count;
  return n;
}

void Vve::capture(int channel) {
  auto& s = status_[static_cast<std::size_t>(channel)];
  s.last_frame = pe_.pe_fg_capture(channel);
  s.score.reset();
  s.last_update_tick = pe_.tick();
}

void Vve::poll_live() {
  for (int ch = 0; ch < kChannels; ++ch) {
    auto& s = status_[static_cast<std::size_t>(ch)];
    if (!s.live) continue;
    capture(ch);
    const FgStatus st = pe_.pe_fg_read_status(ch);
    s.acquiring = st.acquiring;
    s.frame_count = st.frame_count;
  }
}

PatternMatch Vve::capture_and_find(int channel, const std::string& template_id) {
  check_channel(channel);
  auto it = templates_.find(template_id);
  if (it == templates_.end()) throw std::invalid_argument("unknown template " + template_id);
  capture(channel);
  auto& s = status_[static_cast<std::size_t>(channel)];
  const PatternMatch m = pe_.pe_fg_find_pattern(s.last_frame, it->second);
  s.score = m.score;
  s.found = m.found;
  s.found_dx = m.dx;
  s.found_dy = m.dy;
  const auto& f = s.last_frame;
  const auto& t = it->second;
  s.processing_time_s = static_cast<double>(f.width() - t.width() + 1) * (f.height() - t.height() + 1) *
                        t.width() * t.height() / kOpsPerSecond;
  if (!m.found) s.not_found_count++;
  return m;
}

EdgeResult Vve::capture_and_find_edge(int channel, GrooveAxis axis, double expected_px, double window_px) {
  check_channel(channel);
  capture(channel);
  auto& s = status_[static_cast<std::size_t>(channel)];
  const EdgeResult e = pe_.pe_fg_find_edge(s.last_frame, axis, expected_px, window_px);
  s.edge_position = e.position;
  s.edge_contrast = e.contrast;
  s.edge_found = e.found;
  s.processing_time_s = static_cast<double>(s.last_frame.width()) * s.last_frame.height() / kOpsPerSecond;
  return e;
}

}  // namespace dicer
