#include "dicer/ve/vde.hpp"

namespace dicer {

Vde::Vde(PhysicalEquipment& pe, std::vector<int> monitored_di, std::vector<int> monitored_ai)
    : pe_(pe), monitored_di_(std::move(monitored_di)), monitored_ai_(std::move(monitored_ai)) {
  const auto& p = pe.config().plant;
  status_.di.assign(static_cast<std::size_t>(p.di_count), false);
  status_.do_.assign(static_cast<std::size_t>(p.do_count), false);
  status_.ai.assign(static_cast<std::size_t>(p.ai_count), 0.0);
  status_.ao.assign(static_cast<std::size_t>(p.ao_count), 0.0);
}

void Vde::refresh() {
  for (int p : monitored_di_) status_.di.at(static_cast<std::size_t>(p)) = pe_.pe_daq_read_di(p);
  for (int p : monitored_ai_) status_.ai.at(static_cast<std::size_t>(p)) = pe_.pe_daq_read_ai(p);
  status_.last_update_tick = pe_.tick();
}

void Vde::set_do(int p, bool value) {
  pe_.pe_daq_write_do(p, value);
  status_.do_[static_cast<std::size_t>(p)] = value;
}

void Vde::set_ao(int p, double volts) {
  pe_.pe_daq_write_ao(p, volts);
  status_.ao[static_cast<std::size_t>(p)] = volts;
}

}  // namespace dicer
