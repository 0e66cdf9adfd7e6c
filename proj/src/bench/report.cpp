#include "dicer/bench/report.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace dicer {

namespace {

const char* const kRowNames[] = {"motion", "vision", "daq", "net", "total"};

std::uint64_t value(const ClassCounts& c, std::optional<DeviceClass> cls) { return cls ? c[*cls] : c.total(); }

nlohmann::json stat_json(const Stat& s) { return {{"max", s.max}, {"avg", s.avg}}; }
Stat stat_from(const nlohmann::json& j) { return {j.at("max").get<double>(), j.at("avg").get<double>()}; }

}  // namespace

const ClassComparison& BenchReport::row(const std::string& name) const {
  for (const auto& r : rows) {
    if (r.name == name) return r;
  }
  throw std::out_of_range("no report row " + name);
}

int rate_percent(double difference, double typical) {
  if (typical == 0.0) return 0;
  return static_cast<int>(std::trunc(100.0 * difference / typical));
}

ClassComparison compare_stats(const std::string& name, const Stat& typical, const Stat& proposed) {
  ClassComparison c;
  c.name = name;
  c.typical = typical;
  c.proposed = proposed;
  c.difference = {proposed.max - typical.max, proposed.avg - typical.avg};
  c.rate_max = rate_percent(c.difference.max, typical.max);
  c.rate_avg = rate_percent(c.difference.avg, typical.avg);
  return c;
}

Stat summarize(const std::vector<ClassCounts>& series, std::optional<DeviceClass> cls) {
  Stat s;
  if (series.empty()) return s;
  std::uint64_t mx = 0;
  std::uint64_t sum = 0;
  for (const auto& b : series) {
    mx = std::max(mx, value(b, cls));
    sum += value(b, cls);
  }
  s.max = static_cast<double>(mx);
  s.avg = static_cast<double>(sum) / static_cast<double>(series.size());
  return s;
}

BenchReport compare(const AccessLedger& typical, const AccessLedger& proposed) {
  if (typical.ticks != proposed.ticks || typical.bin_ticks() != proposed.bin_ticks() ||
      typical.series().size() != proposed.series().size()) {
    throw std::invalid_argument("ledgers cover different run lengths (" + std::to_string(typical.ticks) + " vs " +
                                std::to_string(proposed.ticks) + " ticks)");
  }
  BenchReport r;
  r.seed = typical.seed;
  r.ticks = typical.ticks;
  r.bin_ticks = typical.bin_ticks();
  for (DeviceClass c : kDeviceClasses) {
    r.rows.push_back(compare_stats(std::string(to_string(c)), summarize(typical.series(), c),
                                   summarize(proposed.series(), c)));
  }
  r.rows.push_back(compare_stats("total", summarize(typical.series(), std::nullopt),
                                 summarize(proposed.series(), std::nullopt)));
  return r;
}

nlohmann::json report_to_json(const BenchReport& r) {
  nlohmann::json rows = nlohmann::json::object();
  for (const auto& c : r.rows) {
    rows[c.name] = {{"typical", stat_json(c.typical)},
                    {"proposed", stat_json(c.proposed)},
                    {"difference", stat_json(c.difference)},
                    {"rate_percent", {{"max", c.rate_max}, {"avg", c.rate_avg}}}};
  }
  return {{"seed", r.seed}, {"ticks", r.ticks}, {"bin_ticks", r.bin_ticks}, {"classes", rows}};
}

BenchReport report_from_json(const nlohmann::json& j) {
  BenchReport r;
  r.seed = j.at("seed").get<std::uint64_t>();
  r.ticks = j.at("ticks").get<std::uint64_t>();
  r.bin_ticks = j.at("bin_ticks").get<std::uint64_t>();
  const auto& classes = j.at("classes");
  for (const char* name : kRowNames) {
    if (!classes.contains(name)) continue;
    const auto& c = classes.at(name);
    ClassComparison row;
    row.name = name;
    row.typical = stat_from(c.at("typical"));
    row.proposed = stat_from(c.at("proposed"));
    row.difference = stat_from(c.at("difference"));
    row.rate_max = c.at("rate_percent").at("max").get<int>();
    row.rate_avg = c.at("rate_percent").at("avg").get<int>();
    r.rows.push_back(row);
  }
  return r;
}

nlohmann::json ledger_to_json(const AccessLedger& l, double tick_s) {
  nlohmann::json bins = nlohmann::json::array();
  const double bin_s = static_cast<double>(l.bin_ticks()) * tick_s;
  for (std::size_t i = 0; i < l.series().size(); ++i) {
    const ClassCounts& b = l.series()[i];
    nlohmann::json row{{"t_s", static_cast<double>(i) * bin_s}};
    for (DeviceClass c : kDeviceClasses) row[std::string(to_string(c))] = b[c];
    bins.push_back(row);
  }
  nlohmann::json totals, mx, avg;
  for (DeviceClass c : kDeviceClasses) {
    const std::string n(to_string(c));
    totals[n] = l.total(c);
    const Stat s = summarize(l.series(), c);
    mx[n] = s.max;
    avg[n] = s.avg;
  }
  totals["total"] = l.grand_total();
  nlohmann::json agents = nlohmann::json::array();
  for (std::size_t i = 0; i < l.agents().size(); ++i) {
    const AgentInfo& a = l.agents()[i];
    if (a.kind == AgentKind::harness) continue;
    nlohmann::json counts;
    for (DeviceClass c : kDeviceClasses) counts[std::string(to_string(c))] = l.agent_totals()[i][c];
    agents.push_back({{"name", a.name}, {"kind", a.kind == AgentKind::window ? "window" : "thread"}, {"counts", counts}});
  }
  const Stat t = summarize(l.series(), std::nullopt);
  mx["total"] = t.max;
  avg["total"] = t.avg;
  return {{"mode", l.mode},   {"seed", l.seed},     {"ticks", l.ticks},
          {"bin_ticks", l.bin_ticks()}, {"bins", bins}, {"totals", totals}, {"agents", agents},
          {"summary", {{"max", mx}, {"avg", avg}}}};
}

AccessLedger ledger_from_json(const nlohmann::json& j) {
  AccessLedger l(j.at("bin_ticks").get<std::uint64_t>());
  l.mode = j.at("mode").get<std::string>();
  l.seed = j.at("seed").get<std::uint64_t>();
  std::uint64_t bin = 0;
  for (const auto& b : j.at("bins")) {
    for (DeviceClass c : kDeviceClasses) {
      const auto n = b.at(std::string(to_string(c))).get<std::uint64_t>();
      l.record(c, bin * l.bin_ticks(), AccessLedger::kHarnessAgent, n);
    }
    ++bin;
  }
  l.close(j.at("ticks").get<std::uint64_t>());
  for (const auto& a : j.value("agents", nlohmann::json::array())) {
    const std::string kind = a.at("kind").get<std::string>();
    if (kind != "window" && kind != "thread") throw std::invalid_argument("unknown agent kind " + kind);
    const std::size_t id = l.register_agent(a.at("name").get<std::string>(),
                                            kind == "window" ? AgentKind::window : AgentKind::thread);
    ClassCounts n;
    for (DeviceClass c : kDeviceClasses) n[c] = a.at("counts").at(std::string(to_string(c))).get<std::uint64_t>();
    l.attribute(id, n);
  }
  return l;
}

std::string ledger_csv(const AccessLedger& l, double tick_s) {
  std::ostringstream out;
  out << "t_s,motion,vision,daq,net,total\n";
  const double bin_s = static_cast<double>(l.bin_ticks()) * tick_s;
  for (std::size_t i = 0; i < l.series().size(); ++i) {
    const ClassCounts& b = l.series()[i];
    out << nlohmann::json(static_cast<double>(i) * bin_s).dump();
    for (DeviceClass c : kDeviceClasses) out << ',' << b[c];
    out << ',' << b.total() << '\n';
  }
  return out.str();
}

std::string dump_canonical(const nlohmann::json& j) { return j.dump(2) + "\n"; }

nlohmann::json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  return nlohmann::json::parse(in);
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
  out.flush();
  if (!out) throw std::runtime_error("write failed for " + path);
}

std::string emit_run(const AccessLedger& l, const std::string& dir) {
  std::filesystem::create_directories(dir);
  const std::string base = (std::filesystem::path(dir) / (l.mode.empty() ? "run" : l.mode)).string();
  write_text_file(base + ".json", dump_canonical(ledger_to_json(l)));
  write_text_file(base + ".csv", ledger_csv(l));
  return base + ".json";
}

void emit_report(const BenchReport& r, const std::string& path) { write_text_file(path, dump_canonical(report_to_json(r))); }

BenchReport load_report(const std::string& path) { return report_from_json(read_json_file(path)); }

}  // namespace dicer
