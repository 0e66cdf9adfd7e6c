// One PASS/FAIL line per acceptance criterion; exit status 1 if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "dicer/bench/benchmark.hpp"
#include "dicer/bench/capacity.hpp"
#include "dicer/bench/report.hpp"
#include "dicer/gateway/gateway.hpp"
#include "httplib.h"
#include "interlocks.hpp"
#include "profile_oracle.hpp"

using namespace dicer;

namespace {

struct Verdict {
  bool pass = true;
  std::ostringstream detail;

  void check(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << what << "; ";
    }
  }
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0, double d = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c, d);
  return buf;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// ---------------------------------------------------------------------------

Verdict architecture_comparison() {
  Verdict v;
  const auto t0 = Clock::now();
  const Comparison c = run_full_comparison(WorkloadSpec{}, 1);
  const double wall = seconds_since(t0);
  const BenchReport r = compare(c.typical, c.proposed);
  v.check(c.typical_state.phase == ProcessPhase::done && c.proposed_state.phase == ProcessPhase::done,
          "a run did not finish");
  v.check(c.typical_strokes == 144 && c.proposed_strokes == 144, "stroke count");
  const double ratio = static_cast<double>(c.proposed.grand_total()) / static_cast<double>(c.typical.grand_total());
  const double motion = 1.0 - static_cast<double>(c.proposed.total(DeviceClass::motion)) /
                                  static_cast<double>(c.typical.total(DeviceClass::motion));
  const double daq = 1.0 - static_cast<double>(c.proposed.total(DeviceClass::daq)) /
                               static_cast<double>(c.typical.total(DeviceClass::daq));
  v.check(ratio >= 0.60 && ratio <= 0.75, fmt("total ratio %.3f", ratio));
  v.check(motion >= 0.10 && motion <= 0.25, fmt("motion reduction %.3f", motion));
  v.check(daq >= 0.75, fmt("daq reduction %.3f", daq));
  v.check(c.proposed.total(DeviceClass::vision) > c.typical.total(DeviceClass::vision), "vision total did not increase");
  v.check(r.row("vision").difference.max > 0 && r.row("vision").difference.avg > 0, "vision max/avg did not increase");
  v.check(wall < 60.0, fmt("took %.1f s", wall));
  v.detail << fmt("ratio %.3f, motion -%.1f%%, daq -%.1f%%", ratio, 100 * motion, 100 * daq)
           << fmt(", vision %+.0f%% max, %.1f s", r.row("vision").rate_max, wall);
  return v;
}

Verdict table_fixture() {
  Verdict v;
  struct Row {
    const char* name;
    Stat typ, prop, diff;
    int rate_max, rate_avg;
  };
  const Row rows[] = {
      {"motion", {984768, 908376}, {792872, 752320}, {-191896, -156056}, -19, -17},
      {"total", {1359954, 1241178}, {902291, 856097}, {-457663, -385080}, -33, -31},
  };
  for (const Row& r : rows) {
    const ClassComparison c = compare_stats(r.name, r.typ, r.prop);
    v.check(c.difference.max == r.diff.max,
            std::string(r.name) + fmt(" max difference %.0f, expected %.0f", c.difference.max, r.diff.max));
    v.check(c.difference.avg == r.diff.avg,
            std::string(r.name) + fmt(" avg difference %.0f, expected %.0f", c.difference.avg, r.diff.avg));
    v.check(c.rate_max == r.rate_max, std::string(r.name) + fmt(" max rate %.0f", c.rate_max));
    v.check(c.rate_avg == r.rate_avg, std::string(r.name) + fmt(" avg rate %.0f", c.rate_avg));
  }
  if (v.pass) v.detail << "motion and total rows reproduced";
  return v;
}

Verdict capacity() {
  Verdict v;
  const CapacityModel m{1000, {50, 30}, {100, 80}};
  v.check(available_capacity(m, ArchitectureMode::typical) == 740.0, "typical example");
  v.check(available_capacity(m, ArchitectureMode::proposed) == 820.0, "proposed example");
  const double down = available_capacity({100, {}, {60, 70}}, ArchitectureMode::proposed);
  v.check(down == -30.0 && failure_predicted(down), "failure example");

  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> load(0.5, 100.0), cap(0.0, 2000.0);
  std::uniform_int_distribution<int> count(0, 5), coin(0, 3);
  int bad = 0;
  for (int i = 0; i < 1000; ++i) {
    CapacityModel c;
    c.N = cap(rng);
    double windows = 0.0;
    for (int k = count(rng); k > 0; --k) {
      c.n_w.push_back(coin(rng) == 0 ? 0.0 : load(rng));
      windows += c.n_w.back();
    }
    for (int k = count(rng); k > 0; --k) c.n_t.push_back(load(rng));
    const double typ = available_capacity(c, ArchitectureMode::typical);
    const double prop = available_capacity(c, ArchitectureMode::proposed);
    if (prop < typ || (prop == typ) != (windows == 0.0)) ++bad;
  }
  v.check(bad == 0, std::to_string(bad) + " random models out of order");
  if (v.pass) v.detail << "examples exact, 1000 random models ordered";
  return v;
}

Verdict zero_access() {
  Verdict v;
  BenchmarkRun run(WorkloadSpec{}, ArchitectureMode::proposed, 1);
  run.advance(40000);
  Machine& m = *run.machine();
  GatewayOptions o;
  o.port = 0;
  Gateway gw(m, o);
  const int port = gw.start();
  httplib::Client cli("127.0.0.1", port);

  const ClassCounts before = m.pe().ledger().totals();
  int http_fail = 0;
  for (int i = 0; i < 10000; ++i) {
    (void)m.snapshot();
    (void)m.display_snapshot();
    (void)gw.snapshot_body();
  }
  for (int i = 0; i < 1000; ++i) {
    auto r = cli.Get("/api/v1/snapshot");
    if (!r || r->status != 200) ++http_fail;
  }
  const ClassCounts after = m.pe().ledger().totals();
  gw.stop();
  v.check(http_fail == 0, std::to_string(http_fail) + " HTTP reads failed");
  v.check(after == before, fmt("NOA delta %.0f", static_cast<double>(after.total() - before.total())));

  bool aborted = false;
  m.add_task("rogue_window", AgentKind::window, 5, [](Machine& x) { x.pe().pe_daq_read_di(0); });
  try {
    m.step(10);
  } catch (const AccessViolation&) {
    aborted = true;
  }
  v.check(aborted, "window access to the equipment was not stopped");
  if (v.pass) v.detail << "30000 snapshot reads + 1000 HTTP reads, delta 0; window access aborted";
  return v;
}

Verdict kinematics() {
  Verdict v;
  int bad = 0;
  double worst = 0.0;
  for (int kind = 0; kind < 2; ++kind) {
    const bool scurve = kind == 1;
    std::mt19937_64 rng(scurve ? 31 : 17);
    for (int n = 0; n < 250; ++n) {
      double p0 = 0.0;
      const auto spec = testing::random_spec(rng, scurve, &p0);
      PointToPointProfile prof(spec, p0);
      std::vector<double> times;
      for (int k = 1; k <= 20; ++k) times.push_back(prof.duration() * k / 21.0);
      double end = 0.0, total = 0.0;
      const auto samples = testing::integrate(spec, p0, times, &end, &total);
      bool ok = std::abs(prof.at(prof.duration()).position - spec.target) <= 1e-9;
      for (const auto& s : samples) {
        const double e = std::abs(prof.at(s.t).position - s.position);
        worst = std::max(worst, e);
        ok = ok && e <= 1e-6;
      }
      const double h = 1e-5;
      const double jmax = std::max(spec.j1, spec.j2);
      for (double t = h; t < prof.duration(); t += prof.duration() / 997.0) {
        ok = ok && std::abs(prof.at(t).velocity) <= spec.v + 1e-12;
        if (scurve) ok = ok && std::abs(prof.at(t).acceleration - prof.at(t - h).acceleration) / h <= jmax + 1e-6;
      }
      if (!ok) ++bad;
    }
  }
  v.check(bad == 0, std::to_string(bad) + " of 500 specs off");
  v.detail << fmt("worst position error %.2e mm", worst);
  return v;
}

Verdict interlocks() {
  Verdict v;
  std::uint64_t worst = 0;
  const auto cases = testing::interlock_cases();
  for (const auto& c : cases) {
    const auto out = testing::run_interlock_case(c);
    v.check(out.ok, c.name + ": " + out.detail);
    worst = std::max(worst, out.latency_ticks);
  }
  if (v.pass) v.detail << cases.size() << " rules, worst latency " << worst << " ticks";
  return v;
}

bool finished(const Machine& m) { return !m.sequencer().running(); }

bool same_cut(const CutRecordEntry& a, const CutRecordEntry& b) {
  return a.direction == b.direction && a.coordinate == b.coordinate && a.depth == b.depth && a.feed == b.feed &&
         a.from == b.from && a.to == b.to;
}

Verdict dicing() {
  Verdict v;

  std::vector<Misalignment> cases{{5.0, -5.0, 2.0}, {-5.0, 5.0, -2.0}};
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> off(-5.0, 5.0), ang(-2.0, 2.0);
  for (int i = 0; i < 4; ++i) cases.push_back({off(rng), off(rng), ang(rng)});
  for (const auto& mis : cases) {
    Machine m(MachineConfig::defaults(), {}, mis);
    m.process_start();
    m.run_until([](const Machine& x) { return x.sequencer().state().phase != ProcessPhase::aligning; }, 400000);
    const AlignmentResult& a = m.sequencer().alignment();
    const double px = m.config().cameras[1].mm_per_px;
    const std::string tag = fmt("misalignment (%.2f, %.2f, %.2f)", mis.dx, mis.dy, mis.dtheta_deg);
    v.check(m.sequencer().state().phase == ProcessPhase::cutting, tag + " did not reach cutting");
    v.check(a.converged && std::abs(a.residual_dtheta_deg) < 0.01, tag + fmt(" residual %.4f deg", a.residual_dtheta_deg));
    v.check(std::abs(a.dx - mis.dx) <= px && std::abs(a.dy - mis.dy) <= px,
            tag + fmt(" translation error (%.4f, %.4f)", a.dx - mis.dx, a.dy - mis.dy));
  }

  MachineConfig clean = MachineConfig::defaults();
  clean.image.noise_amplitude = 0.0;
  Machine m(clean);
  m.process_start();
  m.run_until(finished, 3000000);
  int align = 0, cuts = 0;
  for (const auto& s : m.sequencer().steps()) {
    if (s.counted && s.kind == StepKind::alignment) ++align;
    if (s.counted && s.kind == StepKind::cut) ++cuts;
  }
  v.check(m.sequencer().state().phase == ProcessPhase::done, "clean run did not finish");
  v.check(align == 24 && cuts == 144, "step counts " + std::to_string(align) + " + " + std::to_string(cuts));
  const ToolPath path = generate_tool_path(m.recipe());
  const auto& rec = m.pe().wafer().cuts();
  bool equal = rec.size() == path.strokes.size();
  for (std::size_t i = 0; equal && i < rec.size(); ++i) {
    equal = rec[i].direction == path.strokes[i].direction && rec[i].coordinate == path.strokes[i].coordinate &&
            rec[i].depth == -path.strokes[i].z_depth && rec[i].feed == path.strokes[i].feed;
  }
  v.check(equal, "cut record differs from the tool path");

  Machine ref;
  ref.process_start();
  ref.run_until(finished, 3000000);
  std::uniform_int_distribution<int> pick(1, 167);
  std::vector<int> steps;
  for (int i = 0; i < 10; ++i) steps.push_back(pick(rng));
  for (int at : steps) {
    Machine s;
    s.process_start();
    s.run_until([at](const Machine& x) { return x.sequencer().state().step_index >= at; }, 3000000);
    s.process_suspend();
    s.run_until([](const Machine& x) { return !x.sequencer().in_step(); }, 100000);
    s.step(2000);
    s.process_resume();
    s.run_until(finished, 3000000);
    const auto& a = ref.pe().wafer().cuts();
    const auto& b = s.pe().wafer().cuts();
    bool same = a.size() == b.size() && s.sequencer().state().phase == ProcessPhase::done;
    for (std::size_t i = 0; same && i < a.size(); ++i) same = same_cut(a[i], b[i]);
    v.check(same, "suspend at step " + std::to_string(at) + " changed the cut record");
  }
  if (v.pass) {
    v.detail << cases.size() << " misalignments converged; 24 + 144 steps; cut record == tool path; suspend at";
    for (int at : steps) v.detail << ' ' << at;
  }
  return v;
}

Verdict determinism() {
  Verdict v;
  const auto base = std::filesystem::temp_directory_path() / "dicer_acceptance";
  std::filesystem::remove_all(base);
  std::vector<std::filesystem::path> dirs{base / "a", base / "b"};
  for (const auto& d : dirs) {
    const Comparison c = run_full_comparison(WorkloadSpec{}, 5);
    emit_run(c.typical, d.string());
    emit_run(c.proposed, d.string());
    emit_report(compare(c.typical, c.proposed), (d / "table.json").string());
  }
  for (const char* f : {"typical.json", "typical.csv", "proposed.json", "proposed.csv", "table.json"}) {
    const std::string a = slurp(dirs[0] / f), b = slurp(dirs[1] / f);
    v.check(!a.empty() && a == b, std::string(f) + " differs");
  }
  if (v.pass) v.detail << "5 files byte-identical";
  std::filesystem::remove_all(base);
  return v;
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    std::function<Verdict()> run;
  };
  const Criterion criteria[] = {
      {"architecture comparison", architecture_comparison},
      {"reference table fixture", table_fixture},
      {"capacity model", capacity},
      {"zero-access display path", zero_access},
      {"profile kinematics", kinematics},
      {"interlock suite", interlocks},
      {"dicing end-to-end", dicing},
      {"determinism", determinism},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    const auto t0 = Clock::now();
    Verdict v;
    try {
      v = c.run();
    } catch (const std::exception& e) {
      v.pass = false;
      v.detail << "exception: " << e.what();
    }
    std::printf("%s  %-26s %s (%.1f s)\n", v.pass ? "PASS" : "FAIL", c.name, v.detail.str().c_str(),
                seconds_since(t0));
    std::fflush(stdout);
    if (!v.pass) ++failed;
  }
  return failed == 0 ? 0 : 1;
}
