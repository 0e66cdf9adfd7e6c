#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "dicer/layers/machine.hpp"
#include "json.hpp"

using namespace dicer;

namespace {

constexpr std::size_t kZ = index(Axis::z);

bool finished(const Machine& m) { return !m.sequencer().running(); }

// Cut records without the completion tick.
bool same_cut(const CutRecordEntry& a, const CutRecordEntry& b) {
  return a.direction == b.direction && a.coordinate == b.coordinate && a.depth == b.depth && a.feed == b.feed &&
         a.from == b.from && a.to == b.to;
}

Vec2 rot(Vec2 p, double deg) {
  const double r = deg * std::acos(-1.0) / 180.0;
  return {p.x * std::cos(r) - p.y * std::sin(r), p.x * std::sin(r) + p.y * std::cos(r)};
}

// Scripted plant for driving the sequencer alone.
class FakeIo : public ProcessIo {
 public:
  bool spindle = true;
  std::vector<std::pair<std::size_t, double>> moves;

  CommandAck move(std::size_t axis, double target, double) override {
    moves.emplace_back(axis, target);
    return CommandAck::ok();
  }
  bool settled(std::size_t) override { return true; }
  PatternMatch find(int, const std::string&) override {
    PatternMatch m;
    m.found = true;
    m.score = 1.0;
    return m;
  }
  EdgeResult find_edge(int, GrooveAxis, double, double) override {
    EdgeResult e;
    e.found = true;
    return e;
  }
  void set_do(int, bool) override {}
  bool di(int p) override { return p == port::di_spindle_running ? spindle : p == port::di_coolant_flow; }
  double vacuum_kpa() override { return -80.0; }
  void stop_all() override {}
};

}  // namespace

TEST(ToolPathTest, DefaultRecipe) {
  const ToolPath p = generate_tool_path(DicingRecipe{});
  ASSERT_EQ(p.strokes.size(), 144u);
  EXPECT_EQ(p.rotation_index, 72u);
  EXPECT_NEAR(p.strokes[0].coordinate, -106.5, 1e-9);
  EXPECT_NEAR(p.strokes[71].coordinate, 106.5, 1e-9);
  for (std::size_t i = 0; i < p.strokes.size(); ++i) {
    EXPECT_EQ(p.strokes[i].direction, i < 72 ? CutDirection::x_pass : CutDirection::y_pass);
    EXPECT_EQ(p.strokes[i].z_depth, -0.5);
    EXPECT_EQ(p.strokes[i].feed, 100.0);
  }
}

TEST(ToolPathTest, SingleLine) {
  DicingRecipe r;
  r.lines_x = 1;
  r.lines_y = 0;
  const ToolPath p = generate_tool_path(r);
  ASSERT_EQ(p.strokes.size(), 1u);
  EXPECT_EQ(p.strokes[0].coordinate, 0.0);
  EXPECT_EQ(p.rotation_index, 1u);
}

TEST(ToolPathTest, FiveLinesCentred) {
  DicingRecipe r;
  r.lines_x = 5;
  r.lines_y = 5;
  const ToolPath p = generate_tool_path(r);
  const std::vector<double> want{-6, -3, 0, 3, 6};
  for (std::size_t i = 0; i < 5; ++i) {
    EXPECT_NEAR(p.strokes[i].coordinate, want[i], 1e-12);
    EXPECT_NEAR(p.strokes[i + 5].coordinate, want[i], 1e-12);
  }
}

TEST(ToolPathTest, RejectsBadRecipes) {
  DicingRecipe r;
  r.lines_x = 0;
  r.lines_y = 0;
  EXPECT_THROW(generate_tool_path(r), std::invalid_argument);
  r = {};
  r.street_pitch_y = 5.0;  // 71 * 5 > 300
  EXPECT_THROW(generate_tool_path(r), std::invalid_argument);
  r = {};
  r.cut_depth = 0.0;
  EXPECT_THROW(r.validate(), std::invalid_argument);
  r = {};
  r.blade_rpm = 5000;
  EXPECT_THROW(r.validate(), std::invalid_argument);
}

TEST(ToolPathTest, Json) {
  DicingRecipe r;
  r.lines_x = 2;
  r.lines_y = 1;
  const auto j = nlohmann::json::parse(tool_path_json(generate_tool_path(r)));
  EXPECT_EQ(j["rotation_index"], 2);
  ASSERT_EQ(j["strokes"].size(), 3u);
  EXPECT_EQ(j["strokes"][2]["direction"], "y_pass");
  EXPECT_EQ(j["strokes"][0]["coordinate"], -1.5);

  nlohmann::json rj = r;
  EXPECT_EQ(rj.get<DicingRecipe>(), r);
  EXPECT_THROW(parse_recipe(R"({"lines_x": -1})"), std::invalid_argument);
}

TEST(Geometry, EstimateInvertsPlacement) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> off(-5, 5), ang(-2, 2);
  const Vec2 wa{-60, 0}, wb{60, 0};
  for (int i = 0; i < 200; ++i) {
    const double dx = off(rng), dy = off(rng), th = ang(rng);
    const Vec2 ca = rot(wa, th) + Vec2{dx, dy};
    const Vec2 cb = rot(wb, th) + Vec2{dx, dy};
    const AlignmentEstimate e = estimate_from_fiducials(ca, cb, wa, wb);
    EXPECT_NEAR(e.dx, dx, 1e-9);
    EXPECT_NEAR(e.dy, dy, 1e-9);
    EXPECT_NEAR(e.dtheta_deg, th, 1e-9);

    const AlignmentEstimate one = estimate_from_one(ca, wa, th);
    EXPECT_NEAR(one.dx, dx, 1e-9);
    EXPECT_NEAR(one.dy, dy, 1e-9);
  }
}

TEST(Geometry, StagePutsPointOnTarget) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> off(-5, 5), ang(-2, 2), pos(-100, 100), theta(-180, 180);
  for (int i = 0; i < 200; ++i) {
    const Misalignment mis{off(rng), off(rng), ang(rng)};
    const AlignmentEstimate est{mis.dx, mis.dy, mis.dtheta_deg};
    const WaferSim w(WaferGeometry{}, mis);
    const Vec2 target{pos(rng), pos(rng)};
    const Vec2 p{pos(rng), pos(rng)};
    const double th = theta(rng);
    const Vec2 stage = stage_for(target, p, th, est);
    const Vec2 seen = w.wafer_to_machine(p, stage, th);
    EXPECT_NEAR(seen.x, target.x, 1e-9);
    EXPECT_NEAR(seen.y, target.y, 1e-9);
    const Vec2 c = chuck_point(target, stage, th);
    const Vec2 want = w.wafer_to_chuck(p);
    EXPECT_NEAR(c.x, want.x, 1e-9);
    EXPECT_NEAR(c.y, want.y, 1e-9);
  }
}

TEST(Dicing, AlignmentRecoversMisalignment) {
  Machine m(MachineConfig::defaults(), {}, Misalignment{3.0, -1.0, 0.5});
  ASSERT_TRUE(m.process_start().accepted);
  ASSERT_TRUE(m.run_until([](const Machine& x) { return x.sequencer().state().phase == ProcessPhase::cutting; },
                          200000));
  const AlignmentResult& a = m.sequencer().alignment();
  EXPECT_TRUE(a.converged);
  EXPECT_LT(std::abs(a.residual_dtheta_deg), 0.01);
  EXPECT_NEAR(a.dx, 3.0, 0.05);
  EXPECT_NEAR(a.dy, -1.0, 0.05);
  EXPECT_NEAR(a.dtheta_deg, 0.5, 0.01);
  EXPECT_EQ(m.sequencer().state().step_index, kAlignmentSteps);
  EXPECT_GE(a.residual_score, 0.9);
}

TEST(Dicing, ZeroMisalignment) {
  Machine m;
  ASSERT_TRUE(m.process_start().accepted);
  ASSERT_TRUE(m.run_until([](const Machine& x) { return x.sequencer().state().phase == ProcessPhase::cutting; },
                          200000));
  const AlignmentResult& a = m.sequencer().alignment();
  EXPECT_TRUE(a.converged);
  EXPECT_NEAR(a.dx, 0.0, 0.05);
  EXPECT_NEAR(a.dy, 0.0, 0.05);
  EXPECT_NEAR(a.dtheta_deg, 0.0, 0.01);
}

TEST(Dicing, BlankWaferAborts) {
  Machine m;
  m.pe().wafer().set_blank(true);
  ASSERT_TRUE(m.process_start().accepted);
  ASSERT_TRUE(m.run_until(finished, 200000));
  EXPECT_EQ(m.sequencer().state().phase, ProcessPhase::aborted);
  EXPECT_NE(m.sequencer().state().abort_reason.find("vision_error"), std::string::npos);
  EXPECT_TRUE(m.pe().wafer().cuts().empty());
}

TEST(Dicing, BladeBreaksAtCutTen) {
  Machine m;
  ASSERT_TRUE(m.process_start().accepted);
  ASSERT_TRUE(m.run_until([](const Machine& x) { return x.sequencer().strokes_completed() == 10; }, 2000000));
  m.pe().daq().set_blade_broken(true);
  ASSERT_TRUE(m.run_until(finished, 100000));
  EXPECT_EQ(m.sequencer().state().phase, ProcessPhase::aborted);
  EXPECT_TRUE(m.logic().blade_error);
  EXPECT_EQ(m.pe().wafer().cuts().size(), 10u);
  m.step(500);
  for (std::size_t a = 0; a < kAxisCount; ++a) EXPECT_EQ(m.pe().motion().axis(a).velocity(), 0.0) << a;

  // The groove for line 50 was never cut.
  m.pe().daq().set_blade_broken(false);
  ASSERT_TRUE(m.clear_error("all").accepted);
  m.step(10);
  ASSERT_TRUE(m.verify_kerf({50}).accepted);
  ASSERT_TRUE(m.run_until(finished, 200000));
  EXPECT_EQ(m.sequencer().state().phase, ProcessPhase::idle);
  ASSERT_TRUE(m.sequencer().kerf().has_value());
  EXPECT_FALSE(m.sequencer().kerf()->pass);
  EXPECT_EQ(m.sequencer().kerf()->failed_lines, std::vector<int>{50});

  ASSERT_TRUE(m.verify_kerf({5}).accepted);
  ASSERT_TRUE(m.run_until(finished, 200000));
  EXPECT_TRUE(m.sequencer().kerf()->pass);
}

TEST(Dicing, EmptyKerfListPasses) {
  Machine m;
  ASSERT_TRUE(m.verify_kerf({}).accepted);
  ASSERT_TRUE(m.sequencer().kerf().has_value());
  EXPECT_TRUE(m.sequencer().kerf()->pass);
  EXPECT_EQ(m.sequencer().state().phase, ProcessPhase::idle);
  EXPECT_FALSE(m.verify_kerf({144}).accepted);
  EXPECT_FALSE(m.verify_kerf({-1}).accepted);
}

TEST(Dicing, KerfSamplesOutsidePathRejected) {
  Machine m;
  SequencerOptions o;
  o.kerf_samples = {0, 144};
  m.set_sequencer_options(o);
  EXPECT_FALSE(m.process_start().accepted);
}

TEST(Dicing, SpindleOffRefusesStroke) {
  FakeIo io;
  DicingSequencer seq(MachineConfig::defaults(), io);
  ASSERT_TRUE(seq.start(DicingRecipe{}).accepted);
  std::uint64_t t = 0;
  while (seq.state().phase != ProcessPhase::cutting && t < 10000) seq.cycle(t++);
  ASSERT_EQ(seq.state().phase, ProcessPhase::cutting);
  while (seq.steps().back().kind != StepKind::setup || seq.steps().back().label != "spindle and coolant on") {
    seq.cycle(t++);
    ASSERT_LT(t, 10000u);
  }
  io.spindle = false;
  io.moves.clear();
  while (seq.running() && t < 20000) seq.cycle(t++);
  EXPECT_EQ(seq.state().phase, ProcessPhase::aborted);
  EXPECT_EQ(seq.state().abort_reason, "spindle not running; cut refused");
  for (const auto& [axis, target] : io.moves) {
    if (axis == kZ) {
      EXPECT_GE(target, 0.0);
    }
  }
  EXPECT_EQ(seq.strokes_completed(), 0);
}

TEST(Dicing, SplitStrokeSteps) {
  FakeIo io;
  DicingSequencer seq(MachineConfig::defaults(), io);
  SequencerOptions o;
  o.steps_are_strokes = false;
  ASSERT_TRUE(seq.start(DicingRecipe{}, o).accepted);
  EXPECT_EQ(seq.state().total_steps, 24 + 4 * 144);
  std::uint64_t t = 0;
  while (seq.running() && t < 100000) seq.cycle(t++);
  EXPECT_EQ(seq.state().phase, ProcessPhase::done);
  EXPECT_EQ(seq.state().step_index, 24 + 4 * 144);
  EXPECT_EQ(seq.strokes_completed(), 144);
}

TEST(Dicing, FullRunMatchesToolPath) {
  MachineConfig cfg = MachineConfig::defaults();
  cfg.image.noise_amplitude = 0.0;
  Machine m(cfg);
  ASSERT_TRUE(m.process_start().accepted);
  EXPECT_EQ(m.sequencer().state().total_steps, 168);
  ASSERT_TRUE(m.run_until(finished, 3000000));
  ASSERT_EQ(m.sequencer().state().phase, ProcessPhase::done);
  EXPECT_EQ(m.sequencer().state().step_index, 168);

  int align = 0, cuts = 0;
  for (const auto& s : m.sequencer().steps()) {
    if (!s.counted) continue;
    if (s.kind == StepKind::alignment) ++align;
    if (s.kind == StepKind::cut) ++cuts;
  }
  EXPECT_EQ(align, 24);
  EXPECT_EQ(cuts, 144);

  const ToolPath path = generate_tool_path(m.recipe());
  const auto& rec = m.pe().wafer().cuts();
  ASSERT_EQ(rec.size(), path.strokes.size());
  for (std::size_t i = 0; i < rec.size(); ++i) {
    EXPECT_EQ(rec[i].direction, path.strokes[i].direction) << i;
    EXPECT_EQ(rec[i].coordinate, path.strokes[i].coordinate) << i;
    EXPECT_EQ(rec[i].depth, -path.strokes[i].z_depth) << i;
    EXPECT_EQ(rec[i].feed, path.strokes[i].feed) << i;
    // Each stroke spans the full chord of the wafer.
    const double half = std::sqrt(150.0 * 150.0 - rec[i].coordinate * rec[i].coordinate);
    EXPECT_LE(rec[i].from, -half);
    EXPECT_GE(rec[i].to, half);
  }
  ASSERT_TRUE(m.sequencer().kerf().has_value());
  EXPECT_TRUE(m.sequencer().kerf()->pass);
  EXPECT_EQ(m.sequencer().kerf()->offsets_px.size(), 3u);
  EXPECT_FALSE(m.pe().daq().read_do(port::do_spindle));
}

TEST(Dicing, MisalignedRunWithinOnePixel) {
  Machine m(MachineConfig::defaults(), {}, Misalignment{3.0, -1.0, 0.5});
  ASSERT_TRUE(m.process_start().accepted);
  ASSERT_TRUE(m.run_until(finished, 3000000));
  ASSERT_EQ(m.sequencer().state().phase, ProcessPhase::done);
  const ToolPath path = generate_tool_path(m.recipe());
  const auto& rec = m.pe().wafer().cuts();
  const double px = m.config().cameras[1].mm_per_px;
  ASSERT_EQ(rec.size(), path.strokes.size());
  for (std::size_t i = 0; i < rec.size(); ++i) {
    EXPECT_EQ(rec[i].direction, path.strokes[i].direction) << i;
    EXPECT_NEAR(rec[i].coordinate, path.strokes[i].coordinate, px) << i;
    EXPECT_NEAR(rec[i].depth, 0.5, 1e-9);
  }
  EXPECT_TRUE(m.sequencer().kerf()->pass);
}

TEST(Dicing, SuspendResumeKeepsCutRecord) {
  Machine ref;
  ASSERT_TRUE(ref.process_start().accepted);
  ASSERT_TRUE(ref.run_until(finished, 3000000));

  Machine m;
  ASSERT_TRUE(m.process_start().accepted);
  ASSERT_TRUE(m.run_until([](const Machine& x) { return x.sequencer().state().step_index == 37; }, 3000000));
  ASSERT_TRUE(m.process_suspend().accepted);
  EXPECT_FALSE(m.process_suspend().accepted);
  ASSERT_TRUE(m.run_until([](const Machine& x) { return !x.sequencer().in_step(); }, 100000));
  const int held = m.sequencer().state().step_index;
  const std::size_t cuts = m.pe().wafer().cuts().size();
  m.step(3000);
  EXPECT_EQ(m.sequencer().state().step_index, held);
  EXPECT_EQ(m.pe().wafer().cuts().size(), cuts);
  EXPECT_EQ(m.sequencer().state().phase, ProcessPhase::suspended);
  ASSERT_TRUE(m.process_resume().accepted);
  ASSERT_TRUE(m.run_until(finished, 3000000));

  EXPECT_EQ(m.sequencer().state().phase, ProcessPhase::done);
  const auto& a = ref.pe().wafer().cuts();
  const auto& b = m.pe().wafer().cuts();
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) EXPECT_TRUE(same_cut(a[i], b[i])) << i;
}

TEST(Dicing, StopAborts) {
  Machine m;
  EXPECT_FALSE(m.process_stop().accepted);
  ASSERT_TRUE(m.process_start().accepted);
  m.step(1000);
  ASSERT_TRUE(m.process_stop().accepted);
  EXPECT_EQ(m.sequencer().state().phase, ProcessPhase::aborted);
  EXPECT_EQ(m.sequencer().state().abort_reason, "stopped by operator");
  ASSERT_TRUE(m.process_start().accepted);
  EXPECT_EQ(m.sequencer().state().phase, ProcessPhase::aligning);
}
