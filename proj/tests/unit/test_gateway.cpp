#include <gtest/gtest.h>

#include <atomic>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <thread>

#include "dicer/gateway/cim.hpp"
#include "dicer/gateway/gateway.hpp"
#include "dicer/gateway/messages.hpp"
#include "dicer/gateway/png.hpp"
#include "httplib.h"
#include "json.hpp"

using namespace dicer;
using nlohmann::json;

namespace {

class GatewayTest : public ::testing::Test {
 protected:
  void SetUp() override {
    GatewayOptions o;
    o.port = 0;
    o.allow_stepping = true;
    o.sse_poll_ms = 5;
    gw = std::make_unique<Gateway>(m, o);
    port = gw->start();
    cli = std::make_unique<httplib::Client>("127.0.0.1", port);
    cli->set_read_timeout(10, 0);
  }
  void TearDown() override { gw->stop(); }

  json snapshot() {
    auto r = cli->Get("/api/v1/snapshot");
    EXPECT_TRUE(r);
    EXPECT_EQ(r->status, 200);
    return json::parse(r->body);
  }
  std::pair<int, json> command(const json& body) {
    auto r = cli->Post("/api/v1/command", body.dump(), "application/json");
    EXPECT_TRUE(r);
    return {r->status, json::parse(r->body)};
  }
  std::string next_id() { return "req-" + std::to_string(++ids); }
  void step(std::uint64_t ticks) {
    auto r = cli->Post("/api/v1/sim/step", json{{"ticks", ticks}}.dump(), "application/json");
    ASSERT_TRUE(r);
    ASSERT_EQ(r->status, 200);
  }

  Machine m;
  std::unique_ptr<Gateway> gw;
  std::unique_ptr<httplib::Client> cli;
  int port = 0;
  int ids = 0;
};

}  // namespace

TEST_F(GatewayTest, IdleSnapshot) {
  step(20);
  const json s = snapshot();
  EXPECT_EQ(s["process"]["phase"], "idle");
  EXPECT_EQ(s["any_error"], false);
  EXPECT_EQ(s["axes"].size(), 4u);
  EXPECT_EQ(s["dio"]["di"].size(), 8u);
  EXPECT_EQ(s["dio"]["do"].size(), 5u);
  for (const auto& [code, on] : s["errors"].items()) EXPECT_FALSE(on.get<bool>()) << code;
}

TEST_F(GatewayTest, JogMovesAxis) {
  auto [status, body] = command({{"type", "jog_start"}, {"request_id", next_id()}, {"params", {{"axis", "x"}, {"v", 10.0}}}});
  EXPECT_EQ(status, 200);
  EXPECT_EQ(body["status"], "accepted");
  step(100);
  const json s = snapshot();
  EXPECT_NEAR(s["axes"][0]["vel"].get<double>(), 10.0, 1e-9);
  EXPECT_GT(s["axes"][0]["pos"].get<double>(), 0.0);
  auto [st2, b2] = command({{"type", "jog_stop"}, {"request_id", next_id()}, {"params", {{"axis", 0}}}});
  EXPECT_EQ(st2, 200);
  EXPECT_EQ(b2["status"], "accepted");
}

TEST_F(GatewayTest, MalformedCommandChangesNothing) {
  step(20);
  const json before = snapshot();
  for (const std::string& body : {std::string("{not json"), std::string(R"({"type":"jog_start"})"),
                                 std::string(R"({"type":"warp","request_id":"a"})"),
                                 std::string(R"({"type":"jog_start","request_id":"b","params":{"axis":9,"v":1}})")}) {
    auto r = cli->Post("/api/v1/command", body, "application/json");
    ASSERT_TRUE(r);
    EXPECT_EQ(r->status, 400) << body;
    EXPECT_EQ(json::parse(r->body)["status"], "rejected");
  }
  EXPECT_EQ(snapshot(), before);
}

TEST_F(GatewayTest, DuplicateRequestId) {
  const json c{{"type", "clear_error"}, {"request_id", "same"}, {"params", {{"code", "all"}}}};
  EXPECT_EQ(command(c).first, 200);
  auto [status, body] = command(c);
  EXPECT_EQ(status, 409);
  EXPECT_EQ(body["request_id"], "same");
  EXPECT_EQ(body["status"], "rejected");
}

TEST_F(GatewayTest, ResponseCarriesRequestId) {
  auto [status, body] = command({{"type", "process_resume"}, {"request_id", "r-77"}});
  EXPECT_EQ(status, 200);
  EXPECT_EQ(body["request_id"], "r-77");
  EXPECT_EQ(body["status"], "rejected");
  EXPECT_EQ(body["reason"], "process not suspended");
}

TEST_F(GatewayTest, VacuumOutputPullsPressure) {
  step(20);
  const double before = snapshot()["vacuum_kPa"].get<double>();
  auto [status, body] = command({{"type", "set_do"}, {"request_id", next_id()}, {"params", {{"port", "vacuum"}, {"value", true}}}});
  EXPECT_EQ(body["status"], "accepted");
  step(1000);
  const json s = snapshot();
  EXPECT_LT(s["vacuum_kPa"].get<double>(), before - 10.0);
  EXPECT_EQ(s["dio"]["do"][port::do_vacuum], true);
}

TEST_F(GatewayTest, ProcessPhasesOnEventStream) {
  std::atomic<bool> saw_aligning{false}, saw_event{false};
  std::thread reader([&] {
    httplib::Client sse("127.0.0.1", port);
    sse.set_read_timeout(10, 0);
    std::string buf;
    sse.Get("/api/v1/events", [&](const char* data, std::size_t n) {
      buf.append(data, n);
      if (buf.find("\"phase\":\"aligning\"") != std::string::npos) saw_aligning = true;
      if (buf.find("\"code\":\"process_started\"") != std::string::npos) saw_event = true;
      return !(saw_aligning && saw_event);
    });
  });
  std::this_thread::sleep_for(std::chrono::milliseconds(50));
  auto [status, body] = command({{"type", "process_start"}, {"request_id", next_id()}});
  EXPECT_EQ(body["status"], "accepted");
  const auto deadline = std::chrono::steady_clock::now() + std::chrono::seconds(10);
  while (!(saw_aligning && saw_event) && std::chrono::steady_clock::now() < deadline) {
    step(20);
    std::this_thread::sleep_for(std::chrono::milliseconds(10));
  }
  EXPECT_TRUE(saw_aligning);
  EXPECT_TRUE(saw_event);
  command({{"type", "process_stop"}, {"request_id", next_id()}});
  gw->stop();
  reader.join();
}

TEST_F(GatewayTest, ClearErrorOverHttp) {
  m.pe().daq().set_estop_button(true);
  step(20);
  EXPECT_EQ(snapshot()["errors"]["emergency"], true);
  auto [s1, b1] = command({{"type", "process_start"}, {"request_id", next_id()}});
  EXPECT_EQ(b1["status"], "rejected");
  m.pe().daq().set_estop_button(false);
  step(20);
  auto [s2, b2] = command({{"type", "clear_error"}, {"request_id", next_id()}, {"params", {{"code", "all"}}}});
  EXPECT_EQ(b2["status"], "accepted");
  step(20);
  EXPECT_EQ(snapshot()["any_error"], false);
  auto [s3, b3] = command({{"type", "process_start"}, {"request_id", next_id()}});
  EXPECT_EQ(b3["status"], "accepted");
}

TEST_F(GatewayTest, RecipeAndFrames) {
  auto r = cli->Get("/api/v1/recipe");
  ASSERT_TRUE(r);
  EXPECT_EQ(json::parse(r->body).get<DicingRecipe>(), DicingRecipe{});
  EXPECT_EQ(r->get_header_value("Access-Control-Allow-Origin"), "*");

  EXPECT_EQ(cli->Get("/api/v1/frames/0.png")->status, 404);
  EXPECT_EQ(cli->Get("/api/v1/frames/5.png")->status, 404);
  step(30);
  auto png = cli->Get("/api/v1/frames/0.png");
  ASSERT_TRUE(png);
  ASSERT_EQ(png->status, 200);
  EXPECT_EQ(png->get_header_value("Content-Type"), "image/png");
  ASSERT_GT(png->body.size(), 8u);
  EXPECT_EQ(png->body.substr(1, 3), "PNG");

  auto opt = cli->Options("/api/v1/command");
  ASSERT_TRUE(opt);
  EXPECT_EQ(opt->status, 204);
}

TEST_F(GatewayTest, ReadsNeverTouchEquipment) {
  step(50);
  const ClassCounts before = m.pe().ledger().totals();
  for (int i = 0; i < 300; ++i) {
    ASSERT_TRUE(cli->Get("/api/v1/snapshot"));
    ASSERT_TRUE(cli->Get("/api/v1/recipe"));
  }
  ASSERT_TRUE(cli->Get("/api/v1/frames/1.png"));
  for (int i = 0; i < 10000; ++i) (void)gw->snapshot_body();
  EXPECT_EQ(m.pe().ledger().totals(), before);
}

TEST_F(GatewayTest, SteppingDisabledByDefault) {
  Machine other;
  GatewayOptions o;
  o.port = 0;
  Gateway g(other, o);
  httplib::Client c("127.0.0.1", g.start());
  auto r = c.Post("/api/v1/sim/step", "{}", "application/json");
  ASSERT_TRUE(r);
  EXPECT_EQ(r->status, 404);
  g.stop();
}

TEST_F(GatewayTest, BusyPortThrows) {
  Machine other;
  GatewayOptions o;
  o.port = port;
  Gateway g(other, o);
  EXPECT_THROW(g.start(), std::runtime_error);
}

TEST(Messages, ParseCommands) {
  auto p = parse_command(R"({"type":"move_abs","request_id":"1","params":{"axis":"theta","position":12.5,"v":3}})");
  ASSERT_TRUE(p.command);
  EXPECT_EQ(p.command->type, CommandType::move_abs);
  EXPECT_EQ(p.command->axis, 3u);
  EXPECT_EQ(p.command->position, 12.5);
  EXPECT_EQ(p.command->velocity, 3.0);

  p = parse_command(R"({"type":"set_do","request_id":"2","params":{"port":"coolant","value":true}})");
  ASSERT_TRUE(p.command);
  EXPECT_EQ(p.command->port, port::do_coolant);

  p = parse_command(R"({"type":"verify_kerf","request_id":"3","params":{"lines":[1,2]}})");
  ASSERT_TRUE(p.command);
  EXPECT_EQ(p.command->lines, (std::vector<int>{1, 2}));

  p = parse_command(R"({"type":"set_do","request_id":"4","params":{"port":"spindle","value":1}})");
  EXPECT_FALSE(p.command);
  EXPECT_EQ(p.request_id, "4");
  EXPECT_FALSE(parse_command("[]").command);
}

TEST_F(GatewayTest, FramesMatchEncoder) {
  step(30);
  const json s = snapshot();
  const DisplaySnapshot d = m.display_snapshot();
  const FrameBuffer& f = d.vision[0].last_frame;
  ASSERT_FALSE(f.empty());
  EXPECT_EQ(s["frames"][0]["image"]["png_base64"], base64_encode(encode_png_gray(f.width(), f.height(), f.pixels())));
  EXPECT_EQ(gw->snapshot_body(), serialize_snapshot(d));
}

TEST(Messages, SnapshotSerializationIsDeterministic) {
  Machine a, b;
  a.step(200);
  b.step(200);
  EXPECT_EQ(serialize_snapshot(a.display_snapshot()), serialize_snapshot(b.display_snapshot()));
  EXPECT_EQ(serialize_snapshot(a.display_snapshot()), serialize_snapshot(a.display_snapshot()));
  const json j = json::parse(serialize_snapshot(a.display_snapshot(), false));
  ASSERT_EQ(j["frames"].size(), 2u);
  for (const auto& f : j["frames"]) EXPECT_TRUE(f["image"]["png_base64"].is_null());
}

TEST(Messages, Base64RoundTrip) {
  std::vector<std::uint8_t> bytes(257);
  for (std::size_t i = 0; i < bytes.size(); ++i) bytes[i] = static_cast<std::uint8_t>(i * 7);
  EXPECT_EQ(base64_decode(base64_encode(bytes)), bytes);
  const std::uint8_t man[] = {'M', 'a', 'n'};
  EXPECT_EQ(base64_encode(man), "TWFu");
}

TEST(CimStub, WritesNdjson) {
  const auto path = std::filesystem::temp_directory_path() / "dicer_cim_test.ndjson";
  std::filesystem::remove(path);
  LayerConfig lc;
  lc.report_period_s = 1.0;
  Machine m(MachineConfig::defaults(), lc);
  FactoryServerStub stub(path.string());
  stub.attach(m);
  m.step(2100);
  ASSERT_EQ(stub.records().size(), 2u);
  std::ifstream in(path);
  std::string line;
  int n = 0;
  while (std::getline(in, line)) {
    const json j = json::parse(line);
    EXPECT_EQ(j["product_id"], "WFR-300");
    ++n;
  }
  EXPECT_EQ(n, 2);
  EXPECT_EQ(stub.malformed(), 0u);
}
