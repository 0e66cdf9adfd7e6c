#include <atomic>
#include <chrono>
#include <csignal>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>
#include <thread>

#include "CLI11.hpp"
#include "dicer/bench/benchmark.hpp"
#include "dicer/bench/capacity.hpp"
#include "dicer/bench/report.hpp"
#include "dicer/dicing/tool_path.hpp"
#include "dicer/gateway/cim.hpp"
#include "dicer/gateway/gateway.hpp"

namespace {

std::atomic<bool> g_stop{false};

void on_signal(int) { g_stop = true; }

void print_report(const dicer::BenchReport& r) {
  std::printf("%-8s %12s %12s %12s %12s %12s %12s %7s %7s\n", "class", "typ.max", "typ.avg", "prop.max", "prop.avg",
              "diff.max", "diff.avg", "rate.max", "rate.avg");
  for (const char* name : {"motion", "vision", "daq", "net", "total"}) {
    const auto& c = r.row(name);
    std::printf("%-8s %12.0f %12.0f %12.0f %12.0f %12.0f %12.0f %6d%% %6d%%\n", name, c.typical.max, c.typical.avg,
                c.proposed.max, c.proposed.avg, c.difference.max, c.difference.avg, c.rate_max, c.rate_avg);
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"dicer: simulated wafer dicing machine"};
  app.require_subcommand(1);

  // bench
  auto* bench = app.add_subcommand("bench", "run the access-count benchmark");
  std::string arch = "proposed";
  std::uint64_t ticks = 0;
  std::uint64_t seed = 1;
  std::string workload_path;
  std::string out_dir = "bench_out";
  bool full = false;
  bench->add_option("--arch", arch, "typical|proposed")->check(CLI::IsMember({"typical", "proposed"}));
  bench->add_option("--ticks", ticks, "simulation ticks; 0 runs the process to completion");
  bench->add_option("--seed", seed);
  bench->add_option("--workload", workload_path, "workload JSON")->check(CLI::ExistingFile);
  bench->add_option("--out", out_dir);
  bench->add_flag("--full", full, "run both architectures to completion and write the comparison");

  // report
  auto* report = app.add_subcommand("report", "compare two benchmark runs");
  std::vector<std::string> compare_paths;
  std::string table_path = "table.json";
  report->add_option("--compare", compare_paths, "typical.json proposed.json")->expected(2)->required();
  report->add_option("--out", table_path);

  // capacity
  auto* capacity = app.add_subcommand("capacity", "available capacity of a run");
  std::string run_path;
  double total_capacity = 0.0;
  capacity->add_option("--run", run_path, "run JSON")->required()->check(CLI::ExistingFile);
  capacity->add_option("--capacity", total_capacity, "total capacity N in accesses per second")->required();

  // serve
  auto* serve = app.add_subcommand("serve", "run the machine behind the HTTP gateway");
  std::string host = "127.0.0.1";
  int port = 8080;
  bool realtime = false;
  double speed = 1.0;
  std::string cim_log;
  std::string recipe_path;
  dicer::Misalignment mis{1.0, -0.5, 0.3};
  serve->add_option("--host", host);
  serve->add_option("--port", port);
  serve->add_flag("--realtime", realtime, "tick against the wall clock (default: lockstep via /api/v1/sim/step)");
  serve->add_option("--speed", speed, "realtime speed factor")->check(CLI::PositiveNumber);
  serve->add_option("--cim-log", cim_log, "NDJSON file for factory-server records");
  serve->add_option("--recipe", recipe_path)->check(CLI::ExistingFile);
  serve->add_option("--dx", mis.dx);
  serve->add_option("--dy", mis.dy);
  serve->add_option("--dtheta", mis.dtheta_deg);

  // toolpath
  auto* toolpath = app.add_subcommand("toolpath", "print the cutting tool path");
  std::string tp_recipe;
  toolpath->add_option("--recipe", tp_recipe)->check(CLI::ExistingFile);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*bench) {
      dicer::WorkloadSpec w = workload_path.empty() ? dicer::WorkloadSpec{} : dicer::load_workload(workload_path);
      w.validate();
      std::filesystem::create_directories(out_dir);
      if (full) {
        const auto cmp = dicer::run_full_comparison(w, seed);
        dicer::emit_run(cmp.typical, out_dir);
        dicer::emit_run(cmp.proposed, out_dir);
        const auto r = dicer::compare(cmp.typical, cmp.proposed);
        dicer::emit_report(r, (std::filesystem::path(out_dir) / "table.json").string());
        std::printf("typical done at tick %llu (%d strokes), proposed done at tick %llu (%d strokes)\n",
                    static_cast<unsigned long long>(cmp.typical_done_tick), cmp.typical_strokes,
                    static_cast<unsigned long long>(cmp.proposed_done_tick), cmp.proposed_strokes);
        print_report(r);
        return 0;
      }
      const auto mode = dicer::parse_mode(arch);
      dicer::AccessLedger l;
      if (ticks == 0) {
        dicer::BenchmarkRun run(w, mode, seed);
        while (!run.finished() && run.tick() < w.max_ticks) run.advance(1000);
        l = run.ledger();
      } else {
        l = dicer::run_benchmark(w, mode, ticks, seed);
      }
      const auto path = dicer::emit_run(l, out_dir);
      std::printf("%s: %llu ticks, motion %llu vision %llu daq %llu net %llu -> %s\n", arch.c_str(),
                  static_cast<unsigned long long>(l.ticks),
                  static_cast<unsigned long long>(l.total(dicer::DeviceClass::motion)),
                  static_cast<unsigned long long>(l.total(dicer::DeviceClass::vision)),
                  static_cast<unsigned long long>(l.total(dicer::DeviceClass::daq)),
                  static_cast<unsigned long long>(l.total(dicer::DeviceClass::net)), path.c_str());
      return 0;
    }

    if (*report) {
      const auto a = dicer::ledger_from_json(dicer::read_json_file(compare_paths[0]));
      const auto b = dicer::ledger_from_json(dicer::read_json_file(compare_paths[1]));
      const auto r = a.mode == "proposed" && b.mode == "typical" ? dicer::compare(b, a) : dicer::compare(a, b);
      dicer::emit_report(r, table_path);
      print_report(r);
      return 0;
    }

    if (*capacity) {
      const auto l = dicer::ledger_from_json(dicer::read_json_file(run_path));
      const double seconds = static_cast<double>(l.ticks) * 0.001;
      const auto model = dicer::estimate_capacity(l, total_capacity, seconds);
      std::printf("windows %zu threads %zu\n", model.n_w.size(), model.n_t.size());
      std::printf("typical  n_a = %.1f%s\n", dicer::available_capacity(model, dicer::ArchitectureMode::typical),
                  dicer::failure_predicted(dicer::available_capacity(model, dicer::ArchitectureMode::typical))
                      ? "  (failure predicted)"
                      : "");
      std::printf("proposed n_a = %.1f%s\n", dicer::available_capacity(model, dicer::ArchitectureMode::proposed),
                  dicer::failure_predicted(dicer::available_capacity(model, dicer::ArchitectureMode::proposed))
                      ? "  (failure predicted)"
                      : "");
      return 0;
    }

    if (*toolpath) {
      const dicer::DicingRecipe r = tp_recipe.empty() ? dicer::DicingRecipe{} : dicer::load_recipe(tp_recipe);
      std::cout << dicer::tool_path_json(dicer::generate_tool_path(r)) << "\n";
      return 0;
    }

    if (*serve) {
      dicer::Machine machine(dicer::MachineConfig::defaults(), {}, mis);
      if (!recipe_path.empty()) {
        const auto ack = machine.load_recipe(dicer::load_recipe(recipe_path));
        if (!ack.accepted) throw std::runtime_error("recipe rejected: " + ack.reason);
      }
      dicer::FactoryServerStub factory(cim_log);
      factory.attach(machine);

      dicer::GatewayOptions opts;
      opts.host = host;
      opts.port = port;
      opts.allow_stepping = !realtime;
      dicer::Gateway gateway(machine, opts);
      const int bound = gateway.start();
      if (realtime) machine.start_realtime(speed);
      std::printf("listening on http://%s:%d (%s)\n", host.c_str(), bound, realtime ? "realtime" : "lockstep");
      std::fflush(stdout);

      std::signal(SIGINT, on_signal);
      std::signal(SIGTERM, on_signal);
      while (!g_stop) std::this_thread::sleep_for(std::chrono::milliseconds(100));
      machine.stop_realtime();
      gateway.stop();
      return 0;
    }
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
