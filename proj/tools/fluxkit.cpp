#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "fluxkit/bench.hpp"
#include "fluxkit/cleanbot.hpp"
#include "fluxkit/script.hpp"
#include "fluxkit/text.hpp"

using namespace fluxkit;

namespace {

int cmd_query(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    std::cerr << "error: cannot open " << path << "\n";
    return kExitUsage;
  }
  return run_script(in, std::cout, std::cerr);
}

std::string coords(const std::vector<cleanbot::Coord>& cs) {
  std::string s;
  for (auto c : cs) s += (s.empty() ? "" : " ") + ("(" + std::to_string(c.x) + "," + std::to_string(c.y) + ")");
  return s;
}

int cmd_run(const std::string& path, bool trace, const std::string& out_path) {
  using namespace cleanbot;
  Scenario sc;
  if (!std::ifstream(path)) {
    std::cerr << "error: cannot open " << path << "\n";
    return kExitUsage;
  }
  try {
    sc = Scenario::load(path);
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << path << ": " << e.what() << "\n";
    return kExitUsage;
  }
  std::ofstream file;
  if (!out_path.empty()) {
    file.open(out_path);
    if (!file) {
      std::cerr << "error: cannot write " << out_path << "\n";
      return kExitUsage;
    }
  }
  std::ostream& out = out_path.empty() ? std::cout : file;
  try {
    Store st;
    State z0 = init_state(st, sc);
    Domain dom = make_domain(sc.width, sc.height);
    Agent agent(dom, st, z0);
    GridWorld world(sc);
    std::size_t n = 0;
    if (trace) {
      agent.on_execute = [&](const LogEntry& e) {
        auto p = world.pose();
        out << "STEP " << ++n << ' ' << to_string(e.action)
            << " sensed=" << format_sensed(e.sensed, dom.spec(e.action).sensing) << " pose=" << p.x << ',' << p.y
            << ',' << p.d << "\n";
      };
    }
    RunOptions opt;
    opt.max_actions = 16 * static_cast<std::size_t>(sc.width * sc.height);
    run_strategy(agent, world, sc.width, sc.height, opt);
    auto s = summarize(st, agent.state(), world, sc, agent.log());
    out << "cleaned: " << coords(s.cleaned) << "\n";
    out << "known-occupied: " << coords(s.known_occupied) << "\n";
    out << "actions: clean=" << s.clean << " turn=" << s.turn << " go=" << s.go << " total=" << agent.log().size()
        << "\n";
    out << "cleaned=" << s.cleaned.size() << " occupied-known=" << s.known_occupied.size()
        << " home=" << (s.home ? "true" : "false") << "\n";
  } catch (const Inconsistent& e) {
    std::cerr << "inconsistent: " << e.what() << "\n";
    return kExitInconsistent;
  }
  return kExitOk;
}

std::vector<int> parse_sizes(const std::string& text) {
  std::vector<int> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    int v = std::stoi(item, &used);
    if (used != item.size()) throw std::invalid_argument("bad size '" + item + "'");
    out.push_back(v);
  }
  if (out.empty()) throw std::invalid_argument("no sizes given");
  return out;
}

int cmd_bench(const std::string& sizes, int runs, double occupancy, std::uint64_t seed, unsigned threads,
              const std::string& out_path) {
  BenchConfig cfg;
  try {
    cfg.sizes = parse_sizes(sizes);
  } catch (const std::exception& e) {
    std::cerr << "usage error: --sizes: " << e.what() << "\n";
    return kExitUsage;
  }
  cfg.runs = runs;
  cfg.occupancy = occupancy;
  cfg.seed = seed;
  cfg.threads = threads;
  std::vector<BenchRow> rows;
  try {
    rows = run_bench(cfg);
  } catch (const std::invalid_argument& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const Inconsistent& e) {
    std::cerr << "inconsistent: " << e.what() << "\n";
    return kExitInconsistent;
  }
  if (out_path.empty()) {
    write_csv(std::cout, rows);
  } else {
    std::ofstream f(out_path);
    if (!f) {
      std::cerr << "error: cannot write " << out_path << "\n";
      return kExitUsage;
    }
    write_csv(f, rows);
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"fluxkit: incomplete-state reasoning and the cleanbot agent"};
  app.require_subcommand(1);

  std::string query_file;
  auto* query = app.add_subcommand("query", "replay a query script");
  query->add_option("FILE", query_file, "script file")->required();

  std::string run_file, run_out;
  bool run_trace = false;
  auto* run = app.add_subcommand("run", "run the cleanbot on a scenario");
  run->add_option("FILE", run_file, "scenario file")->required();
  run->add_flag("--trace", run_trace, "print one line per executed action");
  run->add_option("--out", run_out, "write output to PATH");

  std::string sizes = "5,6,7", bench_out;
  int runs = 10;
  double occupancy = 0.15;
  std::uint64_t seed = 42;
  unsigned threads = 0;
  auto* bench = app.add_subcommand("bench", "benchmark random scenarios, CSV output");
  bench->add_option("--sizes", sizes, "comma separated grid sides");
  bench->add_option("--runs", runs, "runs per size");
  bench->add_option("--occupancy", occupancy, "probability that an office is occupied");
  bench->add_option("--seed", seed, "base seed");
  bench->add_option("--threads", threads, "worker threads (0: one per core)");
  bench->add_option("--out", bench_out, "write CSV to PATH");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : kExitUsage;
  }
  if (*query) return cmd_query(query_file);
  if (*run) return cmd_run(run_file, run_trace, run_out);
  return cmd_bench(sizes, runs, occupancy, seed, threads, bench_out);
}
