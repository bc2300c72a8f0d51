#include "fluxkit/bench.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <numeric>
#include <ostream>
#include <stdexcept>
#include <mutex>
#include <thread>

#include "fluxkit/cleanbot.hpp"

namespace fluxkit {

std::array<double, 10> decile_means(const std::vector<double>& xs) {
  std::array<double, 10> out{};
  std::size_t n = xs.size();
  if (n == 0) return out;
  for (std::size_t k = 0; k < 10; ++k) {
    std::size_t b = k * n / 10, e = (k + 1) * n / 10;
    if (e == b) e = std::min(n, b + 1);
    if (b >= n) b = n - 1;
    out[k] = std::accumulate(xs.begin() + static_cast<std::ptrdiff_t>(b), xs.begin() + static_cast<std::ptrdiff_t>(e),
                             0.0) /
             static_cast<double>(e - b);
  }
  return out;
}

double percentile(std::vector<double> xs, double q) {
  if (xs.empty()) return 0;
  std::sort(xs.begin(), xs.end());
  auto rank = static_cast<std::size_t>(std::ceil(q * static_cast<double>(xs.size())));
  return xs[std::clamp<std::size_t>(rank, 1, xs.size()) - 1];
}

BenchRow bench_one(int size, int run, double occupancy, std::uint64_t seed) {
  using namespace cleanbot;
  auto sc = Scenario::random(size, occupancy, seed, static_cast<std::uint64_t>(run));
  auto t0 = std::chrono::steady_clock::now();
  Store st;
  State z0 = init_state(st, sc);
  Domain dom = make_domain(size, size);
  Agent agent(dom, st, z0);
  GridWorld world(sc);
  RunOptions opt;
  opt.max_actions = 16 * static_cast<std::size_t>(size * size);
  opt.trace = false;
  RunResult res = run_strategy(agent, world, size, size, opt);
  auto t1 = std::chrono::steady_clock::now();

  BenchRow r;
  r.size = size;
  r.run = run;
  r.seed = seed;
  r.actions = res.actions;
  r.cleaned = world.cleaned().size();
  r.total_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
  if (!res.select_us.empty())
    r.mean_select_us = std::accumulate(res.select_us.begin(), res.select_us.end(), 0.0) /
                       static_cast<double>(res.select_us.size());
  r.p90_select_us = percentile(res.select_us, 0.9);
  r.deciles = decile_means(res.select_us);
  const auto& s = st.stats();
  if (s.assertions)
    r.mean_assert_us = std::chrono::duration<double, std::micro>(s.assert_time).count() / static_cast<double>(s.assertions);
  return r;
}

std::vector<BenchRow> run_bench(const BenchConfig& cfg) {
  if (cfg.runs < 1) throw std::invalid_argument("runs must be positive");
  if (!(cfg.occupancy >= 0 && cfg.occupancy < 1)) throw std::invalid_argument("occupancy must be in [0,1)");
  for (int s : cfg.sizes)
    if (s < 2) throw std::invalid_argument("sizes must be at least 2");
  std::vector<std::pair<int, int>> jobs;
  for (int s : cfg.sizes)
    for (int r = 0; r < cfg.runs; ++r) jobs.emplace_back(s, r);
  std::vector<BenchRow> rows(jobs.size());
  unsigned threads = cfg.threads ? cfg.threads : std::max(1u, std::thread::hardware_concurrency());
  threads = std::min<unsigned>(threads, static_cast<unsigned>(jobs.size()));
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mu;
  auto worker = [&] {
    for (std::size_t i; (i = next++) < jobs.size();) {
      try {
        rows[i] = bench_one(jobs[i].first, jobs[i].second, cfg.occupancy, cfg.seed);
      } catch (...) {
        std::lock_guard lock(error_mu);
        if (!error) error = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
  return rows;
}

std::string csv_header() {
  std::string h = "size,run,seed,actions,cleaned,total_ms,mean_select_us,p90_select_us";
  for (int k = 1; k <= 10; ++k) h += ",decile_" + std::to_string(k);
  return h + ",mean_assert_us";
}

std::string csv_line(const BenchRow& r) {
  char buf[64];
  auto num = [&](double v) {
    std::snprintf(buf, sizeof buf, "%.3f", v);
    return std::string(buf);
  };
  std::string s = std::to_string(r.size) + "," + std::to_string(r.run) + "," + std::to_string(r.seed) + "," +
                  std::to_string(r.actions) + "," + std::to_string(r.cleaned) + "," + num(r.total_ms) + "," +
                  num(r.mean_select_us) + "," + num(r.p90_select_us);
  for (double d : r.deciles) s += "," + num(d);
  return s + "," + num(r.mean_assert_us);
}

void write_csv(std::ostream& out, const std::vector<BenchRow>& rows) {
  out << csv_header() << "\n";
  for (const auto& r : rows) out << csv_line(r) << "\n";
}

}  // namespace fluxkit
