#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace fluxkit {

struct BenchConfig {
  std::vector<int> sizes{5, 6, 7};
  int runs = 10;
  double occupancy = 0.15;
  std::uint64_t seed = 42;
  unsigned threads = 0;  // 0: one per core
};

struct BenchRow {
  int size = 0;
  int run = 0;
  std::uint64_t seed = 0;
  std::size_t actions = 0;
  std::size_t cleaned = 0;
  double total_ms = 0;
  double mean_select_us = 0;
  double p90_select_us = 0;
  std::array<double, 10> deciles{};
  double mean_assert_us = 0;
};

BenchRow bench_one(int size, int run, double occupancy, std::uint64_t seed);
std::vector<BenchRow> run_bench(const BenchConfig& cfg);

/// Mean of each tenth of `xs`, in order.
std::array<double, 10> decile_means(const std::vector<double>& xs);
double percentile(std::vector<double> xs, double q);

std::string csv_header();
std::string csv_line(const BenchRow& r);
void write_csv(std::ostream& out, const std::vector<BenchRow>& rows);

}  // namespace fluxkit
