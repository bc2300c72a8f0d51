#pragma once

#include <compare>
#include <cstdint>
#include <iosfwd>
#include <set>
#include <string>
#include <vector>

#include "fluxkit/agent.hpp"
#include "fluxkit/store.hpp"

namespace fluxkit::cleanbot {

struct Coord {
  int x = 0;
  int y = 0;
  friend auto operator<=>(const Coord&, const Coord&) = default;
};

// Directions: 1 north, 2 east, 3 south, 4 west.
Coord step(Coord c, int d);

struct Scenario {
  int width = 5;
  int height = 5;
  std::set<Coord> occupied;
  Coord start{1, 1};
  int facing = 1;
  std::vector<Coord> known_free;

  void validate() const;
  bool inside(Coord c) const { return c.x >= 1 && c.y >= 1 && c.x <= width && c.y <= height; }

  static Scenario office();
  /// Start (1,1) facing north, (1,2) and (2,1) known free, every other
  /// cell occupied with probability p.
  static Scenario random(int size, double p, std::uint64_t seed, std::uint64_t run);
  static Scenario parse(std::istream& in);
  static Scenario load(const std::string& path);
};

struct Pose {
  int x = 0;
  int y = 0;
  int d = 1;
};

class GridWorld : public Environment {
 public:
  explicit GridWorld(const Scenario& sc);
  SensingResult perform(const Action& a) override;

  Pose pose() const { return pose_; }
  const std::set<Coord>& cleaned() const { return cleaned_; }
  bool occupied(Coord c) const { return sc_.occupied.count(c) > 0; }
  bool light(Coord c) const;
  /// The ground state as a fluent set.
  std::vector<Fluent> fluents() const;

 private:
  Scenario sc_;
  Pose pose_;
  std::set<Coord> cleaned_;
};

Domain make_domain(int width, int height);

void light_assert(Store& st, const ArgTerm& x, const ArgTerm& y, bool percept, State z);
void adjacent(Store& st, const ArgTerm& x, const ArgTerm& y, const ArgTerm& d, const ArgTerm& x1,
              const ArgTerm& y1, int width, int height);
/// Position and orientation unique, the border empty, no duplicates.
void consistent(Store& st, State z0, int width, int height);
State init_state(Store& st, const Scenario& sc);

struct TraceRow {
  Coord at;
  std::vector<std::vector<int>> choicepoints;
  std::vector<int> backtrack;
  std::string actions;
};

struct RunOptions {
  std::size_t max_actions = 0;  // 0: unlimited
  bool trace = true;
};

struct RunResult {
  std::vector<TraceRow> trace;
  // one entry per executed action
  std::vector<double> select_us;
  std::size_t actions = 0;
};

RunResult run_strategy(Agent& agent, Environment& env, int width, int height, const RunOptions& opt = {});

std::string format_row(const TraceRow& r);

struct Summary {
  std::vector<Coord> cleaned;
  std::vector<Coord> known_occupied;
  Pose pose;
  bool home = false;
  std::size_t clean = 0, turn = 0, go = 0;
};

Summary summarize(Store& st, State z, const GridWorld& world, const Scenario& sc,
                  const std::vector<LogEntry>& log);

}  // namespace fluxkit::cleanbot
