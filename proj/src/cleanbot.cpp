#include "fluxkit/cleanbot.hpp"

#include <chrono>
#include <deque>
#include <fstream>
#include <random>
#include <sstream>

#include "fluxkit/knowledge.hpp"
#include "fluxkit/text.hpp"
#include "fluxkit/update.hpp"

namespace fluxkit::cleanbot {

namespace {

using fd::LinExpr;

Fluent at(ArgTerm x, ArgTerm y) { return Fluent("at", {x, y}); }
Fluent facing(ArgTerm d) { return Fluent("facing", {d}); }
Fluent cleaned(ArgTerm x, ArgTerm y) { return Fluent("cleaned", {x, y}); }
Fluent occupied(ArgTerm x, ArgTerm y) { return Fluent("occupied", {x, y}); }
ArgTerm num(std::int64_t v) { return ArgTerm::integer(v); }

// t + k as a term; a fresh aliased variable when t is not a number
ArgTerm offset(Store& st, const ArgTerm& t, int k) {
  ArgTerm r = st.resolve(t);
  if (r.is_int()) return num(r.int_value() + k);
  ArgTerm v = st.fresh();
  st.post(fd::eq(LinExpr::of(v), LinExpr::of(r) + LinExpr::num(k)));
  return v;
}

std::optional<Coord> known_at(Store& st, State z, const ArgTerm& qx, const ArgTerm& qy) {
  auto b = knows_val(st, {qx.var_id(), qy.var_id()}, at(qx, qy), z);
  if (b.empty()) return std::nullopt;
  return Coord{static_cast<int>(b[0].at(qx.var_id()).int_value()),
               static_cast<int>(b[0].at(qy.var_id()).int_value())};
}

}  // namespace

Coord step(Coord c, int d) {
  switch (d) {
    case 1: return {c.x, c.y + 1};
    case 2: return {c.x + 1, c.y};
    case 3: return {c.x, c.y - 1};
    case 4: return {c.x - 1, c.y};
  }
  throw std::invalid_argument("direction out of range: " + std::to_string(d));
}

// --- scenarios -----------------------------------------------------------------

void Scenario::validate() const {
  if (width < 1 || height < 1) throw std::invalid_argument("grid must be at least 1x1");
  if (!inside(start)) throw std::invalid_argument("robot start outside the grid");
  if (facing < 1 || facing > 4) throw std::invalid_argument("robot direction must be 1..4");
  if (occupied.count(start)) throw std::invalid_argument("robot starts in an occupied cell");
  for (auto c : occupied)
    if (!inside(c)) throw std::invalid_argument("occupied cell outside the grid");
  for (auto c : known_free) {
    if (!inside(c)) throw std::invalid_argument("known-free cell outside the grid");
    if (occupied.count(c)) throw std::invalid_argument("known-free cell is occupied");
  }
}

Scenario Scenario::office() {
  Scenario sc;
  sc.occupied = {{1, 4}, {3, 1}, {3, 3}, {5, 3}};
  sc.known_free = {{1, 2}, {2, 1}, {2, 2}, {3, 2}, {4, 2}, {4, 3}, {4, 4},
                   {1, 5}, {2, 5}, {3, 5}, {4, 5}};
  return sc;
}

Scenario Scenario::random(int size, double p, std::uint64_t seed, std::uint64_t run) {
  Scenario sc;
  sc.width = sc.height = size;
  sc.known_free = {{1, 2}, {2, 1}};
  std::seed_seq seq{seed, static_cast<std::uint64_t>(size), run};
  std::mt19937_64 rng(seq);
  std::bernoulli_distribution coin(p);
  for (int y = 1; y <= size; ++y) {
    for (int x = 1; x <= size; ++x) {
      Coord c{x, y};
      if (c == sc.start || c == Coord{1, 2} || c == Coord{2, 1}) continue;
      if (coin(rng)) sc.occupied.insert(c);
    }
  }
  return sc;
}

Scenario Scenario::parse(std::istream& in) {
  Scenario sc;
  sc.known_free.clear();
  bool grid = false;
  bool robot = false;
  std::string line;
  std::size_t n = 0;
  while (std::getline(in, line)) {
    ++n;
    Cursor c(line, n);
    if (c.done()) continue;
    std::string kw = c.ident();
    auto coord = [&] {
      int x = static_cast<int>(c.integer());
      int y = static_cast<int>(c.integer());
      return Coord{x, y};
    };
    if (kw == "grid") {
      sc.width = static_cast<int>(c.integer());
      sc.height = static_cast<int>(c.integer());
      grid = true;
    } else if (kw == "robot") {
      sc.start = coord();
      sc.facing = static_cast<int>(c.integer());
      robot = true;
    } else if (kw == "occupied") {
      sc.occupied.insert(coord());
    } else if (kw == "known-free") {
      sc.known_free.push_back(coord());
    } else {
      c.error("unknown scenario keyword '" + kw + "'");
    }
    if (!c.done()) c.error("trailing text");
  }
  if (!grid) throw ParseError(n, "missing 'grid W H'");
  if (!robot) throw ParseError(n, "missing 'robot X Y DIR'");
  try {
    sc.validate();
  } catch (const std::invalid_argument& e) {
    throw ParseError(n, e.what());
  }
  return sc;
}

Scenario Scenario::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(0, "cannot open " + path);
  return parse(in);
}

// --- environment ----------------------------------------------------------------

GridWorld::GridWorld(const Scenario& sc) : sc_(sc), pose_{sc.start.x, sc.start.y, sc.facing} {}

bool GridWorld::light(Coord c) const {
  for (int d = 1; d <= 4; ++d)
    if (occupied(step(c, d))) return true;
  return false;
}

SensingResult GridWorld::perform(const Action& a) {
  const std::string& n = a.name.text();
  if (n == "clean") {
    cleaned_.insert({pose_.x, pose_.y});
    return {};
  }
  if (n == "turn") {
    pose_.d = pose_.d % 4 + 1;
    return {};
  }
  if (n == "go") {
    Coord next = step({pose_.x, pose_.y}, pose_.d);
    if (!sc_.inside(next)) throw EnvironmentRefusal("go: robot faces a wall");
    pose_.x = next.x;
    pose_.y = next.y;
    return {light(next) ? 1 : 0};
  }
  if (n == "sense_loc") return {pose_.x, pose_.y};
  throw EnvironmentRefusal("unsupported action " + to_string(a));
}

std::vector<Fluent> GridWorld::fluents() const {
  std::vector<Fluent> out{at(num(pose_.x), num(pose_.y)), facing(num(pose_.d))};
  for (auto c : cleaned_) out.push_back(cleanbot::cleaned(num(c.x), num(c.y)));
  for (auto c : sc_.occupied) out.push_back(cleanbot::occupied(num(c.x), num(c.y)));
  return out;
}

// --- domain axioms ----------------------------------------------------------------

void light_assert(Store& st, const ArgTerm& x, const ArgTerm& y, bool percept, State z) {
  // east, north, west, south
  std::vector<Fluent> ns{occupied(offset(st, x, 1), y), occupied(x, offset(st, y, 1)),
                         occupied(offset(st, x, -1), y), occupied(x, offset(st, y, -1))};
  if (!percept) {
    for (const auto& f : ns) st.not_holds(f, z);
    return;
  }
  std::vector<Disjunct> ds(ns.begin(), ns.end());
  st.or_holds(ds, z);
}

void adjacent(Store& st, const ArgTerm& x, const ArgTerm& y, const ArgTerm& d, const ArgTerm& x1,
              const ArgTerm& y1, int width, int height) {
  st.post_range(x, 1, width);
  st.post_range(x1, 1, width);
  st.post_range(y, 1, height);
  st.post_range(y1, 1, height);
  st.post_range(d, 1, 4);
  auto X = LinExpr::of(x), Y = LinExpr::of(y), D = LinExpr::of(d);
  auto X1 = LinExpr::of(x1), Y1 = LinExpr::of(y1);
  auto way = [&](int dir, int dx, int dy) {
    return fd::Formula::conj({fd::eq(D, LinExpr::num(dir)), fd::eq(X1, X + LinExpr::num(dx)),
                              fd::eq(Y1, Y + LinExpr::num(dy))});
  };
  st.post(fd::Formula::disj({way(1, 0, 1), way(2, 1, 0), way(3, 0, -1), way(4, -1, 0)}));
}

void consistent(Store& st, State z0, int width, int height) {
  ArgTerm x = st.fresh(), y = st.fresh();
  auto z1 = st.holds_split(at(x, y), z0);
  if (!z1) throw Inconsistent("consistent: no position");
  st.post_range(x, 1, width);
  st.post_range(y, 1, height);
  st.not_holds_all(at(st.fresh(), st.fresh()), *z1);
  ArgTerm d = st.fresh();
  auto z2 = st.holds_split(facing(d), z0);
  if (!z2) throw Inconsistent("consistent: no orientation");
  st.post_range(d, 1, 4);
  st.not_holds_all(facing(st.fresh()), *z2);
  st.not_holds_all(occupied(st.fresh(), num(0)), z0);
  st.not_holds_all(occupied(st.fresh(), num(height + 1)), z0);
  st.not_holds_all(occupied(num(0), st.fresh()), z0);
  st.not_holds_all(occupied(num(width + 1), st.fresh()), z0);
  st.duplicate_free(z0);
}

State init_state(Store& st, const Scenario& sc) {
  sc.validate();
  State z0 = st.open_state({at(num(sc.start.x), num(sc.start.y)), facing(num(sc.facing))});
  State z = *st.tail(z0);
  st.not_holds(occupied(num(sc.start.x), num(sc.start.y)), z);
  for (auto c : sc.known_free) st.not_holds(occupied(num(c.x), num(c.y)), z);
  consistent(st, z0, sc.width, sc.height);
  return z0;
}

Domain make_domain(int width, int height) {
  Domain dom;
  dom.add(ActionSpec{"clean", 0, {}, nullptr, [](Store& st, State z, const Action&, const SensingResult&) {
                       ArgTerm x = st.fresh(), y = st.fresh();
                       if (!st.holds(at(x, y), z)) throw Inconsistent("clean: no position");
                       return update(st, z, {cleaned(x, y)}, {});
                     }});
  dom.add(ActionSpec{"turn", 0, {}, nullptr, [](Store& st, State z, const Action&, const SensingResult&) {
                       ArgTerm d = st.fresh(), d1 = st.fresh();
                       if (!st.holds(facing(d), z)) throw Inconsistent("turn: no orientation");
                       auto D = LinExpr::of(d), D1 = LinExpr::of(d1);
                       st.post(fd::Formula::disj(
                           {fd::Formula::conj({fd::lt(D, LinExpr::num(4)), fd::eq(D1, D + LinExpr::num(1))}),
                            fd::Formula::conj({fd::eq(D, LinExpr::num(4)), fd::eq(D1, LinExpr::num(1))})}));
                       return update(st, z, {facing(d1)}, {facing(d)});
                     }});
  dom.add(ActionSpec{
      "go", 0, {SenseKind::Bool},
      [width, height](Store& st, State z, const Action&) {
        ArgTerm x = st.fresh(), y = st.fresh(), d = st.fresh();
        auto pos = knows_val(st, {x.var_id(), y.var_id()}, at(x, y), z);
        auto dir = knows_val(st, {d.var_id()}, facing(d), z);
        if (pos.empty() || dir.empty()) return false;
        auto s = st.snapshot();
        bool ok = true;
        try {
          adjacent(st, pos[0].at(x.var_id()), pos[0].at(y.var_id()), dir[0].at(d.var_id()), st.fresh(), st.fresh(),
                   width, height);
        } catch (const Inconsistent&) {
          ok = false;
        }
        st.rollback(s);
        return ok;
      },
      [width, height](Store& st, State z, const Action&, const SensingResult& y) {
        ArgTerm x0 = st.fresh(), y0 = st.fresh(), d = st.fresh();
        if (!st.holds(at(x0, y0), z)) throw Inconsistent("go: no position");
        if (!st.holds(facing(d), z)) throw Inconsistent("go: no orientation");
        ArgTerm x1 = st.fresh(), y1 = st.fresh();
        adjacent(st, x0, y0, d, x1, y1, width, height);
        State z2 = update(st, z, {at(x1, y1)}, {at(x0, y0)});
        light_assert(st, x1, y1, y[0] != 0, z2);
        return z2;
      }});
  dom.add(ActionSpec{"sense_loc", 0, {SenseKind::Int, SenseKind::Int}, nullptr,
                     [](Store& st, State z, const Action&, const SensingResult& y) {
                       if (!st.holds(at(num(y[0]), num(y[1])), z)) throw Inconsistent("sense_loc: position refuted");
                       return z;
                     }});
  dom.add(ActionSpec{"alter", 1, {}, nullptr, [](Store& st, State z, const Action& a, const SensingResult&) {
                       Fluent open("open", {a.args[0]});
                       if (knows(st, open, z)) return update(st, z, {}, {open});
                       if (knows_not(st, open, z)) return update(st, z, {open}, {});
                       return cancel_fluent(st, open, z);
                     }});
  return dom;
}

// --- strategy -------------------------------------------------------------------

RunResult run_strategy(Agent& agent, Environment& env, int width, int height, const RunOptions& opt) {
  using clock = std::chrono::steady_clock;
  Store& st = agent.store();
  RunResult res;
  ArgTerm qx = st.fresh(), qy = st.fresh(), qd = st.fresh();
  std::size_t row = SIZE_MAX;
  auto t_sel = clock::now();

  auto exec = [&](const char* name, char letter) {
    if (opt.max_actions && res.actions >= opt.max_actions) throw std::runtime_error("action budget exhausted");
    auto t = clock::now();
    res.select_us.push_back(std::chrono::duration<double, std::micro>(t - t_sel).count());
    agent.execute(Action(name), env);
    ++res.actions;
    if (row != SIZE_MAX) res.trace[row].actions += letter;
    t_sel = clock::now();
  };

  auto turn_to_go = [&](int d) {
    for (int turns = 0;; ++turns) {
      if (knows(st, facing(num(d)), agent.state())) {
        exec("go", 'G');
        return;
      }
      if (turns == 4) throw std::logic_error("turn_to_go: orientation never known");
      exec("turn", 'T');
    }
  };

  auto go_in_direction = [&](int d) {
    State z = agent.state();
    auto here = known_at(st, z, qx, qy);
    if (!here) return false;
    std::optional<Coord> there;
    auto s = st.snapshot();
    try {
      ArgTerm x1 = st.fresh(), y1 = st.fresh();
      adjacent(st, num(here->x), num(here->y), num(d), x1, y1, width, height);
      ArgTerm rx = st.resolve(x1), ry = st.resolve(y1);
      if (rx.is_int() && ry.is_int())
        there = Coord{static_cast<int>(rx.int_value()), static_cast<int>(ry.int_value())};
    } catch (const Inconsistent&) {
    }
    st.rollback(s);
    if (!there) return false;
    if (knows(st, cleaned(num(there->x), num(there->y)), z)) return false;
    if (!knows_not(st, occupied(num(there->x), num(there->y)), z)) return false;
    turn_to_go(d);
    return true;
  };

  exec("clean", 'C');
  std::deque<std::vector<int>> choicepoints{{1, 2, 3, 4}};
  std::deque<int> backtrack;
  (void)qd;
  while (true) {
    if (opt.trace) {
      TraceRow r;
      r.at = known_at(st, agent.state(), qx, qy).value_or(Coord{0, 0});
      r.choicepoints.assign(choicepoints.begin(), choicepoints.end());
      r.backtrack.assign(backtrack.begin(), backtrack.end());
      res.trace.push_back(std::move(r));
      row = res.trace.size() - 1;
    }
    auto& choices = choicepoints.front();
    if (!choices.empty()) {
      int d = choices.front();
      choices.erase(choices.begin());
      if (go_in_direction(d)) {
        exec("clean", 'C');
        choicepoints.push_front({1, 2, 3, 4});
        backtrack.push_front(d);
      }
      continue;
    }
    if (backtrack.empty()) break;
    choicepoints.pop_front();
    int reverse = (backtrack.front() + 1) % 4 + 1;
    backtrack.pop_front();
    turn_to_go(reverse);
  }
  return res;
}

std::string format_row(const TraceRow& r) {
  std::ostringstream out;
  auto list = [](const std::vector<int>& xs) {
    std::string s = "[";
    for (std::size_t i = 0; i < xs.size(); ++i) {
      if (i) s += ',';
      s += std::to_string(xs[i]);
    }
    return s + "]";
  };
  out << '(' << r.at.x << ',' << r.at.y << ") [";
  for (std::size_t i = 0; i < r.choicepoints.size(); ++i) {
    if (i) out << ',';
    out << list(r.choicepoints[i]);
  }
  out << "] " << list(r.backtrack) << ' ' << (r.actions.empty() ? "-" : r.actions);
  return out.str();
}

Summary summarize(Store& st, State z, const GridWorld& world, const Scenario& sc,
                  const std::vector<LogEntry>& log) {
  Summary s;
  s.cleaned.assign(world.cleaned().begin(), world.cleaned().end());
  for (int y = 1; y <= sc.height; ++y)
    for (int x = 1; x <= sc.width; ++x)
      if (knows(st, occupied(num(x), num(y)), z)) s.known_occupied.push_back({x, y});
  s.pose = world.pose();
  s.home = s.pose.x == sc.start.x && s.pose.y == sc.start.y;
  for (const auto& e : log) {
    const auto& n = e.action.name.text();
    if (n == "clean") ++s.clean;
    else if (n == "turn") ++s.turn;
    else if (n == "go") ++s.go;
  }
  return s;
}

}  // namespace fluxkit::cleanbot
