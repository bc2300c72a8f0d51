#include <doctest.h>

#include <sstream>

#include "fixtures.hpp"
#include "fluxkit/knowledge.hpp"
#include "fluxkit/text.hpp"

using namespace fluxkit;
using namespace fluxkit::cleanbot;
using namespace fixtures;

TEST_CASE("light on zeta") {
  Store st;
  State z = zeta(st);
  CHECK(has_line(st.dump(z), "or_holds([occupied(1,4),occupied(2,3)], Z)"));
  light_assert(st, I(2), I(2), false, z);
  auto k = st.known(z);
  CHECK(std::find(k.begin(), k.end(), occ(1, 4)) != k.end());
  auto d = st.dump(z);
  CHECK(has_line(d, "not_holds(occupied(2,3), Z)"));
  CHECK(d.find("or_holds") == std::string::npos);
}

TEST_CASE("light with every neighbour known free") {
  Store st;
  State z = st.open_state();
  for (auto [x, y] : std::vector<std::pair<int, int>>{{2, 1}, {2, 3}, {1, 2}, {3, 2}}) st.not_holds(occ(x, y), z);
  CHECK_THROWS_AS(light_assert(st, I(2), I(2), true, z), Inconsistent);
}

TEST_CASE("adjacent") {
  Store st;
  auto x1 = st.fresh(), y1 = st.fresh();
  adjacent(st, I(1), I(1), I(1), x1, y1, 5, 5);
  CHECK(st.resolve(x1) == I(1));
  CHECK(st.resolve(y1) == I(2));

  Store s2;
  CHECK_THROWS_AS(adjacent(s2, I(1), I(5), I(1), s2.fresh(), s2.fresh(), 5, 5), Inconsistent);

  Store s3;
  auto d = s3.fresh();
  adjacent(s3, I(3), I(3), d, I(3), I(2), 5, 5);
  CHECK(s3.resolve(d) == I(3));
}

TEST_CASE("initial state dump") {
  Store st;
  State z = init_state(st, Scenario::office());
  std::string want = "known: [at(1,1), facing(1) | _]\n";
  for (auto [x, y] : std::vector<std::pair<int, int>>{{1, 1}, {1, 2}, {1, 5}, {2, 1}, {2, 2}, {2, 5},
                                                      {3, 2}, {3, 5}, {4, 2}, {4, 3}, {4, 4}, {4, 5}})
    want += "not_holds(occupied(" + std::to_string(x) + "," + std::to_string(y) + "), Z)\n";
  want +=
      "not_holds_all(at(_,_), Z)\nnot_holds_all(facing(_), Z)\n"
      "not_holds_all(occupied(0,_), Z)\nnot_holds_all(occupied(6,_), Z)\n"
      "not_holds_all(occupied(_,0), Z)\nnot_holds_all(occupied(_,6), Z)\nduplicate_free(Z)\n";
  CHECK(st.dump(z) == want);
  CHECK(knows(st, at(1, 1), z));
}

TEST_CASE("grid world") {
  GridWorld w(Scenario::office());
  CHECK(w.perform(Action("go")) == SensingResult{0});
  CHECK(w.perform(Action("go")) == SensingResult{1});
  CHECK(w.perform(Action("sense_loc")) == SensingResult{1, 3});
  w.perform(Action("turn"));
  w.perform(Action("turn"));
  w.perform(Action("turn"));
  CHECK(w.pose().d == 4);
  w.perform(Action("turn"));
  CHECK(w.pose().d == 1);
  CHECK(w.light({2, 4}));
  CHECK_FALSE(w.light({2, 2}));
}

TEST_CASE("scenario files") {
  std::istringstream in("# test\ngrid 3 4\nrobot 1 1 2\noccupied 3 3\nknown-free 1 2\n");
  auto sc = Scenario::parse(in);
  CHECK(sc.width == 3);
  CHECK(sc.height == 4);
  CHECK(sc.facing == 2);
  CHECK(sc.occupied.count({3, 3}));
  REQUIRE(sc.known_free.size() == 1);

  std::istringstream bad("grid 3 3\nrobot 1 1 1\noccupied 7 1\n");
  CHECK_THROWS_AS(Scenario::parse(bad), ParseError);
  std::istringstream junk("grid 3 3\nteleport 1 1\n");
  try {
    Scenario::parse(junk);
    FAIL("no error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 2);
  }
  std::istringstream home("grid 3 3\nrobot 1 1 1\noccupied 1 1\n");
  CHECK_THROWS_AS(Scenario::parse(home), ParseError);
}

TEST_CASE("random scenarios are reproducible") {
  auto a = Scenario::random(7, 0.15, 42, 3), b = Scenario::random(7, 0.15, 42, 3);
  CHECK(a.occupied == b.occupied);
  CHECK_FALSE(a.occupied.count({1, 1}));
  CHECK_FALSE(a.occupied.count({1, 2}));
  CHECK_FALSE(a.occupied.count({2, 1}));
  auto empty = Scenario::random(5, 0.0, 1, 0);
  CHECK(empty.occupied.empty());
}

TEST_CASE("strategy on the office floor") {
  Store st;
  auto sc = Scenario::office();
  Domain dom = make_domain(5, 5);
  Agent ag(dom, st, init_state(st, sc));
  GridWorld world(sc);
  auto r = run_strategy(ag, world, 5, 5);
  REQUIRE(r.trace.size() >= 9);
  CHECK(format_row(r.trace[0]) == "(1,1) [[1,2,3,4]] [] GC");
  auto s = summarize(st, ag.state(), world, sc, ag.log());
  CHECK(s.cleaned.size() == 20);
  CHECK(s.known_occupied.size() == 4);
  CHECK(s.home);
  CHECK(r.select_us.size() == ag.log().size());
}

TEST_CASE("2x2 empty floor") {
  Store st;
  std::istringstream in("grid 2 2\nrobot 1 1 1\nknown-free 1 2\nknown-free 2 1\n");
  auto sc = Scenario::parse(in);
  Domain dom = make_domain(2, 2);
  Agent ag(dom, st, init_state(st, sc));
  GridWorld world(sc);
  run_strategy(ag, world, 2, 2);
  CHECK(world.cleaned().size() == 4);
  CHECK(world.pose().x == 1);
  CHECK(world.pose().y == 1);
}
