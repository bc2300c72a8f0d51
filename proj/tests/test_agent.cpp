#include <doctest.h>

#include "fixtures.hpp"
#include "fluxkit/knowledge.hpp"

using namespace fluxkit;
using namespace fixtures;

namespace {

struct Fixture {
  Store st;
  Domain dom = cleanbot::make_domain(5, 5);
  State z0;
  explicit Fixture(State (*init)(Store&)) { z0 = init(st); }
};

State office_init(Store& st) { return cleanbot::init_state(st, cleanbot::Scenario::office()); }

// the hallway known free, nothing else
State corridor(Store& st) {
  State z = st.open_state({at(1, 1), facing(1)});
  for (auto [x, y] : hallway()) st.not_holds(occ(x, y), *st.tail(z));
  cleanbot::consistent(st, z, 5, 5);
  return z;
}

}  // namespace

TEST_CASE("poss") {
  Fixture f(office_init);
  Agent ag(f.dom, f.st, f.z0);
  CHECK(ag.poss(Action("clean")));
  CHECK(ag.poss(Action("go")));
  CHECK(ag.poss(Action("turn")));

  Store st;
  State top = st.open_state({at(1, 5), facing(1)});
  cleanbot::consistent(st, top, 5, 5);
  Agent a2(f.dom, st, top);
  CHECK_FALSE(a2.poss(Action("go")));
  CHECK(a2.poss(Action("clean")));
}

TEST_CASE("domain validates actions") {
  Fixture f(office_init);
  Agent ag(f.dom, f.st, f.z0);
  CHECK_THROWS_AS(ag.poss(Action("fly")), std::invalid_argument);
  CHECK_THROWS_AS(ag.poss(Action("go", {I(1)})), std::invalid_argument);
  CHECK_THROWS_AS(ag.state_update(f.z0, Action("go"), {}), std::invalid_argument);
}

TEST_CASE("go, go with sensing") {
  Fixture f(corridor);
  Agent ag(f.dom, f.st, f.z0);
  State z1 = ag.state_update(f.z0, Action("go"), {0});
  State z2 = ag.state_update(z1, Action("go"), {1});
  CHECK(f.st.format_known(z2) == "known: [at(1,3), facing(1) | _]");
  auto d = f.st.dump(z2);
  CHECK(has_line(d, "not_holds(occupied(1,3), Z)"));
  CHECK(has_line(d, "or_holds([occupied(1,4),occupied(2,3)], Z)"));
}

TEST_CASE("sense_loc resolves the orientation") {
  Store st;
  Domain dom = cleanbot::make_domain(5, 5);
  auto d = st.fresh();
  st.post(fd::Formula::disj({fd::eq(d, I(1)), fd::eq(d, I(2))}));
  State z0 = st.open_state({at(1, 1), Fluent("facing", {d})});
  cleanbot::consistent(st, z0, 5, 5);
  Agent ag(dom, st, z0);
  State z1 = ag.state_update(z0, Action("go"), {0});
  State z2 = ag.state_update(z1, Action("sense_loc"), {1, 2});
  CHECK(st.format_known(z2) == "known: [at(1,2), facing(1) | _]");
  CHECK(knows(st, facing(1), z2));
  CHECK(knows_not(st, occ(1, 3), z2));
}

TEST_CASE("alter cancels the disjunction") {
  Store st;
  Domain dom = cleanbot::make_domain(5, 5);
  State z0 = st.open_state();
  st.not_holds(Fluent("open", {ArgTerm::symbol("t1")}), z0);
  st.or_holds({Fluent("open", {ArgTerm::symbol("t2")}), Fluent("open", {ArgTerm::symbol("t3")})}, z0);
  Agent ag(dom, st, z0);
  State z1 = ag.state_update(z0, Action("alter", {ArgTerm::symbol("t1")}), {});
  State z2 = ag.state_update(z1, Action("alter", {ArgTerm::symbol("t2")}), {});
  CHECK(st.format_known(z2) == "known: [open(t1) | _]");
  CHECK(st.dump(z2, "Z0") == "known: [open(t1) | _]\nnot_holds(open(t1), Z0)\n");
}

TEST_CASE("execute") {
  Fixture f(office_init);
  Agent ag(f.dom, f.st, f.z0);
  cleanbot::GridWorld world(cleanbot::Scenario::office());
  int calls = 0;
  ag.on_execute = [&](const LogEntry&) { ++calls; };
  State z = ag.execute(Action("clean"), world);
  CHECK(world.cleaned().count({1, 1}));
  CHECK(knows(f.st, Fluent("cleaned", {I(1), I(1)}), z));
  for (int i = 0; i < 4; ++i) z = ag.execute(Action("turn"), world);
  CHECK(knows(f.st, facing(1), z));
  CHECK(world.pose().d == 1);
  CHECK(calls == 5);
  REQUIRE(ag.log().size() == 5);
  for (auto& e : ag.log()) CHECK(e.poss_verified);
  CHECK(completion_error(f.st, z, world.fluents()).empty());
}

TEST_CASE("the environment refuses a move into the wall") {
  Fixture f(office_init);
  Agent ag(f.dom, f.st, f.z0);
  cleanbot::GridWorld world(cleanbot::Scenario::office());
  ag.execute(Action("turn"), world);
  ag.execute(Action("turn"), world);
  CHECK_FALSE(ag.poss(Action("go")));
  CHECK_THROWS_AS(ag.execute(Action("go"), world), EnvironmentRefusal);
}

TEST_CASE("replaying the log reproduces the state") {
  Store s1, s2;
  Domain dom = cleanbot::make_domain(5, 5);
  auto sc = cleanbot::Scenario::office();
  Agent a1(dom, s1, cleanbot::init_state(s1, sc));
  cleanbot::GridWorld world(sc);
  cleanbot::run_strategy(a1, world, 5, 5);

  Agent a2(dom, s2, cleanbot::init_state(s2, sc));
  State z = a2.state();
  for (auto& e : a1.log()) z = a2.state_update(z, e.action, e.sensed);
  CHECK(s2.dump(z) == s1.dump(a1.state()));
}
