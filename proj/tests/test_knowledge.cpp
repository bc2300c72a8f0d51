#include <doctest.h>

#include "fixtures.hpp"
#include "fluxkit/knowledge.hpp"

using namespace fluxkit;
using namespace fixtures;

TEST_CASE("knows on zeta") {
  Store st;
  State z = zeta(st);
  auto before = st.dump(z);
  CHECK(knows_not(st, occ(1, 3), z));
  CHECK_FALSE(knows(st, occ(1, 4), z));
  CHECK_FALSE(knows_not(st, occ(1, 4), z));
  CHECK(knows(st, at(1, 3), z));
  CHECK(st.dump(z) == before);
}

TEST_CASE("knows on the initial state") {
  Store st;
  State z = cleanbot::init_state(st, cleanbot::Scenario::office());
  CHECK(knows(st, at(1, 1), z));
  CHECK(knows_not(st, facing(2), z));
  auto d = st.fresh();
  auto vals = knows_val(st, {d.var_id()}, Fluent("facing", {d}), z);
  REQUIRE(vals.size() == 1);
  CHECK(vals[0].at(d.var_id()) == I(1));

  Store s2;
  State c = s2.closed_state({Fluent("f", {I(1)})});
  CHECK(knows(s2, Fluent("f", {I(1)}), c));
  CHECK(knows_not(s2, Fluent("f", {I(2)}), c));
}

TEST_CASE("knows rejects non-ground fluents") {
  Store st;
  State z = st.open_state();
  CHECK_THROWS_AS(knows(st, Fluent("f", {st.fresh()}), z), std::invalid_argument);
}

TEST_CASE("knows_val") {
  Store st;
  auto x = st.fresh();
  st.post(fd::Formula::disj({fd::eq(x, I(1)), fd::eq(x, I(2))}));
  State z0 = st.open_state({Fluent("at", {x, I(2)}), facing(2)});
  st.duplicate_free(z0);

  auto d = st.fresh();
  auto r1 = knows_val(st, {d.var_id()}, Fluent("facing", {d}), z0);
  REQUIRE(r1.size() == 1);
  CHECK(r1[0].at(d.var_id()) == I(2));

  auto a = st.fresh(), b = st.fresh();
  CHECK(knows_val(st, {a.var_id(), b.var_id()}, Fluent("at", {a, b}), z0).empty());

  auto y = st.fresh();
  auto r3 = knows_val(st, {y.var_id()}, Fluent("at", {st.fresh(), y}), z0);
  REQUIRE(r3.size() == 1);
  CHECK(r3[0].at(y.var_id()) == I(2));
}
