#include <doctest.h>

#include "fixtures.hpp"
#include "fluxkit/update.hpp"

using namespace fluxkit;
using namespace fixtures;

TEST_CASE("holds_assert on zeta") {
  Store st;
  State z = zeta(st);
  {
    auto snap = st.snapshot();
    CHECK(holds_assert(st, occ(1, 4), z));
    st.rollback(snap);
  }
  CHECK_FALSE(holds_assert(st, occ(1, 3), z));
  Store s2;
  CHECK_FALSE(holds_assert(s2, occ(1, 3), s2.closed_state({})));
}

TEST_CASE("holds_split") {
  Store st;
  State z = st.open_state({at(1, 1), facing(1)});
  auto r = holds_split(st, facing(1), z);
  REQUIRE(r);
  auto k = st.known(*r);
  REQUIRE(k.size() == 1);
  CHECK(k[0] == at(1, 1));

  Store s2;
  auto d = s2.fresh();
  State w = s2.open_state({facing(1)});
  auto r2 = holds_split(s2, Fluent("facing", {d}), w);
  REQUIRE(r2);
  CHECK(s2.resolve(d) == I(1));
  CHECK(s2.known(*r2).empty());
  CHECK(s2.is_open(*r2));

  Store s3;
  CHECK_FALSE(holds_split(s3, facing(2), s3.closed_state({facing(1)})));
}

TEST_CASE("minus") {
  Store st;
  State z = st.open_state({at(1, 1)});
  st.duplicate_free(z);
  State z1 = minus(st, z, {at(1, 1)});
  CHECK(st.known(z1).empty());
  CHECK(st.excludes(at(1, 1), z1));
  CHECK(minus(st, z, {}) == z);

  // holds f(y), f(a) or f(b); removing f(a) drops all of it
  Store s2;
  auto y = s2.fresh();
  State w = s2.open_state({Fluent("f", {y})});
  s2.or_holds({Fluent("f", {ArgTerm::symbol("a")}), Fluent("f", {ArgTerm::symbol("b")})}, w);
  State w1 = minus(s2, w, {Fluent("f", {ArgTerm::symbol("a")})});
  auto k = s2.known(w1);
  for (auto& f : k) CHECK(f.functor != Symbol("f"));
  auto d = s2.dump(w1);
  CHECK(d.find("or_holds") == std::string::npos);
  CHECK(has_line(d, "not_holds(f(a), Z)"));
}

TEST_CASE("plus") {
  Store st;
  State z = st.open_state({at(1, 2)});
  st.not_holds(Fluent("cleaned", {I(1), I(2)}), *st.tail(z));
  State z1 = plus(st, z, {Fluent("cleaned", {I(1), I(2)})});
  auto k = st.known(z1);
  REQUIRE(k.size() == 2);
  CHECK(k[0] == Fluent("cleaned", {I(1), I(2)}));
  CHECK(plus(st, z, {}) == z);

  Store s2;
  State w = s2.open_state();
  s2.or_holds({Fluent("open", {ArgTerm::symbol("t2")}), Fluent("open", {ArgTerm::symbol("t3")})}, w);
  State w1 = plus(s2, w, {Fluent("open", {ArgTerm::symbol("t2")})});
  CHECK(s2.format_known(w1) == "known: [open(t2) | _]");
  CHECK(s2.dump(w1).find("or_holds") == std::string::npos);
}

TEST_CASE("update") {
  Store st;
  State z = st.open_state({at(1, 1), facing(1)});
  st.duplicate_free(z);
  State z1 = update(st, z, {at(1, 2)}, {at(1, 1)});
  auto k = st.known(z1);
  REQUIRE(k.size() == 2);
  CHECK(k[0] == at(1, 2));
  CHECK(k[1] == facing(1));
  CHECK(update(st, z1, {}, {}) == z1);
}

TEST_CASE("cancel_fluent") {
  Store st;
  State z = st.open_state();
  auto t1 = ArgTerm::symbol("t1");
  st.not_holds(Fluent("open", {t1}), z);
  st.or_holds({Fluent("open", {ArgTerm::symbol("t2")}), Fluent("open", {ArgTerm::symbol("t3")})}, z);
  State z1 = cancel_fluent(st, Fluent("open", {ArgTerm::symbol("t2")}), z);
  auto d = st.dump(z1);
  CHECK(d.find("or_holds") == std::string::npos);
  CHECK(has_line(d, "not_holds(open(t1), Z)"));

  Store s2;
  State w = s2.open_state();
  s2.not_holds(occ(1, 1), w);
  auto before = s2.dump(w);
  State w1 = cancel_fluent(s2, Fluent("open", {t1}), w);
  CHECK(s2.dump(w1) == before);
  CHECK_FALSE(s2.has_markers(w1));

  Store s3;
  State v = s3.open_state({Fluent("open", {t1})});
  State v1 = cancel_fluent(s3, Fluent("open", {s3.fresh()}), v);
  CHECK(s3.known(v1).empty());
}
