#include <doctest.h>

#include "fluxkit/terms.hpp"

using namespace fluxkit;

namespace {
ArgTerm V(VarId v) { return ArgTerm::var(v); }
ArgTerm I(std::int64_t n) { return ArgTerm::integer(n); }
}  // namespace

TEST_CASE("symbols intern by text") {
  CHECK(Symbol("occupied") == Symbol("occupied"));
  CHECK(Symbol("a") != Symbol("b"));
  CHECK(Symbol("facing").text() == "facing");
}

TEST_CASE("unify") {
  auto s = unify(Fluent("f", {V(1), I(2)}), Fluent("f", {I(1), I(2)}));
  REQUIRE(s);
  CHECK(s->size() == 1);
  CHECK(s->at(1) == I(1));
  CHECK_FALSE(unify(Fluent("f", {I(1)}), Fluent("g", {I(1)})));
  CHECK_FALSE(unify(Fluent("f", {V(1), V(1)}), Fluent("f", {I(1), I(2)})));
  CHECK_THROWS_AS(unify(Fluent("f", {I(1)}), Fluent("f", {I(1), I(1)})), ArityError);
  auto chain = unify(Fluent("f", {V(1), V(2)}), Fluent("f", {V(2), I(3)}));
  REQUIRE(chain);
  CHECK(walk(V(1), *chain) == I(3));
}

TEST_CASE("is_instance") {
  CHECK(is_instance(Fluent("occupied", {I(3), I(0)}), Fluent("occupied", {V(1), I(0)})));
  CHECK_FALSE(is_instance(Fluent("occupied", {V(1), V(2)}), Fluent("occupied", {I(1), I(2)})));
  CHECK(is_instance(Fluent("f", {I(1), I(1)}), Fluent("f", {V(7), V(7)})));
  CHECK_FALSE(is_instance(Fluent("f", {I(1), I(2)}), Fluent("f", {V(7), V(7)})));
  // variables of the instance are constants for matching
  CHECK(is_instance(Fluent("f", {V(3)}), Fluent("f", {V(4)})));
  CHECK_FALSE(is_instance(Fluent("f", {V(3)}), Fluent("f", {I(1)})));
}

TEST_CASE("identical and not_unifiable") {
  CHECK(identical(Fluent("f", {V(1)}), Fluent("f", {V(1)})));
  CHECK_FALSE(identical(Fluent("f", {V(1)}), Fluent("f", {V(2)})));
  CHECK(identical(Fluent("f", {I(1)}), Fluent("f", {I(1)})));
  CHECK(not_unifiable(Fluent("f", {I(1)}), Fluent("f", {I(2)})));
  CHECK_FALSE(not_unifiable(Fluent("f", {V(1)}), Fluent("f", {I(2)})));
  CHECK_FALSE(not_unifiable(Fluent("open", {ArgTerm::symbol("t1")}), Fluent("open", {V(1)})));
}

TEST_CASE("signature rejects a second arity") {
  Signature sig;
  sig.check(Fluent("at", {I(1), I(1)}));
  sig.check(Fluent("at", {I(2), I(3)}));
  CHECK_THROWS_AS(sig.check(Fluent("at", {I(1)})), ArityError);
  CHECK(sig.arity(Symbol("at")) == 2u);
  CHECK_FALSE(sig.arity(Symbol("nowhere")));
}

TEST_CASE("printing and canonical order") {
  CHECK(to_string(Fluent("occupied", {I(1), I(4)})) == "occupied(1,4)");
  CHECK(to_string(Fluent("f", {V(0)}), VarStyle::Anonymous) == "f(_)");
  CHECK(to_string(Fluent("open", {ArgTerm::symbol("t1")})) == "open(t1)");
  CHECK(to_string(Fluent("clean", {})) == "clean");
  CHECK(canonical_compare(Fluent("occupied", {I(1), I(4)}), Fluent("occupied", {I(2), I(3)})) < 0);
  CHECK(canonical_compare(Fluent("f", {I(10)}), Fluent("f", {I(9)})) > 0);
  CHECK(canonical_compare(Fluent("f", {I(10)}), Fluent("f", {ArgTerm::symbol("a")})) < 0);
  CHECK(canonical_compare(Fluent("at", {I(9)}), Fluent("f", {I(1)})) < 0);
}
