#include <doctest.h>

#include "oracle.hpp"

using namespace oracle;

TEST_CASE("propagation keeps the completion set, ground specs") {
  int failures = 0, threw = 0;
  for (std::uint64_t i = 0; i < 2500; ++i) {
    Gen g(1000 + i);
    Spec sp = g.spec(3 + g.pick(8), 0, 1 + g.pick(5), true);
    bool t = false;
    auto err = check_propagation(sp, t);
    threw += t;
    if (!err.empty() && failures++ < 3) FAIL_CHECK("seed " << 1000 + i << ": " << err);
  }
  CHECK(failures == 0);
  CHECK(threw > 0);
}

TEST_CASE("propagation keeps the completion set, with variables") {
  int failures = 0, threw = 0;
  for (std::uint64_t i = 0; i < 2500; ++i) {
    Gen g(50000 + i);
    Spec sp = g.spec(3 + g.pick(5), 2, 1 + g.pick(5), false);
    bool t = false;
    auto err = check_propagation(sp, t);
    threw += t;
    if (!err.empty() && failures++ < 3) FAIL_CHECK("seed " << 50000 + i << ": " << err);
  }
  CHECK(failures == 0);
  CHECK(threw > 0);
}

TEST_CASE("knows and knows_not agree with entailment") {
  int failures = 0;
  for (std::uint64_t i = 0; i < 2500; ++i) {
    Gen g(90000 + i);
    bool ground = i % 2 == 0;
    Spec sp = g.spec(3 + g.pick(ground ? 8 : 5), 2, 1 + g.pick(5), ground);
    auto err = check_knowledge(sp);
    if (!err.empty() && failures++ < 3) FAIL_CHECK("seed " << 90000 + i << ": " << err);
  }
  CHECK(failures == 0);
}

TEST_CASE("update on complete states is set update") {
  int failures = 0;
  for (std::uint64_t i = 0; i < 1500; ++i) {
    Gen g(130000 + i);
    auto err = check_complete_update(g);
    if (!err.empty() && failures++ < 3) FAIL_CHECK("seed " << 130000 + i << ": " << err);
  }
  CHECK(failures == 0);
}

TEST_CASE("weak update keeps every image of a completion") {
  int failures = 0;
  for (std::uint64_t i = 0; i < 1500; ++i) {
    Gen g(170000 + i);
    auto err = check_weak_update(g);
    if (!err.empty() && failures++ < 3) FAIL_CHECK("seed " << 170000 + i << ": " << err);
  }
  CHECK(failures == 0);
}
