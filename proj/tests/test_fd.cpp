#include <doctest.h>

#include <functional>
#include <random>

#include "fluxkit/fd.hpp"

using namespace fluxkit;
using namespace fluxkit::fd;

namespace {
LinExpr X(VarId v) { return LinExpr::var(v); }
LinExpr N(std::int64_t n) { return LinExpr::num(n); }
}  // namespace

TEST_CASE("ranges") {
  Solver s;
  VarId d = s.new_var();
  CHECK(s.post_range(d, 1, 4));
  CHECK_FALSE(s.post(eq(X(d), N(7))));
  CHECK_FALSE(s.consistent());

  Solver t;
  VarId x = t.new_var();
  CHECK(t.post_range(x, 1, 5));
  CHECK(t.post_range(x, 1, 5));
  CHECK(t.lo(x) == 1);
  CHECK(t.hi(x) == 5);

  Solver u;
  VarId e = u.new_var();
  u.post_range(e, 1, 4);
  CHECK(u.post(ne(X(e), N(1))));
  CHECK(u.post(ne(X(e), N(2))));
  CHECK(u.post(ne(X(e), N(3))));
  CHECK(u.value(e) == 4);
}

TEST_CASE("adjacent disjunction picks the north branch") {
  Solver s;
  VarId d = s.new_var(), x = s.new_var(), y = s.new_var(), x1 = s.new_var(), y1 = s.new_var();
  auto branch = [&](int dir, LinExpr dx, LinExpr dy) {
    return Formula::conj({eq(X(d), N(dir)), eq(X(x1), X(x) + dx), eq(X(y1), X(y) + dy)});
  };
  CHECK(s.post(Formula::disj({branch(1, N(0), N(1)), branch(2, N(1), N(0)), branch(3, N(0), N(-1)),
                              branch(4, N(-1), N(0))})));
  CHECK(s.post(eq(X(d), N(1))));
  CHECK(s.post(eq(X(x), N(1))));
  CHECK(s.post(eq(X(y), N(1))));
  CHECK(s.value(x1) == 1);
  CHECK(s.value(y1) == 2);
}

TEST_CASE("failing formulas") {
  Solver s;
  CHECK_FALSE(s.post(Formula::falsity()));
  Solver t;
  VarId x = t.new_var();
  t.post_range(x, 3, 3);
  CHECK_FALSE(t.post(Formula::disj({ne(X(x), N(3))})));
}

TEST_CASE("decided") {
  Solver s;
  VarId x = s.new_var(), y = s.new_var();
  CHECK(s.decided(eq(X(x), X(y))) == Truth::Unknown);
  s.post_range(x, 1, 2);
  CHECK(s.decided(eq(X(x), N(3))) == Truth::False);
  CHECK(s.post(eq(X(x), X(y))));
  CHECK(s.decided(ne(X(x), X(y))) == Truth::False);
  CHECK(s.decided(eq(X(y) + N(1), X(x) + N(1))) == Truth::True);
}

TEST_CASE("offset aliases") {
  Solver s;
  VarId a = s.new_var(), b = s.new_var();
  CHECK(s.post(eq(X(a), X(b) + N(1))));
  CHECK(s.post(eq(X(b), N(4))));
  CHECK(s.value(a) == 5);
  CHECK_FALSE(s.post(eq(X(a), X(b))));
}

TEST_CASE("symbols are distinct constants") {
  Solver s;
  VarId v = s.new_var();
  auto a = LinExpr::of(ArgTerm::symbol("a")), b = LinExpr::of(ArgTerm::symbol("b"));
  CHECK(s.decided(eq(a, b)) == Truth::False);
  CHECK(s.post(eq(X(v), a)));
  CHECK(s.decided(eq(X(v), b)) == Truth::False);
}

TEST_CASE("mark and rollback") {
  Solver s;
  VarId x = s.new_var();
  s.post_range(x, 0, 9);
  auto m = s.mark();
  CHECK(s.post(eq(X(x), N(3))));
  auto m2 = s.mark();
  CHECK_FALSE(s.post(eq(X(x), N(4))));
  s.rollback(m2);
  CHECK(s.consistent());
  CHECK(s.value(x) == 3);
  s.rollback(m);
  CHECK_FALSE(s.value(x));
  CHECK(s.lo(x) == 0);
  CHECK(s.hi(x) == 9);
}

// Random formulas over at most five variables with domains inside 0..6,
// checked against exhaustive enumeration.
namespace {

struct RandomFormula {
  std::mt19937_64& rng;
  int vars;
  int pick(int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng); }

  LinExpr expr() {
    LinExpr e = pick(3) == 0 ? N(pick(7)) : X(static_cast<VarId>(pick(vars)));
    if (pick(3) == 0) e += N(pick(3) - 1);
    return e;
  }
  Formula atom() {
    switch (pick(4)) {
      case 0: return eq(expr(), expr());
      case 1: return ne(expr(), expr());
      case 2: return lt(expr(), expr());
      default: return le(expr(), expr());
    }
  }
  Formula formula(int depth) {
    if (depth == 0 || pick(3) == 0) return atom();
    std::vector<Formula> parts;
    int n = 1 + pick(3);
    for (int i = 0; i < n; ++i) parts.push_back(formula(depth - 1));
    return pick(2) ? Formula::conj(parts) : Formula::disj(parts);
  }
};

std::int64_t eval(const LinExpr& e, const std::vector<std::int64_t>& v) {
  std::int64_t s = e.constant;
  for (auto& [k, x] : e.terms) s += k * v[x];
  return s;
}

bool eval(const Formula& f, const std::vector<std::int64_t>& v) {
  switch (f.kind) {
    case Formula::Kind::True: return true;
    case Formula::Kind::False: return false;
    case Formula::Kind::Atom: {
      auto l = eval(f.atom.lhs, v), r = eval(f.atom.rhs, v);
      switch (f.atom.op) {
        case Op::Eq: return l == r;
        case Op::Ne: return l != r;
        case Op::Lt: return l < r;
        case Op::Le: return l <= r;
        case Op::Gt: return l > r;
        case Op::Ge: return l >= r;
      }
      return false;
    }
    case Formula::Kind::And:
      for (auto& p : f.parts)
        if (!eval(p, v)) return false;
      return true;
    case Formula::Kind::Or:
      for (auto& p : f.parts)
        if (eval(p, v)) return true;
      return false;
  }
  return false;
}

}  // namespace

TEST_CASE("solver is sound against enumeration") {
  std::mt19937_64 rng(7);
  int cases = 0;
  for (int it = 0; it < 3000; ++it) {
    int n = 1 + static_cast<int>(rng() % 5);
    RandomFormula gen{rng, n};
    std::vector<std::pair<std::int64_t, std::int64_t>> dom;
    Solver s;
    for (int i = 0; i < n; ++i) {
      s.new_var();
      std::int64_t lo = gen.pick(7), hi = lo + gen.pick(7 - static_cast<int>(lo));
      dom.push_back({lo, hi});
      s.post_range(static_cast<VarId>(i), lo, hi);
    }
    std::vector<Formula> posted;
    bool ok = true;
    int steps = 1 + gen.pick(4);
    for (int k = 0; k < steps && ok; ++k) {
      posted.push_back(gen.formula(2));
      ok = s.post(posted.back());
    }
    Formula query = gen.formula(1);
    Truth verdict = ok ? s.decided(query) : Truth::Unknown;

    std::vector<std::vector<std::int64_t>> sols;
    std::vector<std::int64_t> v(n);
    std::function<void(int)> rec = [&](int i) {
      if (i == n) {
        for (auto& f : posted)
          if (!eval(f, v)) return;
        sols.push_back(v);
        return;
      }
      for (v[i] = dom[i].first; v[i] <= dom[i].second; ++v[i]) rec(i + 1);
    };
    rec(0);

    INFO("case " << it);
    if (!ok) {
      CHECK(sols.empty());
      continue;
    }
    ++cases;
    for (auto& sol : sols) {
      for (int i = 0; i < n; ++i) {
        REQUIRE(s.contains(static_cast<VarId>(i), sol[i]));
      }
      if (verdict == Truth::True) REQUIRE(eval(query, sol));
      if (verdict == Truth::False) REQUIRE_FALSE(eval(query, sol));
    }
  }
  CHECK(cases > 500);
}
