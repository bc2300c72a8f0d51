#pragma once

#include <algorithm>
#include <string>
#include <utility>
#include <vector>

#include "fluxkit/cleanbot.hpp"
#include "fluxkit/store.hpp"

namespace fixtures {

using namespace fluxkit;

inline ArgTerm I(std::int64_t n) { return ArgTerm::integer(n); }
inline Fluent occ(int x, int y) { return Fluent("occupied", {I(x), I(y)}); }
inline Fluent at(int x, int y) { return Fluent("at", {I(x), I(y)}); }
inline Fluent facing(int d) { return Fluent("facing", {I(d)}); }

inline const std::vector<std::pair<int, int>>& hallway() {
  static const std::vector<std::pair<int, int>> h{{1, 1}, {1, 2}, {2, 1}, {2, 2}, {3, 2}, {4, 2},
                                                  {4, 3}, {4, 4}, {1, 5}, {2, 5}, {3, 5}, {4, 5}};
  return h;
}

// The robot after going north twice: no light at (1,2), light at (1,3).
inline State zeta(Store& st) {
  State z = st.open_state();
  for (auto [x, y] : hallway()) st.not_holds(occ(x, y), z);
  st.not_holds_all(Fluent("occupied", {st.fresh(), I(0)}), z);
  st.not_holds_all(Fluent("occupied", {st.fresh(), I(6)}), z);
  st.not_holds_all(Fluent("occupied", {I(0), st.fresh()}), z);
  st.not_holds_all(Fluent("occupied", {I(6), st.fresh()}), z);
  State zeta = st.cons(at(1, 3), st.cons(facing(1),
      st.cons(Fluent("cleaned", {I(1), I(1)}), st.cons(Fluent("cleaned", {I(1), I(2)}),
      st.cons(Fluent("cleaned", {I(1), I(3)}), z)))));
  st.duplicate_free(zeta);
  cleanbot::light_assert(st, I(1), I(2), false, zeta);
  cleanbot::light_assert(st, I(1), I(3), true, zeta);
  return zeta;
}

// Empty when the ground state `world` is a completion of z: the listed
// fluents are among them and the rest can fill the tail.
inline std::string completion_error(Store& st, State z, const std::vector<Fluent>& world) {
  std::vector<Fluent> rest = world;
  for (auto& k : st.known(z)) {
    Fluent g = st.resolve(k);
    if (!g.ground()) return "listed fluent " + to_string(g) + " is not ground";
    auto it = std::find(rest.begin(), rest.end(), g);
    if (it == rest.end()) return "listed fluent " + to_string(g) + " is false";
    rest.erase(it);
  }
  auto tail = st.tail(z);
  if (!tail) return rest.empty() ? "" : "closed list misses " + to_string(rest.front());
  auto snap = st.snapshot();
  std::string err;
  try {
    State t = *tail;
    for (auto& f : rest) t = st.bind_tail(t, f);
    st.close_tail(t);
  } catch (const Inconsistent&) {
    err = "ground truth violates the constraints";
  }
  st.rollback(snap);
  return err;
}

inline bool has_line(const std::string& dump, const std::string& line) {
  return ("\n" + dump + "\n").find("\n" + line + "\n") != std::string::npos;
}

}  // namespace fixtures
