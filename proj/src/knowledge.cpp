#include "fluxkit/knowledge.hpp"

#include <algorithm>
#include <stdexcept>

namespace fluxkit {

namespace {

void require_ground(const Store& st, const Fluent& f, const char* who) {
  if (!st.resolve(f).ground())
    throw std::invalid_argument(std::string(who) + ": fluent must be ground: " + to_string(f));
}

}  // namespace

bool knows(Store& st, const Fluent& f, State z) {
  require_ground(st, f, "knows");
  return st.entails(f, z);
}

bool knows_not(Store& st, const Fluent& f, State z) {
  require_ground(st, f, "knows_not");
  return st.excludes(f, z);
}

std::vector<Binding> knows_val(const Store& st, const std::vector<VarId>& vars, const Fluent& pattern,
                               State z) {
  std::vector<Binding> out;
  Fluent p = st.resolve(pattern);
  for (const auto& k : st.known(z, p.functor)) {
    auto theta = match(k, p);
    if (!theta) continue;
    Binding b;
    bool ground = true;
    for (auto v : vars) {
      ArgTerm t = walk(st.resolve(ArgTerm::var(v)), *theta);
      if (!t.is_const()) {
        ground = false;
        break;
      }
      b[v] = t;
    }
    if (ground && std::find(out.begin(), out.end(), b) == out.end()) out.push_back(std::move(b));
  }
  return out;
}

}  // namespace fluxkit
