#include "fluxkit/update.hpp"

#include <stdexcept>

namespace fluxkit {

namespace {

void check_markers(const Store& st, State z) {
  if (st.has_markers(z)) throw std::logic_error("cancellation markers survived propagation");
}

}  // namespace

bool holds_assert(Store& st, const Fluent& f, State z) { return st.holds(f, z); }

std::optional<State> holds_split(Store& st, const Fluent& f, State z) { return st.holds_split(f, z); }

State cancel_fluent(Store& st, const Fluent& f, State z) {
  State out = st.cancel(f, z);
  check_markers(st, out);
  return out;
}

State minus(Store& st, State z, const EffectList& fs) {
  for (const auto& f : fs) {
    if (st.entails(f, z)) {
      auto rest = st.holds_split(f, z);
      // known but not removable: the store lost a model on the way
      if (!rest) throw Inconsistent("minus: known fluent cannot be split off");
      z = *rest;
    } else if (st.excludes(f, z)) {
      continue;
    } else {
      z = cancel_fluent(st, f, z);
      st.not_holds(f, z);
    }
  }
  return z;
}

State plus(Store& st, State z, const EffectList& fs) {
  for (const auto& f : fs) {
    if (st.excludes(f, z)) {
      z = st.cons(f, z);
    } else if (st.entails(f, z)) {
      continue;
    } else {
      State rest = cancel_fluent(st, f, z);
      st.not_holds(f, rest);
      z = st.cons(f, rest);
    }
  }
  return z;
}

State update(Store& st, State z, const EffectList& theta_plus, const EffectList& theta_minus) {
  State mid = minus(st, z, theta_minus);
  State out = plus(st, mid, theta_plus);
  check_markers(st, out);
  return out;
}

}  // namespace fluxkit
