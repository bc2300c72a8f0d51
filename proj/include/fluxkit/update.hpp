#pragma once

#include <optional>
#include <vector>

#include "fluxkit/store.hpp"

namespace fluxkit {

using EffectList = std::vector<Fluent>;

bool holds_assert(Store& st, const Fluent& f, State z);
std::optional<State> holds_split(Store& st, const Fluent& f, State z);

State cancel_fluent(Store& st, const Fluent& f, State z);
State minus(Store& st, State z, const EffectList& fs);
State plus(Store& st, State z, const EffectList& fs);
State update(Store& st, State z, const EffectList& theta_plus, const EffectList& theta_minus);

}  // namespace fluxkit
