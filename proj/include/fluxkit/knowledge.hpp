#pragma once

#include <map>
#include <vector>

#include "fluxkit/store.hpp"

namespace fluxkit {

using Binding = std::map<VarId, ArgTerm>;

// Both require a fluent that is ground once resolved through the fd store.
bool knows(Store& st, const Fluent& f, State z);
bool knows_not(Store& st, const Fluent& f, State z);

/// Values of `vars` fixed by matching `pattern` against the listed fluents,
/// in list order. Never touches the store.
std::vector<Binding> knows_val(const Store& st, const std::vector<VarId>& vars, const Fluent& pattern,
                               State z);

}  // namespace fluxkit
