#include "fluxkit/agent.hpp"

namespace fluxkit {

std::string to_string(const Action& a) {
  if (a.args.empty()) return a.name.text();
  std::string out = a.name.text() + "(";
  for (std::size_t i = 0; i < a.args.size(); ++i) {
    if (i) out += ',';
    out += to_string(a.args[i]);
  }
  return out + ")";
}

std::string format_sensed(const SensingResult& y, const std::vector<SenseKind>& kinds) {
  std::string out = "[";
  for (std::size_t i = 0; i < y.size(); ++i) {
    if (i) out += ',';
    bool boolean = i < kinds.size() && kinds[i] == SenseKind::Bool;
    out += boolean ? (y[i] ? "true" : "false") : std::to_string(y[i]);
  }
  return out + "]";
}

void Domain::add(ActionSpec spec) {
  std::string name = spec.name;
  specs_[name] = std::move(spec);
}

const ActionSpec& Domain::spec(const Action& a) const {
  auto it = specs_.find(a.name.text());
  if (it == specs_.end()) throw std::invalid_argument("unknown action: " + a.name.text());
  if (it->second.arity != a.args.size())
    throw std::invalid_argument("action " + a.name.text() + " expects " + std::to_string(it->second.arity) +
                                " argument(s)");
  for (const auto& t : a.args)
    if (!t.is_const()) throw std::invalid_argument("action arguments must be ground: " + to_string(a));
  return it->second;
}

bool Agent::poss(const Action& a) { return poss(a, state_); }

bool Agent::poss(const Action& a, State z) {
  const auto& s = domain_.spec(a);
  if (!s.poss) return true;
  return s.poss(store_, z, a);
}

State Agent::state_update(State z, const Action& a, const SensingResult& y) {
  const auto& s = domain_.spec(a);
  if (y.size() != s.sensing.size())
    throw std::invalid_argument("action " + to_string(a) + " expects " + std::to_string(s.sensing.size()) +
                                " sensing value(s), got " + std::to_string(y.size()));
  return s.update(store_, z, a, y);
}

State Agent::execute(const Action& a, Environment& env) {
  bool ok = poss(a);
  SensingResult y = env.perform(a);
  state_ = state_update(state_, a, y);
  log_.push_back(LogEntry{a, y, ok});
  if (on_execute) on_execute(log_.back());
  return state_;
}

}  // namespace fluxkit
