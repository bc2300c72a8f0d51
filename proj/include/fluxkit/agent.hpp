#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "fluxkit/store.hpp"

namespace fluxkit {

struct Action {
  Symbol name;
  std::vector<ArgTerm> args;

  Action() = default;
  Action(std::string_view n, std::vector<ArgTerm> a = {}) : name(n), args(std::move(a)) {}
  friend bool operator==(const Action&, const Action&) = default;
};

std::string to_string(const Action& a);

enum class SenseKind { Bool, Int };

// Booleans travel as 0/1.
using SensingResult = std::vector<std::int64_t>;

std::string format_sensed(const SensingResult& y, const std::vector<SenseKind>& kinds);

struct ActionSpec {
  std::string name;
  std::size_t arity = 0;
  std::vector<SenseKind> sensing;
  std::function<bool(Store&, State, const Action&)> poss;
  std::function<State(Store&, State, const Action&, const SensingResult&)> update;
};

class Domain {
 public:
  void add(ActionSpec spec);
  const ActionSpec& spec(const Action& a) const;
  bool has(std::string_view name) const { return specs_.count(std::string(name)) > 0; }

 private:
  std::map<std::string, ActionSpec, std::less<>> specs_;
};

class Environment {
 public:
  virtual ~Environment() = default;
  virtual SensingResult perform(const Action& a) = 0;
};

class EnvironmentRefusal : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct LogEntry {
  Action action;
  SensingResult sensed;
  bool poss_verified = false;
};

class Agent {
 public:
  Agent(const Domain& d, Store& st, State z0) : domain_(d), store_(st), state_(z0) {}

  bool poss(const Action& a);
  bool poss(const Action& a, State z);
  State state_update(State z, const Action& a, const SensingResult& y);
  State execute(const Action& a, Environment& env);

  State state() const { return state_; }
  Store& store() { return store_; }
  const Domain& domain() const { return domain_; }
  const std::vector<LogEntry>& log() const { return log_; }

  // Called after each executed action.
  std::function<void(const LogEntry&)> on_execute;

 private:
  const Domain& domain_;
  Store& store_;
  State state_;
  std::vector<LogEntry> log_;
};

}  // namespace fluxkit
