#pragma once

#include <array>
#include <chrono>
#include <cstdint>
#include <deque>
#include <optional>
#include <string>
#include <unordered_map>
#include <variant>
#include <vector>

#include "fluxkit/fd.hpp"
#include "fluxkit/terms.hpp"

namespace fluxkit {

using CellId = std::uint32_t;
using ConsId = std::uint32_t;

/// Handle to a fluent list inside a Store. Cheap to copy; only meaningful
/// together with the Store that created it.
struct State {
  CellId cell = 0;
  friend bool operator==(State, State) = default;
};

/// Equational disjunct: the argument lists are pairwise equal.
struct EqD {
  std::vector<ArgTerm> xs;
  std::vector<ArgTerm> ys;
  friend bool operator==(const EqD&, const EqD&) = default;
};

using Disjunct = std::variant<Fluent, EqD>;

enum class ConstraintKind : std::uint8_t {
  NotHolds = 0,
  NotHoldsAll,
  OrHolds,
  DuplicateFree,
  Cancel,
  Cancelled,
};

enum class Quantifier { Exists, Forall };

/// Disequality of two fluents. Under Forall the variables of `a` are read
/// universally: they add no disequality of their own, but a repeated one
/// forces the matching arguments of `b` apart.
fd::Formula build_or_neq(Quantifier q, const Fluent& a, const Fluent& b);
fd::Formula build_and_eq(const std::vector<ArgTerm>& xs, const std::vector<ArgTerm>& ys);
fd::Formula build_or_and_eq(const std::vector<EqD>& eqs);

/// A constraint as it currently sits at the open tail of a state, with
/// variables resolved through the fd store.
struct ConstraintView {
  ConstraintKind kind;
  Fluent fluent;
  std::vector<Disjunct> members;
};

std::string to_string(const Disjunct& d, VarStyle style = VarStyle::Anonymous);
std::string to_string(const ConstraintView& c, const std::string& target = "Z");

/// The FLUX constraint store: fluent lists with open or closed tails, the
/// state constraints attached to open tails, and the embedded fd solver.
/// Every mutation is trailed while a snapshot is active.
class Store {
 public:
  struct Snapshot {
    std::size_t trail = 0;
    std::size_t depth = 0;
    fd::Solver::Mark fd;
    std::vector<std::pair<Fluent, CellId>> pending;
  };

  struct Stats {
    std::uint64_t assertions = 0;
    std::chrono::nanoseconds assert_time{0};
  };

  Store();

  // --- terms ---------------------------------------------------------------
  ArgTerm fresh();
  fd::Solver& fd() { return fd_; }
  const fd::Solver& fd() const { return fd_; }
  Signature& signature() { return signature_; }

  ArgTerm resolve(const ArgTerm& t) const;
  Fluent resolve(const Fluent& f) const;
  /// Identity modulo fd bindings and offset-free aliases.
  bool same(const Fluent& a, const Fluent& b) const;
  /// Unifiable given the current fd domains.
  bool unifiable(const Fluent& a, const Fluent& b) const;
  bool instance_of(const Fluent& g, const Fluent& pattern) const;

  // --- lists ---------------------------------------------------------------
  State open_state(const std::vector<Fluent>& known = {});
  State closed_state(const std::vector<Fluent>& known);
  State cons(const Fluent& f, State rest);
  bool is_open(State s) const;
  /// The listed (positive) fluents, resolved.
  std::vector<Fluent> known(State s) const;
  /// Only the listed fluents with this functor.
  std::vector<Fluent> known(State s, Symbol functor) const;
  /// Cell of the open tail, or nullopt for closed lists.
  std::optional<State> tail(State s) const;

  // --- constraints (throw Inconsistent) ------------------------------------
  void not_holds(const Fluent& f, State s);
  void not_holds_all(const Fluent& f, State s);
  void or_holds(const std::vector<Disjunct>& members, State s);
  void duplicate_free(State s);
  void post(const fd::Formula& f);
  void post_range(const ArgTerm& t, std::int64_t lo, std::int64_t hi);
  /// Binds the open tail of `s` to [f | Z'] and returns Z'.
  State bind_tail(State s, const Fluent& f);
  /// Binds the open tail of `s` to [].
  void close_tail(State s);

  /// holds(F,Z): commits to the first consistent alternative. False (and
  /// no effect) when none exists.
  bool holds(const Fluent& f, State s);
  /// holds(F,Z,Z1): first consistent alternative, returning Z1.
  std::optional<State> holds_split(const Fluent& f, State s);
  /// cancel(F,Z1,Z2).
  State cancel(const Fluent& f, State s);

  /// Speculative tests, always rolled back. They accept schematic fluents.
  bool entails(const Fluent& f, State s);   // \+ not_holds(F,Z)
  bool excludes(const Fluent& f, State s);  // \+ holds(F,Z)

  // --- snapshots -----------------------------------------------------------
  Snapshot snapshot();
  void rollback(const Snapshot& s);
  void release(const Snapshot& s);
  std::size_t depth() const { return depth_; }

  bool consistent() const { return !failed_ && fd_.consistent(); }

  // --- inspection ----------------------------------------------------------
  std::vector<ConstraintView> constraints(State s) const;
  /// `known: [...]` followed by one canonical constraint per line.
  std::string dump(State s, const std::string& target = "Z") const;
  std::string format_known(State s) const;
  bool has_markers(State s) const;
  std::size_t constraint_count(State s) const;

  const Stats& stats() const { return stats_; }

 private:
  struct Cell {
    enum class Kind : std::uint8_t { Unbound, Nil, Cons };
    Kind kind = Kind::Unbound;
    Fluent head;
    CellId next = 0;
    std::int32_t bucket = -1;
  };

  struct Constraint {
    ConstraintKind kind;
    Fluent fluent;
    std::vector<Disjunct> members;
    std::int32_t bucket = -1;
    bool alive = true;
  };

  struct Bucket {
    CellId cell = 0;
    std::array<std::vector<ConsId>, 6> lists;
    std::unordered_map<Fluent, ConsId, FluentHash> ground_nh;
    std::unordered_map<std::int32_t, std::vector<ConsId>> nh_by_functor;
    std::vector<ConsId> nh_nonground;
  };

  struct SaveCell {
    CellId id;
    Cell cell;
  };
  struct NewCell {};
  struct NewCons {};
  struct KillCons {
    ConsId id;
  };
  struct NewBucket {};
  struct BucketCell {
    std::int32_t bucket;
    CellId cell;
  };
  struct ListPush {
    std::int32_t bucket;
    std::uint8_t list;
  };
  struct FunctorPush {
    std::int32_t bucket;
    std::int32_t functor;
  };
  struct NongroundPush {
    std::int32_t bucket;
  };
  struct GroundSet {
    std::int32_t bucket;
    Fluent key;
    std::optional<ConsId> old;
  };
  struct DependentPush {};
  struct SaveFailed {
    bool failed;
  };
  using TrailEntry = std::variant<SaveCell, NewCell, NewCons, KillCons, NewBucket, BucketCell,
                                  ListPush, FunctorPush, NongroundPush, GroundSet, DependentPush,
                                  SaveFailed>;

  enum class AltKind { Head, Tail };
  struct Alt {
    AltKind kind;
    CellId cell;
  };

  class AssertTimer;

  bool trailing() const { return depth_ > 0; }
  void record(TrailEntry e);
  CellId new_cell(Cell c);
  void set_cell(CellId id, Cell c);
  std::int32_t ensure_bucket(CellId cell);
  void kill(ConsId id);
  bool fail();
  void require(bool ok);
  void check_signature(const Fluent& f);

  // walking posts
  bool post_fd(const fd::Formula& f);
  bool neq(Quantifier q, const Fluent& g, const Fluent& h);
  bool walk_not_holds(const Fluent& f, CellId l);
  bool walk_not_holds_all(const Fluent& f, CellId l);
  bool walk_or_holds(std::vector<Disjunct> members, CellId l);
  bool walk_duplicate_free(CellId l);
  bool settle(ConstraintKind kind, Fluent f, std::vector<Disjunct> members, CellId tail);

  enum class OrStep { Keep, Done, Failed };
  OrStep simplify_or(std::vector<Disjunct>& members, CellId l);
  bool trial(const fd::Formula& f);

  bool bind(CellId tail, const Fluent& f, CellId& new_tail);
  bool close(CellId tail);
  bool unify_fluents(const Fluent& a, const Fluent& b);
  std::vector<Alt> alternatives(const Fluent& f, CellId l) const;
  bool apply(const Fluent& f, const Alt& a);

  bool activate(ConsId id);
  bool activate_not_holds(ConsId id);
  bool activate_not_holds_all(ConsId id);
  bool activate_or_holds(ConsId id);
  bool activate_cancel(ConsId id);
  bool activate_cancelled(ConsId id);

  void sync_fd();
  bool drain();
  bool run();

  std::vector<Fluent> copy_prefix(CellId from, CellId stop) const;
  CellId build_list(const std::vector<Fluent>& heads, CellId end);
  std::vector<VarId> constraint_vars(const Constraint& c) const;

  fd::Solver fd_;
  Signature signature_;
  std::vector<Cell> cells_;
  std::vector<Constraint> cons_;
  std::vector<Bucket> buckets_;
  std::vector<ConsId> dependents_;
  std::deque<ConsId> agenda_;
  std::vector<std::pair<Fluent, CellId>> pending_;
  std::vector<VarId> changed_;
  std::vector<TrailEntry> trail_;
  std::size_t depth_ = 0;
  bool failed_ = false;
  int timer_depth_ = 0;
  Stats stats_;
};

}  // namespace fluxkit
