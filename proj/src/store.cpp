#include "fluxkit/store.hpp"

#include <algorithm>

namespace fluxkit {

namespace {

bool is_fluent(const Disjunct& d) { return std::holds_alternative<Fluent>(d); }

std::string join_args(const std::vector<ArgTerm>& xs, VarStyle style) {
  std::string out = "[";
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i) out += ',';
    out += to_string(xs[i], style);
  }
  return out + "]";
}

const char* kind_name(ConstraintKind k) {
  switch (k) {
    case ConstraintKind::NotHolds: return "not_holds";
    case ConstraintKind::NotHoldsAll: return "not_holds_all";
    case ConstraintKind::OrHolds: return "or_holds";
    case ConstraintKind::DuplicateFree: return "duplicate_free";
    case ConstraintKind::Cancel: return "cancel";
    case ConstraintKind::Cancelled: return "cancelled";
  }
  return "?";
}

std::strong_ordering compare_disjunct(const Disjunct& a, const Disjunct& b) {
  if (is_fluent(a) != is_fluent(b)) return is_fluent(a) ? std::strong_ordering::less : std::strong_ordering::greater;
  if (is_fluent(a)) return canonical_compare(std::get<Fluent>(a), std::get<Fluent>(b));
  const auto& x = std::get<EqD>(a);
  const auto& y = std::get<EqD>(b);
  auto lex = [](const std::vector<ArgTerm>& p, const std::vector<ArgTerm>& q) {
    for (std::size_t i = 0; i < std::min(p.size(), q.size()); ++i)
      if (auto c = canonical_compare(p[i], q[i]); c != 0) return c;
    return p.size() <=> q.size();
  };
  if (auto c = lex(x.xs, y.xs); c != 0) return c;
  return lex(x.ys, y.ys);
}

std::strong_ordering compare_view(const ConstraintView& a, const ConstraintView& b) {
  if (auto c = a.kind <=> b.kind; c != 0) return c;
  if (a.kind == ConstraintKind::OrHolds) {
    for (std::size_t i = 0; i < std::min(a.members.size(), b.members.size()); ++i)
      if (auto c = compare_disjunct(a.members[i], b.members[i]); c != 0) return c;
    return a.members.size() <=> b.members.size();
  }
  if (a.kind == ConstraintKind::DuplicateFree) return std::strong_ordering::equal;
  return canonical_compare(a.fluent, b.fluent);
}

}  // namespace

fd::Formula build_or_neq(Quantifier q, const Fluent& a, const Fluent& b) {
  if (a.functor != b.functor) return fd::Formula::truth();
  if (a.arity() != b.arity())
    throw ArityError("functor " + a.functor.text() + " used with two arities");
  std::vector<fd::Formula> parts;
  for (std::size_t i = 0; i < a.arity(); ++i) {
    const ArgTerm& x = a.args[i];
    const ArgTerm& y = b.args[i];
    if (q == Quantifier::Forall && x.is_var()) {
      for (std::size_t j = i + 1; j < a.arity(); ++j) {
        if (a.args[j] == x) {
          parts.push_back(fd::ne(y, b.args[j]));
          break;
        }
      }
    } else {
      parts.push_back(fd::ne(x, y));
    }
  }
  return fd::Formula::disj(std::move(parts));
}

fd::Formula build_and_eq(const std::vector<ArgTerm>& xs, const std::vector<ArgTerm>& ys) {
  if (xs.size() != ys.size()) throw std::invalid_argument("and_eq: argument lists differ in length");
  std::vector<fd::Formula> parts;
  for (std::size_t i = 0; i < xs.size(); ++i) parts.push_back(fd::eq(xs[i], ys[i]));
  return fd::Formula::conj(std::move(parts));
}

fd::Formula build_or_and_eq(const std::vector<EqD>& eqs) {
  std::vector<fd::Formula> parts;
  for (const auto& e : eqs) parts.push_back(build_and_eq(e.xs, e.ys));
  return fd::Formula::disj(std::move(parts));
}

std::string to_string(const Disjunct& d, VarStyle style) {
  if (is_fluent(d)) return to_string(std::get<Fluent>(d), style);
  const auto& e = std::get<EqD>(d);
  return "eq(" + join_args(e.xs, style) + "," + join_args(e.ys, style) + ")";
}

std::string to_string(const ConstraintView& c, const std::string& target) {
  std::string out = kind_name(c.kind);
  out += '(';
  switch (c.kind) {
    case ConstraintKind::OrHolds: {
      out += '[';
      for (std::size_t i = 0; i < c.members.size(); ++i) {
        if (i) out += ',';
        out += to_string(c.members[i]);
      }
      out += "], ";
      break;
    }
    case ConstraintKind::DuplicateFree: break;
    default: out += to_string(c.fluent, VarStyle::Anonymous) + ", "; break;
  }
  return out + target + ")";
}

// ---------------------------------------------------------------------------

class Store::AssertTimer {
 public:
  explicit AssertTimer(Store& s) : s_(s), outer_(s.timer_depth_++ == 0) {
    if (outer_) t0_ = std::chrono::steady_clock::now();
  }
  ~AssertTimer() {
    --s_.timer_depth_;
    if (!outer_) return;
    ++s_.stats_.assertions;
    s_.stats_.assert_time += std::chrono::duration_cast<std::chrono::nanoseconds>(
        std::chrono::steady_clock::now() - t0_);
  }
  AssertTimer(const AssertTimer&) = delete;
  AssertTimer& operator=(const AssertTimer&) = delete;

 private:
  Store& s_;
  bool outer_;
  std::chrono::steady_clock::time_point t0_;
};

Store::Store() = default;

ArgTerm Store::fresh() { return ArgTerm::var(fd_.new_var()); }

ArgTerm Store::resolve(const ArgTerm& t) const {
  if (!t.is_var()) return t;
  auto [r, off] = fd_.find(t.var_id());
  if (auto v = fd_.value(r)) {
    std::int64_t x = *v + off;
    if (fd::is_symbol_code(x)) return ArgTerm::symbol(fd::code_symbol(x));
    return ArgTerm::integer(x);
  }
  if (off == 0) return ArgTerm::var(r);
  return t;
}

Fluent Store::resolve(const Fluent& f) const {
  Fluent out = f;
  for (auto& a : out.args) a = resolve(a);
  return out;
}

bool Store::same(const Fluent& a, const Fluent& b) const {
  if (a.functor != b.functor || a.arity() != b.arity()) return false;
  for (std::size_t i = 0; i < a.arity(); ++i)
    if (resolve(a.args[i]) != resolve(b.args[i])) return false;
  return true;
}

bool Store::unifiable(const Fluent& a, const Fluent& b) const {
  if (a.functor != b.functor) return false;
  bool vars = false;
  for (std::size_t i = 0; i < a.arity() && i < b.arity(); ++i) {
    ArgTerm x = resolve(a.args[i]), y = resolve(b.args[i]);
    if (x.is_const() && y.is_const()) {
      if (x != y) return false;
    } else {
      vars = true;
    }
  }
  if (!vars && a.arity() == b.arity()) return true;
  auto s = unify(resolve(a), resolve(b));
  if (!s) return false;
  for (const auto& [v, t] : *s) {
    ArgTerm target = walk(t, *s);
    if (target == ArgTerm::var(v)) continue;
    if (fd_.decided(fd::eq(ArgTerm::var(v), target)) == fd::Truth::False) return false;
  }
  return true;
}

bool Store::instance_of(const Fluent& g, const Fluent& pattern) const {
  if (g.functor != pattern.functor) return false;
  return is_instance(resolve(g), resolve(pattern));
}

// --- trail -------------------------------------------------------------------

void Store::record(TrailEntry e) {
  if (trailing()) trail_.push_back(std::move(e));
}

CellId Store::new_cell(Cell c) {
  auto id = static_cast<CellId>(cells_.size());
  cells_.push_back(std::move(c));
  record(NewCell{});
  return id;
}

void Store::set_cell(CellId id, Cell c) {
  if (trailing()) trail_.push_back(SaveCell{id, cells_[id]});
  cells_[id] = std::move(c);
}

std::int32_t Store::ensure_bucket(CellId cell) {
  if (cells_[cell].bucket >= 0) return cells_[cell].bucket;
  auto b = static_cast<std::int32_t>(buckets_.size());
  buckets_.emplace_back();
  buckets_.back().cell = cell;
  record(NewBucket{});
  Cell c = cells_[cell];
  c.bucket = b;
  set_cell(cell, std::move(c));
  return b;
}

void Store::kill(ConsId id) {
  if (!cons_[id].alive) return;
  cons_[id].alive = false;
  record(KillCons{id});
}

bool Store::fail() {
  if (!failed_) {
    record(SaveFailed{failed_});
    failed_ = true;
  }
  agenda_.clear();
  pending_.clear();
  return false;
}

void Store::require(bool ok) {
  if (ok) return;
  fail();
  throw Inconsistent();
}

void Store::check_signature(const Fluent& f) { signature_.check(f); }

Store::Snapshot Store::snapshot() {
  sync_fd();
  if (!agenda_.empty()) throw std::logic_error("snapshot with unprocessed constraints");
  ++depth_;
  Snapshot s;
  s.trail = trail_.size();
  s.depth = depth_;
  s.fd = fd_.mark();
  s.pending = pending_;
  return s;
}

void Store::rollback(const Snapshot& s) {
  if (s.depth != depth_) throw std::logic_error("store: out-of-order rollback");
  while (trail_.size() > s.trail) {
    TrailEntry e = std::move(trail_.back());
    trail_.pop_back();
    std::visit(
        [this](auto& x) {
          using T = std::decay_t<decltype(x)>;
          if constexpr (std::is_same_v<T, SaveCell>) {
            cells_[x.id] = std::move(x.cell);
          } else if constexpr (std::is_same_v<T, NewCell>) {
            cells_.pop_back();
          } else if constexpr (std::is_same_v<T, NewCons>) {
            cons_.pop_back();
          } else if constexpr (std::is_same_v<T, KillCons>) {
            cons_[x.id].alive = true;
          } else if constexpr (std::is_same_v<T, NewBucket>) {
            buckets_.pop_back();
          } else if constexpr (std::is_same_v<T, BucketCell>) {
            buckets_[x.bucket].cell = x.cell;
          } else if constexpr (std::is_same_v<T, ListPush>) {
            buckets_[x.bucket].lists[x.list].pop_back();
          } else if constexpr (std::is_same_v<T, FunctorPush>) {
            buckets_[x.bucket].nh_by_functor[x.functor].pop_back();
          } else if constexpr (std::is_same_v<T, NongroundPush>) {
            buckets_[x.bucket].nh_nonground.pop_back();
          } else if constexpr (std::is_same_v<T, GroundSet>) {
            auto& m = buckets_[x.bucket].ground_nh;
            if (x.old)
              m[x.key] = *x.old;
            else
              m.erase(x.key);
          } else if constexpr (std::is_same_v<T, DependentPush>) {
            dependents_.pop_back();
          } else if constexpr (std::is_same_v<T, SaveFailed>) {
            failed_ = x.failed;
          }
        },
        e);
  }
  fd_.rollback(s.fd);
  pending_ = s.pending;
  agenda_.clear();
  changed_.clear();
  --depth_;
}

void Store::release(const Snapshot& s) {
  if (s.depth != depth_) throw std::logic_error("store: out-of-order release");
  fd_.release(s.fd);
  --depth_;
  if (depth_ == 0) trail_.clear();
}

// --- lists -------------------------------------------------------------------

CellId Store::build_list(const std::vector<Fluent>& heads, CellId end) {
  CellId next = end;
  for (auto it = heads.rbegin(); it != heads.rend(); ++it) {
    Cell c;
    c.kind = Cell::Kind::Cons;
    c.head = *it;
    c.next = next;
    next = new_cell(std::move(c));
  }
  return next;
}

State Store::open_state(const std::vector<Fluent>& known) {
  for (const auto& f : known) check_signature(f);
  CellId tail = new_cell(Cell{});
  return State{build_list(known, tail)};
}

State Store::closed_state(const std::vector<Fluent>& known) {
  for (const auto& f : known) check_signature(f);
  Cell nil;
  nil.kind = Cell::Kind::Nil;
  CellId end = new_cell(std::move(nil));
  return State{build_list(known, end)};
}

State Store::cons(const Fluent& f, State rest) {
  check_signature(f);
  return State{build_list({f}, rest.cell)};
}

bool Store::is_open(State s) const { return tail(s).has_value(); }

std::optional<State> Store::tail(State s) const {
  CellId l = s.cell;
  while (cells_[l].kind == Cell::Kind::Cons) l = cells_[l].next;
  if (cells_[l].kind == Cell::Kind::Unbound) return State{l};
  return std::nullopt;
}

std::vector<Fluent> Store::known(State s) const {
  std::vector<Fluent> out;
  CellId l = s.cell;
  while (cells_[l].kind == Cell::Kind::Cons) {
    out.push_back(resolve(cells_[l].head));
    l = cells_[l].next;
  }
  return out;
}

std::vector<Fluent> Store::known(State s, Symbol functor) const {
  std::vector<Fluent> out;
  for (CellId l = s.cell; cells_[l].kind == Cell::Kind::Cons; l = cells_[l].next)
    if (cells_[l].head.functor == functor) out.push_back(resolve(cells_[l].head));
  return out;
}

std::vector<Fluent> Store::copy_prefix(CellId from, CellId stop) const {
  std::vector<Fluent> out;
  for (CellId l = from; l != stop; l = cells_[l].next) out.push_back(cells_[l].head);
  return out;
}

// --- posting -------------------------------------------------------------------

bool Store::post_fd(const fd::Formula& f) { return fd_.post(f); }

bool Store::trial(const fd::Formula& f) {
  switch (fd_.decided(f)) {
    case fd::Truth::True: return true;
    case fd::Truth::False: return false;
    case fd::Truth::Unknown: break;
  }
  sync_fd();
  auto m = fd_.mark();
  bool ok = fd_.post(f);
  fd_.rollback(m);
  return ok;
}

bool Store::neq(Quantifier q, const Fluent& g, const Fluent& h) {
  if (g.functor != h.functor) return true;
  if (g.arity() != h.arity()) throw ArityError("functor " + g.functor.text() + " used with two arities");
  bool open = false;
  for (std::size_t i = 0; i < g.arity(); ++i) {
    ArgTerm a = resolve(g.args[i]);
    ArgTerm b = resolve(h.args[i]);
    if (a.is_var() || b.is_var()) {
      open = true;
      continue;
    }
    if (a != b) return true;
  }
  if (!open) return false;
  return post_fd(build_or_neq(q, resolve(g), resolve(h)));
}

bool Store::walk_not_holds(const Fluent& f, CellId l) {
  while (true) {
    const Cell& c = cells_[l];
    switch (c.kind) {
      case Cell::Kind::Nil: return true;
      case Cell::Kind::Unbound: return settle(ConstraintKind::NotHolds, resolve(f), {}, l);
      case Cell::Kind::Cons: {
        CellId next = c.next;
        if (!neq(Quantifier::Exists, f, c.head)) return false;
        l = next;
      }
    }
  }
}

bool Store::walk_not_holds_all(const Fluent& f, CellId l) {
  while (true) {
    const Cell& c = cells_[l];
    switch (c.kind) {
      case Cell::Kind::Nil: return true;
      case Cell::Kind::Unbound: return settle(ConstraintKind::NotHoldsAll, resolve(f), {}, l);
      case Cell::Kind::Cons: {
        CellId next = c.next;
        if (!neq(Quantifier::Forall, f, c.head)) return false;
        l = next;
      }
    }
  }
}

bool Store::walk_duplicate_free(CellId l) {
  while (true) {
    const Cell& c = cells_[l];
    switch (c.kind) {
      case Cell::Kind::Nil: return true;
      case Cell::Kind::Unbound: return settle(ConstraintKind::DuplicateFree, {}, {}, l);
      case Cell::Kind::Cons: {
        Fluent head = c.head;
        CellId next = c.next;
        if (!walk_not_holds(head, next)) return false;
        l = next;
      }
    }
  }
}

Store::OrStep Store::simplify_or(std::vector<Disjunct>& members, CellId l) {
  while (true) {
    std::size_t fluents = static_cast<std::size_t>(std::count_if(members.begin(), members.end(), is_fluent));
    if (members.size() == 1 && fluents == 1) {
      pending_.emplace_back(std::get<Fluent>(members.front()), l);
      return OrStep::Done;
    }
    if (fluents == 0) {
      std::vector<EqD> eqs;
      for (auto& m : members) eqs.push_back(std::get<EqD>(m));
      return post_fd(build_or_and_eq(eqs)) ? OrStep::Done : OrStep::Failed;
    }
    if (cells_[l].kind == Cell::Kind::Nil) {
      members.erase(std::find_if(members.begin(), members.end(), is_fluent));
      continue;
    }
    bool dropped = false;
    for (const auto& m : members) {
      if (is_fluent(m)) continue;
      const auto& e = std::get<EqD>(m);
      std::vector<fd::Formula> ne;
      for (std::size_t i = 0; i < e.xs.size(); ++i) ne.push_back(fd::ne(e.xs[i], e.ys[i]));
      if (!trial(fd::Formula::disj(std::move(ne)))) return OrStep::Done;
    }
    for (std::size_t i = 0; i < members.size(); ++i) {
      if (is_fluent(members[i])) continue;
      const auto& e = std::get<EqD>(members[i]);
      if (!trial(build_and_eq(e.xs, e.ys))) {
        members.erase(members.begin() + static_cast<std::ptrdiff_t>(i));
        dropped = true;
        break;
      }
    }
    if (!dropped) return OrStep::Keep;
  }
}

namespace {

Disjunct resolve_disjunct(const Store& s, const Disjunct& d) {
  if (is_fluent(d)) return s.resolve(std::get<Fluent>(d));
  EqD e = std::get<EqD>(d);
  for (auto& x : e.xs) x = s.resolve(x);
  for (auto& y : e.ys) y = s.resolve(y);
  return e;
}

}  // namespace

bool Store::walk_or_holds(std::vector<Disjunct> members, CellId l) {
  for (auto& m : members) m = resolve_disjunct(*this, m);
  while (true) {
    switch (simplify_or(members, l)) {
      case OrStep::Done: return true;
      case OrStep::Failed: return false;
      case OrStep::Keep: break;
    }
    const Cell& c = cells_[l];
    if (c.kind == Cell::Kind::Unbound) return settle(ConstraintKind::OrHolds, {}, std::move(members), l);
    Fluent head = resolve(c.head);
    CellId next = c.next;
    std::vector<Disjunct> w;
    for (auto& m : members) {
      if (!is_fluent(m)) {
        w.push_back(std::move(m));
        continue;
      }
      const auto& f1 = std::get<Fluent>(m);
      if (same(f1, head)) return true;
      if (!unifiable(f1, head)) {
        w.push_back(std::move(m));
        continue;
      }
      EqD e{f1.args, head.args};
      w.push_back(std::move(m));
      w.emplace_back(std::move(e));
    }
    std::reverse(w.begin(), w.end());
    members = std::move(w);
    for (auto& m : members) m = resolve_disjunct(*this, m);
    l = next;
  }
}

bool Store::settle(ConstraintKind kind, Fluent f, std::vector<Disjunct> members, CellId tail) {
  std::int32_t b = ensure_bucket(tail);
  bool ground = f.ground();
  if (kind == ConstraintKind::NotHolds && ground) {
    auto& m = buckets_[b].ground_nh;
    auto it = m.find(f);
    if (it != m.end() && cons_[it->second].alive) return true;
  }
  bool dependent = !ground;
  for (const auto& d : members) {
    if (!is_fluent(d) || !std::get<Fluent>(d).ground()) dependent = true;
  }
  auto id = static_cast<ConsId>(cons_.size());
  cons_.push_back(Constraint{kind, f, std::move(members), b, true});
  record(NewCons{});
  auto list = static_cast<std::uint8_t>(kind);
  buckets_[b].lists[list].push_back(id);
  record(ListPush{b, list});
  if (kind == ConstraintKind::NotHolds) {
    auto& bucket = buckets_[b];
    bucket.nh_by_functor[f.functor.id()].push_back(id);
    record(FunctorPush{b, f.functor.id()});
    if (ground) {
      auto it = bucket.ground_nh.find(f);
      std::optional<ConsId> old;
      if (it != bucket.ground_nh.end()) old = it->second;
      if (trailing()) trail_.push_back(GroundSet{b, f, old});
      bucket.ground_nh[f] = id;
    } else {
      bucket.nh_nonground.push_back(id);
      record(NongroundPush{b});
    }
  }
  if (dependent && kind != ConstraintKind::NotHoldsAll) {
    dependents_.push_back(id);
    record(DependentPush{});
  }
  agenda_.push_back(id);
  return true;
}

bool Store::unify_fluents(const Fluent& a, const Fluent& b) {
  if (a.functor != b.functor || a.arity() != b.arity()) return false;
  for (std::size_t i = 0; i < a.arity(); ++i) {
    ArgTerm x = resolve(a.args[i]);
    ArgTerm y = resolve(b.args[i]);
    if (x.is_const() && y.is_const()) {
      if (x != y) return false;
      continue;
    }
    if (!post_fd(fd::eq(x, y))) return false;
  }
  return true;
}

bool Store::bind(CellId tail, const Fluent& f, CellId& new_tail) {
  Fluent rf = resolve(f);
  CellId t2 = new_cell(Cell{});
  std::int32_t b = cells_[tail].bucket;
  Cell c;
  c.kind = Cell::Kind::Cons;
  c.head = rf;
  c.next = t2;
  set_cell(tail, std::move(c));
  new_tail = t2;
  if (b < 0) return true;

  Cell moved = cells_[t2];
  moved.bucket = b;
  set_cell(t2, std::move(moved));
  record(BucketCell{b, tail});
  buckets_[b].cell = t2;

  // not_holds(G, [F|Z]): only same-functor constraints can produce anything
  // but a trivially true disequality.
  if (rf.ground()) {
    auto& m = buckets_[b].ground_nh;
    auto it = m.find(rf);
    if (it != m.end() && cons_[it->second].alive) return false;
    auto nonground = buckets_[b].nh_nonground;
    for (auto id : nonground)
      if (cons_[id].alive && !neq(Quantifier::Exists, cons_[id].fluent, rf)) return false;
  } else {
    auto it = buckets_[b].nh_by_functor.find(rf.functor.id());
    if (it != buckets_[b].nh_by_functor.end()) {
      auto ids = it->second;
      for (auto id : ids)
        if (cons_[id].alive && !neq(Quantifier::Exists, cons_[id].fluent, rf)) return false;
    }
  }
  auto nha = buckets_[b].lists[static_cast<int>(ConstraintKind::NotHoldsAll)];
  for (auto id : nha)
    if (cons_[id].alive && !neq(Quantifier::Forall, cons_[id].fluent, rf)) return false;

  auto ors = buckets_[b].lists[static_cast<int>(ConstraintKind::OrHolds)];
  for (auto id : ors) {
    if (!cons_[id].alive) continue;
    kill(id);
    if (!walk_or_holds(cons_[id].members, tail)) return false;
  }

  const auto& dups = buckets_[b].lists[static_cast<int>(ConstraintKind::DuplicateFree)];
  bool dup = std::any_of(dups.begin(), dups.end(), [&](ConsId id) { return cons_[id].alive; });
  if (dup && !walk_not_holds(rf, t2)) return false;
  return true;
}

bool Store::close(CellId tail) {
  std::int32_t b = cells_[tail].bucket;
  Cell nil;
  nil.kind = Cell::Kind::Nil;
  set_cell(tail, std::move(nil));
  if (b < 0) return true;
  // everything but or_holds is trivially true of []
  for (std::size_t k = 0; k < buckets_[b].lists.size(); ++k) {
    if (k == static_cast<std::size_t>(ConstraintKind::OrHolds)) continue;
    for (auto id : buckets_[b].lists[k]) kill(id);
  }
  auto ors = buckets_[b].lists[static_cast<int>(ConstraintKind::OrHolds)];
  for (auto id : ors) {
    if (!cons_[id].alive) continue;
    kill(id);
    if (!walk_or_holds(cons_[id].members, tail)) return false;
  }
  return true;
}

std::vector<Store::Alt> Store::alternatives(const Fluent& f, CellId l) const {
  std::vector<Alt> alts;
  while (true) {
    const Cell& c = cells_[l];
    switch (c.kind) {
      case Cell::Kind::Nil: return alts;
      case Cell::Kind::Unbound:
        alts.push_back({AltKind::Tail, l});
        return alts;
      case Cell::Kind::Cons:
        if (unifiable(f, c.head)) {
          alts.push_back({AltKind::Head, l});
          if (same(f, c.head)) return alts;
        }
        l = c.next;
    }
  }
}

bool Store::apply(const Fluent& f, const Alt& a) {
  if (a.kind == AltKind::Head) {
    Fluent head = cells_[a.cell].head;
    return unify_fluents(f, head);
  }
  CellId t2;
  return bind(a.cell, f, t2);
}

// --- rule activation ---------------------------------------------------------

std::vector<VarId> Store::constraint_vars(const Constraint& c) const {
  std::vector<VarId> out;
  for (const auto& a : c.fluent.args)
    if (a.is_var()) out.push_back(a.var_id());
  for (const auto& d : c.members) {
    if (is_fluent(d)) {
      for (const auto& a : std::get<Fluent>(d).args)
        if (a.is_var()) out.push_back(a.var_id());
    } else {
      for (const auto& a : std::get<EqD>(d).xs)
        if (a.is_var()) out.push_back(a.var_id());
      for (const auto& a : std::get<EqD>(d).ys)
        if (a.is_var()) out.push_back(a.var_id());
    }
  }
  return out;
}

void Store::sync_fd() {
  auto changed = fd_.take_changed();
  if (changed.empty() || dependents_.empty()) return;
  std::sort(changed.begin(), changed.end());
  changed.erase(std::unique(changed.begin(), changed.end()), changed.end());
  for (auto id : dependents_) {
    if (!cons_[id].alive) continue;
    for (auto v : constraint_vars(cons_[id])) {
      if (std::binary_search(changed.begin(), changed.end(), fd_.find(v).root)) {
        agenda_.push_back(id);
        break;
      }
    }
  }
}

bool Store::drain() {
  while (true) {
    if (failed_ || !fd_.consistent()) return false;
    sync_fd();
    if (agenda_.empty()) return true;
    ConsId id = agenda_.front();
    agenda_.pop_front();
    if (!activate(id)) return false;
  }
}

bool Store::run() {
  if (!drain()) return false;
  if (pending_.empty()) return true;
  auto [f, l] = pending_.front();
  pending_.erase(pending_.begin());
  auto alts = alternatives(f, l);
  for (std::size_t i = 0; i < alts.size(); ++i) {
    if (i + 1 == alts.size()) return apply(f, alts[i]) && run();
    Snapshot s = snapshot();
    if (apply(f, alts[i]) && run()) {
      release(s);
      return true;
    }
    rollback(s);
  }
  return false;
}

bool Store::activate(ConsId id) {
  if (!cons_[id].alive) return true;
  switch (cons_[id].kind) {
    case ConstraintKind::NotHolds: return activate_not_holds(id);
    case ConstraintKind::NotHoldsAll: return activate_not_holds_all(id);
    case ConstraintKind::OrHolds: return activate_or_holds(id);
    case ConstraintKind::Cancel: return activate_cancel(id);
    case ConstraintKind::Cancelled: return activate_cancelled(id);
    case ConstraintKind::DuplicateFree: return true;
  }
  return true;
}

bool Store::activate_not_holds(ConsId id) {
  std::int32_t b = cons_[id].bucket;
  Fluent g = resolve(cons_[id].fluent);
  const auto& nha = buckets_[b].lists[static_cast<int>(ConstraintKind::NotHoldsAll)];
  for (auto n : nha) {
    if (cons_[n].alive && instance_of(g, cons_[n].fluent)) {
      kill(id);
      return true;
    }
  }
  const auto& cancels = buckets_[b].lists[static_cast<int>(ConstraintKind::Cancel)];
  for (auto k : cancels) {
    if (cons_[k].alive && unifiable(cons_[k].fluent, g)) {
      kill(id);
      return true;
    }
  }
  auto ors = buckets_[b].lists[static_cast<int>(ConstraintKind::OrHolds)];
  for (auto o : ors) {
    if (!cons_[o].alive) continue;
    const auto& ms = cons_[o].members;
    bool hit = std::any_of(ms.begin(), ms.end(),
                           [&](const Disjunct& d) { return is_fluent(d) && same(std::get<Fluent>(d), g); });
    if (!hit) continue;
    std::vector<Disjunct> rest;
    for (const auto& d : ms)
      if (!(is_fluent(d) && same(std::get<Fluent>(d), g))) rest.push_back(d);
    kill(o);
    if (!walk_or_holds(std::move(rest), buckets_[b].cell)) return false;
  }
  return true;
}

bool Store::activate_not_holds_all(ConsId id) {
  std::int32_t b = cons_[id].bucket;
  Fluent f = resolve(cons_[id].fluent);
  auto nha = buckets_[b].lists[static_cast<int>(ConstraintKind::NotHoldsAll)];
  for (auto n : nha) {
    if (n != id && cons_[n].alive && instance_of(f, cons_[n].fluent)) {
      kill(id);
      return true;
    }
  }
  auto it = buckets_[b].nh_by_functor.find(f.functor.id());
  if (it != buckets_[b].nh_by_functor.end()) {
    for (auto n : it->second)
      if (cons_[n].alive && instance_of(cons_[n].fluent, f)) kill(n);
  }
  for (auto n : nha)
    if (n != id && cons_[n].alive && instance_of(cons_[n].fluent, f)) kill(n);
  const auto& cancels = buckets_[b].lists[static_cast<int>(ConstraintKind::Cancel)];
  for (auto k : cancels) {
    if (cons_[k].alive && unifiable(cons_[k].fluent, f)) {
      kill(id);
      return true;
    }
  }
  auto ors = buckets_[b].lists[static_cast<int>(ConstraintKind::OrHolds)];
  for (auto o : ors) {
    if (!cons_[o].alive) continue;
    const auto& ms = cons_[o].members;
    auto covered = [&](const Disjunct& d) { return is_fluent(d) && instance_of(std::get<Fluent>(d), f); };
    if (!std::any_of(ms.begin(), ms.end(), covered)) continue;
    std::vector<Disjunct> rest;
    for (const auto& d : ms)
      if (!covered(d)) rest.push_back(d);
    kill(o);
    if (!walk_or_holds(std::move(rest), buckets_[b].cell)) return false;
  }
  return true;
}

bool Store::activate_or_holds(ConsId id) {
  std::int32_t b = cons_[id].bucket;
  CellId cell = buckets_[b].cell;
  std::vector<Disjunct> members;
  for (const auto& d : cons_[id].members) members.push_back(resolve_disjunct(*this, d));
  std::size_t before = members.size();
  switch (simplify_or(members, cell)) {
    case OrStep::Done: kill(id); return true;
    case OrStep::Failed: kill(id); return false;
    case OrStep::Keep: break;
  }
  if (members.size() != before) {
    kill(id);
    return walk_or_holds(std::move(members), cell);
  }

  const auto& bucket = buckets_[b];
  auto not_held = [&](const Fluent& m) {
    if (m.ground()) {
      auto it = bucket.ground_nh.find(m);
      if (it != bucket.ground_nh.end() && cons_[it->second].alive) return true;
      for (auto n : bucket.nh_nonground)
        if (cons_[n].alive && same(cons_[n].fluent, m)) return true;
      return false;
    }
    auto it = bucket.nh_by_functor.find(m.functor.id());
    if (it == bucket.nh_by_functor.end()) return false;
    for (auto n : it->second)
      if (cons_[n].alive && same(cons_[n].fluent, m)) return true;
    return false;
  };
  const auto& nha = bucket.lists[static_cast<int>(ConstraintKind::NotHoldsAll)];
  auto excluded = [&](const Fluent& m) {
    for (auto n : nha)
      if (cons_[n].alive && instance_of(m, cons_[n].fluent)) return true;
    return false;
  };
  std::vector<Disjunct> keep;
  bool dropped = false;
  for (auto& d : members) {
    if (is_fluent(d)) {
      const auto& m = std::get<Fluent>(d);
      if (not_held(m) || excluded(m)) {
        dropped = true;
        continue;
      }
    }
    keep.push_back(std::move(d));
  }
  if (dropped) {
    kill(id);
    return walk_or_holds(std::move(keep), cell);
  }
  const auto& cancels = bucket.lists[static_cast<int>(ConstraintKind::Cancel)];
  for (auto k : cancels) {
    if (!cons_[k].alive) continue;
    for (const auto& d : keep) {
      if (is_fluent(d) && unifiable(cons_[k].fluent, std::get<Fluent>(d))) {
        kill(id);
        return true;
      }
    }
  }
  return true;
}

bool Store::activate_cancel(ConsId id) {
  std::int32_t b = cons_[id].bucket;
  Fluent f = resolve(cons_[id].fluent);
  auto& bucket = buckets_[b];
  auto it = bucket.nh_by_functor.find(f.functor.id());
  if (it != bucket.nh_by_functor.end()) {
    for (auto n : it->second)
      if (cons_[n].alive && unifiable(f, cons_[n].fluent)) kill(n);
  }
  for (auto n : bucket.lists[static_cast<int>(ConstraintKind::NotHoldsAll)])
    if (cons_[n].alive && unifiable(f, cons_[n].fluent)) kill(n);
  for (auto o : bucket.lists[static_cast<int>(ConstraintKind::OrHolds)]) {
    if (!cons_[o].alive) continue;
    for (const auto& d : cons_[o].members) {
      if (is_fluent(d) && unifiable(f, std::get<Fluent>(d))) {
        kill(o);
        break;
      }
    }
  }
  for (auto k : bucket.lists[static_cast<int>(ConstraintKind::Cancelled)]) {
    if (cons_[k].alive && same(cons_[k].fluent, f)) {
      kill(k);
      kill(id);
      break;
    }
  }
  return true;
}

bool Store::activate_cancelled(ConsId id) {
  std::int32_t b = cons_[id].bucket;
  for (auto k : buckets_[b].lists[static_cast<int>(ConstraintKind::Cancel)]) {
    if (cons_[k].alive && same(cons_[k].fluent, cons_[id].fluent)) {
      kill(k);
      kill(id);
      break;
    }
  }
  return true;
}

// --- public operations ---------------------------------------------------------

void Store::not_holds(const Fluent& f, State s) {
  if (failed_) throw Inconsistent();
  AssertTimer timer(*this);
  check_signature(f);
  require(walk_not_holds(f, s.cell) && run());
}

void Store::not_holds_all(const Fluent& f, State s) {
  if (failed_) throw Inconsistent();
  AssertTimer timer(*this);
  check_signature(f);
  require(walk_not_holds_all(f, s.cell) && run());
}

void Store::or_holds(const std::vector<Disjunct>& members, State s) {
  if (failed_) throw Inconsistent();
  AssertTimer timer(*this);
  for (const auto& d : members) {
    if (is_fluent(d)) check_signature(std::get<Fluent>(d));
    else if (std::get<EqD>(d).xs.size() != std::get<EqD>(d).ys.size())
      throw std::invalid_argument("eq/2 disjunct with argument lists of different length");
  }
  require(walk_or_holds(members, s.cell) && run());
}

void Store::duplicate_free(State s) {
  if (failed_) throw Inconsistent();
  AssertTimer timer(*this);
  require(walk_duplicate_free(s.cell) && run());
}

void Store::post(const fd::Formula& f) {
  if (failed_) throw Inconsistent();
  AssertTimer timer(*this);
  require(post_fd(f) && run());
}

void Store::post_range(const ArgTerm& t, std::int64_t lo, std::int64_t hi) {
  if (failed_) throw Inconsistent();
  AssertTimer timer(*this);
  ArgTerm r = resolve(t);
  if (r.is_int()) {
    require(r.int_value() >= lo && r.int_value() <= hi);
    return;
  }
  if (r.is_sym()) require(false);
  require(fd_.post_range(r.var_id(), lo, hi) && run());
}

State Store::bind_tail(State s, const Fluent& f) {
  if (failed_) throw Inconsistent();
  AssertTimer timer(*this);
  check_signature(f);
  auto t = tail(s);
  if (!t) throw std::logic_error("bind_tail on a closed list");
  CellId t2 = 0;
  require(bind(t->cell, f, t2) && run());
  return State{t2};
}

void Store::close_tail(State s) {
  if (failed_) throw Inconsistent();
  AssertTimer timer(*this);
  auto t = tail(s);
  if (!t) throw std::logic_error("close_tail on a closed list");
  require(close(t->cell) && run());
}

bool Store::holds(const Fluent& f, State s) {
  if (failed_) throw Inconsistent();
  AssertTimer timer(*this);
  check_signature(f);
  Snapshot snap = snapshot();
  pending_.emplace_back(f, s.cell);
  if (run()) {
    release(snap);
    return true;
  }
  rollback(snap);
  return false;
}

std::optional<State> Store::holds_split(const Fluent& f, State s) {
  if (failed_) throw Inconsistent();
  AssertTimer timer(*this);
  check_signature(f);
  auto alts = alternatives(f, s.cell);
  for (const auto& a : alts) {
    std::vector<Fluent> prefix = copy_prefix(s.cell, a.cell);
    Snapshot snap = snapshot();
    if (!(apply(f, a) && run())) {
      rollback(snap);
      continue;
    }
    release(snap);
    CellId end = cells_[a.cell].next;
    return State{build_list(prefix, end)};
  }
  return std::nullopt;
}

State Store::cancel(const Fluent& f, State s) {
  if (failed_) throw Inconsistent();
  AssertTimer timer(*this);
  check_signature(f);
  std::vector<Fluent> kept;
  CellId l = s.cell;
  while (cells_[l].kind == Cell::Kind::Cons) {
    if (!unifiable(f, cells_[l].head)) kept.push_back(cells_[l].head);
    l = cells_[l].next;
  }
  if (cells_[l].kind == Cell::Kind::Unbound) {
    Fluent rf = resolve(f);
    require(settle(ConstraintKind::Cancel, rf, {}, l) && settle(ConstraintKind::Cancelled, rf, {}, l) &&
            run());
  }
  return State{build_list(kept, l)};
}

bool Store::entails(const Fluent& f, State s) {
  if (failed_) throw Inconsistent();
  AssertTimer timer(*this);
  check_signature(f);
  Snapshot snap = snapshot();
  bool ok = walk_not_holds(f, s.cell) && run();
  rollback(snap);
  return !ok;
}

bool Store::excludes(const Fluent& f, State s) {
  if (failed_) throw Inconsistent();
  AssertTimer timer(*this);
  check_signature(f);
  Snapshot snap = snapshot();
  pending_.emplace_back(f, s.cell);
  bool ok = run();
  rollback(snap);
  return !ok;
}

// --- inspection ----------------------------------------------------------------

std::vector<ConstraintView> Store::constraints(State s) const {
  std::vector<ConstraintView> out;
  auto t = tail(s);
  if (!t || cells_[t->cell].bucket < 0) return out;
  const auto& bucket = buckets_[cells_[t->cell].bucket];
  for (const auto& list : bucket.lists) {
    for (auto id : list) {
      const auto& c = cons_[id];
      if (!c.alive) continue;
      ConstraintView v{c.kind, resolve(c.fluent), {}};
      for (const auto& d : c.members) v.members.push_back(resolve_disjunct(*this, d));
      out.push_back(std::move(v));
    }
  }
  return out;
}

std::string Store::format_known(State s) const {
  auto ks = known(s);
  bool open = is_open(s);
  if (ks.empty()) return open ? "known: _" : "known: []";
  std::string out = "known: [";
  for (std::size_t i = 0; i < ks.size(); ++i) {
    if (i) out += ", ";
    out += to_string(ks[i], VarStyle::Anonymous);
  }
  out += open ? " | _]" : "]";
  return out;
}

std::string Store::dump(State s, const std::string& target) const {
  auto views = constraints(s);
  for (auto& v : views) {
    if (v.kind == ConstraintKind::OrHolds)
      std::sort(v.members.begin(), v.members.end(),
                [](const Disjunct& a, const Disjunct& b) { return compare_disjunct(a, b) < 0; });
  }
  std::sort(views.begin(), views.end(),
            [](const ConstraintView& a, const ConstraintView& b) { return compare_view(a, b) < 0; });
  std::string out = format_known(s) + "\n";
  std::string last;
  for (const auto& v : views) {
    std::string line = to_string(v, target);
    if (line == last) continue;
    out += line + "\n";
    last = std::move(line);
  }
  return out;
}

bool Store::has_markers(State s) const {
  auto t = tail(s);
  if (!t || cells_[t->cell].bucket < 0) return false;
  const auto& bucket = buckets_[cells_[t->cell].bucket];
  for (auto kind : {ConstraintKind::Cancel, ConstraintKind::Cancelled})
    for (auto id : bucket.lists[static_cast<std::size_t>(kind)])
      if (cons_[id].alive) return true;
  return false;
}

std::size_t Store::constraint_count(State s) const { return constraints(s).size(); }

}  // namespace fluxkit
