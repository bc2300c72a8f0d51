#include "fluxkit/fd.hpp"

#include <algorithm>
#include <cassert>

namespace fluxkit::fd {

namespace {

using i128 = __int128;

i128 floor_div(i128 a, i128 b) {
  i128 q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

i128 ceil_div(i128 a, i128 b) {
  i128 q = a / b;
  if ((a % b != 0) && ((a < 0) == (b < 0))) ++q;
  return q;
}

Truth negate(Truth t) {
  if (t == Truth::True) return Truth::False;
  if (t == Truth::False) return Truth::True;
  return Truth::Unknown;
}

}  // namespace

std::int64_t symbol_code(Symbol s) { return kSymBase - s.id(); }
bool is_symbol_code(std::int64_t v) { return v <= kSymBase && v > kNegInf; }
Symbol code_symbol(std::int64_t v) { return Symbol::from_id(static_cast<std::int32_t>(kSymBase - v)); }

LinExpr LinExpr::num(std::int64_t n) {
  LinExpr e;
  e.constant = n;
  return e;
}

LinExpr LinExpr::var(VarId v, std::int64_t coeff) {
  LinExpr e;
  if (coeff != 0) e.terms.emplace_back(coeff, v);
  return e;
}

LinExpr LinExpr::of(const ArgTerm& t) {
  switch (t.kind()) {
    case ArgTerm::Kind::Var: return var(t.var_id());
    case ArgTerm::Kind::Int: return num(t.int_value());
    case ArgTerm::Kind::Sym: {
      LinExpr e = num(symbol_code(t.sym_value()));
      e.symbolic = true;
      return e;
    }
  }
  return {};
}

LinExpr& LinExpr::operator+=(const LinExpr& o) {
  constant += o.constant;
  terms.insert(terms.end(), o.terms.begin(), o.terms.end());
  symbolic = symbolic || o.symbolic;
  canonicalize();
  return *this;
}

LinExpr& LinExpr::operator-=(const LinExpr& o) {
  constant -= o.constant;
  for (auto [a, v] : o.terms) terms.emplace_back(-a, v);
  symbolic = symbolic || o.symbolic;
  canonicalize();
  return *this;
}

LinExpr& LinExpr::operator*=(std::int64_t k) {
  constant *= k;
  for (auto& t : terms) t.first *= k;
  canonicalize();
  return *this;
}

void LinExpr::canonicalize() {
  std::sort(terms.begin(), terms.end(),
            [](const auto& a, const auto& b) { return a.second < b.second; });
  std::vector<std::pair<std::int64_t, VarId>> out;
  for (auto [a, v] : terms) {
    if (!out.empty() && out.back().second == v)
      out.back().first += a;
    else
      out.emplace_back(a, v);
  }
  std::erase_if(out, [](const auto& t) { return t.first == 0; });
  terms = std::move(out);
}

Formula Formula::falsity() {
  Formula f;
  f.kind = Kind::False;
  return f;
}

Formula Formula::make_atom(Atom a) {
  Formula f;
  f.kind = Kind::Atom;
  f.atom = std::move(a);
  return f;
}

Formula Formula::conj(std::vector<Formula> parts) {
  if (parts.empty()) return truth();
  if (parts.size() == 1) return std::move(parts.front());
  Formula f;
  f.kind = Kind::And;
  f.parts = std::move(parts);
  return f;
}

Formula Formula::disj(std::vector<Formula> parts) {
  if (parts.empty()) return falsity();
  if (parts.size() == 1) return std::move(parts.front());
  Formula f;
  f.kind = Kind::Or;
  f.parts = std::move(parts);
  return f;
}

void Formula::collect_vars(std::vector<VarId>& out) const {
  switch (kind) {
    case Kind::True:
    case Kind::False: return;
    case Kind::Atom:
      for (auto& t : atom.lhs.terms) out.push_back(t.second);
      for (auto& t : atom.rhs.terms) out.push_back(t.second);
      return;
    case Kind::And:
    case Kind::Or:
      for (auto& p : parts) p.collect_vars(out);
      return;
  }
}

Formula eq(const LinExpr& a, const LinExpr& b) { return Formula::make_atom({a, Op::Eq, b}); }
Formula ne(const LinExpr& a, const LinExpr& b) { return Formula::make_atom({a, Op::Ne, b}); }
Formula lt(const LinExpr& a, const LinExpr& b) { return Formula::make_atom({a, Op::Lt, b}); }
Formula le(const LinExpr& a, const LinExpr& b) { return Formula::make_atom({a, Op::Le, b}); }
Formula eq(const ArgTerm& a, const ArgTerm& b) { return eq(LinExpr::of(a), LinExpr::of(b)); }
Formula ne(const ArgTerm& a, const ArgTerm& b) { return ne(LinExpr::of(a), LinExpr::of(b)); }

// ---------------------------------------------------------------------------

VarId Solver::new_var() {
  auto id = static_cast<VarId>(vars_.size());
  VarRec r;
  r.parent = id;
  r.stamp = stamp_;
  vars_.push_back(std::move(r));
  watchers_.emplace_back();
  if (trailing()) trail_.emplace_back(NewVar{});
  return id;
}

Solver::Root Solver::find(VarId v) const {
  std::int64_t off = 0;
  while (vars_[v].parent != v) {
    off += vars_[v].offset;
    v = vars_[v].parent;
  }
  return {v, off};
}

std::optional<std::int64_t> Solver::value(VarId v) const {
  auto [r, off] = find(v);
  const auto& rec = vars_[r];
  if (rec.lo != rec.hi) return std::nullopt;
  return rec.lo + off;
}

std::int64_t Solver::lo(VarId v) const {
  auto [r, off] = find(v);
  return vars_[r].lo == kNegInf ? kNegInf : vars_[r].lo + off;
}

std::int64_t Solver::hi(VarId v) const {
  auto [r, off] = find(v);
  return vars_[r].hi == kPosInf ? kPosInf : vars_[r].hi + off;
}

bool Solver::contains(VarId v, std::int64_t value) const {
  auto [r, off] = find(v);
  const auto& rec = vars_[r];
  i128 x = i128(value) - off;
  if (rec.lo != kNegInf && x < rec.lo) return false;
  if (rec.hi != kPosInf && x > rec.hi) return false;
  return !std::binary_search(rec.holes.begin(), rec.holes.end(), static_cast<std::int64_t>(x));
}

std::size_t Solver::live_propagators() const {
  return static_cast<std::size_t>(
      std::count_if(props_.begin(), props_.end(), [](const Prop& p) { return p.alive; }));
}

void Solver::record(TrailEntry e) {
  if (trailing()) trail_.push_back(std::move(e));
}

void Solver::save(VarId v) {
  if (!trailing() || vars_[v].stamp == stamp_) return;
  trail_.emplace_back(SaveVar{v, vars_[v]});
  vars_[v].stamp = stamp_;
}

Solver::Mark Solver::mark() {
  ++depth_;
  ++stamp_;
  return {trail_.size(), depth_};
}

void Solver::rollback(const Mark& m) {
  if (m.depth != depth_) throw std::logic_error("fd: out-of-order rollback");
  while (trail_.size() > m.trail) {
    TrailEntry e = std::move(trail_.back());
    trail_.pop_back();
    std::visit(
        [this](auto& x) {
          using T = std::decay_t<decltype(x)>;
          if constexpr (std::is_same_v<T, SaveVar>) {
            vars_[x.id] = std::move(x.rec);
          } else if constexpr (std::is_same_v<T, NewVar>) {
            vars_.pop_back();
            watchers_.pop_back();
          } else if constexpr (std::is_same_v<T, NewProp>) {
            props_.pop_back();
          } else if constexpr (std::is_same_v<T, KillProp>) {
            props_[x.id].alive = true;
          } else if constexpr (std::is_same_v<T, WatchSize>) {
            watchers_[x.root].resize(x.size);
          } else if constexpr (std::is_same_v<T, SaveFailed>) {
            failed_ = x.failed;
          }
        },
        e);
  }
  --depth_;
  ++stamp_;
  queue_.clear();
  changed_.clear();
}

void Solver::release(const Mark& m) {
  if (m.depth != depth_) throw std::logic_error("fd: out-of-order release");
  --depth_;
  ++stamp_;
  if (depth_ == 0) trail_.clear();
}

std::vector<VarId> Solver::take_changed() {
  std::vector<VarId> out;
  out.swap(changed_);
  return out;
}

bool Solver::fail() {
  record(SaveFailed{failed_});
  failed_ = true;
  queue_.clear();
  return false;
}

// --- normalization and decision -------------------------------------------

Solver::Norm Solver::normalize(const LinExpr& e) const {
  Norm n;
  n.constant = e.constant;
  for (auto [a, v] : e.terms) {
    auto [r, off] = find(v);
    n.constant += i128(a) * off;
    const auto& rec = vars_[r];
    if (rec.lo == rec.hi) {
      n.constant += i128(a) * rec.lo;
      continue;
    }
    n.terms.emplace_back(a, r);
  }
  std::sort(n.terms.begin(), n.terms.end(),
            [](const auto& x, const auto& y) { return x.second < y.second; });
  std::vector<std::pair<i128, VarId>> merged;
  for (auto& t : n.terms) {
    if (!merged.empty() && merged.back().second == t.second)
      merged.back().first += t.first;
    else
      merged.push_back(t);
  }
  std::erase_if(merged, [](const auto& t) { return t.first == 0; });
  n.terms = std::move(merged);
  return n;
}

Solver::Bound Solver::min_of(i128 a, VarId r) const {
  const auto& rec = vars_[r];
  if (a > 0) return rec.lo == kNegInf ? Bound{true, 0} : Bound{false, a * rec.lo};
  return rec.hi == kPosInf ? Bound{true, 0} : Bound{false, a * rec.hi};
}

Solver::Bound Solver::max_of(i128 a, VarId r) const {
  const auto& rec = vars_[r];
  if (a > 0) return rec.hi == kPosInf ? Bound{true, 0} : Bound{false, a * rec.hi};
  return rec.lo == kNegInf ? Bound{true, 0} : Bound{false, a * rec.lo};
}

Truth Solver::decide_eq(const Norm& n) const {
  if (n.terms.empty()) return n.constant == 0 ? Truth::True : Truth::False;
  Bound mn{false, n.constant}, mx{false, n.constant};
  for (auto [a, r] : n.terms) {
    auto lo = min_of(a, r), hi = max_of(a, r);
    mn.inf = mn.inf || lo.inf;
    mn.v += lo.v;
    mx.inf = mx.inf || hi.inf;
    mx.v += hi.v;
  }
  if (!mn.inf && mn.v > 0) return Truth::False;
  if (!mx.inf && mx.v < 0) return Truth::False;
  if (n.terms.size() == 1) {
    auto [a, r] = n.terms.front();
    if ((-n.constant) % a != 0) return Truth::False;
    i128 v = -n.constant / a;
    if (v < kNegInf || v > kPosInf || !contains(r, static_cast<std::int64_t>(v))) return Truth::False;
  }
  return Truth::Unknown;
}

Truth Solver::decide_le(const Norm& n) const {
  if (n.terms.empty()) return n.constant <= 0 ? Truth::True : Truth::False;
  Bound mn{false, n.constant}, mx{false, n.constant};
  for (auto [a, r] : n.terms) {
    auto lo = min_of(a, r), hi = max_of(a, r);
    mn.inf = mn.inf || lo.inf;
    mn.v += lo.v;
    mx.inf = mx.inf || hi.inf;
    mx.v += hi.v;
  }
  if (!mx.inf && mx.v <= 0) return Truth::True;
  if (!mn.inf && mn.v > 0) return Truth::False;
  return Truth::Unknown;
}

namespace {

void check_ordering(const Atom& a) {
  if ((a.lhs.symbolic || a.rhs.symbolic) && a.op != Op::Eq && a.op != Op::Ne)
    throw std::invalid_argument("ordering constraint over a symbolic constant");
}

// Rewrites an atom as expr = 0, expr != 0 or expr <= 0.
std::pair<LinExpr, Op> to_zero_form(const Atom& a) {
  LinExpr e = a.lhs - a.rhs;
  switch (a.op) {
    case Op::Eq: return {e, Op::Eq};
    case Op::Ne: return {e, Op::Ne};
    case Op::Le: return {e, Op::Le};
    case Op::Lt: return {e + LinExpr::num(1), Op::Le};
    case Op::Ge: return {LinExpr::num(0) - e, Op::Le};
    case Op::Gt: return {LinExpr::num(1) - e, Op::Le};
  }
  return {e, Op::Eq};
}

}  // namespace

Truth Solver::decide_atom(const Atom& a) const {
  check_ordering(a);
  auto [e, op] = to_zero_form(a);
  Norm n = normalize(e);
  if (op == Op::Eq) return decide_eq(n);
  if (op == Op::Ne) return negate(decide_eq(n));
  return decide_le(n);
}

Truth Solver::decided(const Formula& f) const {
  switch (f.kind) {
    case Formula::Kind::True: return Truth::True;
    case Formula::Kind::False: return Truth::False;
    case Formula::Kind::Atom: return decide_atom(f.atom);
    case Formula::Kind::And: {
      Truth acc = Truth::True;
      for (auto& p : f.parts) {
        Truth t = decided(p);
        if (t == Truth::False) return Truth::False;
        if (t == Truth::Unknown) acc = Truth::Unknown;
      }
      return acc;
    }
    case Formula::Kind::Or: {
      Truth acc = Truth::False;
      for (auto& p : f.parts) {
        Truth t = decided(p);
        if (t == Truth::True) return Truth::True;
        if (t == Truth::Unknown) acc = Truth::Unknown;
      }
      return acc;
    }
  }
  return Truth::Unknown;
}

// --- domain updates --------------------------------------------------------

void Solver::notify(VarId r) {
  changed_.push_back(r);
  for (auto w : watchers_[r])
    if (props_[w].alive) queue_.push_back(w);
}

bool Solver::tidy(VarId r) {
  auto& rec = vars_[r];
  auto& h = rec.holes;
  while (!h.empty() && rec.lo != kNegInf && std::binary_search(h.begin(), h.end(), rec.lo)) ++rec.lo;
  while (!h.empty() && rec.hi != kPosInf && std::binary_search(h.begin(), h.end(), rec.hi)) --rec.hi;
  if (rec.lo > rec.hi) return false;
  std::erase_if(h, [&](std::int64_t x) { return x < rec.lo || x > rec.hi; });
  return true;
}

bool Solver::set_lo(VarId r, i128 v) {
  auto& rec = vars_[r];
  if (rec.lo != kNegInf && v <= rec.lo) return true;
  if (v >= kPosInf) v = i128(kPosInf) - 1;
  if (v <= kNegInf) return true;
  if (rec.hi != kPosInf && v > rec.hi) return false;
  save(r);
  vars_[r].lo = static_cast<std::int64_t>(v);
  if (!tidy(r)) return false;
  notify(r);
  return true;
}

bool Solver::set_hi(VarId r, i128 v) {
  auto& rec = vars_[r];
  if (rec.hi != kPosInf && v >= rec.hi) return true;
  if (v <= kNegInf) v = i128(kNegInf) + 1;
  if (v >= kPosInf) return true;
  if (rec.lo != kNegInf && v < rec.lo) return false;
  save(r);
  vars_[r].hi = static_cast<std::int64_t>(v);
  if (!tidy(r)) return false;
  notify(r);
  return true;
}

bool Solver::fix(VarId r, i128 v) {
  if (v <= kNegInf || v >= kPosInf) return false;
  auto x = static_cast<std::int64_t>(v);
  auto& rec = vars_[r];
  if (rec.lo == x && rec.hi == x) return true;
  if ((rec.lo != kNegInf && x < rec.lo) || (rec.hi != kPosInf && x > rec.hi)) return false;
  if (std::binary_search(rec.holes.begin(), rec.holes.end(), x)) return false;
  save(r);
  vars_[r].lo = vars_[r].hi = x;
  vars_[r].holes.clear();
  notify(r);
  return true;
}

bool Solver::remove_value(VarId r, i128 v) {
  if (v <= kNegInf || v >= kPosInf) return true;
  auto x = static_cast<std::int64_t>(v);
  auto& rec = vars_[r];
  if ((rec.lo != kNegInf && x < rec.lo) || (rec.hi != kPosInf && x > rec.hi)) return true;
  if (std::binary_search(rec.holes.begin(), rec.holes.end(), x)) return true;
  save(r);
  auto& w = vars_[r];
  if (x == w.lo)
    ++w.lo;
  else if (x == w.hi)
    --w.hi;
  else
    w.holes.insert(std::upper_bound(w.holes.begin(), w.holes.end(), x), x);
  if (!tidy(r)) return false;
  notify(r);
  return true;
}

bool Solver::merge(VarId r1, VarId r2, i128 k) {
  // r1 = r2 + k
  if (r1 == r2) return k == 0;
  if (k <= kNegInf || k >= kPosInf) return false;
  VarId root = r2, child = r1;
  i128 d = k;  // child = root + d
  if (vars_[r1].rank > vars_[r2].rank) {
    root = r1;
    child = r2;
    d = -k;
  }
  save(root);
  save(child);
  auto& R = vars_[root];
  auto& C = vars_[child];
  auto shift = [&](std::int64_t x, std::int64_t inf) -> i128 { return x == inf ? i128(inf) : i128(x) - d; };
  i128 clo = shift(C.lo, kNegInf), chi = shift(C.hi, kPosInf);
  if (C.lo != kNegInf && (R.lo == kNegInf || clo > R.lo)) {
    if (clo >= kPosInf) return false;
    R.lo = static_cast<std::int64_t>(clo);
  }
  if (C.hi != kPosInf && (R.hi == kPosInf || chi < R.hi)) {
    if (chi <= kNegInf) return false;
    R.hi = static_cast<std::int64_t>(chi);
  }
  for (auto h : C.holes) {
    auto x = static_cast<std::int64_t>(i128(h) - d);
    R.holes.insert(std::upper_bound(R.holes.begin(), R.holes.end(), x), x);
  }
  R.holes.erase(std::unique(R.holes.begin(), R.holes.end()), R.holes.end());
  if (R.rank == C.rank) ++R.rank;
  C.parent = root;
  C.offset = static_cast<std::int64_t>(d);
  C.holes.clear();
  if (!tidy(root)) return false;
  auto moved = watchers_[child];
  if (!moved.empty()) {
    record(WatchSize{root, watchers_[root].size()});
    watchers_[root].insert(watchers_[root].end(), moved.begin(), moved.end());
  }
  changed_.push_back(child);
  notify(root);
  return true;
}

// --- propagators -----------------------------------------------------------

std::uint32_t Solver::add_prop(Prop p, const std::vector<VarId>& vars) {
  auto id = static_cast<std::uint32_t>(props_.size());
  props_.push_back(std::move(p));
  record(NewProp{});
  std::vector<VarId> roots;
  for (auto v : vars) roots.push_back(find(v).root);
  std::sort(roots.begin(), roots.end());
  roots.erase(std::unique(roots.begin(), roots.end()), roots.end());
  for (auto r : roots) {
    if (vars_[r].lo == vars_[r].hi) continue;
    record(WatchSize{r, watchers_[r].size()});
    watchers_[r].push_back(id);
  }
  return id;
}

void Solver::kill_prop(std::uint32_t id) {
  if (!props_[id].alive) return;
  props_[id].alive = false;
  record(KillProp{id});
}

bool Solver::post_eq(const LinExpr& e) {
  Norm n = normalize(e);
  if (n.terms.empty()) return n.constant == 0;
  if (n.terms.size() == 1) {
    auto [a, r] = n.terms.front();
    if ((-n.constant) % a != 0) return false;
    return fix(r, -n.constant / a);
  }
  if (n.terms.size() == 2 && n.terms[0].first == -n.terms[1].first) {
    auto [a, r1] = n.terms[0];
    VarId r2 = n.terms[1].second;
    // a*r1 - a*r2 + c = 0  =>  r1 = r2 - c/a
    if (n.constant % a != 0) return false;
    return merge(r1, r2, -n.constant / a);
  }
  Prop p;
  p.kind = Prop::Kind::Linear;
  p.expr = e;
  p.equality = true;
  std::vector<VarId> vars;
  for (auto& t : e.terms) vars.push_back(t.second);
  auto id = add_prop(std::move(p), vars);
  return run_linear(id);
}

bool Solver::post_le(const LinExpr& e) {
  Norm n = normalize(e);
  if (n.terms.empty()) return n.constant <= 0;
  if (n.terms.size() == 1) {
    auto [a, r] = n.terms.front();
    // a*r <= -c
    if (a > 0) return set_hi(r, floor_div(-n.constant, a));
    return set_lo(r, ceil_div(-n.constant, a));
  }
  Prop p;
  p.kind = Prop::Kind::Linear;
  p.expr = e;
  p.equality = false;
  std::vector<VarId> vars;
  for (auto& t : e.terms) vars.push_back(t.second);
  auto id = add_prop(std::move(p), vars);
  return run_linear(id);
}

bool Solver::post_ne(const LinExpr& e) {
  Norm n = normalize(e);
  if (n.terms.empty()) return n.constant != 0;
  if (n.terms.size() == 1) {
    auto [a, r] = n.terms.front();
    if ((-n.constant) % a != 0) return true;
    return remove_value(r, -n.constant / a);
  }
  Prop p;
  p.kind = Prop::Kind::Neq;
  p.expr = e;
  std::vector<VarId> vars;
  for (auto& t : e.terms) vars.push_back(t.second);
  add_prop(std::move(p), vars);
  return true;
}

bool Solver::post_atom(const Atom& a) {
  check_ordering(a);
  auto [e, op] = to_zero_form(a);
  if (op == Op::Eq) return post_eq(e);
  if (op == Op::Ne) return post_ne(e);
  return post_le(e);
}

bool Solver::post_or(std::vector<Formula> parts) {
  std::vector<Formula> keep;
  for (auto& p : parts) {
    Truth t = decided(p);
    if (t == Truth::True) return true;
    if (t == Truth::Unknown) keep.push_back(std::move(p));
  }
  if (keep.empty()) return false;
  if (keep.size() == 1) return post_part(keep.front());
  Prop p;
  p.kind = Prop::Kind::Or;
  std::vector<VarId> vars;
  for (auto& f : keep) f.collect_vars(vars);
  p.parts = std::move(keep);
  add_prop(std::move(p), vars);
  return true;
}

bool Solver::run_linear(std::uint32_t id) {
  LinExpr e = props_[id].expr;
  bool equality = props_[id].equality;
  Norm n = normalize(e);
  bool small = n.terms.size() <= 1 ||
               (equality && n.terms.size() == 2 && n.terms[0].first == -n.terms[1].first);
  if (small) {
    kill_prop(id);
    return equality ? post_eq(e) : post_le(e);
  }
  // sum a_i x_i + c  (= or <=)  0
  std::size_t min_inf = 0, max_inf = 0;
  i128 min_sum = n.constant, max_sum = n.constant;
  std::vector<Bound> mins, maxs;
  for (auto [a, r] : n.terms) {
    auto lo = min_of(a, r), hi = max_of(a, r);
    mins.push_back(lo);
    maxs.push_back(hi);
    if (lo.inf) ++min_inf; else min_sum += lo.v;
    if (hi.inf) ++max_inf; else max_sum += hi.v;
  }
  if (min_inf == 0 && min_sum > 0) return false;
  if (equality && max_inf == 0 && max_sum < 0) return false;
  for (std::size_t i = 0; i < n.terms.size(); ++i) {
    auto [a, r] = n.terms[i];
    // a*x <= -(min_sum - min_i)
    std::size_t others_inf = min_inf - (mins[i].inf ? 1 : 0);
    if (others_inf == 0) {
      i128 rest = min_sum - (mins[i].inf ? 0 : mins[i].v);
      i128 ub = -rest;
      bool ok = a > 0 ? set_hi(r, floor_div(ub, a)) : set_lo(r, ceil_div(ub, a));
      if (!ok) return false;
    }
    if (equality) {
      std::size_t others_max_inf = max_inf - (maxs[i].inf ? 1 : 0);
      if (others_max_inf == 0) {
        i128 rest = max_sum - (maxs[i].inf ? 0 : maxs[i].v);
        i128 lb = -rest;
        bool ok = a > 0 ? set_lo(r, ceil_div(lb, a)) : set_hi(r, floor_div(lb, a));
        if (!ok) return false;
      }
    }
  }
  return true;
}

bool Solver::run_prop(std::uint32_t id) {
  switch (props_[id].kind) {
    case Prop::Kind::Linear: return run_linear(id);
    case Prop::Kind::Neq: {
      Norm n = normalize(props_[id].expr);
      if (n.terms.empty()) {
        kill_prop(id);
        return n.constant != 0;
      }
      if (n.terms.size() == 1) {
        kill_prop(id);
        auto [a, r] = n.terms.front();
        if ((-n.constant) % a != 0) return true;
        return remove_value(r, -n.constant / a);
      }
      return true;
    }
    case Prop::Kind::Or: {
      bool changed = false;
      for (auto& p : props_[id].parts) {
        Truth t = decided(p);
        if (t == Truth::True) {
          kill_prop(id);
          return true;
        }
        if (t == Truth::False) changed = true;
      }
      if (!changed) return true;
      std::vector<Formula> parts = props_[id].parts;
      kill_prop(id);
      return post_or(std::move(parts));
    }
  }
  return true;
}

bool Solver::propagate() {
  while (!queue_.empty()) {
    auto id = queue_.back();
    queue_.pop_back();
    if (!props_[id].alive) continue;
    if (!run_prop(id)) return false;
  }
  return true;
}

bool Solver::post_part(const Formula& f) {
  switch (f.kind) {
    case Formula::Kind::True: return true;
    case Formula::Kind::False: return false;
    case Formula::Kind::Atom: return post_atom(f.atom);
    case Formula::Kind::And:
      for (auto& p : f.parts)
        if (!post_part(p)) return false;
      return true;
    case Formula::Kind::Or: return post_or(f.parts);
  }
  return true;
}

bool Solver::post(const Formula& f) {
  if (failed_) return false;
  bool ok = post_part(f) && propagate();
  if (!ok) return fail();
  return true;
}

bool Solver::post_range(VarId v, std::int64_t lo, std::int64_t hi) {
  if (failed_) return false;
  if (lo > hi) return fail();
  auto [r, off] = find(v);
  bool ok = set_lo(r, i128(lo) - off) && set_hi(r, i128(hi) - off) && propagate();
  if (!ok) return fail();
  return true;
}

}  // namespace fluxkit::fd
