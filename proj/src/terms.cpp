#include "fluxkit/terms.hpp"

#include <deque>
#include <mutex>
#include <unordered_map>

namespace fluxkit {

namespace {

class Interner {
 public:
  std::int32_t intern(std::string_view text) {
    std::lock_guard lock(mutex_);
    auto it = ids_.find(std::string(text));
    if (it != ids_.end()) return it->second;
    auto id = static_cast<std::int32_t>(texts_.size());
    texts_.emplace_back(text);
    ids_.emplace(texts_.back(), id);
    return id;
  }

  const std::string& text(std::int32_t id) {
    std::lock_guard lock(mutex_);
    if (id < 0 || static_cast<std::size_t>(id) >= texts_.size())
      throw std::out_of_range("unknown symbol id " + std::to_string(id));
    return texts_[static_cast<std::size_t>(id)];
  }

 private:
  std::mutex mutex_;
  std::deque<std::string> texts_;
  std::unordered_map<std::string, std::int32_t> ids_;
};

Interner& interner() {
  static Interner instance;
  return instance;
}

bool bind(Substitution& s, ArgTerm a, ArgTerm b) {
  a = walk(a, s);
  b = walk(b, s);
  if (a == b) return true;
  if (a.is_var()) {
    s[a.var_id()] = b;
    return true;
  }
  if (b.is_var()) {
    s[b.var_id()] = a;
    return true;
  }
  return false;
}

}  // namespace

Symbol::Symbol(std::string_view text) : id_(interner().intern(text)) {}

Symbol Symbol::from_id(std::int32_t id) {
  Symbol s;
  s.id_ = id;
  return s;
}

const std::string& Symbol::text() const { return interner().text(id_); }

bool Fluent::ground() const {
  for (const auto& a : args)
    if (a.is_var()) return false;
  return true;
}

std::size_t FluentHash::operator()(const Fluent& f) const noexcept {
  std::size_t h = std::hash<std::int32_t>{}(f.functor.id());
  for (const auto& a : f.args) {
    std::size_t x = std::hash<std::int64_t>{}(a.raw()) ^ (static_cast<std::size_t>(a.kind()) << 1);
    h ^= x + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  }
  return h;
}

ArgTerm walk(ArgTerm t, const Substitution& s) {
  while (t.is_var()) {
    auto it = s.find(t.var_id());
    if (it == s.end() || it->second == t) break;
    t = it->second;
  }
  return t;
}

Fluent apply(const Fluent& f, const Substitution& s) {
  Fluent out = f;
  for (auto& a : out.args) a = walk(a, s);
  return out;
}

std::optional<Substitution> unify(const Fluent& a, const Fluent& b) {
  if (a.functor != b.functor) return std::nullopt;
  if (a.arity() != b.arity())
    throw ArityError("functor " + a.functor.text() + " used with arities " +
                     std::to_string(a.arity()) + " and " + std::to_string(b.arity()));
  Substitution s;
  for (std::size_t i = 0; i < a.arity(); ++i)
    if (!bind(s, a.args[i], b.args[i])) return std::nullopt;
  return s;
}

std::optional<Substitution> match(const Fluent& g, const Fluent& pattern) {
  if (g.functor != pattern.functor || g.arity() != pattern.arity()) return std::nullopt;
  Substitution theta;
  for (std::size_t i = 0; i < g.arity(); ++i) {
    const ArgTerm& p = pattern.args[i];
    const ArgTerm& t = g.args[i];
    if (!p.is_var()) {
      if (p != t) return std::nullopt;
      continue;
    }
    auto [it, inserted] = theta.emplace(p.var_id(), t);
    if (!inserted && it->second != t) return std::nullopt;
  }
  return theta;
}

bool is_instance(const Fluent& g, const Fluent& pattern) { return match(g, pattern).has_value(); }

bool identical(const Fluent& a, const Fluent& b) { return a == b; }

bool not_unifiable(const Fluent& a, const Fluent& b) { return !unify(a, b).has_value(); }

void Signature::check(const Fluent& f) { check(f.functor, f.arity()); }

void Signature::check(Symbol functor, std::size_t arity) {
  auto [it, inserted] = arities_.emplace(functor, arity);
  if (!inserted && it->second != arity)
    throw ArityError("functor " + functor.text() + "/" + std::to_string(it->second) +
                     " used with arity " + std::to_string(arity));
}

std::optional<std::size_t> Signature::arity(Symbol functor) const {
  auto it = arities_.find(functor);
  if (it == arities_.end()) return std::nullopt;
  return it->second;
}

std::string to_string(const ArgTerm& t, VarStyle style) {
  switch (t.kind()) {
    case ArgTerm::Kind::Int: return std::to_string(t.int_value());
    case ArgTerm::Kind::Sym: return t.sym_value().text();
    case ArgTerm::Kind::Var:
      return style == VarStyle::Anonymous ? std::string("_") : "_G" + std::to_string(t.var_id());
  }
  return {};
}

std::string to_string(const Fluent& f, VarStyle style) {
  std::string out = f.functor.text();
  if (f.args.empty()) return out;
  out += '(';
  for (std::size_t i = 0; i < f.args.size(); ++i) {
    if (i) out += ',';
    out += to_string(f.args[i], style);
  }
  out += ')';
  return out;
}

std::strong_ordering canonical_compare(const ArgTerm& a, const ArgTerm& b) {
  auto rank = [](const ArgTerm& t) {
    switch (t.kind()) {
      case ArgTerm::Kind::Int: return 0;
      case ArgTerm::Kind::Sym: return 1;
      case ArgTerm::Kind::Var: return 2;
    }
    return 3;
  };
  if (auto c = rank(a) <=> rank(b); c != 0) return c;
  if (a.is_sym()) {
    int c = a.sym_value().text().compare(b.sym_value().text());
    return c < 0 ? std::strong_ordering::less
                 : c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal;
  }
  if (a.is_var()) return std::strong_ordering::equal;
  return a.raw() <=> b.raw();
}

std::strong_ordering canonical_compare(const Fluent& a, const Fluent& b) {
  if (a.functor != b.functor) {
    int c = a.functor.text().compare(b.functor.text());
    return c < 0 ? std::strong_ordering::less : std::strong_ordering::greater;
  }
  if (auto c = a.arity() <=> b.arity(); c != 0) return c;
  for (std::size_t i = 0; i < a.arity(); ++i)
    if (auto c = canonical_compare(a.args[i], b.args[i]); c != 0) return c;
  return std::strong_ordering::equal;
}

}  // namespace fluxkit
