#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace fluxkit {

using VarId = std::uint32_t;

/// Interned identifier for functors and symbolic constants. Equal text
/// always yields the same id.
class Symbol {
 public:
  Symbol() = default;
  explicit Symbol(std::string_view text);

  static Symbol from_id(std::int32_t id);

  std::int32_t id() const { return id_; }
  const std::string& text() const;

  friend bool operator==(Symbol a, Symbol b) { return a.id_ == b.id_; }
  friend auto operator<=>(Symbol a, Symbol b) { return a.id_ <=> b.id_; }

 private:
  std::int32_t id_ = -1;
};

/// A flat fluent argument: a variable, an integer or a symbolic constant.
class ArgTerm {
 public:
  enum class Kind : std::uint8_t { Var, Int, Sym };

  ArgTerm() = default;

  static ArgTerm var(VarId v) { return ArgTerm(Kind::Var, v); }
  static ArgTerm integer(std::int64_t n) { return ArgTerm(Kind::Int, n); }
  static ArgTerm symbol(Symbol s) { return ArgTerm(Kind::Sym, s.id()); }
  static ArgTerm symbol(std::string_view text) { return symbol(Symbol(text)); }

  Kind kind() const { return kind_; }
  bool is_var() const { return kind_ == Kind::Var; }
  bool is_int() const { return kind_ == Kind::Int; }
  bool is_sym() const { return kind_ == Kind::Sym; }
  bool is_const() const { return kind_ != Kind::Var; }

  VarId var_id() const { return static_cast<VarId>(value_); }
  std::int64_t int_value() const { return value_; }
  Symbol sym_value() const { return Symbol::from_id(static_cast<std::int32_t>(value_)); }
  std::int64_t raw() const { return value_; }

  friend bool operator==(const ArgTerm&, const ArgTerm&) = default;
  friend auto operator<=>(const ArgTerm&, const ArgTerm&) = default;

 private:
  ArgTerm(Kind k, std::int64_t v) : kind_(k), value_(v) {}

  Kind kind_ = Kind::Int;
  std::int64_t value_ = 0;
};

struct Fluent {
  Symbol functor;
  std::vector<ArgTerm> args;

  Fluent() = default;
  Fluent(Symbol f, std::vector<ArgTerm> a) : functor(f), args(std::move(a)) {}
  Fluent(std::string_view f, std::vector<ArgTerm> a) : functor(f), args(std::move(a)) {}

  std::size_t arity() const { return args.size(); }
  bool ground() const;
  /// A fluent is schematic iff at least one argument is a variable.
  bool schematic() const { return !ground(); }

  friend bool operator==(const Fluent&, const Fluent&) = default;
};

struct FluentHash {
  std::size_t operator()(const Fluent& f) const noexcept;
};

/// Thrown when the same functor is used with two different arities.
class ArityError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

using Substitution = std::map<VarId, ArgTerm>;

/// Follows variable bindings in `s` until a constant or an unbound variable.
ArgTerm walk(ArgTerm t, const Substitution& s);
Fluent apply(const Fluent& f, const Substitution& s);

/// Most general unifier of two flat fluents, or nullopt when none exists.
std::optional<Substitution> unify(const Fluent& a, const Fluent& b);

/// True iff some substitution θ over the variables of `pattern` makes
/// pattern·θ identical to `g`. Variables of `g` behave as constants.
bool is_instance(const Fluent& g, const Fluent& pattern);

/// The matching substitution behind is_instance.
std::optional<Substitution> match(const Fluent& g, const Fluent& pattern);

bool identical(const Fluent& a, const Fluent& b);
bool not_unifiable(const Fluent& a, const Fluent& b);

/// Session-scoped functor arity registry.
class Signature {
 public:
  /// Records the arity on first use; throws ArityError on mismatch.
  void check(const Fluent& f);
  void check(Symbol functor, std::size_t arity);
  std::optional<std::size_t> arity(Symbol functor) const;

 private:
  std::map<Symbol, std::size_t> arities_;
};

enum class VarStyle {
  Anonymous,  // every variable prints as `_`
  Numbered,   // `_G<id>`
};

std::string to_string(const ArgTerm& t, VarStyle style = VarStyle::Numbered);
std::string to_string(const Fluent& f, VarStyle style = VarStyle::Numbered);

/// Total order used for canonical dumps: functor text, then arguments
/// (integers numerically, then symbols by text, then variables).
std::strong_ordering canonical_compare(const ArgTerm& a, const ArgTerm& b);
std::strong_ordering canonical_compare(const Fluent& a, const Fluent& b);

}  // namespace fluxkit
