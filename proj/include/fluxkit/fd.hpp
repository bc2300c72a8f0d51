#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>
#include <utility>
#include <variant>
#include <vector>

#include "fluxkit/terms.hpp"

namespace fluxkit {

/// The current constraint set is unsatisfiable.
class Inconsistent : public std::runtime_error {
 public:
  Inconsistent() : std::runtime_error("inconsistent constraint store") {}
  explicit Inconsistent(const std::string& what) : std::runtime_error(what) {}
};

namespace fd {

constexpr std::int64_t kNegInf = std::numeric_limits<std::int64_t>::min();
constexpr std::int64_t kPosInf = std::numeric_limits<std::int64_t>::max();

// Symbolic constants live far below any user integer.
constexpr std::int64_t kSymBase = -(std::int64_t{1} << 40);

std::int64_t symbol_code(Symbol s);
bool is_symbol_code(std::int64_t v);
Symbol code_symbol(std::int64_t v);

/// Constant plus a sum of coefficient * variable.
struct LinExpr {
  std::int64_t constant = 0;
  std::vector<std::pair<std::int64_t, VarId>> terms;
  bool symbolic = false;

  static LinExpr num(std::int64_t n);
  static LinExpr var(VarId v, std::int64_t coeff = 1);
  static LinExpr of(const ArgTerm& t);

  LinExpr& operator+=(const LinExpr& o);
  LinExpr& operator-=(const LinExpr& o);
  LinExpr& operator*=(std::int64_t k);
  friend LinExpr operator+(LinExpr a, const LinExpr& b) { return a += b; }
  friend LinExpr operator-(LinExpr a, const LinExpr& b) { return a -= b; }

  /// Merge repeated variables and drop zero coefficients.
  void canonicalize();
};

enum class Op { Eq, Ne, Lt, Le, Gt, Ge };

struct Atom {
  LinExpr lhs;
  Op op = Op::Eq;
  LinExpr rhs;
};

enum class Truth { False, True, Unknown };

struct Formula {
  enum class Kind { True, False, Atom, And, Or };

  Kind kind = Kind::True;
  Atom atom;
  std::vector<Formula> parts;

  static Formula truth() { return Formula{}; }
  static Formula falsity();
  static Formula make_atom(Atom a);
  static Formula conj(std::vector<Formula> parts);
  static Formula disj(std::vector<Formula> parts);

  void collect_vars(std::vector<VarId>& out) const;
};

Formula eq(const LinExpr& a, const LinExpr& b);
Formula ne(const LinExpr& a, const LinExpr& b);
Formula lt(const LinExpr& a, const LinExpr& b);
Formula le(const LinExpr& a, const LinExpr& b);
Formula eq(const ArgTerm& a, const ArgTerm& b);
Formula ne(const ArgTerm& a, const ArgTerm& b);

/// Incomplete finite-domain solver: interval domains with holes, equality
/// aliasing X = Y + c through union-find, bounds propagation for linear
/// constraints, value elimination for disequalities, and disjunctions that
/// are only simplified once one of their members is decided.
class Solver {
 public:
  struct Root {
    VarId root;
    std::int64_t offset;
  };

  VarId new_var();
  std::size_t num_vars() const { return vars_.size(); }

  /// Returns false when the store became inconsistent.
  bool post(const Formula& f);
  bool post_range(VarId v, std::int64_t lo, std::int64_t hi);

  Truth decided(const Formula& f) const;
  bool consistent() const { return !failed_; }

  Root find(VarId v) const;
  std::optional<std::int64_t> value(VarId v) const;
  std::int64_t lo(VarId v) const;
  std::int64_t hi(VarId v) const;
  bool contains(VarId v, std::int64_t value) const;

  /// Number of suspended propagators still alive.
  std::size_t live_propagators() const;

  // Trail. Marks nest; rollback and release must be LIFO.
  struct Mark {
    std::size_t trail = 0;
    std::size_t depth = 0;
  };
  Mark mark();
  void rollback(const Mark& m);
  void release(const Mark& m);
  std::size_t depth() const { return depth_; }

  /// Roots whose domain or alias class changed since the last call.
  std::vector<VarId> take_changed();

 private:
  struct VarRec {
    std::int64_t lo = kNegInf;
    std::int64_t hi = kPosInf;
    std::vector<std::int64_t> holes;
    VarId parent = 0;
    std::int64_t offset = 0;
    std::uint32_t rank = 0;
    std::uint64_t stamp = 0;
  };

  struct Prop {
    enum class Kind { Linear, Neq, Or };
    Kind kind = Kind::Linear;
    LinExpr expr;  // Linear: expr (= or <=) 0, Neq: expr != 0
    bool equality = false;
    std::vector<Formula> parts;
    bool alive = true;
  };

  struct Norm {
    __int128 constant = 0;
    std::vector<std::pair<__int128, VarId>> terms;  // over unfixed roots
  };

  struct Bound {
    bool inf = false;
    __int128 v = 0;
  };

  struct SaveVar {
    VarId id;
    VarRec rec;
  };
  struct NewVar {};
  struct NewProp {};
  struct KillProp {
    std::uint32_t id;
  };
  struct WatchSize {
    VarId root;
    std::size_t size;
  };
  struct SaveFailed {
    bool failed;
  };
  using TrailEntry = std::variant<SaveVar, NewVar, NewProp, KillProp, WatchSize, SaveFailed>;

  bool trailing() const { return depth_ > 0; }
  void save(VarId v);
  void record(TrailEntry e);

  Norm normalize(const LinExpr& e) const;
  Bound min_of(__int128 a, VarId r) const;
  Bound max_of(__int128 a, VarId r) const;
  Truth decide_atom(const Atom& a) const;
  Truth decide_eq(const Norm& n) const;
  Truth decide_le(const Norm& n) const;

  bool post_part(const Formula& f);
  bool post_atom(const Atom& a);
  bool post_eq(const LinExpr& e);
  bool post_le(const LinExpr& e);
  bool post_ne(const LinExpr& e);
  bool post_or(std::vector<Formula> parts);

  bool set_lo(VarId r, __int128 v);
  bool set_hi(VarId r, __int128 v);
  bool fix(VarId r, __int128 v);
  bool remove_value(VarId r, __int128 v);
  bool merge(VarId r1, VarId r2, __int128 k);
  bool tidy(VarId r);
  void notify(VarId r);

  std::uint32_t add_prop(Prop p, const std::vector<VarId>& vars);
  void kill_prop(std::uint32_t id);
  bool run_prop(std::uint32_t id);
  bool run_linear(std::uint32_t id);
  bool propagate();
  bool fail();

  std::vector<VarRec> vars_;
  std::vector<std::vector<std::uint32_t>> watchers_;
  std::vector<Prop> props_;
  std::vector<std::uint32_t> queue_;
  std::vector<VarId> changed_;
  std::vector<TrailEntry> trail_;
  std::size_t depth_ = 0;
  std::uint64_t stamp_ = 1;
  bool failed_ = false;
};

}  // namespace fd
}  // namespace fluxkit
