#include "fluxkit/script.hpp"

#include <functional>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "fluxkit/agent.hpp"
#include "fluxkit/cleanbot.hpp"
#include "fluxkit/knowledge.hpp"
#include "fluxkit/text.hpp"
#include "fluxkit/update.hpp"

namespace fluxkit {

namespace {

using fd::Formula;
using fd::LinExpr;

struct Named {
  State state;
  std::string tail;
};

struct Session {
  Store store;
  VarTable vars{store};
  std::map<std::string, Named> states;
  std::unique_ptr<Domain> domain;
  int width = 5;
  int height = 5;
  bool failed_assertion = false;
  std::ostream* out = nullptr;
};

using Step = std::function<void(Session&)>;

class Parser {
 public:
  Parser(Session& s, std::string_view line, std::size_t n) : s_(s), c_(line, n) {}

  Step statement();

 private:
  std::string state_name() {
    std::string n = c_.name();
    if (!std::isupper(static_cast<unsigned char>(n.front()))) c_.error("state names start uppercase: " + n);
    return n;
  }
  Fluent fluent() { return parse_fluent(c_, s_.vars); }
  std::vector<Fluent> fluent_list();
  std::vector<ArgTerm> arg_list();
  Disjunct disjunct();
  std::vector<int64_t> sensing();

  Formula formula();
  Formula conjunction();
  Formula unit();
  LinExpr expr();
  LinExpr term();

  Step query(bool asserted, bool negated);
  void end() {
    if (!c_.done()) c_.error("unexpected text: " + c_.rest());
  }

  Session& s_;
  Cursor c_;
};

Named& lookup(Session& s, const std::string& name) {
  auto it = s.states.find(name);
  if (it == s.states.end()) throw std::invalid_argument("unknown state " + name);
  return it->second;
}

std::string known_line(Session& s, const std::string& name) {
  const Named& n = lookup(s, name);
  auto ks = s.store.known(n.state);
  bool open = s.store.is_open(n.state);
  std::string out = name + " = ";
  if (ks.empty()) return out + (open ? n.tail : "[]");
  out += "[";
  for (std::size_t i = 0; i < ks.size(); ++i) {
    if (i) out += ",";
    out += to_string(ks[i]);
  }
  out += open ? " | " + n.tail + "]" : "]";
  return out;
}

void show(Session& s, const std::string& name) {
  const Named& n = lookup(s, name);
  *s.out << known_line(s, name) << "\n";
  std::string dump = s.store.dump(n.state, n.tail);
  auto nl = dump.find('\n');
  std::string rest = dump.substr(nl + 1);
  if (!rest.empty()) *s.out << "Constraints:\n" << rest;
}

std::vector<Fluent> Parser::fluent_list() {
  std::vector<Fluent> out;
  c_.expect('[');
  if (c_.accept(']')) return out;
  do {
    out.push_back(fluent());
  } while (c_.accept(','));
  c_.expect(']');
  return out;
}

std::vector<ArgTerm> Parser::arg_list() {
  std::vector<ArgTerm> out;
  c_.expect('[');
  if (c_.accept(']')) return out;
  do {
    out.push_back(parse_arg(c_, s_.vars));
  } while (c_.accept(','));
  c_.expect(']');
  return out;
}

Disjunct Parser::disjunct() {
  auto p = c_.pos();
  if (c_.accept("eq") && c_.accept('(')) {
    EqD e;
    e.xs = arg_list();
    c_.expect(',');
    e.ys = arg_list();
    c_.expect(')');
    if (e.xs.size() != e.ys.size()) c_.error("eq/2 with lists of different length");
    return e;
  }
  c_.seek(p);
  return fluent();
}

std::vector<int64_t> Parser::sensing() {
  std::vector<int64_t> out;
  c_.expect('[');
  if (c_.accept(']')) return out;
  do {
    if (c_.accept("true"))
      out.push_back(1);
    else if (c_.accept("false"))
      out.push_back(0);
    else
      out.push_back(c_.integer());
  } while (c_.accept(','));
  c_.expect(']');
  return out;
}

Formula Parser::formula() {
  std::vector<Formula> parts{conjunction()};
  while (c_.accept("or")) parts.push_back(conjunction());
  return parts.size() == 1 ? parts[0] : Formula::disj(std::move(parts));
}

Formula Parser::conjunction() {
  std::vector<Formula> parts{unit()};
  while (c_.accept("and")) parts.push_back(unit());
  return Formula::conj(std::move(parts));
}

Formula Parser::unit() {
  if (c_.accept('(')) {
    Formula f = formula();
    c_.expect(')');
    return f;
  }
  LinExpr lhs = expr();
  if (c_.accept("in")) {
    std::int64_t lo = c_.integer();
    c_.expect('.');
    c_.expect('.');
    std::int64_t hi = c_.integer();
    return Formula::conj({fd::le(LinExpr::num(lo), lhs), fd::le(lhs, LinExpr::num(hi))});
  }
  fd::Op op;
  if (c_.accept('=')) op = fd::Op::Eq;
  else if (c_.accept('!')) { c_.expect('='); op = fd::Op::Ne; }
  else if (c_.accept('<')) op = c_.accept('=') ? fd::Op::Le : fd::Op::Lt;
  else if (c_.accept('>')) op = c_.accept('=') ? fd::Op::Ge : fd::Op::Gt;
  else c_.error("expected a comparison");
  LinExpr rhs = expr();
  return Formula::make_atom(fd::Atom{lhs, op, rhs});
}

LinExpr Parser::expr() {
  LinExpr e = term();
  while (true) {
    if (c_.accept('+')) e += term();
    else if (c_.peek('-')) { c_.accept('-'); e -= term(); }
    else return e;
  }
}

LinExpr Parser::term() {
  if (c_.accept('-')) {
    LinExpr t = term();
    t *= -1;
    return t;
  }
  if (c_.peek_int()) {
    std::int64_t k = c_.integer();
    if (c_.accept('*')) {
      LinExpr t = LinExpr::of(parse_arg(c_, s_.vars));
      t *= k;
      return t;
    }
    return LinExpr::num(k);
  }
  return LinExpr::of(parse_arg(c_, s_.vars));
}

std::string verdict(bool b) { return b ? "yes" : "no"; }

Step Parser::query(bool asserted, bool negated) {
  std::string kind = c_.ident();
  std::string line;
  auto report = [asserted, negated](Session& s, const std::string& text, bool result) {
    *s.out << text << "\n";
    if (!asserted) return;
    if (result == negated) {
      *s.out << "FAILED: expected " << (negated ? "no" : "yes") << "\n";
      s.failed_assertion = true;
    }
  };
  if (kind == "knows" || kind == "knows-not") {
    Fluent f = fluent();
    std::string name = state_name();
    end();
    bool pos = kind == "knows";
    return [=](Session& s) {
      State z = lookup(s, name).state;
      bool r = pos ? knows(s.store, f, z) : knows_not(s.store, f, z);
      report(s, std::string(pos ? "knows(" : "knows_not(") + to_string(f) + ") = " + verdict(r), r);
    };
  }
  if (kind == "knows-val") {
    c_.expect('[');
    std::vector<std::string> names;
    if (!c_.accept(']')) {
      do {
        names.push_back(c_.name());
      } while (c_.accept(','));
      c_.expect(']');
    }
    std::vector<VarId> vars;
    for (const auto& n : names) {
      ArgTerm v = s_.vars.get(n);
      if (!v.is_var()) c_.error("not a variable: " + n);
      vars.push_back(v.var_id());
    }
    Fluent f = fluent();
    std::string name = state_name();
    end();
    return [=](Session& s) {
      auto bs = knows_val(s.store, vars, f, lookup(s, name).state);
      std::string text = "knows_val([";
      for (std::size_t i = 0; i < names.size(); ++i) text += (i ? "," : "") + names[i];
      text += "], " + to_string(f) + ") = ";
      if (bs.empty()) text += "no";
      for (std::size_t k = 0; k < bs.size(); ++k) {
        if (k) text += "; ";
        for (std::size_t i = 0; i < names.size(); ++i)
          text += (i ? ", " : "") + names[i] + " = " + to_string(bs[k].at(vars[i]));
      }
      report(s, text, !bs.empty());
    };
  }
  c_.error("unknown query '" + kind + "'");
}

Step Parser::statement() {
  std::string kw = c_.ident();
  if (kw == "state") {
    std::string name = state_name();
    c_.expect('=');
    if (c_.accept('_')) {
      end();
      return [=](Session& s) {
        s.states[name] = Named{s.store.open_state(), name};
        *s.out << known_line(s, name) << "\n";
      };
    }
    c_.expect('[');
    std::vector<Fluent> fs;
    std::optional<std::string> tail;
    if (!c_.peek(']') && !c_.peek('|')) {
      do {
        fs.push_back(fluent());
      } while (c_.accept(','));
    }
    if (c_.accept('|')) tail = state_name();
    c_.expect(']');
    end();
    return [=](Session& s) {
      if (tail) {
        State z = s.store.open_state(fs);
        s.states[name] = Named{z, *tail};
        s.states[*tail] = Named{*s.store.tail(z), *tail};
      } else {
        s.states[name] = Named{s.store.closed_state(fs), "[]"};
      }
      *s.out << known_line(s, name) << "\n";
    };
  }
  if (kw == "not-holds" || kw == "not-holds-all") {
    Fluent f = fluent();
    std::string name = state_name();
    end();
    bool all = kw == "not-holds-all";
    return [=](Session& s) {
      State z = lookup(s, name).state;
      if (all) s.store.not_holds_all(f, z);
      else s.store.not_holds(f, z);
    };
  }
  if (kw == "or-holds") {
    std::vector<Disjunct> ds;
    c_.expect('[');
    if (!c_.accept(']')) {
      do {
        ds.push_back(disjunct());
      } while (c_.accept(','));
      c_.expect(']');
    }
    std::string name = state_name();
    end();
    return [=](Session& s) { s.store.or_holds(ds, lookup(s, name).state); };
  }
  if (kw == "duplicate-free") {
    std::string name = state_name();
    end();
    return [=](Session& s) { s.store.duplicate_free(lookup(s, name).state); };
  }
  if (kw == "light") {
    ArgTerm x = parse_arg(c_, s_.vars);
    ArgTerm y = parse_arg(c_, s_.vars);
    bool percept;
    if (c_.accept("true")) percept = true;
    else if (c_.accept("false")) percept = false;
    else c_.error("expected true or false");
    std::string name = state_name();
    end();
    return [=](Session& s) { cleanbot::light_assert(s.store, x, y, percept, lookup(s, name).state); };
  }
  if (kw == "fd") {
    Formula f = formula();
    end();
    return [=](Session& s) { s.store.post(f); };
  }
  if (kw == "holds") {
    Fluent f = fluent();
    std::string name = state_name();
    end();
    return [=](Session& s) {
      if (!holds_assert(s.store, f, lookup(s, name).state)) throw Inconsistent("holds(" + to_string(f) + ") failed");
    };
  }
  if (kw == "cancel") {
    std::string out = state_name();
    c_.expect('=');
    std::string in = state_name();
    Fluent f = fluent();
    end();
    return [=](Session& s) {
      Named src = lookup(s, in);
      s.states[out] = Named{cancel_fluent(s.store, f, src.state), src.tail};
      *s.out << known_line(s, out) << "\n";
    };
  }
  if (kw == "knows" || kw == "knows-not" || kw == "knows-val") {
    c_.seek(0);
    return query(false, false);
  }
  if (kw == "assert") {
    bool negated = c_.accept("not");
    return query(true, negated);
  }
  if (kw == "update") {
    std::string out = state_name();
    c_.expect('=');
    std::string in = state_name();
    std::vector<Fluent> plus_fs, minus_fs;
    while (!c_.done()) {
      if (c_.accept("plus")) plus_fs = fluent_list();
      else if (c_.accept("minus")) minus_fs = fluent_list();
      else c_.error("expected plus [...] or minus [...]");
    }
    return [=](Session& s) {
      Named src = lookup(s, in);
      s.states[out] = Named{update(s.store, src.state, plus_fs, minus_fs), src.tail};
      *s.out << known_line(s, out) << "\n";
    };
  }
  if (kw == "domain") {
    std::string which = c_.name();
    if (which != "cleanbot") c_.error("unknown domain " + which);
    int w = static_cast<int>(c_.integer());
    int h = static_cast<int>(c_.integer());
    if (w < 1 || h < 1) c_.error("grid must be at least 1x1");
    end();
    return [=](Session& s) {
      s.domain = std::make_unique<Domain>(cleanbot::make_domain(w, h));
      s.width = w;
      s.height = h;
    };
  }
  if (kw == "consistent") {
    std::string name = state_name();
    end();
    return [=](Session& s) { cleanbot::consistent(s.store, lookup(s, name).state, s.width, s.height); };
  }
  if (kw == "state-update") {
    std::string out = state_name();
    c_.expect('=');
    std::string in = state_name();
    Fluent a = fluent();
    std::vector<int64_t> y = sensing();
    end();
    return [=](Session& s) {
      if (!s.domain) throw std::invalid_argument("state-update needs a domain statement first");
      Named src = lookup(s, in);
      Agent agent(*s.domain, s.store, src.state);
      s.states[out] = Named{agent.state_update(src.state, Action(a.functor.text(), a.args), y), src.tail};
      *s.out << known_line(s, out) << "\n";
    };
  }
  if (kw == "show") {
    std::string name = state_name();
    end();
    return [=](Session& s) { show(s, name); };
  }
  c_.error("unknown statement '" + kw + "'");
}

}  // namespace

int run_script(std::istream& in, std::ostream& out, std::ostream& err) {
  Session s;
  s.out = &out;
  std::vector<std::pair<std::string, Step>> steps;
  std::string line;
  std::size_t n = 0;
  try {
    while (std::getline(in, line)) {
      ++n;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      Cursor probe(line, n);
      if (probe.done()) continue;
      Parser p(s, line, n);
      steps.emplace_back(line, p.statement());
    }
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const ArityError& e) {
    err << "parse error: line " << n << ": " << e.what() << "\n";
    return kExitUsage;
  }
  for (auto& [text, step] : steps) {
    auto b = text.find_first_not_of(" \t");
    out << "?- " << text.substr(b) << "\n";
    try {
      step(s);
    } catch (const Inconsistent& e) {
      out << "inconsistent\n";
      err << "inconsistent: " << e.what() << "\n";
      return kExitInconsistent;
    } catch (const std::invalid_argument& e) {
      err << "usage error: " << e.what() << "\n";
      return kExitUsage;
    } catch (const std::logic_error& e) {
      err << "usage error: " << e.what() << "\n";
      return kExitUsage;
    }
  }
  return s.failed_assertion ? kExitAssertion : kExitOk;
}

}  // namespace fluxkit
