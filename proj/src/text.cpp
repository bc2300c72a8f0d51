#include "fluxkit/text.hpp"

#include <cctype>
#include <charconv>

#include "fluxkit/store.hpp"

namespace fluxkit {

ArgTerm VarTable::get(const std::string& name) {
  if (name == "_") return store_.fresh();
  auto it = vars_.find(name);
  if (it != vars_.end()) return it->second;
  ArgTerm v = store_.fresh();
  vars_.emplace(name, v);
  return v;
}

std::string VarTable::name_of(VarId v) const {
  for (const auto& [n, t] : vars_)
    if (t.is_var() && t.var_id() == v) return n;
  return "_";
}

void Cursor::skip_ws() {
  while (i_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[i_]))) ++i_;
}

bool Cursor::done() {
  skip_ws();
  return i_ >= s_.size() || s_[i_] == '#';
}

bool Cursor::peek(char c) {
  skip_ws();
  return i_ < s_.size() && s_[i_] == c;
}

bool Cursor::accept(char c) {
  if (!peek(c)) return false;
  ++i_;
  return true;
}

bool Cursor::accept(std::string_view word) {
  skip_ws();
  if (s_.substr(i_, word.size()) != word) return false;
  std::size_t end = i_ + word.size();
  auto wordy = [](char ch) { return std::isalnum(static_cast<unsigned char>(ch)) || ch == '_' || ch == '-'; };
  if (wordy(word.back()) && end < s_.size() && wordy(s_[end])) return false;
  i_ = end;
  return true;
}

void Cursor::expect(char c) {
  if (!accept(c)) error(std::string("expected '") + c + "'");
}

std::string Cursor::ident() {
  skip_ws();
  std::size_t b = i_;
  while (i_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[i_])) || s_[i_] == '_' || s_[i_] == '-' ||
                            s_[i_] == '?'))
    ++i_;
  if (b == i_) error("expected a name");
  return std::string(s_.substr(b, i_ - b));
}

std::string Cursor::name() {
  skip_ws();
  std::size_t b = i_;
  while (i_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[i_])) || s_[i_] == '_')) ++i_;
  if (b == i_) error("expected a name");
  return std::string(s_.substr(b, i_ - b));
}

bool Cursor::peek_int() {
  skip_ws();
  if (i_ >= s_.size()) return false;
  char c = s_[i_];
  if (std::isdigit(static_cast<unsigned char>(c))) return true;
  return c == '-' && i_ + 1 < s_.size() && std::isdigit(static_cast<unsigned char>(s_[i_ + 1]));
}

std::int64_t Cursor::integer() {
  skip_ws();
  std::int64_t v = 0;
  auto [p, ec] = std::from_chars(s_.data() + i_, s_.data() + s_.size(), v);
  if (ec != std::errc()) error("expected an integer");
  i_ = static_cast<std::size_t>(p - s_.data());
  return v;
}

std::string Cursor::rest() {
  skip_ws();
  return std::string(s_.substr(i_));
}

void Cursor::error(const std::string& msg) const { throw ParseError(line_, msg); }

ArgTerm parse_arg(Cursor& c, VarTable& vars) {
  if (c.peek_int()) return ArgTerm::integer(c.integer());
  std::string name = c.name();
  char first = name.front();
  if (first == '_' || std::isupper(static_cast<unsigned char>(first))) return vars.get(name);
  if (!std::islower(static_cast<unsigned char>(first))) c.error("bad argument '" + name + "'");
  return ArgTerm::symbol(name);
}

Fluent parse_fluent(Cursor& c, VarTable& vars) {
  std::string f = c.name();
  if (!std::islower(static_cast<unsigned char>(f.front()))) c.error("functor must start lowercase: " + f);
  Fluent out{Symbol(f), {}};
  if (c.accept('(')) {
    if (!c.accept(')')) {
      do {
        out.args.push_back(parse_arg(c, vars));
      } while (c.accept(','));
      c.expect(')');
    }
  }
  return out;
}

Fluent parse_fluent(std::string_view text, VarTable& vars) {
  Cursor c(text, 1);
  Fluent f = parse_fluent(c, vars);
  if (!c.done()) c.error("trailing text after fluent");
  return f;
}

}  // namespace fluxkit
