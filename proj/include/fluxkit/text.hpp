#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <string_view>

#include "fluxkit/terms.hpp"

namespace fluxkit {

class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& msg)
      : std::runtime_error("line " + std::to_string(line) + ": " + msg), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

class Store;

/// Named variables of one script or query. `_` always yields a fresh one.
class VarTable {
 public:
  explicit VarTable(Store& st) : store_(st) {}
  ArgTerm get(const std::string& name);
  bool has(const std::string& name) const { return vars_.count(name) > 0; }
  const std::map<std::string, ArgTerm>& all() const { return vars_; }
  std::string name_of(VarId v) const;

 private:
  Store& store_;
  std::map<std::string, ArgTerm> vars_;
};

/// Cursor over one line of text with the small token set fluent syntax needs.
class Cursor {
 public:
  Cursor(std::string_view text, std::size_t line) : s_(text), line_(line) {}

  void skip_ws();
  bool done();
  bool peek(char c);
  bool accept(char c);
  bool accept(std::string_view word);
  void expect(char c);
  // command words may contain '-' and '?'; names may not
  std::string ident();
  std::string name();
  bool peek_int();
  std::int64_t integer();
  std::string rest();
  [[noreturn]] void error(const std::string& msg) const;
  std::size_t line() const { return line_; }
  std::size_t pos() const { return i_; }
  void seek(std::size_t p) { i_ = p; }

 private:
  std::string_view s_;
  std::size_t i_ = 0;
  std::size_t line_;
};

ArgTerm parse_arg(Cursor& c, VarTable& vars);
Fluent parse_fluent(Cursor& c, VarTable& vars);
Fluent parse_fluent(std::string_view text, VarTable& vars);

}  // namespace fluxkit
