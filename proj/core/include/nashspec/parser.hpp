// Copyright 2026 The nashspec Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Concrete syntax, loosest to tightest:
//
//   spec     := seq ("or" seq)*
//   seq      := guarded (";" guarded)*
//   guarded  := primary ("ensuring" unary)*
//   primary  := "achieve" unary | "(" spec ")"
//   pred     := conj ("or" conj)*
//   conj     := unary ("and" unary)*
//   unary    := ("not" | "!") unary | atom | "true" | "false" | "(" pred ")"
//
// The operand of achieve/ensuring is a unary predicate, so "achieve a or b"
// is a choice between specs when b starts a spec, and a predicate needs
// parentheses to use a disjunction: "achieve (a or b)". "or" after a
// predicate operand always continues the spec level. Comments run from '#'
// to end of line.

#ifndef NASHSPEC_PARSER_HPP_
#define NASHSPEC_PARSER_HPP_

#include <stdexcept>
#include <string>
#include <string_view>

#include "nashspec/spec.hpp"

namespace nashspec {

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t offset, int line, int column)
      : std::runtime_error(what), offset_(offset), line_(line), column_(column) {}
  std::size_t offset() const { return offset_; }
  int line() const { return line_; }
  int column() const { return column_; }

 private:
  std::size_t offset_;
  int line_;
  int column_;
};

class UnknownPredicateError : public ParseError {
 public:
  UnknownPredicateError(const std::string& atom, std::size_t offset, int line, int column)
      : ParseError("unknown predicate '" + atom + "' at " + std::to_string(line) +
                       ":" + std::to_string(column),
                   offset, line, column),
        atom_(atom) {}
  const std::string& atom() const { return atom_; }

 private:
  std::string atom_;
};

Spec parse_spec(std::string_view text, const PredicateTable& table);
Predicate parse_predicate(std::string_view text, const PredicateTable& table);

}  // namespace nashspec

#endif  // NASHSPEC_PARSER_HPP_
