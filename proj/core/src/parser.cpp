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

#include "nashspec/parser.hpp"

#include <cctype>
#include <vector>

namespace nashspec {
namespace {

enum class Tok { kIdent, kLParen, kRParen, kSemi, kBang, kEnd };

struct Token {
  Tok kind;
  std::string text;
  std::size_t offset;
  int line;
  int column;
};

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    while (true) {
      skip_space();
      if (pos_ >= src_.size()) {
        out.push_back({Tok::kEnd, "", pos_, line_, col_});
        return out;
      }
      char c = src_[pos_];
      Token tok{Tok::kEnd, std::string(1, c), pos_, line_, col_};
      if (c == '(') tok.kind = Tok::kLParen;
      else if (c == ')') tok.kind = Tok::kRParen;
      else if (c == ';') tok.kind = Tok::kSemi;
      else if (c == '!') tok.kind = Tok::kBang;
      else if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
        std::size_t start = pos_;
        while (pos_ < src_.size() &&
               (std::isalnum(static_cast<unsigned char>(src_[pos_])) ||
                src_[pos_] == '_' || src_[pos_] == '.'))
          advance();
        tok.kind = Tok::kIdent;
        tok.text = std::string(src_.substr(start, pos_ - start));
        out.push_back(tok);
        continue;
      } else {
        throw ParseError("unexpected character '" + tok.text + "' at " +
                             std::to_string(line_) + ":" + std::to_string(col_),
                         pos_, line_, col_);
      }
      advance();
      out.push_back(tok);
    }
  }

 private:
  void advance() {
    if (src_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  void skip_space() {
    while (pos_ < src_.size()) {
      char c = src_[pos_];
      if (c == '#') {
        while (pos_ < src_.size() && src_[pos_] != '\n') advance();
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
      } else {
        return;
      }
    }
  }

  std::string_view src_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
};

bool is_keyword(const std::string& s) {
  return s == "achieve" || s == "ensuring" || s == "or" || s == "and" ||
         s == "not" || s == "true" || s == "false";
}

class Parser {
 public:
  Parser(std::vector<Token> toks, const PredicateTable& table)
      : toks_(std::move(toks)), table_(table) {}

  Spec parse_top_spec() {
    Spec s = parse_spec();
    expect_end();
    return s;
  }

  Predicate parse_top_pred() {
    Predicate p = parse_pred();
    expect_end();
    return p;
  }

 private:
  const Token& peek() const { return toks_[pos_]; }
  bool at_word(const char* w) const {
    return peek().kind == Tok::kIdent && peek().text == w;
  }

  [[noreturn]] void fail(const std::string& msg) const {
    const Token& t = peek();
    std::string where = t.kind == Tok::kEnd ? "end of input" : "'" + t.text + "'";
    throw ParseError(msg + ", found " + where + " at " + std::to_string(t.line) + ":" +
                         std::to_string(t.column),
                     t.offset, t.line, t.column);
  }

  void expect_end() {
    if (peek().kind != Tok::kEnd) fail("expected end of input");
  }

  Spec parse_spec() {
    Spec s = parse_seq();
    while (at_word("or")) {
      ++pos_;
      s = choice(s, parse_seq());
    }
    return s;
  }

  Spec parse_seq() {
    Spec s = parse_guarded();
    while (peek().kind == Tok::kSemi) {
      ++pos_;
      s = seq(s, parse_guarded());
    }
    return s;
  }

  Spec parse_guarded() {
    Spec s = parse_primary();
    while (at_word("ensuring")) {
      ++pos_;
      s = ensuring(s, parse_unary());
    }
    return s;
  }

  Spec parse_primary() {
    if (at_word("achieve")) {
      ++pos_;
      return achieve(parse_unary());
    }
    if (peek().kind == Tok::kLParen) {
      ++pos_;
      Spec s = parse_spec();
      if (peek().kind != Tok::kRParen) fail("expected ')'");
      ++pos_;
      return s;
    }
    fail("expected 'achieve' or '('");
  }

  Predicate parse_pred() {
    Predicate p = parse_conj();
    while (at_word("or")) {
      ++pos_;
      p = p_or(p, parse_conj());
    }
    return p;
  }

  Predicate parse_conj() {
    Predicate p = parse_unary();
    while (at_word("and")) {
      ++pos_;
      p = p_and(p, parse_unary());
    }
    return p;
  }

  Predicate parse_unary() {
    if (at_word("not") || peek().kind == Tok::kBang) {
      ++pos_;
      return p_not(parse_unary());
    }
    if (at_word("true")) {
      ++pos_;
      return p_true();
    }
    if (at_word("false")) {
      ++pos_;
      return p_false();
    }
    if (peek().kind == Tok::kLParen) {
      ++pos_;
      Predicate p = parse_pred();
      if (peek().kind != Tok::kRParen) fail("expected ')'");
      ++pos_;
      return p;
    }
    if (peek().kind == Tok::kIdent && !is_keyword(peek().text)) {
      const Token& t = peek();
      auto id = table_.find(t.text);
      if (!id) throw UnknownPredicateError(t.text, t.offset, t.line, t.column);
      ++pos_;
      return p_atom(*id);
    }
    fail("expected a predicate");
  }

  std::vector<Token> toks_;
  const PredicateTable& table_;
  std::size_t pos_ = 0;
};

}  // namespace

Spec parse_spec(std::string_view text, const PredicateTable& table) {
  return Parser(Lexer(text).run(), table).parse_top_spec();
}

Predicate parse_predicate(std::string_view text, const PredicateTable& table) {
  return Parser(Lexer(text).run(), table).parse_top_pred();
}

}  // namespace nashspec
