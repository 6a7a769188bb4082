// Copyright 2026 The qlambda Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "qlambda/parser.hpp"

#include <cctype>
#include <set>
#include <vector>

#include "qlambda/syntax.hpp"

namespace qlambda {

ParseError::ParseError(const std::string& what, std::size_t line, std::size_t column)
    : std::runtime_error(std::to_string(line) + ":" + std::to_string(column) + ": " + what),
      line_(line),
      column_(column) {}

namespace {

enum class Tok {
  Lambda, Bang, Dot, LParen, RParen, Comma, LAngle, RAngle, Equals,
  Ident, Register, Gate, New, Meas, Let, In, End,
};

struct Token {
  Tok kind;
  std::string text;
  std::size_t line;
  std::size_t column;
};

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'';
}

bool is_register_name(const std::string& s) {
  if (s.size() < 2 || s[0] != 'r') return false;
  for (std::size_t k = 1; k < s.size(); ++k)
    if (!std::isdigit(static_cast<unsigned char>(s[k]))) return false;
  return true;
}

std::vector<Token> lex(std::string_view src) {
  std::vector<Token> out;
  std::size_t line = 1, col = 1, k = 0;
  auto advance = [&](std::size_t n) {
    for (std::size_t m = 0; m < n; ++m) {
      if (src[k] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
      ++k;
    }
  };
  while (k < src.size()) {
    char c = src[k];
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance(1);
      continue;
    }
    if (c == '#') {
      while (k < src.size() && src[k] != '\n') advance(1);
      continue;
    }
    std::size_t l = line, cc = col;
    auto push = [&](Tok t, std::string text, std::size_t len) {
      out.push_back({t, std::move(text), l, cc});
      advance(len);
    };
    if (src.substr(k, 2) == "\xCE\xBB") {  // UTF-8 lambda
      push(Tok::Lambda, "\\", 2);
      continue;
    }
    switch (c) {
      case '\\': push(Tok::Lambda, "\\", 1); continue;
      case '!': push(Tok::Bang, "!", 1); continue;
      case '.': push(Tok::Dot, ".", 1); continue;
      case '(': push(Tok::LParen, "(", 1); continue;
      case ')': push(Tok::RParen, ")", 1); continue;
      case ',': push(Tok::Comma, ",", 1); continue;
      case '<': push(Tok::LAngle, "<", 1); continue;
      case '>': push(Tok::RAngle, ">", 1); continue;
      case '=': push(Tok::Equals, "=", 1); continue;
      default: break;
    }
    if (c == 'U' && k + 1 < src.size() && src[k + 1] == '[') {
      std::size_t end = src.find(']', k);
      if (end == std::string_view::npos) throw ParseError("unterminated gate name", l, cc);
      std::string name(src.substr(k + 2, end - k - 2));
      if (name.empty()) throw ParseError("empty gate name", l, cc);
      push(Tok::Gate, name, end - k + 1);
      continue;
    }
    if (ident_start(c)) {
      std::size_t e = k;
      while (e < src.size() && ident_char(src[e])) ++e;
      std::string word(src.substr(k, e - k));
      Tok t = Tok::Ident;
      if (word == "new") t = Tok::New;
      else if (word == "meas") t = Tok::Meas;
      else if (word == "let") t = Tok::Let;
      else if (word == "in") t = Tok::In;
      else if (is_register_name(word)) t = Tok::Register;
      push(t, word, e - k);
      continue;
    }
    throw ParseError(std::string("unexpected character '") + c + "'", l, cc);
  }
  out.push_back({Tok::End, "", line, col});
  return out;
}

class Parser {
 public:
  Parser(std::vector<Token> toks, const GateTable& gates) : toks_(std::move(toks)), gates_(gates) {}

  Term parse_all() {
    Term t = term();
    if (peek().kind != Tok::End) fail("unexpected '" + peek().text + "' after term");
    return t;
  }

 private:
  const Token& peek() const { return toks_[pos_]; }
  Token next() { return toks_[pos_++]; }
  [[noreturn]] void fail(const std::string& msg) const {
    throw ParseError(msg, peek().line, peek().column);
  }
  Token expect(Tok k, const char* what) {
    if (peek().kind != k) {
      fail(std::string("expected ") + what +
           (peek().kind == Tok::End ? " at end of input" : ", found '" + peek().text + "'"));
    }
    return next();
  }

  static bool starts_operand(Tok k) {
    switch (k) {
      case Tok::Ident: case Tok::Register: case Tok::Gate: case Tok::New: case Tok::Meas:
      case Tok::LParen: case Tok::LAngle: case Tok::Bang: case Tok::Lambda: case Tok::Let:
        return true;
      default:
        return false;
    }
  }

  Term term() {
    if (peek().kind == Tok::Lambda) return lambda();
    if (peek().kind == Tok::Let) return let();
    Term acc = prefix();
    while (starts_operand(peek().kind)) {
      if (peek().kind == Tok::Lambda || peek().kind == Tok::Let) {
        acc = Term::app(acc, term());
        break;
      }
      acc = Term::app(acc, prefix());
    }
    return acc;
  }

  Term lambda() {
    expect(Tok::Lambda, "'\\'");
    std::vector<std::pair<std::string, bool>> binders;  // name, is_bang
    while (peek().kind != Tok::Dot) {
      bool bang = false;
      if (peek().kind == Tok::Bang) {
        next();
        bang = true;
      }
      binders.emplace_back(expect(Tok::Ident, "binder name").text, bang);
    }
    if (binders.empty()) fail("lambda without binder");
    expect(Tok::Dot, "'.'");
    for (const auto& b : binders) scope_.push_back(b.first);
    Term body = term();
    for (std::size_t k = binders.size(); k-- > 0;) {
      scope_.pop_back();
      body = binders[k].second ? Term::bang_lam(binders[k].first, body)
                               : Term::lin_lam(binders[k].first, body);
    }
    return body;
  }

  Term let() {
    expect(Tok::Let, "'let'");
    expect(Tok::LAngle, "'<'");
    std::string x = expect(Tok::Ident, "variable").text;
    expect(Tok::Comma, "','");
    std::string y = expect(Tok::Ident, "variable").text;
    expect(Tok::RAngle, "'>'");
    expect(Tok::Equals, "'='");
    Term bound = term();
    expect(Tok::In, "'in'");
    scope_.push_back(x);
    scope_.push_back(y);
    Term body = term();
    scope_.pop_back();
    scope_.pop_back();
    return Term::app(bound, Term::lin_lam(x, Term::lin_lam(y, body)));
  }

  Term prefix() {
    if (peek().kind == Tok::Bang) {
      next();
      return Term::bang(prefix());
    }
    return atom();
  }

  Term atom() {
    const Token& t = peek();
    switch (t.kind) {
      case Tok::Ident: {
        std::string name = next().text;
        for (std::size_t k = scope_.size(); k-- > 0;)
          if (scope_[k] == name)
            return Term::var(static_cast<std::uint32_t>(scope_.size() - 1 - k), name);
        return Term::free_var(name);
      }
      case Tok::Register: {
        std::string digits = next().text.substr(1);
        unsigned long v = std::stoul(digits);
        return Term::reg(static_cast<std::uint32_t>(v));
      }
      case Tok::Gate: {
        const GateDef* g = gates_.find(t.text);
        if (!g) fail("unknown gate " + t.text);
        std::string name = next().text;
        return Term::gate(name, g->arity);
      }
      case Tok::New:
        next();
        return Term::make_new();
      case Tok::Meas: {
        next();
        expect(Tok::LParen, "'(' after meas");
        Term s = term();
        expect(Tok::Comma, "','");
        Term b0 = term();
        expect(Tok::Comma, "','");
        Term b1 = term();
        expect(Tok::RParen, "')'");
        return Term::meas(s, b0, b1);
      }
      case Tok::LParen: {
        next();
        Term inner = term();
        expect(Tok::RParen, "')'");
        return inner;
      }
      case Tok::LAngle: {
        next();
        std::vector<Term> items{term()};
        while (peek().kind == Tok::Comma) {
          next();
          items.push_back(term());
        }
        expect(Tok::RAngle, "'>'");
        if (items.size() < 2) fail("a tuple needs at least two components");
        return qlambda::make_tuple(items);
      }
      default:
        fail(t.kind == Tok::End ? "unexpected end of input" : "unexpected '" + t.text + "'");
    }
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  const GateTable& gates_;
  std::vector<std::string> scope_;
};

// ---- printing ---------------------------------------------------------------

class Printer {
 public:
  explicit Printer(const Term& root) : reserved_(free_vars(root)) {}

  // prec: 0 top, 1 function position, 2 argument / atom
  std::string print(const Term& t, int prec) {
    switch (t.kind()) {
      case TermKind::Var:
        if (t.index() >= scope_.size()) return "?" + std::to_string(t.index());
        return scope_[scope_.size() - 1 - t.index()];
      case TermKind::FreeVar:
        return t.name();
      case TermKind::Reg:
        return "r" + std::to_string(t.index());
      case TermKind::Gate:
        return "U[" + t.name() + "]";
      case TermKind::New:
        return "new";
      case TermKind::Meas:
        return "meas(" + print(t.subject(), 0) + ", " + print(t.branch0(), 0) + ", " +
               print(t.branch1(), 0) + ")";
      case TermKind::Bang:
        return "!" + print(t.body(), 2);
      case TermKind::App: {
        std::string s = print(t.fun(), 1) + " " + print(t.arg(), 2);
        return prec == 2 ? "(" + s + ")" : s;
      }
      case TermKind::LinLam:
      case TermKind::BangLam: {
        if (auto p = match_pair(t)) return "<" + print(p->first, 0) + ", " + print(p->second, 0) + ">";
        std::string name = fresh(t.name());
        scope_.push_back(name);
        std::string s = (t.is(TermKind::BangLam) ? "\\!" : "\\") + name + ". " + print(t.body(), 0);
        scope_.pop_back();
        return prec > 0 ? "(" + s + ")" : s;
      }
    }
    return "?";
  }

 private:
  bool taken(const std::string& n) const {
    if (reserved_.count(n) || is_register_name(n)) return true;
    if (n == "new" || n == "meas" || n == "let" || n == "in") return true;
    for (const auto& s : scope_)
      if (s == n) return true;
    return false;
  }

  std::string fresh(std::string hint) {
    if (hint.empty() || !ident_start(hint[0])) hint = "x";
    if (!taken(hint)) return hint;
    for (int k = 1;; ++k) {
      std::string cand = hint + std::to_string(k);
      if (!taken(cand)) return cand;
    }
  }

  std::set<std::string> reserved_;
  std::vector<std::string> scope_;
};

}  // namespace

Term parse_term(std::string_view text, const GateTable& gates) {
  Parser p(lex(text), gates);
  return p.parse_all();
}

std::string print_term(const Term& t) {
  Printer p(t);
  return p.print(t, 0);
}

}  // namespace qlambda
