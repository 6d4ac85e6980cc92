//  Copyright 2026 The hpsgkit Authors
//
//  Licensed under the Apache License, Version 2.0 (the "License");
//  you may not use this file except in compliance with the License.
//  You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
//  Unless required by applicable law or agreed to in writing, software
//  distributed under the License is distributed on an "AS IS" BASIS,
//  WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
//  See the License for the specific language governing permissions and
//  limitations under the License.

#include "hpsg/grammar/tdl.hpp"

#include <cctype>

namespace hpsg::tdl {

std::string to_string(const Location& loc) {
  return loc.file + ":" + std::to_string(loc.line) + ":" + std::to_string(loc.column);
}

namespace {

bool ident_char(char c) {
  if (std::isspace(static_cast<unsigned char>(c))) return false;
  switch (c) {
    case ':': case '&': case '[': case ']': case ',': case '.': case '<': case '>':
    case '!': case '#': case '"': case ';': case '=':
      return false;
    default:
      return true;
  }
}

enum class Tok {
  ident, string, tag, define, amp, lbrack, rbrack, comma, dot, path_dot,
  langle, rangle, ldiff, rdiff, ellipsis, end
};

struct Token {
  Tok kind;
  std::string text;
  Location loc;
};

// Blanks out lines excluded by :if/:endif so that line numbers survive.
std::string apply_directives(std::string_view text, const std::string& file,
                             const OptionPredicate& enabled) {
  std::string out;
  out.reserve(text.size());
  std::vector<bool> stack;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t eol = text.find('\n', pos);
    std::string_view line = text.substr(pos, eol == std::string_view::npos ? text.size() - pos : eol - pos);
    ++line_no;
    std::size_t first = line.find_first_not_of(" \t\r");
    std::string_view body = first == std::string_view::npos ? std::string_view{} : line.substr(first);
    bool active = true;
    for (bool b : stack) active = active && b;
    bool directive = false;
    if (body.substr(0, 4) == ":if " || body.substr(0, 4) == ":if\t") {
      directive = true;
      std::string_view arg = body.substr(4);
      auto a = arg.find_first_not_of(" \t");
      auto z = arg.find_last_not_of(" \t\r");
      if (a == std::string_view::npos) throw SyntaxError({file, line_no, 1}, ":if needs an option name");
      arg = arg.substr(a, z - a + 1);
      bool negate = !arg.empty() && arg.front() == '!';
      if (negate) arg.remove_prefix(1);
      bool on = enabled ? enabled(arg) : false;
      stack.push_back(negate ? !on : on);
    } else if (body.substr(0, 6) == ":endif") {
      directive = true;
      if (stack.empty()) throw SyntaxError({file, line_no, 1}, ":endif without :if");
      stack.pop_back();
    } else if (!body.empty() && body.front() == ':' && body.substr(0, 2) != ":=") {
      throw SyntaxError({file, line_no, static_cast<int>(first) + 1}, "unknown directive");
    }
    if (!directive && active) out.append(line);
    if (eol == std::string_view::npos) break;
    out.push_back('\n');
    pos = eol + 1;
  }
  if (!stack.empty()) throw SyntaxError({file, line_no, 1}, "unterminated :if");
  return out;
}

class Lexer {
 public:
  Lexer(std::string_view text, std::string file) : text_(text), file_(std::move(file)) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    for (;;) {
      skip_space();
      Location loc{file_, line_, col_};
      if (pos_ >= text_.size()) {
        out.push_back({Tok::end, "", loc});
        return out;
      }
      char c = text_[pos_];
      if (c == '"') {
        advance();
        std::string s;
        while (pos_ < text_.size() && text_[pos_] != '"') {
          if (text_[pos_] == '\\' && pos_ + 1 < text_.size()) advance();
          if (text_[pos_] == '\n') throw SyntaxError(loc, "unterminated string");
          s.push_back(text_[pos_]);
          advance();
        }
        if (pos_ >= text_.size()) throw SyntaxError(loc, "unterminated string");
        advance();
        out.push_back({Tok::string, s, loc});
      } else if (c == '#') {
        advance();
        std::string name = ident();
        if (name.empty()) throw SyntaxError(loc, "expected tag name after #");
        out.push_back({Tok::tag, name, loc});
      } else if (c == ':' && peek(1) == '=') {
        advance(2);
        out.push_back({Tok::define, ":=", loc});
      } else if (c == '&') {
        advance();
        out.push_back({Tok::amp, "&", loc});
      } else if (c == '[') {
        advance();
        out.push_back({Tok::lbrack, "[", loc});
      } else if (c == ']') {
        advance();
        out.push_back({Tok::rbrack, "]", loc});
      } else if (c == ',') {
        advance();
        out.push_back({Tok::comma, ",", loc});
      } else if (c == '<' && peek(1) == '!') {
        advance(2);
        out.push_back({Tok::ldiff, "<!", loc});
      } else if (c == '!' && peek(1) == '>') {
        advance(2);
        out.push_back({Tok::rdiff, "!>", loc});
      } else if (c == '<') {
        advance();
        out.push_back({Tok::langle, "<", loc});
      } else if (c == '>') {
        advance();
        out.push_back({Tok::rangle, ">", loc});
      } else if (c == '.' && peek(1) == '.' && peek(2) == '.') {
        advance(3);
        out.push_back({Tok::ellipsis, "...", loc});
      } else if (c == '.') {
        bool joined = pos_ > 0 && ident_char(text_[pos_ - 1]) && pos_ + 1 < text_.size() && ident_char(peek(1));
        advance();
        out.push_back({joined ? Tok::path_dot : Tok::dot, ".", loc});
      } else if (ident_char(c)) {
        out.push_back({Tok::ident, ident(), loc});
      } else {
        throw SyntaxError(loc, std::string("unexpected character '") + c + "'");
      }
    }
  }

 private:
  char peek(std::size_t k) const { return pos_ + k < text_.size() ? text_[pos_ + k] : '\0'; }

  void advance(std::size_t n = 1) {
    for (std::size_t i = 0; i < n && pos_ < text_.size(); ++i) {
      if (text_[pos_] == '\n') {
        ++line_;
        col_ = 1;
      } else if ((static_cast<unsigned char>(text_[pos_]) & 0xC0) != 0x80) {
        ++col_;
      }
      ++pos_;
    }
  }

  void skip_space() {
    for (;;) {
      while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) advance();
      if (pos_ < text_.size() && text_[pos_] == ';') {
        while (pos_ < text_.size() && text_[pos_] != '\n') advance();
        continue;
      }
      if (text_.substr(pos_, 2) == "#|") {
        Location loc{file_, line_, col_};
        auto close = text_.find("|#", pos_ + 2);
        if (close == std::string_view::npos) throw SyntaxError(loc, "unterminated block comment");
        advance(close + 2 - pos_);
        continue;
      }
      return;
    }
  }

  std::string ident() {
    std::size_t start = pos_;
    while (pos_ < text_.size() && ident_char(text_[pos_])) advance();
    return std::string(text_.substr(start, pos_ - start));
  }

  std::string_view text_;
  std::string file_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
};

class Parser {
 public:
  explicit Parser(std::vector<Token> toks) : toks_(std::move(toks)) {}

  std::vector<Definition> definitions() {
    std::vector<Definition> out;
    while (cur().kind != Tok::end) {
      Definition d;
      d.loc = cur().loc;
      d.name = expect(Tok::ident, "type or instance name").text;
      expect(Tok::define, "':='");
      d.body = conjunction();
      expect(Tok::dot, "'.' ending the definition");
      out.push_back(std::move(d));
    }
    return out;
  }

  Conjunction lone_conjunction() {
    Conjunction c = conjunction();
    if (cur().kind != Tok::end) fail("trailing input");
    return c;
  }

 private:
  const Token& cur() const { return toks_[i_]; }
  Token take() { return toks_[i_ < toks_.size() - 1 ? i_++ : i_]; }

  [[noreturn]] void fail(const std::string& what) const {
    std::string got = cur().kind == Tok::end ? "end of input" : "'" + cur().text + "'";
    throw SyntaxError(cur().loc, what + " (found " + got + ")");
  }

  Token expect(Tok k, const std::string& what) {
    if (cur().kind != k) fail("expected " + what);
    return take();
  }

  Conjunction conjunction() {
    Conjunction c;
    c.terms.push_back(term());
    while (cur().kind == Tok::amp) {
      take();
      c.terms.push_back(term());
    }
    return c;
  }

  Term term() {
    Term t;
    t.loc = cur().loc;
    switch (cur().kind) {
      case Tok::ident:
        t.kind = Term::Kind::type;
        t.text = take().text;
        return t;
      case Tok::string:
        t.kind = Term::Kind::string;
        t.text = take().text;
        return t;
      case Tok::tag:
        t.kind = Term::Kind::coref;
        t.text = take().text;
        return t;
      case Tok::lbrack:
        take();
        t.kind = Term::Kind::avm;
        if (cur().kind != Tok::rbrack) {
          t.pairs.push_back(av_pair());
          while (cur().kind == Tok::comma) {
            take();
            t.pairs.push_back(av_pair());
          }
        }
        expect(Tok::rbrack, "']'");
        return t;
      case Tok::langle:
        take();
        t.kind = Term::Kind::list;
        list_body(t, Tok::rangle);
        expect(Tok::rangle, "'>'");
        return t;
      case Tok::ldiff:
        take();
        t.kind = Term::Kind::diff_list;
        list_body(t, Tok::rdiff);
        if (t.open || !t.tail.empty()) throw SyntaxError(t.loc, "difference lists cannot have tails");
        expect(Tok::rdiff, "'!>'");
        return t;
      default:
        fail("expected a type, string, tag, [ ... ] or list");
    }
  }

  void list_body(Term& t, Tok close) {
    if (cur().kind == close) return;
    if (cur().kind == Tok::ellipsis) {
      take();
      t.open = true;
      return;
    }
    t.items.push_back(conjunction());
    for (;;) {
      if (cur().kind == Tok::comma) {
        take();
        if (cur().kind == Tok::ellipsis) {
          take();
          t.open = true;
          return;
        }
        t.items.push_back(conjunction());
      } else if (cur().kind == Tok::dot) {
        take();
        t.tail.push_back(conjunction());
        return;
      } else {
        return;
      }
    }
  }

  AvPair av_pair() {
    AvPair p;
    p.loc = cur().loc;
    p.path.push_back(expect(Tok::ident, "feature name").text);
    while (cur().kind == Tok::path_dot) {
      take();
      p.path.push_back(expect(Tok::ident, "feature name after '.'").text);
    }
    p.value = conjunction();
    return p;
  }

  std::vector<Token> toks_;
  std::size_t i_ = 0;
};

}  // namespace

std::vector<Definition> parse(std::string_view text, const std::string& file,
                              const OptionPredicate& enabled) {
  std::string filtered = apply_directives(text, file, enabled);
  return Parser(Lexer(filtered, file).run()).definitions();
}

Conjunction parse_conjunction(std::string_view text, const std::string& file) {
  return Parser(Lexer(text, file).run()).lone_conjunction();
}

void collect_strings(const Conjunction& c, std::vector<std::string>& out) {
  for (const auto& t : c.terms) {
    if (t.kind == Term::Kind::string) out.push_back(t.text);
    for (const auto& p : t.pairs) collect_strings(p.value, out);
    for (const auto& i : t.items) collect_strings(i, out);
    for (const auto& i : t.tail) collect_strings(i, out);
  }
}

}  // namespace hpsg::tdl
