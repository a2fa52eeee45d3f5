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

// Shared lexer for specification (.gpg) and type-system description (.gts)
// files. Identifiers are [A-Za-z_][A-Za-z0-9_]*, labels are '$' identifier,
// the token-text operator is an identifier immediately followed by '#',
// string/char literals use single quotes, '//' starts a line comment.

#ifndef GPG_LEXER_HPP
#define GPG_LEXER_HPP

#include <cctype>
#include <string>
#include <string_view>
#include <vector>

#include "gpg/diagnostics.hpp"
#include "gpg/source.hpp"

namespace gpg {

enum class Tok {
  End,
  Ident,
  Label,      // $name          (text = name)
  TokenText,  // name#          (text = name)
  Literal,    // 'text'         (text = decoded contents)
  Number,     // digits; not used by the language, kept for clean diagnostics
  HashWord,   // #name          (text = name)
  Colon,
  Semi,
  Pipe,
  LParen,
  RParen,
  LBrace,
  RBrace,
  Comma,
  Equals,
  Arrow,    // -->
  Plus,
  Star,
  Question,
  Dot,
  DotDot,
  Subtype,  // <:
};

struct Token {
  Tok kind = Tok::End;
  Span span;
  std::string text;
};

inline std::string_view tokenKindName(Tok kind) {
  switch (kind) {
    case Tok::End: return "end of input";
    case Tok::Ident: return "identifier";
    case Tok::Label: return "label";
    case Tok::TokenText: return "token-text operator";
    case Tok::Literal: return "literal";
    case Tok::Number: return "number";
    case Tok::HashWord: return "'#' directive";
    case Tok::Colon: return "':'";
    case Tok::Semi: return "';'";
    case Tok::Pipe: return "'|'";
    case Tok::LParen: return "'('";
    case Tok::RParen: return "')'";
    case Tok::LBrace: return "'{'";
    case Tok::RBrace: return "'}'";
    case Tok::Comma: return "','";
    case Tok::Equals: return "'='";
    case Tok::Arrow: return "'-->'";
    case Tok::Plus: return "'+'";
    case Tok::Star: return "'*'";
    case Tok::Question: return "'?'";
    case Tok::Dot: return "'.'";
    case Tok::DotDot: return "'..'";
    case Tok::Subtype: return "'<:'";
  }
  return "token";
}

inline std::vector<Token> lexSource(const SourceText& source, DiagnosticSink& sink) {
  std::vector<Token> tokens;
  const std::string& text = source.text();
  std::size_t i = 0;
  const std::size_t n = text.size();

  auto isIdentStart = [](char c) {
    return std::isalpha(static_cast<unsigned char>(c)) || c == '_';
  };
  auto isIdentChar = [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
  };
  auto push = [&](Tok kind, std::size_t start, std::size_t end, std::string value = {}) {
    Token t;
    t.kind = kind;
    t.span = Span(static_cast<std::uint32_t>(start), static_cast<std::uint32_t>(end - start));
    t.text = std::move(value);
    tokens.push_back(std::move(t));
  };

  while (i < n) {
    char c = text[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    if (c == '/' && i + 1 < n && text[i + 1] == '/') {
      while (i < n && text[i] != '\n') ++i;
      continue;
    }
    std::size_t start = i;
    if (isIdentStart(c)) {
      ++i;
      while (i < n && isIdentChar(text[i])) ++i;
      std::string name = text.substr(start, i - start);
      if (i < n && text[i] == '#') {
        ++i;
        push(Tok::TokenText, start, i, std::move(name));
      } else {
        push(Tok::Ident, start, i, std::move(name));
      }
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      ++i;
      while (i < n && std::isdigit(static_cast<unsigned char>(text[i]))) ++i;
      push(Tok::Number, start, i, text.substr(start, i - start));
      continue;
    }
    switch (c) {
      case '$': {
        ++i;
        if (i < n && isIdentStart(text[i])) {
          std::size_t nameStart = i;
          while (i < n && isIdentChar(text[i])) ++i;
          push(Tok::Label, start, i, text.substr(nameStart, i - nameStart));
        } else {
          sink.error(diag::Syntax, Span(static_cast<std::uint32_t>(start), 1),
                     "'$' must be followed by a label name");
        }
        continue;
      }
      case '#': {
        ++i;
        if (i < n && isIdentStart(text[i])) {
          std::size_t nameStart = i;
          while (i < n && isIdentChar(text[i])) ++i;
          push(Tok::HashWord, start, i, text.substr(nameStart, i - nameStart));
        } else {
          sink.error(diag::Syntax, Span(static_cast<std::uint32_t>(start), 1),
                     "stray '#'");
        }
        continue;
      }
      case '\'': {
        ++i;
        std::string value;
        bool closed = false;
        while (i < n) {
          char d = text[i];
          if (d == '\'') {
            ++i;
            closed = true;
            break;
          }
          if (d == '\n') break;
          if (d == '\\' && i + 1 < n) {
            char e = text[i + 1];
            switch (e) {
              case '\\': value += '\\'; break;
              case '\'': value += '\''; break;
              case 'n': value += '\n'; break;
              case 't': value += '\t'; break;
              case 'r': value += '\r'; break;
              default:
                sink.error(diag::Syntax, Span(static_cast<std::uint32_t>(i), 2),
                           std::string("unknown escape sequence '\\") + e + "'");
                value += e;
                break;
            }
            i += 2;
            continue;
          }
          value += d;
          ++i;
        }
        if (!closed)
          sink.error(diag::Syntax, Span(static_cast<std::uint32_t>(start), 1),
                     "unterminated literal");
        push(Tok::Literal, start, i, std::move(value));
        continue;
      }
      case ':': push(Tok::Colon, start, ++i); continue;
      case ';': push(Tok::Semi, start, ++i); continue;
      case '|': push(Tok::Pipe, start, ++i); continue;
      case '(': push(Tok::LParen, start, ++i); continue;
      case ')': push(Tok::RParen, start, ++i); continue;
      case '{': push(Tok::LBrace, start, ++i); continue;
      case '}': push(Tok::RBrace, start, ++i); continue;
      case ',': push(Tok::Comma, start, ++i); continue;
      case '=': push(Tok::Equals, start, ++i); continue;
      case '+': push(Tok::Plus, start, ++i); continue;
      case '*': push(Tok::Star, start, ++i); continue;
      case '?': push(Tok::Question, start, ++i); continue;
      case '.':
        if (i + 1 < n && text[i + 1] == '.') {
          i += 2;
          push(Tok::DotDot, start, i);
        } else {
          push(Tok::Dot, start, ++i);
        }
        continue;
      case '-':
        if (i + 2 < n && text[i + 1] == '-' && text[i + 2] == '>') {
          i += 3;
          push(Tok::Arrow, start, i);
          continue;
        }
        sink.error(diag::Syntax, Span(static_cast<std::uint32_t>(start), 1),
                   "unexpected '-' (did you mean '-->'?)");
        ++i;
        continue;
      case '<':
        if (i + 1 < n && text[i + 1] == ':') {
          i += 2;
          push(Tok::Subtype, start, i);
          continue;
        }
        [[fallthrough]];
      default:
        sink.error(diag::Syntax, Span(static_cast<std::uint32_t>(start), 1),
                   std::string("unexpected character '") + c + "'");
        ++i;
        continue;
    }
  }
  Token eof;
  eof.kind = Tok::End;
  eof.span = Span(static_cast<std::uint32_t>(n), 0);
  tokens.push_back(std::move(eof));
  return tokens;
}

// Navigable token buffer shared by the parsers and extension sub-grammars.
class TokenStream {
public:
  TokenStream(std::vector<Token> tokens, DiagnosticSink& sink)
      : tokens_(std::move(tokens)), sink_(&sink) {}

  const Token& peek(std::size_t ahead = 0) const {
    std::size_t idx = pos_ + ahead;
    if (idx >= tokens_.size()) idx = tokens_.size() - 1;
    return tokens_[idx];
  }

  bool at(Tok kind) const { return peek().kind == kind; }
  bool atEnd() const { return at(Tok::End); }

  bool atKeyword(std::string_view word) const {
    return at(Tok::Ident) && peek().text == word;
  }

  const Token& advance() {
    const Token& t = tokens_[pos_];
    if (pos_ + 1 < tokens_.size()) ++pos_;
    return t;
  }

  bool accept(Tok kind) {
    if (!at(kind)) return false;
    advance();
    return true;
  }

  bool acceptKeyword(std::string_view word) {
    if (!atKeyword(word)) return false;
    advance();
    return true;
  }

  // Reports a syntax error and returns false if the next token differs.
  bool expect(Tok kind, std::string_view context) {
    if (accept(kind)) return true;
    sink_->error(diag::Syntax, peek().span,
                 "expected " + std::string(tokenKindName(kind)) + " " + std::string(context) +
                     ", found " + std::string(tokenKindName(peek().kind)));
    return false;
  }

  DiagnosticSink& sink() { return *sink_; }

  std::size_t position() const { return pos_; }
  void rewind(std::size_t pos) { pos_ = pos; }

private:
  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
  DiagnosticSink* sink_;
};

}  // namespace gpg

#endif  // GPG_LEXER_HPP
