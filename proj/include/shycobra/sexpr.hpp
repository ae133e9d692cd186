#pragma once

#include <cctype>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace shycobra {

/// Syntax or semantic error in a domain/problem file, with a 1-based source position.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, int line, int column)
      : std::runtime_error(std::to_string(line) + ":" + std::to_string(column) + ": " + what),
        line_(line),
        column_(column) {}
  int line() const { return line_; }
  int column() const { return column_; }

 private:
  int line_;
  int column_;
};

/// S-expression node. Atoms carry text; lists carry children. Square brackets are kept as
/// their own atoms ("[" and "]") so that `Stable[obj]` reads as name + binding list.
struct SExpr {
  bool is_list = false;
  std::string atom;
  std::vector<SExpr> items;
  int line = 1;
  int column = 1;

  bool is_atom(std::string_view s) const { return !is_list && atom == s; }
};

namespace detail {

struct Token {
  std::string text;
  int line;
  int column;
};

inline std::vector<Token> tokenize(std::string_view text) {
  std::vector<Token> out;
  int line = 1, col = 1;
  std::size_t i = 0;
  auto advance = [&](char c) {
    if (c == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  };
  while (i < text.size()) {
    const char c = text[i];
    if (c == ';') {
      while (i < text.size() && text[i] != '\n') advance(text[i++]);
      continue;
    }
    if (std::isspace(static_cast<unsigned char>(c)) || c == ',') {
      advance(c);
      ++i;
      continue;
    }
    if (c == '(' || c == ')' || c == '[' || c == ']') {
      out.push_back({std::string(1, c), line, col});
      advance(c);
      ++i;
      continue;
    }
    const int start_line = line, start_col = col;
    std::string atom;
    while (i < text.size()) {
      const char d = text[i];
      if (std::isspace(static_cast<unsigned char>(d)) || d == ',' || d == '(' || d == ')' || d == '[' ||
          d == ']' || d == ';')
        break;
      atom.push_back(d);
      advance(d);
      ++i;
    }
    out.push_back({std::move(atom), start_line, start_col});
  }
  return out;
}

}  // namespace detail

/// Reads every top-level form in `text`.
inline std::vector<SExpr> read_sexprs(std::string_view text) {
  const auto tokens = detail::tokenize(text);
  std::vector<SExpr> top;
  std::vector<SExpr> stack;
  for (const auto& t : tokens) {
    if (t.text == "(") {
      SExpr list;
      list.is_list = true;
      list.line = t.line;
      list.column = t.column;
      stack.push_back(std::move(list));
    } else if (t.text == ")") {
      if (stack.empty()) throw ParseError("unbalanced ')'", t.line, t.column);
      SExpr done = std::move(stack.back());
      stack.pop_back();
      if (stack.empty())
        top.push_back(std::move(done));
      else
        stack.back().items.push_back(std::move(done));
    } else {
      SExpr atom;
      atom.atom = t.text;
      atom.line = t.line;
      atom.column = t.column;
      if (stack.empty()) throw ParseError("atom '" + t.text + "' outside of a form", t.line, t.column);
      stack.back().items.push_back(std::move(atom));
    }
  }
  if (!stack.empty()) throw ParseError("unterminated '('", stack.back().line, stack.back().column);
  return top;
}

}  // namespace shycobra
