#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace blackout {

/// A node of an S-expression tree: either a symbol or a parenthesised list.
/// Symbols are lowercased at read time.
struct SExpr {
  bool is_list = false;
  std::string symbol;
  std::vector<SExpr> items;
  std::size_t line = 1;
  std::size_t column = 1;

  bool is_symbol() const { return !is_list; }
  bool is_symbol(std::string_view s) const { return !is_list && symbol == s; }
  /// True for a list whose first element is the symbol `head`.
  bool has_head(std::string_view head) const {
    return is_list && !items.empty() && items.front().is_symbol(head);
  }
  std::string to_string() const;
};

/// Reads every top-level expression in `text`. `;` starts a comment.
/// Throws ParseError on unbalanced parentheses.
std::vector<SExpr> read_sexprs(std::string_view text);

/// Reads exactly one top-level expression.
SExpr read_sexpr(std::string_view text);

[[noreturn]] void fail_at(const SExpr& at, const std::string& message);

}  // namespace blackout
