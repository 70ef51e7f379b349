#include "blackout/sexpr.hpp"

#include <cctype>

#include "blackout/error.hpp"

namespace blackout {

namespace {

class Reader {
 public:
  explicit Reader(std::string_view text) : text_(text) {}

  std::vector<SExpr> read_all() {
    std::vector<SExpr> out;
    skip_blank();
    while (pos_ < text_.size()) {
      out.push_back(read_one());
      skip_blank();
    }
    return out;
  }

 private:
  SExpr read_one() {
    SExpr node;
    node.line = line_;
    node.column = column_;
    char c = text_[pos_];
    if (c == ')') throw ParseError("unexpected ')'", line_, column_);
    if (c == '(') {
      node.is_list = true;
      advance();
      for (;;) {
        skip_blank();
        if (pos_ >= text_.size()) throw ParseError("unterminated list", node.line, node.column);
        if (text_[pos_] == ')') {
          advance();
          return node;
        }
        node.items.push_back(read_one());
      }
    }
    while (pos_ < text_.size()) {
      c = text_[pos_];
      if (std::isspace(static_cast<unsigned char>(c)) || c == '(' || c == ')' || c == ';') break;
      node.symbol.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
      advance();
    }
    return node;
  }

  void skip_blank() {
    while (pos_ < text_.size()) {
      char c = text_[pos_];
      if (c == ';') {
        while (pos_ < text_.size() && text_[pos_] != '\n') advance();
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
      } else {
        break;
      }
    }
  }

  void advance() {
    if (text_[pos_] == '\n') {
      ++line_;
      column_ = 1;
    } else {
      ++column_;
    }
    ++pos_;
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
  std::size_t column_ = 1;
};

}  // namespace

std::string SExpr::to_string() const {
  if (!is_list) return symbol;
  std::string out = "(";
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i) out += ' ';
    out += items[i].to_string();
  }
  out += ')';
  return out;
}

std::vector<SExpr> read_sexprs(std::string_view text) { return Reader(text).read_all(); }

SExpr read_sexpr(std::string_view text) {
  auto all = read_sexprs(text);
  if (all.empty()) throw ParseError("empty input", 1, 1);
  if (all.size() > 1) throw ParseError("trailing content after expression", all[1].line, all[1].column);
  return std::move(all.front());
}

void fail_at(const SExpr& at, const std::string& message) {
  throw ParseError(message, at.line, at.column);
}

}  // namespace blackout
