#pragma once

#include <cctype>
#include <cmath>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "feller/core/error.hpp"
#include "feller/core/types.hpp"

namespace feller::cli {

// Grammar (whitespace ignored):
//   list    := expr (';' expr)*          one expression per component, or one for all
//   expr    := term (('+' | '-') term)*
//   term    := unary (('*' | '/') unary)*
//   unary   := '-' unary | power            so -x^2 = -(x^2)
//   power   := primary ('^' unary)?          right associative
//   primary := number | 'x' | 'edge' | 'pi' | name '(' expr ')' | '(' expr ')'
// with name one of sin, cos, exp, log, sqrt, abs.
class Expression {
 public:
  struct Vars {
    double x = 0.0;
    double edge = 0.0;
  };

  explicit Expression(std::string text) : text_(std::move(text)) {
    pos_ = 0;
    root_ = parse_expr();
    skip();
    if (pos_ != text_.size()) fail("unexpected '" + std::string(1, text_[pos_]) + "'");
  }

  double operator()(const Vars& v) const { return root_(v); }
  const std::string& text() const { return text_; }

 private:
  using Node = std::function<double(const Vars&)>;

  [[noreturn]] void fail(const std::string& what) const {
    throw Error(ErrorKind::parse, "expression '" + text_ + "' at offset " + std::to_string(pos_) + ": " + what);
  }
  void skip() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }
  bool eat(char c) {
    skip();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  Node parse_expr() {
    Node lhs = parse_term();
    for (;;) {
      if (eat('+')) {
        Node r = parse_term();
        lhs = [lhs, r](const Vars& v) { return lhs(v) + r(v); };
      } else if (eat('-')) {
        Node r = parse_term();
        lhs = [lhs, r](const Vars& v) { return lhs(v) - r(v); };
      } else {
        return lhs;
      }
    }
  }

  Node parse_term() {
    Node lhs = parse_unary();
    for (;;) {
      if (eat('*')) {
        Node r = parse_unary();
        lhs = [lhs, r](const Vars& v) { return lhs(v) * r(v); };
      } else if (eat('/')) {
        Node r = parse_unary();
        lhs = [lhs, r](const Vars& v) { return lhs(v) / r(v); };
      } else {
        return lhs;
      }
    }
  }

  Node parse_power() {
    Node base = parse_primary();
    if (eat('^')) {
      Node e = parse_unary();
      return [base, e](const Vars& v) { return std::pow(base(v), e(v)); };
    }
    return base;
  }

  Node parse_unary() {
    if (eat('-')) {
      Node a = parse_unary();
      return [a](const Vars& v) { return -a(v); };
    }
    return parse_power();
  }

  Node parse_primary() {
    skip();
    if (pos_ >= text_.size()) fail("unexpected end of input");
    if (eat('(')) {
      Node a = parse_expr();
      if (!eat(')')) fail("missing ')'");
      return a;
    }
    const char c = text_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      std::size_t used = 0;
      double val = 0.0;
      try {
        val = std::stod(text_.substr(pos_), &used);
      } catch (const std::exception&) {
        fail("bad number");
      }
      pos_ += used;
      return [val](const Vars&) { return val; };
    }
    if (std::isalpha(static_cast<unsigned char>(c))) {
      const std::size_t start = pos_;
      while (pos_ < text_.size() && std::isalnum(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      const std::string name = text_.substr(start, pos_ - start);
      if (name == "x") return [](const Vars& v) { return v.x; };
      if (name == "edge") return [](const Vars& v) { return v.edge; };
      if (name == "pi") return [](const Vars&) { return M_PI; };
      double (*fn)(double) = nullptr;
      if (name == "sin") fn = [](double a) { return std::sin(a); };
      else if (name == "cos") fn = [](double a) { return std::cos(a); };
      else if (name == "exp") fn = [](double a) { return std::exp(a); };
      else if (name == "log") fn = [](double a) { return std::log(a); };
      else if (name == "sqrt") fn = [](double a) { return std::sqrt(a); };
      else if (name == "abs") fn = [](double a) { return std::abs(a); };
      else fail("unknown name '" + name + "'");
      if (!eat('(')) fail("expected '(' after " + name);
      Node a = parse_expr();
      if (!eat(')')) fail("missing ')'");
      return [fn, a](const Vars& v) { return fn(a(v)); };
    }
    fail("unexpected '" + std::string(1, c) + "'");
  }

  std::string text_;
  std::size_t pos_ = 0;
  Node root_;
};

// Site function from a ';'-separated list; a single expression applies to
// every component.
inline SiteFunction parse_site_function(const std::string& text, std::size_t components) {
  std::vector<std::shared_ptr<Expression>> parts;
  std::size_t start = 0;
  for (;;) {
    const std::size_t end = text.find(';', start);
    parts.push_back(std::make_shared<Expression>(text.substr(start, end == std::string::npos ? end : end - start)));
    if (end == std::string::npos) break;
    start = end + 1;
  }
  if (parts.size() != 1 && parts.size() != components)
    throw Error(ErrorKind::parse, "g has " + std::to_string(parts.size()) + " pieces but the system has " +
                                      std::to_string(components) + " components");
  return [parts](const Site& s) {
    const Expression& e = parts.size() == 1 ? *parts[0] : *parts.at(s.component);
    return e(Expression::Vars{s.point.x, double(s.point.edge)});
  };
}

}  // namespace feller::cli
