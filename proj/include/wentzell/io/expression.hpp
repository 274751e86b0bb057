#pragma once

#include <cctype>
#include <charconv>
#include <cmath>
#include <complex>
#include <functional>
#include <memory>
#include <numbers>
#include <string>

#include "wentzell/errors.hpp"
#include "wentzell/mesh/tri_mesh.hpp"
#include "wentzell/sparse/vector_ops.hpp"

namespace wentzell {

/// Point, outward normal (zero away from Gamma) and time at which an expression is evaluated.
struct ExprEnv {
  double x = 0.0, y = 0.0;
  double nx = 0.0, ny = 0.0;
  double t = 0.0;
};

/// Complex-valued arithmetic expression in x, y, nx, ny, t with constants i and
/// pi, imaginary literals (2i), operators + - * / ^ and functions sin cos tan exp log sqrt abs sinh cosh
/// tanh re im conj.
class Expression {
 public:
  Expression() : Expression(parse("0")) {}

  static Expression parse(const std::string& text) {
    Parser p{text, 0};
    Node n = p.expr();
    p.skip();
    if (p.pos != text.size()) p.fail("unexpected '" + std::string(1, text[p.pos]) + "'");
    return Expression(text, std::move(n));
  }

  cplx operator()(const ExprEnv& env) const { return (*eval_)(env); }
  cplx operator()(Point p) const { return (*eval_)(ExprEnv{p.x, p.y}); }
  const std::string& text() const noexcept { return text_; }

 private:
  using Node = std::function<cplx(const ExprEnv&)>;

  Expression(std::string text, Node n) : text_(std::move(text)), eval_(std::make_shared<const Node>(std::move(n))) {}

  struct Parser {
    const std::string& s;
    std::size_t pos;

    [[noreturn]] void fail(const std::string& msg) const {
      throw InvalidArgument("expression '" + s + "' at column " + std::to_string(pos + 1) + ": " + msg);
    }
    void skip() {
      while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
    }
    bool accept(char c) {
      skip();
      if (pos < s.size() && s[pos] == c) {
        ++pos;
        return true;
      }
      return false;
    }

    Node expr() {
      Node lhs = term();
      for (;;) {
        if (accept('+')) {
          lhs = [a = lhs, b = term()](const ExprEnv& e) { return a(e) + b(e); };
        } else if (accept('-')) {
          lhs = [a = lhs, b = term()](const ExprEnv& e) { return a(e) - b(e); };
        } else {
          return lhs;
        }
      }
    }

    Node term() {
      Node lhs = unary();
      for (;;) {
        if (accept('*')) {
          lhs = [a = lhs, b = unary()](const ExprEnv& e) { return a(e) * b(e); };
        } else if (accept('/')) {
          lhs = [a = lhs, b = unary()](const ExprEnv& e) { return a(e) / b(e); };
        } else {
          return lhs;
        }
      }
    }

    Node unary() {
      // 0 - a rather than -a, so -4 has imaginary part +0 and sqrt(-4) = 2i.
    if (accept('-')) return [a = unary()](const ExprEnv& e) { return cplx(0.0) - a(e); };
      if (accept('+')) return unary();
      return power();
    }

    // Right associative; binds tighter than unary minus on its left.
    Node power() {
      Node base = primary();
      if (accept('^')) {
        Node ex = unary();
        return [a = base, b = ex](const ExprEnv& e) {
          const cplx bv = b(e);
          if (bv.imag() == 0.0 && bv.real() == std::round(bv.real()) && std::abs(bv.real()) <= 64) {
            const int n = static_cast<int>(bv.real());
            cplx r = 1.0, x = a(e);
            for (int k = 0; k < std::abs(n); ++k) r *= x;
            return n < 0 ? 1.0 / r : r;
          }
          return std::pow(a(e), bv);
        };
      }
      return base;
    }

    Node primary() {
      skip();
      if (pos >= s.size()) fail("unexpected end of expression");
      const char c = s[pos];
      if (c == '(') {
        ++pos;
        Node n = expr();
        if (!accept(')')) fail("expected ')'");
        return n;
      }
      if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
        double v = 0.0;
        const auto [ptr, ec] = std::from_chars(s.data() + pos, s.data() + s.size(), v);
        if (ec != std::errc()) fail("invalid number");
        pos = static_cast<std::size_t>(ptr - s.data());
        // Imaginary literal such as 2i.
        if (pos < s.size() && s[pos] == 'i' &&
            (pos + 1 == s.size() || !(std::isalnum(static_cast<unsigned char>(s[pos + 1])) || s[pos + 1] == '_'))) {
          ++pos;
          return [v](const ExprEnv&) { return cplx(0.0, v); };
        }
        return [v](const ExprEnv&) { return cplx(v); };
      }
      if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
        const std::size_t start = pos;
        while (pos < s.size() && (std::isalnum(static_cast<unsigned char>(s[pos])) || s[pos] == '_')) ++pos;
        const std::string id = s.substr(start, pos - start);
        if (accept('(')) {
          Node arg = expr();
          if (!accept(')')) fail("expected ')' after argument of " + id);
          return function(id, std::move(arg));
        }
        return variable(id);
      }
      fail("unexpected '" + std::string(1, c) + "'");
    }

    Node variable(const std::string& id) {
      if (id == "x") return [](const ExprEnv& e) { return cplx(e.x); };
      if (id == "y") return [](const ExprEnv& e) { return cplx(e.y); };
      if (id == "nx") return [](const ExprEnv& e) { return cplx(e.nx); };
      if (id == "ny") return [](const ExprEnv& e) { return cplx(e.ny); };
      if (id == "t") return [](const ExprEnv& e) { return cplx(e.t); };
      if (id == "i") return [](const ExprEnv&) { return cplx(0.0, 1.0); };
      if (id == "pi") return [](const ExprEnv&) { return cplx(std::numbers::pi); };
      fail("unknown variable '" + id + "'");
    }

    Node function(const std::string& id, Node a) {
      using F = cplx (*)(cplx);
      static const std::pair<const char*, F> table[] = {
          {"sin", [](cplx z) { return std::sin(z); }},     {"cos", [](cplx z) { return std::cos(z); }},
          {"tan", [](cplx z) { return std::tan(z); }},     {"exp", [](cplx z) { return std::exp(z); }},
          {"log", [](cplx z) { return std::log(z); }},     {"sqrt", [](cplx z) { return std::sqrt(z); }},
          {"abs", [](cplx z) { return cplx(std::abs(z)); }}, {"sinh", [](cplx z) { return std::sinh(z); }},
          {"cosh", [](cplx z) { return std::cosh(z); }},   {"tanh", [](cplx z) { return std::tanh(z); }},
          {"re", [](cplx z) { return cplx(z.real()); }},   {"im", [](cplx z) { return cplx(z.imag()); }},
          {"conj", [](cplx z) { return std::conj(z); }},
      };
      for (const auto& [name, f] : table)
        if (id == name) return [f = f, a = std::move(a)](const ExprEnv& e) { return f(a(e)); };
      fail("unknown function '" + id + "'");
    }
  };

  std::string text_;
  std::shared_ptr<const Node> eval_;
};

}  // namespace wentzell
