#include "nilgauss/expression.hpp"

#include "nilgauss/errors.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <sstream>
#include <vector>

namespace nilgauss {

enum class Op { Const, Z, Zbar, Neg, Add, Sub, Mul, Div, Pow, Exp, Sinh, Cosh, Tanh, Conj };

struct ExprNode {
  Op op = Op::Const;
  Complex c;      // Const
  int power = 0;  // Pow
  ExprPtr a, b;
};

struct ExprJetTrees {
  ExprPtr dz, dzbar, dzz, dzzbar, dzbarzbar;
};

namespace {

ExprPtr make(Op op, ExprPtr a = nullptr, ExprPtr b = nullptr) {
  auto n = std::make_shared<ExprNode>();
  n->op = op;
  n->a = std::move(a);
  n->b = std::move(b);
  return n;
}

ExprPtr constant(Complex c) {
  auto n = std::make_shared<ExprNode>();
  n->c = c;
  return n;
}

bool is_const(const ExprPtr& e, Complex c) { return e->op == Op::Const && e->c == c; }
bool is_const(const ExprPtr& e) { return e->op == Op::Const; }

// Constructors with light folding so derivative trees stay small.
ExprPtr add(ExprPtr a, ExprPtr b) {
  if (is_const(a, 0.0)) return b;
  if (is_const(b, 0.0)) return a;
  if (is_const(a) && is_const(b)) return constant(a->c + b->c);
  return make(Op::Add, std::move(a), std::move(b));
}

ExprPtr neg(ExprPtr a) {
  if (is_const(a)) return constant(-a->c);
  if (a->op == Op::Neg) return a->a;
  return make(Op::Neg, std::move(a));
}

ExprPtr sub(ExprPtr a, ExprPtr b) {
  if (is_const(b, 0.0)) return a;
  if (is_const(a, 0.0)) return neg(std::move(b));
  if (is_const(a) && is_const(b)) return constant(a->c - b->c);
  return make(Op::Sub, std::move(a), std::move(b));
}

ExprPtr mul(ExprPtr a, ExprPtr b) {
  if (is_const(a, 0.0) || is_const(b, 0.0)) return constant(0.0);
  if (is_const(a, 1.0)) return b;
  if (is_const(b, 1.0)) return a;
  if (is_const(a) && is_const(b)) return constant(a->c * b->c);
  return make(Op::Mul, std::move(a), std::move(b));
}

ExprPtr div(ExprPtr a, ExprPtr b) {
  if (is_const(a, 0.0)) return constant(0.0);
  if (is_const(b, 1.0)) return a;
  if (is_const(a) && is_const(b) && b->c != 0.0) return constant(a->c / b->c);
  return make(Op::Div, std::move(a), std::move(b));
}

ExprPtr pow(ExprPtr a, int n) {
  if (n == 0) return constant(1.0);
  if (n == 1) return a;
  if (is_const(a)) return constant(std::pow(a->c, n));
  auto e = std::make_shared<ExprNode>();
  e->op = Op::Pow;
  e->power = n;
  e->a = std::move(a);
  return e;
}

ExprPtr unary(Op op, ExprPtr a) {
  if (is_const(a)) {
    switch (op) {
      case Op::Exp: return constant(std::exp(a->c));
      case Op::Sinh: return constant(std::sinh(a->c));
      case Op::Cosh: return constant(std::cosh(a->c));
      case Op::Tanh: return constant(std::tanh(a->c));
      case Op::Conj: return constant(std::conj(a->c));
      default: break;
    }
  }
  if (op == Op::Conj) {
    if (a->op == Op::Conj) return a->a;
    if (a->op == Op::Z) return make(Op::Zbar);
    if (a->op == Op::Zbar) return make(Op::Z);
  }
  return make(op, std::move(a));
}

Wirtinger flip(Wirtinger d) { return d == Wirtinger::Z ? Wirtinger::Zbar : Wirtinger::Z; }

ExprPtr diff(const ExprPtr& e, Wirtinger d) {
  switch (e->op) {
    case Op::Const: return constant(0.0);
    case Op::Z: return constant(d == Wirtinger::Z ? 1.0 : 0.0);
    case Op::Zbar: return constant(d == Wirtinger::Zbar ? 1.0 : 0.0);
    case Op::Neg: return neg(diff(e->a, d));
    case Op::Add: return add(diff(e->a, d), diff(e->b, d));
    case Op::Sub: return sub(diff(e->a, d), diff(e->b, d));
    case Op::Mul: return add(mul(diff(e->a, d), e->b), mul(e->a, diff(e->b, d)));
    case Op::Div:
      // (a' b - a b') / b^2
      return div(sub(mul(diff(e->a, d), e->b), mul(e->a, diff(e->b, d))), pow(e->b, 2));
    case Op::Pow: return mul(mul(constant(static_cast<double>(e->power)), pow(e->a, e->power - 1)), diff(e->a, d));
    case Op::Exp: return mul(e, diff(e->a, d));
    case Op::Sinh: return mul(unary(Op::Cosh, e->a), diff(e->a, d));
    case Op::Cosh: return mul(unary(Op::Sinh, e->a), diff(e->a, d));
    case Op::Tanh: return div(diff(e->a, d), pow(unary(Op::Cosh, e->a), 2));
    case Op::Conj: return unary(Op::Conj, diff(e->a, flip(d)));
  }
  return constant(0.0);
}

Complex eval(const ExprNode& e, Complex z) {
  switch (e.op) {
    case Op::Const: return e.c;
    case Op::Z: return z;
    case Op::Zbar: return std::conj(z);
    case Op::Neg: return -eval(*e.a, z);
    case Op::Add: return eval(*e.a, z) + eval(*e.b, z);
    case Op::Sub: return eval(*e.a, z) - eval(*e.b, z);
    case Op::Mul: return eval(*e.a, z) * eval(*e.b, z);
    case Op::Div: return eval(*e.a, z) / eval(*e.b, z);
    case Op::Pow: {
      // repeated multiplication keeps integer powers exact near 0
      const Complex base = eval(*e.a, z);
      Complex r = 1.0, x = base;
      for (int k = std::abs(e.power); k > 0; k >>= 1) {
        if (k & 1) r *= x;
        x *= x;
      }
      return e.power < 0 ? 1.0 / r : r;
    }
    case Op::Exp: return std::exp(eval(*e.a, z));
    case Op::Sinh: return std::sinh(eval(*e.a, z));
    case Op::Cosh: return std::cosh(eval(*e.a, z));
    case Op::Tanh: return std::tanh(eval(*e.a, z));
    case Op::Conj: return std::conj(eval(*e.a, z));
  }
  return 0.0;
}

std::string format_complex(Complex c) {
  std::ostringstream os;
  os.precision(17);
  if (c.imag() == 0.0) {
    os << c.real();
  } else if (c.real() == 0.0) {
    os << c.imag() << "*i";
  } else {
    os << "(" << c.real() << (c.imag() < 0 ? "-" : "+") << std::abs(c.imag()) << "*i)";
  }
  return os.str();
}

std::string print(const ExprNode& e) {
  switch (e.op) {
    case Op::Const: return format_complex(e.c);
    case Op::Z: return "z";
    case Op::Zbar: return "zbar";
    case Op::Neg: return "(-" + print(*e.a) + ")";
    case Op::Add: return "(" + print(*e.a) + " + " + print(*e.b) + ")";
    case Op::Sub: return "(" + print(*e.a) + " - " + print(*e.b) + ")";
    case Op::Mul: return "(" + print(*e.a) + " * " + print(*e.b) + ")";
    case Op::Div: return "(" + print(*e.a) + " / " + print(*e.b) + ")";
    case Op::Pow: return print(*e.a) + "^" + std::to_string(e.power);
    case Op::Exp: return "exp(" + print(*e.a) + ")";
    case Op::Sinh: return "sinh(" + print(*e.a) + ")";
    case Op::Cosh: return "cosh(" + print(*e.a) + ")";
    case Op::Tanh: return "tanh(" + print(*e.a) + ")";
    case Op::Conj: return "conj(" + print(*e.a) + ")";
  }
  return "?";
}

class Parser {
 public:
  explicit Parser(const std::string& s) : s_(s) {}

  ExprPtr parse() {
    ExprPtr e = expr();
    skip();
    if (pos_ != s_.size()) fail("unexpected '" + std::string(1, s_[pos_]) + "'");
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, pos_); }

  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!accept(c)) fail(std::string("expected '") + c + "'");
  }

  ExprPtr expr() {
    ExprPtr e = term();
    for (;;) {
      if (accept('+')) {
        e = add(e, term());
      } else if (accept('-')) {
        e = sub(e, term());
      } else {
        return e;
      }
    }
  }

  ExprPtr term() {
    ExprPtr e = signed_factor();
    for (;;) {
      if (accept('*')) {
        e = mul(e, signed_factor());
      } else if (accept('/')) {
        e = div(e, signed_factor());
      } else {
        return e;
      }
    }
  }

  ExprPtr signed_factor() {
    if (accept('-')) return neg(signed_factor());
    if (accept('+')) return signed_factor();
    return power();
  }

  ExprPtr power() {
    ExprPtr base = primary();
    if (!accept('^')) return base;
    skip();
    const bool negative = accept('-');
    skip();
    const std::size_t start = pos_;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    if (start == pos_) fail("exponent must be an integer literal");
    if (pos_ - start > 4) fail("exponent too large");
    const int n = std::stoi(s_.substr(start, pos_ - start));
    return pow(base, negative ? -n : n);
  }

  ExprPtr primary() {
    skip();
    if (pos_ >= s_.size()) fail("unexpected end of input");
    const char c = s_[pos_];
    if (c == '(') {
      ++pos_;
      ExprPtr e = expr();
      expect(')');
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c))) return word();
    fail("unexpected '" + std::string(1, c) + "'");
  }

  ExprPtr number() {
    const char* begin = s_.c_str() + pos_;
    char* end = nullptr;
    const double x = std::strtod(begin, &end);
    if (end == begin) fail("malformed number");
    pos_ += static_cast<std::size_t>(end - begin);
    return constant(x);
  }

  ExprPtr word() {
    const std::size_t start = pos_;
    while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) ++pos_;
    const std::string name = s_.substr(start, pos_ - start);
    if (name == "z") return make(Op::Z);
    if (name == "zbar") return make(Op::Zbar);
    if (name == "i") return constant(kI);
    Op op;
    if (name == "exp") {
      op = Op::Exp;
    } else if (name == "sinh") {
      op = Op::Sinh;
    } else if (name == "cosh") {
      op = Op::Cosh;
    } else if (name == "tanh") {
      op = Op::Tanh;
    } else if (name == "conj") {
      op = Op::Conj;
    } else {
      pos_ = start;
      fail("unknown identifier '" + name + "'");
    }
    expect('(');
    ExprPtr arg = expr();
    expect(')');
    return unary(op, arg);
  }

  const std::string& s_;
  std::size_t pos_ = 0;
};

}  // namespace

Expression::Expression(ExprPtr root) : root_(std::move(root)) {
  auto t = std::make_shared<ExprJetTrees>();
  t->dz = diff(root_, Wirtinger::Z);
  t->dzbar = diff(root_, Wirtinger::Zbar);
  t->dzz = diff(t->dz, Wirtinger::Z);
  t->dzzbar = diff(t->dz, Wirtinger::Zbar);
  t->dzbarzbar = diff(t->dzbar, Wirtinger::Zbar);
  trees_ = std::move(t);
}

Expression Expression::parse(const std::string& text) {
  Parser p(text);
  return Expression(p.parse());
}

Complex Expression::evaluate(Complex z) const { return eval(*root_, z); }

Expression Expression::derivative(Wirtinger d) const {
  return Expression(d == Wirtinger::Z ? trees_->dz : trees_->dzbar);
}

WirtingerJet2 Expression::jet(Complex z) const {
  return {eval(*root_, z),         eval(*trees_->dz, z),     eval(*trees_->dzbar, z),
          eval(*trees_->dzz, z),   eval(*trees_->dzzbar, z), eval(*trees_->dzbarzbar, z)};
}

std::string Expression::to_string() const { return print(*root_); }

GaussMapFn user_map(const std::string& text) {
  const Expression e = Expression::parse(text);
  return GaussMapFn("user: " + text, RectDomain{}, [e](DomainPoint p) {
    const WirtingerJet2 j = e.jet(p.z());
    for (Complex c : {j.val, j.dz, j.dzbar, j.dzz, j.dzzbar, j.dzbarzbar}) {
      if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) {
        throw EvaluationError("user map is not finite", p.u, p.v);
      }
    }
    return j;
  });
}

}  // namespace nilgauss
