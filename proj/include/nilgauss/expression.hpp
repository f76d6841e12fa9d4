#pragma once

// Small expression language for user Gauss maps g(z):
//   expr    := term (('+' | '-') term)*
//   term    := unary (('*' | '/') unary)*
//   unary   := ('-' | '+') unary | power
//   power   := primary ('^' ['-'] integer)?
//   primary := number | 'i' | 'z' | 'zbar' | func '(' expr ')' | '(' expr ')'
//   func    := exp | sinh | cosh | tanh | conj
// Jets come from symbolic Wirtinger differentiation, with
// d/dz conj(f) = conj(d/dzbar f).

#include <memory>
#include <stdexcept>
#include <string>

#include "nilgauss/harmonic.hpp"
#include "nilgauss/numerics.hpp"

namespace nilgauss {

class ParseError : public std::invalid_argument {
 public:
  ParseError(const std::string& what, std::size_t position)
      : std::invalid_argument(what + " at position " + std::to_string(position)), position_(position) {}
  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

struct ExprNode;
struct ExprJetTrees;
using ExprPtr = std::shared_ptr<const ExprNode>;

enum class Wirtinger { Z, Zbar };

class Expression {
 public:
  /// Throws ParseError.
  static Expression parse(const std::string& text);

  Complex evaluate(Complex z) const;
  Expression derivative(Wirtinger d) const;
  /// Value and the five derivatives, all symbolic.
  WirtingerJet2 jet(Complex z) const;
  std::string to_string() const;

  const ExprPtr& root() const { return root_; }

 private:
  explicit Expression(ExprPtr root);

  ExprPtr root_;
  std::shared_ptr<const ExprJetTrees> trees_;
};

/// Gauss map on the whole plane given by an expression; provenance "user: <text>".
GaussMapFn user_map(const std::string& text);

}  // namespace nilgauss
