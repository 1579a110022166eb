#pragma once

#include "nsub/puiseux.hpp"

#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

namespace nsub {

class ParseError : public std::invalid_argument {
 public:
  ParseError(const std::string& msg, int line, int column);
  int line;
  int column;
  std::string message;
};

/// AST for expr := ['+'|'-'] term (('+'|'-') term)*; term := factor ('*' factor)*;
/// factor := base ('^' exponent)?; base := 'x' | 'y' | rational | '(' expr ')'.
struct ExprNode {
  enum class Kind { Sum, Product, Power, X, Y, Number };
  Kind kind = Kind::Number;
  std::vector<std::unique_ptr<ExprNode>> children;
  std::vector<int> signs;  // Sum: sign of each child
  Rational value;          // Number literal or Power exponent

  std::unique_ptr<ExprNode> clone() const;
  friend bool operator==(const ExprNode& l, const ExprNode& r);
};

struct PhaseExpr {
  std::string source;
  std::unique_ptr<ExprNode> ast;
  PuiseuxPoly poly;
};

PhaseExpr parse_expression(const std::string& text);

/// Canonical text of an AST; parsing it yields an identical AST.
std::string print_ast(const ExprNode& node);

/// Exact expansion of an AST (throws ParseError at 1:1 on invalid powers).
PuiseuxPoly expand(const ExprNode& node);

}  // namespace nsub
