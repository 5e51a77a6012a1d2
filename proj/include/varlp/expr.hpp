#pragma once

#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>

namespace varlp {

// Tiny arithmetic DSL in one variable `x`.
//
//   expr   := ['-'] term (('+'|'-') term)*
//   term   := factor (('*'|'/') factor)*
//   factor := base ('^' base)?
//   base   := number | 'x' | fn '(' expr ')' | '(' expr ')'
//
// Functions: abs, exp, log, sin, cos, atan, sqrt, floor.
// A leading unary minus is desugared to (0 - e), so every tree renders
// back to a string that reparses to an equal tree.

enum class ExprOp { Add, Sub, Mul, Div, Pow, Call, Number, Var };

struct ExprNode;
using ExprPtr = std::shared_ptr<const ExprNode>;

struct ExprNode {
  ExprOp op;
  double value = 0.0;   // Number
  std::string fn;       // Call
  ExprPtr lhs, rhs;
};

struct ExprError : std::runtime_error {
  ExprError(const std::string& msg, std::size_t pos)
      : std::runtime_error(msg + " (at position " + std::to_string(pos) + ")"),
        position(pos) {}
  std::size_t position;
};

ExprPtr parse_expr(std::string_view text);
double eval_expr(const ExprNode& e, double x);
std::string render_expr(const ExprNode& e);
bool expr_equal(const ExprNode& a, const ExprNode& b);

inline double eval_expr(const ExprPtr& e, double x) { return eval_expr(*e, x); }

}  // namespace varlp
