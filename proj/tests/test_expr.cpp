#include <doctest.h>

#include <cmath>
#include <random>

#include "varlp/domain.hpp"
#include "varlp/expr.hpp"

using namespace varlp;

TEST_CASE("parse_expr: worked values") {
  auto e = parse_expr("1/sqrt(abs(x))");
  CHECK(eval_expr(e, 0.25) == doctest::Approx(2.0));

  CHECK(eval_expr(parse_expr("1+log(x)"), 1.0) == doctest::Approx(1.0));
  CHECK(eval_expr(parse_expr("floor(x)"), 3.7) == doctest::Approx(3.0));
  CHECK(eval_expr(parse_expr("2+sin(x)^2"), 0.0) == doctest::Approx(2.0));
  CHECK(eval_expr(parse_expr("-x+1"), 2.0) == doctest::Approx(-1.0));
  CHECK(eval_expr(parse_expr("(1+x)*(1-x)"), 0.5) == doctest::Approx(0.75));
  CHECK(eval_expr(parse_expr("x^2"), 3.0) == doctest::Approx(9.0));
}

TEST_CASE("parse_expr: errors carry a position") {
  CHECK_THROWS_AS(parse_expr("1+"), ExprError);
  CHECK_THROWS_AS(parse_expr("sin(x"), ExprError);
  CHECK_THROWS_AS(parse_expr("foo(x)"), ExprError);
  CHECK_THROWS_AS(parse_expr("1 2"), ExprError);
  try {
    parse_expr("1+*2");
  } catch (const ExprError& e) {
    CHECK(e.position == 2);
  }
}

namespace {

ExprPtr random_ast(std::mt19937_64& g, int depth) {
  auto node = [&](ExprOp op, ExprPtr l, ExprPtr r) {
    auto n = std::make_shared<ExprNode>();
    n->op = op;
    n->lhs = std::move(l);
    n->rhs = std::move(r);
    return ExprPtr(n);
  };
  std::uniform_int_distribution<int> pick(0, depth <= 0 ? 1 : 7);
  switch (pick(g)) {
    case 0: {
      auto n = std::make_shared<ExprNode>();
      n->op = ExprOp::Number;
      n->value = std::uniform_real_distribution<double>(0.0, 9.0)(g);
      return n;
    }
    case 1: {
      auto n = std::make_shared<ExprNode>();
      n->op = ExprOp::Var;
      return n;
    }
    case 2: return node(ExprOp::Add, random_ast(g, depth - 1), random_ast(g, depth - 1));
    case 3: return node(ExprOp::Sub, random_ast(g, depth - 1), random_ast(g, depth - 1));
    case 4: return node(ExprOp::Mul, random_ast(g, depth - 1), random_ast(g, depth - 1));
    case 5: return node(ExprOp::Div, random_ast(g, depth - 1), random_ast(g, depth - 1));
    case 6: {
      // '^' operands must be bases in the grammar, so keep them atomic
      auto lhs = std::make_shared<ExprNode>();
      lhs->op = ExprOp::Var;
      auto rhs = std::make_shared<ExprNode>();
      rhs->op = ExprOp::Number;
      rhs->value = std::uniform_int_distribution<int>(0, 4)(g);
      return node(ExprOp::Pow, lhs, rhs);
    }
    default: {
      static const char* fns[] = {"abs", "exp", "log", "sin",
                                  "cos", "atan", "sqrt", "floor"};
      auto n = std::make_shared<ExprNode>();
      n->op = ExprOp::Call;
      n->fn = fns[std::uniform_int_distribution<int>(0, 7)(g)];
      n->lhs = random_ast(g, depth - 1);
      return n;
    }
  }
}

}  // namespace

TEST_CASE("render/parse round-trip on random ASTs") {
  std::mt19937_64 g(42);
  for (int i = 0; i < 300; ++i) {
    ExprPtr ast = random_ast(g, 4);
    std::string s = render_expr(*ast);
    ExprPtr back = parse_expr(s);
    CAPTURE(s);
    CHECK(expr_equal(*ast, *back));
  }
}

TEST_CASE("eval_function respects declared singularities") {
  FunctionSpec f = function_from_expr("1/sqrt(abs(x))");
  CHECK(eval_function(f, 4.0) == doctest::Approx(0.5));
  CHECK_THROWS_AS(eval_function(f, 0.0), EvaluationError);
  f.singular_points = {0.0};
  CHECK(std::isinf(eval_function(f, 0.0)));
}

TEST_CASE("eval_function examples") {
  CHECK(eval_function(function_from_expr("atan(x)"), 0.0) == doctest::Approx(0.0));
  CHECK(eval_function(function_from_expr("sin(log(x))"), std::exp(M_PI / 2)) ==
        doctest::Approx(1.0));
}

TEST_CASE("support hint: indicator vanishes outside") {
  FunctionSpec f = fn_indicator({-1.0, 2.0});
  std::mt19937_64 g(7);
  for (int i = 0; i < 100; ++i) {
    double x = std::uniform_real_distribution<double>(2.0001, 100.0)(g);
    CHECK(f.eval(x) == 0.0);
    CHECK(f.eval(-x) == 0.0);
  }
}

TEST_CASE("combinators") {
  FunctionSpec f = function_from_expr("x");
  CHECK(fn_clamp(f, 0.0, 1.0).eval(3.0) == 1.0);
  CHECK(fn_shift(f, 2.0).eval(3.0) == doctest::Approx(1.0));
  CHECK(fn_scale(f, -2.0).eval(3.0) == doctest::Approx(-6.0));
  CHECK(fn_sum(f, fn_indicator({0.0, 1.0})).eval(0.5) == doctest::Approx(1.5));
}
