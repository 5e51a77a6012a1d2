#include "varlp/expr.hpp"

#include <array>
#include <cctype>
#include <cmath>
#include <cstdlib>
#include <sstream>

namespace varlp {

namespace {

const std::array<std::string_view, 8> kFunctions = {
    "abs", "exp", "log", "sin", "cos", "atan", "sqrt", "floor"};

bool known_function(std::string_view name) {
  for (auto f : kFunctions)
    if (f == name) return true;
  return false;
}

ExprPtr make(ExprOp op, ExprPtr l = nullptr, ExprPtr r = nullptr) {
  auto n = std::make_shared<ExprNode>();
  n->op = op;
  n->lhs = std::move(l);
  n->rhs = std::move(r);
  return n;
}

ExprPtr make_number(double v) {
  auto n = std::make_shared<ExprNode>();
  n->op = ExprOp::Number;
  n->value = v;
  return n;
}

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  ExprPtr parse() {
    ExprPtr e = expr();
    skip_ws();
    if (pos_ != text_.size()) fail("unexpected trailing input");
    return e;
  }

 private:
  std::string_view text_;
  std::size_t pos_ = 0;

  [[noreturn]] void fail(const std::string& msg) { throw ExprError(msg, pos_); }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool eat(char c) {
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  char peek() {
    skip_ws();
    return pos_ < text_.size() ? text_[pos_] : '\0';
  }

  ExprPtr expr() {
    ExprPtr e;
    if (eat('-')) {
      e = make(ExprOp::Sub, make_number(0.0), term());
    } else {
      e = term();
    }
    for (;;) {
      if (eat('+')) {
        e = make(ExprOp::Add, e, term());
      } else if (eat('-')) {
        e = make(ExprOp::Sub, e, term());
      } else {
        return e;
      }
    }
  }

  ExprPtr term() {
    ExprPtr e = factor();
    for (;;) {
      if (eat('*')) {
        e = make(ExprOp::Mul, e, factor());
      } else if (eat('/')) {
        e = make(ExprOp::Div, e, factor());
      } else {
        return e;
      }
    }
  }

  ExprPtr factor() {
    ExprPtr e = base();
    if (eat('^')) e = make(ExprOp::Pow, e, base());
    return e;
  }

  ExprPtr base() {
    skip_ws();
    if (pos_ >= text_.size()) fail("unexpected end of input");
    char c = text_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (c == '(') {
      ++pos_;
      ExprPtr e = expr();
      if (!eat(')')) fail("expected ')'");
      return e;
    }
    if (std::isalpha(static_cast<unsigned char>(c))) return identifier();
    fail(std::string("unexpected character '") + c + "'");
  }

  ExprPtr number() {
    std::size_t start = pos_;
    while (pos_ < text_.size() &&
           (std::isdigit(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '.' ||
            text_[pos_] == 'e' || text_[pos_] == 'E' ||
            ((text_[pos_] == '+' || text_[pos_] == '-') && pos_ > start &&
             (text_[pos_ - 1] == 'e' || text_[pos_ - 1] == 'E'))))
      ++pos_;
    std::string tok(text_.substr(start, pos_ - start));
    char* end = nullptr;
    double v = std::strtod(tok.c_str(), &end);
    if (end != tok.c_str() + tok.size()) {
      pos_ = start;
      fail("malformed number '" + tok + "'");
    }
    return make_number(v);
  }

  ExprPtr identifier() {
    std::size_t start = pos_;
    while (pos_ < text_.size() &&
           std::isalpha(static_cast<unsigned char>(text_[pos_])))
      ++pos_;
    std::string name(text_.substr(start, pos_ - start));
    if (name == "x" || name == "k") {  // "k" for sequence expressions
      return make(ExprOp::Var);
    }
    if (!known_function(name)) {
      pos_ = start;
      fail("unknown identifier '" + name + "'");
    }
    if (!eat('(')) fail("expected '(' after function name");
    ExprPtr arg = expr();
    if (!eat(')')) fail("expected ')'");
    auto node = std::make_shared<ExprNode>();
    node->op = ExprOp::Call;
    node->fn = name;
    node->lhs = arg;
    return node;
  }
};

int precedence(ExprOp op) {
  switch (op) {
    case ExprOp::Add:
    case ExprOp::Sub: return 1;
    case ExprOp::Mul:
    case ExprOp::Div: return 2;
    case ExprOp::Pow: return 3;
    default: return 4;
  }
}

void render(const ExprNode& e, std::ostream& os, int parent_prec) {
  int prec = precedence(e.op);
  bool parens = prec < parent_prec;
  if (parens) os << '(';
  switch (e.op) {
    case ExprOp::Number: {
      std::ostringstream tmp;
      tmp.precision(17);
      tmp << e.value;
      std::string s = tmp.str();
      if (e.value < 0 || s.find("inf") != std::string::npos ||
          s.find("nan") != std::string::npos) {
        // negative/non-finite constants only arise from programmatic trees
        os << '(' << s << ')';
      } else {
        os << s;
      }
      break;
    }
    case ExprOp::Var: os << 'x'; break;
    case ExprOp::Call:
      os << e.fn << '(';
      render(*e.lhs, os, 0);
      os << ')';
      break;
    case ExprOp::Add:
      render(*e.lhs, os, prec);
      os << '+';
      render(*e.rhs, os, prec + 1);
      break;
    case ExprOp::Sub:
      render(*e.lhs, os, prec);
      os << '-';
      render(*e.rhs, os, prec + 1);
      break;
    case ExprOp::Mul:
      render(*e.lhs, os, prec);
      os << '*';
      render(*e.rhs, os, prec + 1);
      break;
    case ExprOp::Div:
      render(*e.lhs, os, prec);
      os << '/';
      render(*e.rhs, os, prec + 1);
      break;
    case ExprOp::Pow:
      // '^' operands are bare bases in the grammar
      render(*e.lhs, os, 4);
      os << '^';
      render(*e.rhs, os, 4);
      break;
  }
  if (parens) os << ')';
}

}  // namespace

ExprPtr parse_expr(std::string_view text) { return Parser(text).parse(); }

double eval_expr(const ExprNode& e, double x) {
  switch (e.op) {
    case ExprOp::Number: return e.value;
    case ExprOp::Var: return x;
    case ExprOp::Add: return eval_expr(*e.lhs, x) + eval_expr(*e.rhs, x);
    case ExprOp::Sub: return eval_expr(*e.lhs, x) - eval_expr(*e.rhs, x);
    case ExprOp::Mul: return eval_expr(*e.lhs, x) * eval_expr(*e.rhs, x);
    case ExprOp::Div: return eval_expr(*e.lhs, x) / eval_expr(*e.rhs, x);
    case ExprOp::Pow: return std::pow(eval_expr(*e.lhs, x), eval_expr(*e.rhs, x));
    case ExprOp::Call: {
      double a = eval_expr(*e.lhs, x);
      if (e.fn == "abs") return std::fabs(a);
      if (e.fn == "exp") return std::exp(a);
      if (e.fn == "log") return std::log(a);
      if (e.fn == "sin") return std::sin(a);
      if (e.fn == "cos") return std::cos(a);
      if (e.fn == "atan") return std::atan(a);
      if (e.fn == "sqrt") return std::sqrt(a);
      if (e.fn == "floor") return std::floor(a);
      throw std::logic_error("unhandled function " + e.fn);
    }
  }
  throw std::logic_error("unhandled expr node");
}

std::string render_expr(const ExprNode& e) {
  std::ostringstream os;
  render(e, os, 0);
  return os.str();
}

bool expr_equal(const ExprNode& a, const ExprNode& b) {
  if (a.op != b.op) return false;
  switch (a.op) {
    case ExprOp::Number: return a.value == b.value;
    case ExprOp::Var: return true;
    case ExprOp::Call:
      return a.fn == b.fn && expr_equal(*a.lhs, *b.lhs);
    default:
      return expr_equal(*a.lhs, *b.lhs) && expr_equal(*a.rhs, *b.rhs);
  }
}

}  // namespace varlp
