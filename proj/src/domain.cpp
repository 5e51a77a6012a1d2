#include "varlp/domain.hpp"

#include <algorithm>
#include <cmath>

namespace varlp {

double eval_function(const FunctionSpec& f, double x) {
  double v = f.eval(x);
  if (!std::isfinite(v)) {
    for (double s : f.singular_points)
      if (x == s) return v;
    throw EvaluationError("non-finite value at x=" + std::to_string(x) +
                          " (not a declared singularity)");
  }
  return v;
}

FunctionSpec function_from_expr(const std::string& text) {
  FunctionSpec f;
  ExprPtr ast = parse_expr(text);
  f.eval = [ast](double x) { return eval_expr(*ast, x); };
  f.name = "expr:" + text;
  return f;
}

FunctionSpec fn_indicator(Interval where) {
  FunctionSpec f;
  f.eval = [where](double x) { return (x >= where.a && x <= where.b) ? 1.0 : 0.0; };
  f.support_hint = where;
  f.continuous = false;
  f.name = "indicator";
  return f;
}

FunctionSpec fn_clamp(FunctionSpec f, double lo, double hi) {
  FunctionSpec g = f;
  auto inner = f.eval;
  g.eval = [inner, lo, hi](double x) { return std::clamp(inner(x), lo, hi); };
  g.singular_points.clear();
  g.name = "clamp(" + f.name + ")";
  return g;
}

FunctionSpec fn_shift(FunctionSpec f, double dx) {
  FunctionSpec g = f;
  auto inner = f.eval;
  g.eval = [inner, dx](double x) { return inner(x - dx); };
  if (f.support_hint)
    g.support_hint = Interval{f.support_hint->a + dx, f.support_hint->b + dx};
  g.singular_points.clear();
  for (double s : f.singular_points) g.singular_points.push_back(s + dx);
  g.name = "shift(" + f.name + ")";
  return g;
}

FunctionSpec fn_scale(FunctionSpec f, double c) {
  FunctionSpec g = f;
  auto inner = f.eval;
  g.eval = [inner, c](double x) { return c * inner(x); };
  if (f.limit_hint) g.limit_hint = c * *f.limit_hint;
  if (f.tail_envelope) {
    auto env = f.tail_envelope;
    g.tail_envelope = [env, c](double t) { return std::fabs(c) * env(t); };
  }
  if (f.deviation_envelope) {
    auto env = f.deviation_envelope;
    g.deviation_envelope = [env, c](double t) { return std::fabs(c) * env(t); };
  }
  g.name = "scale(" + f.name + ")";
  return g;
}

FunctionSpec fn_sum(FunctionSpec f, FunctionSpec g) {
  FunctionSpec h;
  auto fe = f.eval, ge = g.eval;
  h.eval = [fe, ge](double x) { return fe(x) + ge(x); };
  if (f.support_hint && g.support_hint)
    h.support_hint = Interval{std::min(f.support_hint->a, g.support_hint->a),
                              std::max(f.support_hint->b, g.support_hint->b)};
  if (f.limit_hint && g.limit_hint) h.limit_hint = *f.limit_hint + *g.limit_hint;
  if (f.tail_envelope && g.tail_envelope) {
    auto e1 = f.tail_envelope, e2 = g.tail_envelope;
    h.tail_envelope = [e1, e2](double t) { return e1(t) + e2(t); };
  }
  if (f.deviation_envelope && g.deviation_envelope) {
    auto e1 = f.deviation_envelope, e2 = g.deviation_envelope;
    h.deviation_envelope = [e1, e2](double t) { return e1(t) + e2(t); };
  }
  h.continuous = f.continuous && g.continuous;
  h.singular_points = f.singular_points;
  h.singular_points.insert(h.singular_points.end(), g.singular_points.begin(),
                           g.singular_points.end());
  h.name = f.name + "+" + g.name;
  return h;
}

}  // namespace varlp
