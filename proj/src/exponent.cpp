#include "varlp/exponent.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace varlp {

double ess_sup_on(const ExponentFunction& p, const Domain& K, int n) {
  if (!K.is_interval())
    throw std::invalid_argument("ess_sup_on: interval domains only");
  if (!K.bounded()) throw std::domain_error("ess_sup_on: K must be bounded");
  if (n < 2) throw std::invalid_argument("ess_sup_on: n >= 2");

  if (p.nondecreasing) return p.eval(K.iv.b);

  double a = K.iv.a, b = K.iv.b;
  double best = -kInf, best_x = a;
  for (int i = 0; i < n; ++i) {
    double x = a + (b - a) * i / (n - 1);
    double v = p.eval(x);
    if (v > best) {
      best = v;
      best_x = x;
    }
  }
  // refine around the grid maximum
  double h = (b - a) / (n - 1);
  for (int round = 0; round < 40 && h > 1e-14 * (b - a); ++round) {
    h *= 0.5;
    for (double x : {best_x - h, best_x + h}) {
      if (x < a || x > b) continue;
      double v = p.eval(x);
      if (v > best) {
        best = v;
        best_x = x;
      }
    }
  }
  return best;
}

ExponentFunction make_constant_exponent(double p) {
  if (p < 1.0) throw std::invalid_argument("exponent must be >= 1");
  ExponentFunction e;
  e.eval = [p](double) { return p; };
  e.bounded = true;
  e.p_plus = p;
  e.compactly_bounded = true;
  e.nondecreasing = true;
  e.preset_tag = ExponentPreset::Constant;
  e.name = "const:" + std::to_string(p);
  return e;
}

ExponentFunction make_preset(ExponentPreset tag, double param) {
  switch (tag) {
    case ExponentPreset::Constant:
      return make_constant_exponent(param);
    case ExponentPreset::Linear: {
      ExponentFunction e;
      e.eval = [](double x) { return std::max(x, 1.0); };
      e.bounded = false;
      e.compactly_bounded = true;
      e.nondecreasing = true;
      e.preset_tag = tag;
      e.name = "linear";
      return e;
    }
    case ExponentPreset::IntegerPart: {
      ExponentFunction e;
      e.eval = [](double x) { return std::max(std::floor(x), 1.0); };
      e.bounded = false;
      e.compactly_bounded = true;
      e.nondecreasing = true;
      e.preset_tag = tag;
      e.name = "intpart";
      return e;
    }
    case ExponentPreset::Log: {
      ExponentFunction e;
      e.eval = [](double x) { return x > 1.0 ? 1.0 + std::log(x) : 1.0; };
      e.bounded = false;
      e.compactly_bounded = true;
      e.nondecreasing = true;
      e.preset_tag = tag;
      e.name = "log";
      return e;
    }
    case ExponentPreset::LogLog: {
      ExponentFunction e;
      e.eval = [](double x) {
        return x > 1.0 ? 1.0 + std::log(1.0 + std::log(x)) : 1.0;
      };
      e.bounded = false;
      e.compactly_bounded = true;
      e.nondecreasing = true;
      e.preset_tag = tag;
      e.name = "loglog";
      return e;
    }
  }
  throw std::invalid_argument("unknown exponent preset");
}

ExponentFunction parse_exponent(const std::string& spec) {
  if (spec.rfind("const:", 0) == 0)
    return make_constant_exponent(std::stod(spec.substr(6)));
  if (spec == "linear") return make_preset(ExponentPreset::Linear);
  if (spec == "intpart") return make_preset(ExponentPreset::IntegerPart);
  if (spec == "log") return make_preset(ExponentPreset::Log);
  if (spec == "loglog") return make_preset(ExponentPreset::LogLog);
  if (spec.rfind("expr:", 0) == 0) {
    ExprPtr ast = parse_expr(spec.substr(5));
    ExponentFunction e;
    e.eval = [ast](double x) { return eval_expr(*ast, x); };
    // DSL exponents are assumed bounded unless stated otherwise; callers
    // can flip the flags on the returned value.
    e.bounded = true;
    e.compactly_bounded = true;
    e.nondecreasing = false;
    e.name = spec;
    return e;
  }
  throw std::invalid_argument("unknown exponent spec '" + spec + "'");
}

}  // namespace varlp
