#pragma once

#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "varlp/expr.hpp"

namespace varlp {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

struct Interval {
  double a = 0.0;
  double b = 0.0;
  bool bounded() const { return std::isfinite(a) && std::isfinite(b); }
  double length() const { return b - a; }
};

// A domain of integration: an interval of the extended real line, or a
// finite box in R^d. Unbounded ends are only allowed for intervals.
struct Domain {
  enum class Kind { IntervalKind, BoxKind };
  Kind kind = Kind::IntervalKind;
  Interval iv;
  std::vector<Interval> box;

  static Domain interval(double a, double b) {
    if (!(a < b)) throw std::invalid_argument("Domain: need a < b");
    Domain d;
    d.kind = Kind::IntervalKind;
    d.iv = {a, b};
    return d;
  }

  static Domain make_box(std::vector<Interval> edges) {
    if (edges.empty()) throw std::invalid_argument("Domain: box needs d >= 1");
    for (const auto& e : edges) {
      if (!e.bounded() || !(e.a < e.b))
        throw std::invalid_argument("Domain: box edges must be finite with a < b");
    }
    Domain d;
    d.kind = Kind::BoxKind;
    d.box = std::move(edges);
    return d;
  }

  bool is_interval() const { return kind == Kind::IntervalKind; }
  bool bounded() const {
    return kind == Kind::BoxKind || iv.bounded();
  }
  int dimension() const {
    return kind == Kind::BoxKind ? static_cast<int>(box.size()) : 1;
  }
};

// An evaluable real function together with the metadata the numeric
// kernels branch on. `tail_envelope(T)` bounds sup_{|x|>T} |f(x)|;
// when `limit_hint` is present, `deviation_envelope(T)` bounds
// sup_{x>T} |f(x) - limit_hint| instead. Both must be nonincreasing.
struct FunctionSpec {
  std::function<double(double)> eval;
  std::optional<Interval> support_hint;
  std::optional<double> limit_hint;
  std::function<double(double)> tail_envelope;
  std::function<double(double)> deviation_envelope;
  std::vector<double> singular_points;
  bool continuous = true;
  std::string name;

  std::function<double(std::span<const double>)> eval_nd;  // box domains

  double operator()(double x) const { return eval(x); }
};

struct EvaluationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Point evaluation with the declared-singularity contract: a non-finite
// value at a point not listed in singular_points is an error.
double eval_function(const FunctionSpec& f, double x);

FunctionSpec function_from_expr(const std::string& text);

// Combinators (the DSL has no conditionals; piecewise functions are
// assembled from these).
FunctionSpec fn_indicator(Interval where);
FunctionSpec fn_clamp(FunctionSpec f, double lo, double hi);
FunctionSpec fn_shift(FunctionSpec f, double dx);
FunctionSpec fn_scale(FunctionSpec f, double c);
FunctionSpec fn_sum(FunctionSpec f, FunctionSpec g);

}  // namespace varlp
