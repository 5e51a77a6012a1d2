#pragma once

#include <functional>
#include <optional>
#include <string>

#include "varlp/domain.hpp"

namespace varlp {

enum class ExponentPreset { Constant, Linear, IntegerPart, Log, LogLog };

// Exponent function p : Omega -> [1, inf). Boundedness is a declared
// attribute (audited by sampling in the tests), not inferred: the
// theorems branch on it and finiteness of an essential sup of a black
// box is undecidable.
struct ExponentFunction {
  std::function<double(double)> eval;
  bool bounded = false;
  std::optional<double> p_plus;          // ess sup when bounded
  bool compactly_bounded = true;         // bounded on every compact subset
  bool nondecreasing = false;            // monotone hint (true for presets)
  std::optional<ExponentPreset> preset_tag;
  std::string name;

  // box domains; falls back to p(x_1) when unset
  std::function<double(std::span<const double>)> eval_nd;

  double operator()(double x) const { return eval(x); }
};

// Sampled essential sup of p over a bounded domain K: max over an
// n-point grid, refined adaptively near the maxima. Exact for monotone
// presets (endpoint value).
double ess_sup_on(const ExponentFunction& p, const Domain& K, int n);

ExponentFunction make_constant_exponent(double p);
ExponentFunction make_preset(ExponentPreset tag, double param = 0.0);

// Parses the CLI spellings: "const:<p>", "linear", "intpart", "log",
// "loglog", "expr:<DSL>".
ExponentFunction parse_exponent(const std::string& spec);

}  // namespace varlp
