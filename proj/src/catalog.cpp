#include "varlp/catalog.hpp"

#include <cmath>
#include <stdexcept>

namespace varlp {

namespace {

std::vector<CatalogFunction> build_functions() {
  std::vector<CatalogFunction> out;

  {
    FunctionSpec f;
    f.eval = [](double x) { return 1.0 / std::sqrt(std::fabs(x)); };
    f.singular_points = {0.0};
    f.continuous = false;
    f.name = "inv-sqrt";
    out.push_back({f.name, f,
                   "integrable singularity at 0; space membership flips "
                   "with the exponent"});
  }
  {
    FunctionSpec f;
    f.eval = [](double x) {
      return std::fabs(x) > 1.0 ? 1.0 / std::sqrt(std::fabs(x)) : 0.0;
    };
    f.singular_points = {-1.0, 1.0};
    f.continuous = false;
    f.tail_envelope = [](double t) { return 1.0 / std::sqrt(std::max(t, 1.0)); };
    f.name = "inv-sqrt-tail";
    out.push_back({f.name, f,
                   "the |x| > 1 branch of inv-sqrt: integrable for large "
                   "exponents only"});
  }
  {
    FunctionSpec f;
    f.eval = [](double x) { return std::atan(x); };
    f.limit_hint = std::acos(-1.0) / 2.0;
    f.deviation_envelope = [](double t) {
      return std::acos(-1.0) / 2.0 - std::atan(std::max(t, 0.0));
    };
    f.name = "atan";
    out.push_back({f.name, f, "bounded, continuous, limit pi/2 at infinity"});
  }
  {
    FunctionSpec f;
    f.eval = [](double x) { return x > 0.0 ? std::sin(std::log(x)) : 0.0; };
    f.name = "sin-log";
    out.push_back({f.name, f,
                   "bounded and continuous but oscillates forever: no limit "
                   "at infinity"});
  }
  {
    FunctionSpec f;
    f.eval = [](double x) { return std::exp(-std::fabs(x)); };
    f.tail_envelope = [](double t) { return std::exp(-std::max(t, 0.0)); };
    f.limit_hint = 0.0;
    f.deviation_envelope = [](double t) { return std::exp(-std::max(t, 0.0)); };
    f.name = "exp-decay";
    out.push_back({f.name, f, "rapidly decaying tail; in every catalog space"});
  }
  {
    FunctionSpec f;
    f.eval = [](double x) { return std::max(0.0, 1.0 - std::fabs(x)); };
    f.support_hint = Interval{-1.0, 1.0};
    f.name = "bump";
    out.push_back({f.name, f, "triangular bump supported on [-1,1]"});
  }
  {
    FunctionSpec f;
    f.eval = [](double) { return 1.0; };
    f.limit_hint = 1.0;
    f.deviation_envelope = [](double) { return 0.0; };
    f.tail_envelope = [](double) { return 1.0; };
    f.name = "one";
    out.push_back({f.name, f, "the constant 1; finite norm iff the domain "
                              "carries finite weight"});
  }
  return out;
}

std::vector<CatalogExponent> build_exponents() {
  std::vector<CatalogExponent> out;
  out.push_back({"const:2", make_constant_exponent(2.0),
                 "classical Lebesgue exponent"});
  out.push_back({"linear", make_preset(ExponentPreset::Linear),
                 "p(x) = max(1, x), unbounded with L-inf embedding on [1,inf)"});
  out.push_back({"intpart", make_preset(ExponentPreset::IntegerPart),
                 "p(x) = max(1, floor(x)), piecewise-constant unbounded"});
  out.push_back({"log", make_preset(ExponentPreset::Log),
                 "p(x) = 1 + log x, slowly unbounded, weight e on [1,inf)"});
  out.push_back({"loglog", make_preset(ExponentPreset::LogLog),
                 "p(x) = 1 + log log x, too slow for the L-inf embedding"});
  return out;
}

}  // namespace

const std::vector<CatalogFunction>& function_catalog() {
  static const std::vector<CatalogFunction> cat = build_functions();
  return cat;
}

const std::vector<CatalogExponent>& exponent_catalog() {
  static const std::vector<CatalogExponent> cat = build_exponents();
  return cat;
}

FunctionSpec parse_function(const std::string& spec) {
  for (const auto& e : function_catalog())
    if (e.name == spec) return e.fn;
  if (spec.rfind("const:", 0) == 0) {
    double c = std::stod(spec.substr(6));
    FunctionSpec f;
    f.eval = [c](double) { return c; };
    f.limit_hint = c;
    f.deviation_envelope = [](double) { return 0.0; };
    f.tail_envelope = [c](double) { return std::fabs(c); };
    f.name = spec;
    return f;
  }
  if (spec.rfind("expr:", 0) == 0) return function_from_expr(spec.substr(5));
  throw std::invalid_argument("unknown function spec: " + spec);
}

SequenceSpec parse_sequence(const std::string& spec) {
  if (spec == "zero") return seq_zero();
  if (spec == "inv-k") {
    SequenceSpec s;
    s.eval = [](long k) { return 1.0 / static_cast<double>(k); };
    s.limit_hint = 0.0;
    s.deviation_envelope = [](double t) { return 1.0 / std::max(t, 1.0); };
    s.name = "inv-k";
    return s;
  }
  if (spec.rfind("const:", 0) == 0) return seq_constant(std::stod(spec.substr(6)));
  if (spec.rfind("unit:", 0) == 0) return seq_unit(std::stol(spec.substr(5)));
  if (spec.rfind("expr:", 0) == 0) return seq_from_expr(spec.substr(5));
  throw std::invalid_argument("unknown sequence spec: " + spec);
}

}  // namespace varlp
