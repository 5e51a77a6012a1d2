#include "varlp/network.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace varlp {

double Activation::operator()(double t) const {
  switch (tag) {
    case ActivationTag::Heaviside: return t >= 0.0 ? 1.0 : 0.0;
    case ActivationTag::Relu: return t > 0.0 ? t : 0.0;
    case ActivationTag::Logistic: return 1.0 / (1.0 + std::exp(-t));
    case ActivationTag::Tanh: return std::tanh(t);
    case ActivationTag::ReluPairSigmoid: return std::clamp(t, 0.0, 1.0);
  }
  return 0.0;
}

bool Activation::sigmoidal() const {
  return std::isfinite(c_plus) && std::isfinite(c_minus);
}

double Activation::tail_bound(double T) const {
  if (T <= 0.0) throw std::invalid_argument("tail_bound: T > 0 required");
  switch (tag) {
    case ActivationTag::Heaviside: return 0.0;
    case ActivationTag::Relu: return kInf;
    case ActivationTag::Logistic: return std::exp(-T);       // 1/(1+e^T) < e^-T
    case ActivationTag::Tanh: return 2.0 * std::exp(-2.0 * T);
    case ActivationTag::ReluPairSigmoid: return T >= 1.0 ? 0.0 : 1.0 - T;
  }
  return kInf;
}

std::string Activation::name() const {
  switch (tag) {
    case ActivationTag::Heaviside: return "heaviside";
    case ActivationTag::Relu: return "relu";
    case ActivationTag::Logistic: return "logistic";
    case ActivationTag::Tanh: return "tanh";
    case ActivationTag::ReluPairSigmoid: return "relu_pair_sigmoid";
  }
  return "?";
}

Activation make_activation(ActivationTag tag) {
  Activation a;
  a.tag = tag;
  switch (tag) {
    case ActivationTag::Heaviside:
      a.c_minus = 0.0;
      a.c_plus = 1.0;
      a.lipschitz.reset();
      a.continuous = false;
      break;
    case ActivationTag::Relu:
      a.c_minus = 0.0;
      a.c_plus = kInf;
      a.lipschitz = 1.0;
      break;
    case ActivationTag::Logistic:
      a.c_minus = 0.0;
      a.c_plus = 1.0;
      a.lipschitz = 0.25;
      break;
    case ActivationTag::Tanh:
      a.c_minus = -1.0;
      a.c_plus = 1.0;
      a.lipschitz = 1.0;
      break;
    case ActivationTag::ReluPairSigmoid:
      a.c_minus = 0.0;
      a.c_plus = 1.0;
      a.lipschitz = 1.0;
      break;
  }
  return a;
}

Activation parse_activation(const std::string& name) {
  if (name == "heaviside") return make_activation(ActivationTag::Heaviside);
  if (name == "relu") return make_activation(ActivationTag::Relu);
  if (name == "logistic") return make_activation(ActivationTag::Logistic);
  if (name == "tanh") return make_activation(ActivationTag::Tanh);
  if (name == "relu_pair_sigmoid" || name == "relu_pair")
    return make_activation(ActivationTag::ReluPairSigmoid);
  throw std::invalid_argument("unknown activation: " + name);
}

double net_eval(const ShallowNetwork& g, std::span<const double> x) {
  if (static_cast<int>(x.size()) != g.dimension)
    throw std::invalid_argument("net_eval: dimension mismatch");
  double s = 0.0;
  for (const Unit& u : g.units) {
    if (static_cast<int>(u.w.size()) != g.dimension)
      throw std::invalid_argument("net_eval: unit dimension mismatch");
    double t = u.b;
    for (int i = 0; i < g.dimension; ++i) t += u.w[i] * x[i];
    s += u.alpha * g.activation(t);
  }
  return s;
}

double net_eval(const ShallowNetwork& g, double x) {
  return net_eval(g, std::span<const double>(&x, 1));
}

double limit_at_infinity(const ShallowNetwork& g, LimitSign sign) {
  if (g.dimension != 1)
    throw std::invalid_argument("limit_at_infinity: dimension 1 only");
  if (!g.activation.sigmoidal())
    throw std::invalid_argument("limit_at_infinity: activation not sigmoidal");
  double cp = g.activation.c_plus, cm = g.activation.c_minus;
  if (sign == LimitSign::Minus) std::swap(cp, cm);
  double s = 0.0;
  for (const Unit& u : g.units) {
    double w = u.w.at(0);
    if (w > 0.0)
      s += u.alpha * cp;
    else if (w < 0.0)
      s += u.alpha * cm;
    else
      s += u.alpha * g.activation(u.b);
  }
  return s;
}

namespace {

double round_to_grid(double v, double grid) {
  return grid * std::round(v / grid);
}

}  // namespace

QuantizeResult quantize(const ShallowNetwork& g, double grid, const Domain& K) {
  if (!(grid > 0.0)) throw std::invalid_argument("quantize: grid > 0 required");
  if (!g.activation.continuous || !g.activation.lipschitz)
    throw std::invalid_argument("quantize: needs a continuous Lipschitz activation");
  if (!K.bounded()) throw std::invalid_argument("quantize: K must be bounded");

  double R = 0.0;
  if (K.is_interval())
    R = std::max(std::fabs(K.iv.a), std::fabs(K.iv.b));
  else
    for (const Interval& e : K.box)
      R = std::hypot(R, std::max(std::fabs(e.a), std::fabs(e.b)));

  double sig_sup = std::max(std::fabs(g.activation.c_plus),
                            std::fabs(g.activation.c_minus));
  const double L = *g.activation.lipschitz;

  QuantizeResult out;
  out.network = g;
  for (Unit& u : out.network.units) {
    double a2 = round_to_grid(u.alpha, grid);
    double da = std::fabs(u.alpha - a2);
    u.alpha = a2;
    double dw = 0.0;
    for (double& w : u.w) {
      double r = round_to_grid(w, grid);
      dw += std::fabs(w - r);
      w = r;
    }
    double b2 = round_to_grid(u.b, grid);
    double db = std::fabs(u.b - b2);
    u.b = b2;
    out.sup_error_bound +=
        da * sig_sup + std::fabs(u.alpha) * L * (dw * R + db);
  }
  return out;
}

double heaviside_gap_check(const ShallowNetwork& g) {
  if (g.dimension != 1)
    throw std::invalid_argument("heaviside_gap_check: dimension 1 only");
  const int n = 200001;
  double worst = 0.0;
  for (int i = 0; i < n; ++i) {
    double x = -1.0 + 2.0 * i / (n - 1);
    double h = x >= 0.0 ? 1.0 : 0.0;
    worst = std::max(worst, std::fabs(h - net_eval(g, x)));
  }
  return worst;
}

FunctionSpec net_function(const ShallowNetwork& g) {
  FunctionSpec f;
  ShallowNetwork copy = g;
  f.eval = [copy](double x) { return net_eval(copy, x); };
  f.continuous = g.activation.continuous;
  f.name = "network(" + g.activation.name() + ")";
  if (g.dimension == 1 && g.activation.sigmoidal()) {
    f.limit_hint = limit_at_infinity(g, LimitSign::Plus);
    // |g(x) - limit| <= sum |alpha_j| tail_bound(|w_j| T - |b_j|) once the
    // arguments clear the ramp; a crude global bound before that.
    ShallowNetwork net = g;
    double sig_sup = std::max(std::fabs(g.activation.c_plus),
                              std::fabs(g.activation.c_minus));
    f.deviation_envelope = [net, sig_sup](double T) {
      double s = 0.0;
      for (const Unit& u : net.units) {
        double w = std::fabs(u.w[0]);
        if (w == 0.0) continue;
        double t = w * T - std::fabs(u.b);
        double tb = (t > 0.0) ? net.activation.tail_bound(t) : 2.0 * sig_sup;
        s += std::fabs(u.alpha) * tb;
      }
      return s;
    };
  }
  return f;
}

std::string net_to_json(const ShallowNetwork& g) {
  nlohmann::ordered_json j;
  j["activation"] = g.activation.name();
  j["units"] = nlohmann::ordered_json::array();
  for (const Unit& u : g.units) {
    nlohmann::ordered_json ju;
    ju["a"] = u.alpha;
    ju["w"] = u.w;
    ju["b"] = u.b;
    j["units"].push_back(std::move(ju));
  }
  return j.dump();
}

ShallowNetwork net_from_json(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text);
  ShallowNetwork g;
  g.activation = parse_activation(j.at("activation").get<std::string>());
  for (const auto& ju : j.at("units")) {
    Unit u;
    u.alpha = ju.at("a").get<double>();
    u.w = ju.at("w").get<std::vector<double>>();
    u.b = ju.at("b").get<double>();
    g.units.push_back(std::move(u));
  }
  g.dimension = g.units.empty() ? 1 : static_cast<int>(g.units[0].w.size());
  return g;
}

}  // namespace varlp
