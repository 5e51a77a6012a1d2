#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "varlp/domain.hpp"

namespace varlp {

enum class ActivationTag { Heaviside, Relu, Logistic, Tanh, ReluPairSigmoid };

// Activation with its asymptotic data. c_plus/c_minus are the limits at
// +/-infinity (relu has c_plus = +inf and is not sigmoidal on its own).
struct Activation {
  ActivationTag tag = ActivationTag::Logistic;
  double c_plus = 1.0;
  double c_minus = 0.0;
  std::optional<double> lipschitz;
  bool continuous = true;

  double operator()(double t) const;
  bool sigmoidal() const;
  // bound on |sigma(t) - c_plus| for t >= T (T > 0); mirror for -T
  double tail_bound(double T) const;
  std::string name() const;
};

Activation make_activation(ActivationTag tag);
Activation parse_activation(const std::string& name);

struct Unit {
  double alpha = 0.0;
  std::vector<double> w;
  double b = 0.0;
};

// g(x) = sum_j alpha_j sigma(w_j . x + b_j), one hidden layer.
struct ShallowNetwork {
  std::vector<Unit> units;
  Activation activation;
  int dimension = 1;
};

double net_eval(const ShallowNetwork& g, std::span<const double> x);
double net_eval(const ShallowNetwork& g, double x);

enum class LimitSign { Plus, Minus };

// Exact limit of g at +/-infinity from unit signs alone:
// sum_{w>0} alpha c_plus + sum_{w<0} alpha c_minus + sum_{w=0} alpha sigma(b)
// (limits swapped for the -infinity direction).
double limit_at_infinity(const ShallowNetwork& g, LimitSign sign);

struct QuantizeResult {
  ShallowNetwork network;
  double sup_error_bound = 0.0;
};

// Round every parameter to the nearest multiple of `grid`; the returned
// bound dominates sup_K |g - g'| via the activation's Lipschitz constant.
QuantizeResult quantize(const ShallowNetwork& g, double grid, const Domain& K);

// sup over a dense grid of [-1,1] of |H(x) - g(x)| for the Heaviside H;
// witnesses the >= 1/3 uniform-approximation obstruction.
double heaviside_gap_check(const ShallowNetwork& g);

// FunctionSpec view of a 1-d network (eval + limit metadata).
FunctionSpec net_function(const ShallowNetwork& g);

std::string net_to_json(const ShallowNetwork& g);
ShallowNetwork net_from_json(const std::string& text);

}  // namespace varlp
