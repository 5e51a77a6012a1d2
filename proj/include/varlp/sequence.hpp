#pragma once

#include <functional>
#include <optional>
#include <string>

#include "varlp/approx.hpp"
#include "varlp/exponent.hpp"
#include "varlp/modular.hpp"

namespace varlp {

// A real sequence x(1), x(2), ... with the metadata the tail
// certificates rely on: `deviation_envelope(T)` bounds |x(k) - limit|
// for all k >= T and must be nonincreasing.
struct SequenceSpec {
  std::function<double(long)> eval;
  std::optional<double> limit_hint;
  std::optional<long> finite_support;
  std::function<double(double)> deviation_envelope;
  std::string name;

  double operator()(long k) const { return eval(k); }
};

SequenceSpec seq_from_expr(const std::string& text);
SequenceSpec seq_zero();
SequenceSpec seq_unit(long index, double value = 1.0);
SequenceSpec seq_constant(double c);

struct SeqOptions {
  long first_block = 32;
  long max_terms = 1 << 21;
  double cap = 1e12;
  double margin = 1e-9;  // deadband for the envelope ratio at 1
};

// rho(x/lambda) = sum_k (|x(k)|/lambda)^{p(k)}; partial sums with an
// envelope-certified tail (the sum beyond T is dominated by the integral
// of the nonincreasing envelope), divergence evidence from a lower
// envelope or the running cap, else inconclusive.
ModularValue seq_modular(const SequenceSpec& x, const ExponentFunction& p,
                         double lambda, double tol, const SeqOptions& opt = {});

NormResult seq_norm(const SequenceSpec& x, const ExponentFunction& p,
                    double tol = 1e-8, const SeqOptions& opt = {});

// Prop-5.7-style approximation of a convergent sequence by a shallow
// network evaluated on the integers: one unit for the limit plus steep
// bump pairs correcting x(k) for k <= N_eps.
ApproxReport seq_approx_convergent(const SequenceSpec& x,
                                   const ExponentFunction& p,
                                   const Activation& sigma, double eps,
                                   const SeqOptions& opt = {});

}  // namespace varlp
