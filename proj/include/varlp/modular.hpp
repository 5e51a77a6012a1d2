#pragma once

#include <optional>
#include <string>

#include "varlp/domain.hpp"
#include "varlp/exponent.hpp"
#include "varlp/quadrature.hpp"

namespace varlp {

enum class Verdict { Converged, Finite, Divergent, Inconclusive };

const char* to_string(Verdict v);

// Result of evaluating the modular rho(f/lambda) = int (|f|/lambda)^p.
// `Finite` marks a certified-finite value whose tail bound is wider than
// the requested tolerance (enough for the quotient-norm predicate).
struct ModularValue {
  double value = 0.0;
  double lo = 0.0;
  double hi = 0.0;
  Verdict status = Verdict::Inconclusive;
  long cells = 0;
  double truncation_T = 0.0;
};

struct NormResult {
  double value = 0.0;
  double lo = 0.0;
  double hi = 0.0;
  Verdict status = Verdict::Inconclusive;
  long cells = 0;
  double truncation_T = 0.0;
  std::string note;

  bool converged_finite() const {
    return status == Verdict::Converged && std::isfinite(value);
  }
};

// Policy for improper integrals over unbounded domains: windows of
// doubling length; geometric window-ratio analysis decides between a
// certified tail bound, divergence evidence, and an honest
// "inconclusive".
struct SweepOptions {
  double t0 = 1.0;
  int max_windows = 80;       // reaches T ~ 2^80 * t0
  double cap = 1e12;          // partial sums past this count as divergence
  double ratio_margin = 2e-5; // window-ratio deadband around 1
  int consistency = 3;        // windows that must agree
};

ModularValue modular(const FunctionSpec& f, const ExponentFunction& p,
                     const Domain& omega, double lambda, double tol,
                     const SweepOptions& sweep = {});

NormResult luxemburg_norm(const FunctionSpec& f, const ExponentFunction& p,
                          const Domain& omega, double tol = 1e-8,
                          const SweepOptions& sweep = {});

NormResult quotient_norm(const FunctionSpec& f, const ExponentFunction& p,
                         const Domain& omega, double tol = 1e-8,
                         const SweepOptions& sweep = {});

NormResult indicator_weight(const Domain& A, const ExponentFunction& p,
                            const Domain& omega, double tol = 1e-8,
                            const SweepOptions& sweep = {});

enum class EmbeddingVerdict { Embedded, NotEmbedded, Inconclusive };

const char* to_string(EmbeddingVerdict v);

EmbeddingVerdict linf_embedding_check(const ExponentFunction& p,
                                      const Domain& omega, double tol = 1e-4);

enum class MetricMode { Sup, L1 };

// d(f,g) = sum_k 2^-k r_k / (1 + r_k) over growing cubes [-k,k]^d,
// truncated once the dropped tail is below eps_series.
double exhaustion_metric(const FunctionSpec& f, const FunctionSpec& g, int dim,
                         MetricMode mode, double eps_series = 1e-6);

}  // namespace varlp
