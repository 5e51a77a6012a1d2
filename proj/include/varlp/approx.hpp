#pragma once

#include <string>
#include <vector>

#include "varlp/modular.hpp"
#include "varlp/network.hpp"

namespace varlp {

enum class ApproxVerdict { Ok, Failed, NotApproximable };

const char* to_string(ApproxVerdict v);

struct ApproxStage {
  std::string name;
  double budget = 0.0;
  double achieved = 0.0;
};

// A constructed network together with its re-measured error in the
// target norm; verdict Ok requires achieved.hi < target_eps.
struct ApproxReport {
  ShallowNetwork network;
  double target_eps = 0.0;
  NormResult achieved;
  std::vector<ApproxStage> stages;
  ApproxVerdict verdict = ApproxVerdict::Failed;
  std::string note;
};

struct BetaTracePoint {
  double beta = 0.0;
  double estimate = 0.0;
};

enum class ApproxDecision { Approximable, NotApproximable, Inconclusive };

const char* to_string(ApproxDecision v);

struct ApproximabilityCertificate {
  std::optional<double> beta;
  NormResult qnorm_at_beta;
  ApproxDecision decision = ApproxDecision::Inconclusive;
  std::vector<BetaTracePoint> beta_search_trace;
  std::string note;
};

// Uniform approximation on a compact interval: sup_[a,b] |f - g| < eps,
// verified on a dense grid.
ApproxReport approx_uniform_compact(const FunctionSpec& f, const Interval& ab,
                                    const Activation& sigma, double eps);

// Compactly supported continuous f: sup over all of R below eps,
// including the off-support leakage.
ApproxReport approx_c0(const FunctionSpec& f, const Activation& sigma, double eps);

// Exhaustion-metric approximation (Sup or L1 mode) for locally
// bounded/integrable f on R.
ApproxReport approx_metric(const FunctionSpec& f, MetricMode mode,
                           const Activation& sigma, double eps);

// Bounded-exponent pipeline: truncate to [-T,T], uniform stage with
// budget eps/2 / ||1_K||, re-measure in the Luxemburg norm.
ApproxReport approx_varlp_bounded(const FunctionSpec& f, const ExponentFunction& p,
                                  const Domain& omega, const Activation& sigma,
                                  double eps);

// Bounded f with limit beta at +infinity, unbounded p with embedding.
ApproxReport approx_bounded_with_limit(const FunctionSpec& f,
                                       const ExponentFunction& p,
                                       const Domain& omega,
                                       const Activation& sigma, double eps);

// The beta-criterion: minimize beta -> ||[f - beta 1]||_Q by golden
// section and decide approximability.
ApproximabilityCertificate approximability_test(const FunctionSpec& f,
                                                const ExponentFunction& p,
                                                const Domain& omega,
                                                double tol = 1e-3);

// Full unbounded-exponent pipeline (truncation + compact stage + limit
// stage, eps/3 budgets each).
ApproxReport approx_varlp_unbounded(const FunctionSpec& f,
                                    const ExponentFunction& p,
                                    const Domain& omega, const Activation& sigma,
                                    double eps);

}  // namespace varlp
