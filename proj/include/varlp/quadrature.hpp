#pragma once

#include <functional>
#include <span>
#include <vector>

namespace varlp {

struct QuadOptions {
  double abs_tol = 1e-10;
  long max_cells = 200000;
  double overflow_cap = 1e290;  // any partial this large is treated as overflow
};

struct QuadResult {
  double value = 0.0;
  double error = 0.0;       // enclosure half-width: true value in [value-error, value+error]
  long cells = 0;
  bool overflow = false;    // integrand or partial sums blew past the cap
  bool nan_seen = false;
  bool converged = false;   // error <= abs_tol within budget
};

// Adaptive Gauss(7)/Kronrod(15) on [a,b]. Nodes are interior, so
// integrable endpoint singularities are admissible; interior singular
// points must be passed in `singular` and become cell boundaries that
// the subdivision shrinks toward.
QuadResult integrate(const std::function<double(double)>& f, double a, double b,
                     std::span<const double> singular = {},
                     const QuadOptions& opt = {});

}  // namespace varlp
