#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <random>
#include <vector>

// Shared helpers for the test suites. The integration oracle here is a
// plain composite Simpson rule, deliberately independent of the
// adaptive Gauss-Kronrod engine it is used to check.

namespace testutil {

inline std::mt19937_64 rng(uint64_t seed) { return std::mt19937_64(seed); }

inline double urand(std::mt19937_64& g, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(g);
}

// Composite Simpson on [a,b] with n (even) panels.
inline double simpson(const std::function<double(double)>& f, double a, double b,
                      int n = 20000) {
  if (n % 2) ++n;
  double h = (b - a) / n;
  double s = f(a) + f(b);
  for (int i = 1; i < n; ++i) s += f(a + i * h) * (i % 2 ? 4.0 : 2.0);
  return s * h / 3.0;
}

// Classical L^q norm oracle, (int |f|^q)^(1/q).
inline double lp_norm_oracle(const std::function<double(double)>& f, double a,
                             double b, double q, int n = 20000) {
  double m = simpson([&](double x) { return std::pow(std::fabs(f(x)), q); }, a, b, n);
  return std::pow(m, 1.0 / q);
}

// Random piecewise polynomial on [0,1]: `pieces` cells, cubic on each.
struct PiecewisePoly {
  std::vector<double> knots;                 // size pieces+1
  std::vector<std::array<double, 4>> coeff;  // per cell

  double operator()(double x) const {
    std::size_t i = 0;
    while (i + 2 < knots.size() && x > knots[i + 1]) ++i;
    double t = x - knots[i];
    const auto& c = coeff[i];
    return ((c[3] * t + c[2]) * t + c[1]) * t + c[0];
  }

  // Exact antiderivative, summed cell by cell.
  double integral() const {
    double s = 0.0;
    for (std::size_t i = 0; i + 1 < knots.size(); ++i) {
      double t = knots[i + 1] - knots[i];
      const auto& c = coeff[i];
      s += (((c[3] * t / 4 + c[2] / 3) * t + c[1] / 2) * t + c[0]) * t;
    }
    return s;
  }
};

// Simpson applied cell-by-cell between knots, so jump discontinuities
// never sit inside a panel. Cell endpoints are nudged inward so a
// piecewise evaluator is always sampled on the cell it belongs to.
inline double simpson_cells(const std::function<double(double)>& f,
                            const std::vector<double>& knots, int n_per_cell = 2000) {
  double s = 0.0;
  for (std::size_t i = 0; i + 1 < knots.size(); ++i) {
    double a = knots[i], b = knots[i + 1];
    double nudge = 1e-9 * (b - a);
    auto g = [&](double x) { return f(std::clamp(x, a + nudge, b - nudge)); };
    s += simpson(g, a, b, n_per_cell);
  }
  return s;
}

inline double lp_norm_oracle_cells(const std::function<double(double)>& f,
                                   const std::vector<double>& knots, double q,
                                   int n_per_cell = 2000) {
  double m = simpson_cells([&](double x) { return std::pow(std::fabs(f(x)), q); },
                           knots, n_per_cell);
  return std::pow(m, 1.0 / q);
}

inline PiecewisePoly random_piecewise_poly(std::mt19937_64& g, int pieces = 4) {
  PiecewisePoly p;
  p.knots.push_back(0.0);
  for (int i = 1; i < pieces; ++i) p.knots.push_back(urand(g, 0.0, 1.0));
  p.knots.push_back(1.0);
  std::sort(p.knots.begin(), p.knots.end());
  for (int i = 0; i < pieces; ++i) {
    std::array<double, 4> c;
    for (auto& v : c) v = urand(g, -2.0, 2.0);
    p.coeff.push_back(c);
  }
  return p;
}

}  // namespace testutil
