#pragma once

#include "varlp/modular.hpp"

// Shared bisection core for the Luxemburg-style norms (integral and
// sequence variants): a monotone predicate in lambda with four-state
// outcomes and 0 / +inf sentinels at the bracket limits.

namespace varlp::detail {

constexpr double kLambdaFloor = 9.094947017729282e-13;  // 2^-40
constexpr double kLambdaCeil = 1.152921504606847e18;    // 2^60

enum class Pred { True, False, Straddle, Inconclusive };

struct BisectCtx {
  long cells = 0;
  bool saw_inconclusive = false;
  bool boundary = false;
};

// Bracketed bisection on a monotone predicate Q(lambda) that flips from
// false to true as lambda grows. Returns [lo, hi] with Q(lo)=false,
// Q(hi)=true, or the 0 / +inf sentinels.
template <class Q>
NormResult bisect_norm(Q&& q, double tol, BisectCtx& ctx) {
  NormResult out;
  auto eval = [&](double lam) -> Pred { return q(lam); };

  double lam = 1.0;
  Pred p1 = eval(lam);
  if (p1 == Pred::Inconclusive) {
    out.status = Verdict::Inconclusive;
    out.note = "modular inconclusive at lambda=1";
    return out;
  }
  double lo, hi;
  if (p1 == Pred::True || p1 == Pred::Straddle) {
    hi = 1.0;
    lo = 0.5;
    while (true) {
      Pred pl = eval(lo);
      if (pl == Pred::False) break;
      if (pl == Pred::Inconclusive) {
        out.status = Verdict::Inconclusive;
        out.lo = 0.0;
        out.hi = hi;
        out.note = "modular inconclusive while shrinking bracket";
        return out;
      }
      hi = lo;
      lo *= 0.5;
      if (lo < kLambdaFloor) {
        out.value = 0.0;
        out.lo = 0.0;
        out.hi = hi;
        out.status = Verdict::Converged;
        out.note = "a.e.-zero (predicate holds down to 2^-40)";
        return out;
      }
    }
  } else {
    lo = 1.0;
    hi = 2.0;
    while (true) {
      Pred ph = eval(hi);
      if (ph == Pred::True || ph == Pred::Straddle) break;
      if (ph == Pred::Inconclusive) {
        out.status = Verdict::Inconclusive;
        out.lo = lo;
        out.hi = kInf;
        out.note = "modular inconclusive while expanding bracket";
        return out;
      }
      lo = hi;
      hi *= 2.0;
      if (hi > kLambdaCeil) {
        out.value = out.lo = out.hi = kInf;
        out.status = Verdict::Divergent;
        out.note = "no finite lambda admits the predicate";
        return out;
      }
    }
  }

  while (hi - lo > tol) {
    double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    Pred pm = eval(mid);
    if (pm == Pred::Inconclusive) {
      out.value = 0.5 * (lo + hi);
      out.lo = lo;
      out.hi = hi;
      out.status = Verdict::Inconclusive;
      out.note = "modular inconclusive inside final bracket";
      return out;
    }
    if (pm == Pred::True || pm == Pred::Straddle)
      hi = mid;
    else
      lo = mid;
  }
  out.value = 0.5 * (lo + hi);
  out.lo = lo;
  out.hi = hi;
  out.status = Verdict::Converged;
  return out;
}

}  // namespace varlp::detail
