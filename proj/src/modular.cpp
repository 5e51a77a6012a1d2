#include "varlp/modular.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "varlp/detail/bisect.hpp"

namespace varlp {

using detail::BisectCtx;
using detail::bisect_norm;
using detail::kLambdaCeil;
using detail::kLambdaFloor;
using detail::Pred;

namespace {

std::vector<double> singular_in(const FunctionSpec& f, double lo, double hi) {
  std::vector<double> out;
  for (double s : f.singular_points)
    if (s > lo && s < hi) out.push_back(s);
  return out;
}

// One window integral, refined until its own relative error is small
// enough for the ratio analysis.
QuadResult window_integral(const std::function<double(double)>& g, double lo,
                           double hi, double tol,
                           std::span<const double> singular) {
  QuadOptions opt;
  opt.abs_tol = std::max(tol / 16.0, 1e-300);
  opt.max_cells = 20000;
  QuadResult q = integrate(g, lo, hi, singular, opt);
  if (!q.overflow && !q.nan_seen && q.value != 0.0 &&
      q.error > 1e-7 * std::fabs(q.value)) {
    opt.abs_tol = std::max(1e-7 * std::fabs(q.value), 1e-300);
    opt.max_cells = 60000;
    QuadResult q2 = integrate(g, lo, hi, singular, opt);
    q2.cells += q.cells;
    return q2;
  }
  return q;
}

struct TailVerdict {
  Verdict status = Verdict::Inconclusive;
  double tail_bound = kInf;
};

// Geometric analysis of doubling-window increments.
TailVerdict classify_tail(const std::vector<double>& deltas, double tol,
                          const SweepOptions& sw, bool at_end) {
  const int m = sw.consistency;
  const int n = static_cast<int>(deltas.size());
  TailVerdict out;
  if (n < m + 1) return out;
  auto ratio_at = [&](int j) {
    double prev = deltas[j - 1], cur = deltas[j];
    if (prev == 0.0) return (cur == 0.0) ? 0.0 : kInf;
    return cur / prev;
  };
  double rmax = 0.0, rmin = kInf;
  for (int j = n - m; j < n; ++j) {
    double r = ratio_at(j);
    rmax = std::max(rmax, r);
    rmin = std::min(rmin, r);
  }
  double last = deltas.back();
  if (rmax <= 1.0 - sw.ratio_margin) {
    // A geometric tail bound needs the ratios to be stable or shrinking.
    // Rising ratios (sub-logarithmic exponents produce them, creeping
    // from near 0 up past 1) mean the current rmax says nothing about
    // later windows, so ask for at most 5% relative growth across the
    // last 8 window ratios before certifying. Together with the window
    // budget and the lambda bracket ceiling this rules out a creeping
    // tail that would pass the guard while still below ratio 1.
    int g = std::min(n - 1, 8);
    double r_old = ratio_at(n - g);
    double r_new = ratio_at(n - 1);
    bool stable = (r_new == 0.0) || (r_new <= 1.05 * r_old + 1e-12);
    if (stable) {
      double tail = (rmax > 0.0) ? last * rmax / (1.0 - rmax) : 0.0;
      out.tail_bound = tail;
      out.status = (tail <= tol) ? Verdict::Converged : Verdict::Finite;
    }
    return out;
  }
  if (at_end) {
    out.status =
        (rmin >= 1.0 - sw.ratio_margin) ? Verdict::Divergent : Verdict::Inconclusive;
    return out;
  }
  return out;
}

}  // namespace

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::Converged: return "converged";
    case Verdict::Finite: return "finite";
    case Verdict::Divergent: return "divergent";
    case Verdict::Inconclusive: return "inconclusive";
  }
  return "?";
}

const char* to_string(EmbeddingVerdict v) {
  switch (v) {
    case EmbeddingVerdict::Embedded: return "embedded";
    case EmbeddingVerdict::NotEmbedded: return "not_embedded";
    case EmbeddingVerdict::Inconclusive: return "inconclusive";
  }
  return "?";
}

ModularValue modular(const FunctionSpec& f, const ExponentFunction& p,
                     const Domain& omega, double lambda, double tol,
                     const SweepOptions& sweep) {
  if (!(lambda > 0.0)) throw std::invalid_argument("modular: lambda > 0");
  if (!(tol > 0.0)) throw std::invalid_argument("modular: tol > 0");

  ModularValue out;

  if (omega.kind == Domain::Kind::BoxKind) {
    if (!f.eval_nd) throw std::invalid_argument("modular: box domain needs eval_nd");
    auto pn = p.eval_nd;
    auto p1 = p.eval;
    auto fe = f.eval_nd;
    auto F = [fe, pn, p1, lambda](std::span<const double> x) {
      double px = pn ? pn(x) : p1(x[0]);
      return std::pow(std::fabs(fe(x)) / lambda, px);
    };
    std::vector<double> pt(omega.box.size(), 0.0);
    bool ok = true;
    long cells = 0;
    double v = 0.0;
    {
      // outer tolerance; inner levels tighten per unit length
      std::function<double(std::span<const double>)> Fc = F;
      struct Rec {
        const std::function<double(std::span<const double>)>& F;
        const std::vector<Interval>& box;
        long& cells;
        bool& ok;
        double run(std::size_t i, std::vector<double>& pt, double tl) {
          auto line = [&](double x) -> double {
            pt[i] = x;
            if (i + 1 == box.size()) return F(pt);
            return run(i + 1, pt, tl / (2.0 * box[i].length() + 2.0));
          };
          QuadOptions opt;
          opt.abs_tol = tl;
          opt.max_cells = 4000;
          QuadResult q = integrate(line, box[i].a, box[i].b, {}, opt);
          cells += q.cells;
          if (!q.converged) ok = false;
          return q.value;
        }
      } rec{Fc, omega.box, cells, ok};
      v = rec.run(0, pt, tol);
    }
    out.value = v;
    out.lo = v - 2.0 * tol;
    out.hi = v + 2.0 * tol;
    out.cells = cells;
    out.status = ok ? Verdict::Converged : Verdict::Inconclusive;
    if (!std::isfinite(v)) out.status = Verdict::Divergent;
    return out;
  }

  auto fe = f.eval;
  auto pe = p.eval;
  auto integrand = [fe, pe, lambda](double x) {
    double fx = std::fabs(fe(x));
    if (fx == 0.0) return 0.0;
    return std::pow(fx / lambda, pe(x));
  };

  double lo = omega.iv.a, hi = omega.iv.b;
  if (f.support_hint) {
    lo = std::max(lo, f.support_hint->a);
    hi = std::min(hi, f.support_hint->b);
    if (!(lo < hi)) {  // f vanishes a.e. on omega
      out.status = Verdict::Converged;
      return out;
    }
  }

  if (std::isfinite(lo) && std::isfinite(hi)) {
    QuadOptions opt;
    opt.abs_tol = tol;
    QuadResult q = integrate(integrand, lo, hi, singular_in(f, lo, hi), opt);
    out.cells = q.cells;
    out.truncation_T = hi;
    if (q.overflow || q.value > sweep.cap) {
      out.status = Verdict::Divergent;
      out.value = out.lo = out.hi = kInf;
    } else if (q.nan_seen || !q.converged) {
      out.status = Verdict::Inconclusive;
      out.value = q.value;
      out.lo = q.value - q.error;
      out.hi = q.value + q.error;
    } else {
      out.status = Verdict::Converged;
      out.value = q.value;
      out.lo = std::max(0.0, q.value - q.error);
      out.hi = q.value + q.error;
    }
    return out;
  }

  // Unbounded interval: core + doubling windows per unbounded side.
  const double t0 = sweep.t0;
  bool up = std::isinf(hi);
  bool down = std::isinf(lo);
  double base_lo = down ? (up ? -t0 : hi - t0) : lo;
  double base_hi = up ? (down ? t0 : lo + t0) : hi;

  double sum = 0.0, err = 0.0;
  long cells = 0;
  bool overflow = false, nan_seen = false;

  auto add = [&](double wlo, double whi) {
    QuadResult q = window_integral(integrand, wlo, whi, tol, singular_in(f, wlo, whi));
    cells += q.cells;
    if (q.overflow) overflow = true;
    if (q.nan_seen) nan_seen = true;
    sum += q.value;
    err += q.error;
    return q.value;
  };

  add(base_lo, base_hi);
  std::vector<double> deltas;
  Verdict status = Verdict::Inconclusive;
  double tail_bound = kInf;
  double T = t0;

  for (int k = 0; k < sweep.max_windows && !overflow && !nan_seen; ++k) {
    double delta = 0.0;
    double w = t0 * std::ldexp(1.0, k);  // window [T, 2T) offsets
    if (up) delta += add(base_hi + w - t0, base_hi + 2 * w - t0);
    if (down) delta += add(base_lo - 2 * w + t0, base_lo - w + t0);
    T = 2 * w;
    deltas.push_back(delta);
    if (sum > sweep.cap) {
      overflow = true;
      break;
    }
    TailVerdict tv = classify_tail(deltas, tol, sweep, k + 1 == sweep.max_windows);
    if (tv.status != Verdict::Inconclusive) {
      status = tv.status;
      tail_bound = tv.tail_bound;
      // once the tail looks geometric, keep doubling until the bound is
      // below tol (Converged) rather than settling for Finite
      if (status != Verdict::Finite) break;
    } else if (k + 1 == sweep.max_windows && status == Verdict::Inconclusive) {
      status = tv.status;
    }
  }

  out.cells = cells;
  out.truncation_T = T;
  if (overflow) {
    out.status = Verdict::Divergent;
    out.value = out.lo = out.hi = kInf;
    return out;
  }
  if (nan_seen) {
    out.status = Verdict::Inconclusive;
    out.value = sum;
    out.lo = sum - err;
    out.hi = kInf;
    return out;
  }
  out.status = status;
  out.value = sum;
  out.lo = std::max(0.0, sum - err);
  out.hi = (status == Verdict::Converged || status == Verdict::Finite)
               ? sum + err + tail_bound
               : kInf;
  if (status == Verdict::Divergent) out.value = out.lo = out.hi = kInf;
  return out;
}

NormResult luxemburg_norm(const FunctionSpec& f, const ExponentFunction& p,
                          const Domain& omega, double tol,
                          const SweepOptions& sweep) {
  if (!(tol > 0.0)) throw std::invalid_argument("luxemburg_norm: tol > 0");
  BisectCtx ctx;
  const double ptol = std::min(1e-9, 0.01 * tol);

  // a.e.-zero detection
  {
    ModularValue m0 = modular(f, p, omega, kLambdaFloor, ptol, sweep);
    ctx.cells += m0.cells;
    if ((m0.status == Verdict::Converged || m0.status == Verdict::Finite) &&
        m0.hi == 0.0) {
      NormResult out;
      out.value = 0.0;
      out.lo = out.hi = 0.0;
      out.status = Verdict::Converged;
      out.cells = ctx.cells;
      out.note = "a.e.-zero";
      return out;
    }
  }

  double last_T = 0.0;
  auto q = [&](double lam) -> Pred {
    for (double t : {ptol, ptol * 1e-3}) {
      ModularValue m = modular(f, p, omega, lam, t, sweep);
      ctx.cells += m.cells;
      last_T = std::max(last_T, m.truncation_T);
      if (m.status == Verdict::Divergent) return Pred::False;
      if (m.status == Verdict::Inconclusive) return Pred::Inconclusive;
      if (m.hi <= 1.0) return Pred::True;
      if (m.lo > 1.0) return Pred::False;
      // enclosure straddles 1: retry tighter, then treat as boundary
    }
    ctx.boundary = true;
    return Pred::Straddle;
  };

  NormResult out = bisect_norm(q, tol, ctx);
  out.cells = ctx.cells;
  out.truncation_T = last_T;
  if (ctx.boundary && out.note.empty()) out.note = "modular ~ 1 at the boundary";
  return out;
}

namespace {

// Finiteness shortcut for the quotient predicate. The modular itself can
// be finite yet astronomically large (base > 1 over a long prefix), so
// magnitude-based evidence fails; what decides finiteness is the tail.
// If a tail envelope certifies |f|/lambda <= r < 1 beyond some T and
// int_T^inf r^p(x) dx is finite, the modular is finite.
bool envelope_certifies_finite(const FunctionSpec& f, const ExponentFunction& p,
                               const Domain& omega, double lambda,
                               const SweepOptions& sweep, long& cells) {
  if (!f.tail_envelope || !omega.is_interval() || !std::isinf(omega.iv.b))
    return false;
  if (!f.continuous && !(f.tail_envelope && std::isfinite(f.tail_envelope(omega.iv.a))))
    return false;  // need the finite part to be locally integrable
  double T = std::max(omega.iv.a, 1.0);
  double r = kInf;
  for (int k = 0; k < 48; ++k) {
    double E = f.tail_envelope(T);
    if (E / lambda <= 0.75) {
      r = E / lambda;
      break;
    }
    T *= 2.0;
  }
  if (!(r <= 0.75)) return false;
  FunctionSpec level;
  level.eval = [r](double) { return r; };
  level.name = "level";
  ModularValue tail =
      modular(level, p, Domain::interval(T, kInf), 1.0, 1e-6, sweep);
  cells += tail.cells;
  return tail.status == Verdict::Converged || tail.status == Verdict::Finite;
}

}  // namespace

NormResult quotient_norm(const FunctionSpec& f, const ExponentFunction& p,
                         const Domain& omega, double tol,
                         const SweepOptions& sweep) {
  if (!(tol > 0.0)) throw std::invalid_argument("quotient_norm: tol > 0");
  if (p.bounded) {
    NormResult out;
    out.value = out.lo = out.hi = 0.0;
    out.status = Verdict::Converged;
    out.note = "p bounded: compactly supported functions are dense";
    return out;
  }
  BisectCtx ctx;
  const double ptol = 1e-6;  // only finiteness matters here
  double last_T = 0.0;
  auto q = [&](double lam) -> Pred {
    if (envelope_certifies_finite(f, p, omega, lam, sweep, ctx.cells))
      return Pred::True;
    ModularValue m = modular(f, p, omega, lam, ptol, sweep);
    ctx.cells += m.cells;
    last_T = std::max(last_T, m.truncation_T);
    if (m.status == Verdict::Divergent) return Pred::False;
    if (m.status == Verdict::Inconclusive) return Pred::Inconclusive;
    return Pred::True;
  };
  NormResult out = bisect_norm(q, tol, ctx);
  out.cells = ctx.cells;
  out.truncation_T = last_T;
  return out;
}

NormResult indicator_weight(const Domain& A, const ExponentFunction& p,
                            const Domain& omega, double tol,
                            const SweepOptions& sweep) {
  if (!A.is_interval())
    throw std::invalid_argument("indicator_weight: interval sets only");
  // A bounded set with p finite on compacts lies in every ball of the
  // quotient: the modular of 1_A / lambda is finite for all lambda > 0.
  if (std::isfinite(A.iv.a) && std::isfinite(A.iv.b) && p.compactly_bounded) {
    NormResult out;
    out.value = out.lo = out.hi = 0.0;
    out.status = Verdict::Converged;
    out.note = "bounded set: weight 0";
    return out;
  }
  FunctionSpec f = fn_indicator(A.iv);
  return quotient_norm(f, p, omega, tol, sweep);
}

EmbeddingVerdict linf_embedding_check(const ExponentFunction& p,
                                      const Domain& omega, double tol) {
  if (p.bounded)
    throw std::invalid_argument("linf_embedding_check: p must be unbounded");
  NormResult w = indicator_weight(omega, p, omega, tol);
  if (w.status == Verdict::Converged && std::isfinite(w.value))
    return EmbeddingVerdict::Embedded;
  if (w.status == Verdict::Divergent) return EmbeddingVerdict::NotEmbedded;
  return EmbeddingVerdict::Inconclusive;
}

namespace {

double cube_sup(const FunctionSpec& f, const FunctionSpec& g, int dim, double k) {
  auto diff1 = [&](double x) { return std::fabs(f.eval(x) - g.eval(x)); };
  if (dim == 1) {
    const int n = 8192;
    double best = 0.0, best_x = -k;
    for (int i = 0; i <= n; ++i) {
      double x = -k + 2.0 * k * i / n;
      double v = diff1(x);
      if (!std::isfinite(v)) throw EvaluationError("exhaustion_metric: non-finite sup");
      if (v > best) {
        best = v;
        best_x = x;
      }
    }
    double h = 2.0 * k / n;
    for (int round = 0; round < 30; ++round) {
      h *= 0.5;
      for (double x : {best_x - h, best_x + h}) {
        if (x < -k || x > k) continue;
        double v = diff1(x);
        if (v > best) {
          best = v;
          best_x = x;
        }
      }
    }
    return best;
  }
  if (!f.eval_nd || !g.eval_nd)
    throw std::invalid_argument("exhaustion_metric: d >= 2 needs eval_nd");
  const int n = dim == 2 ? 256 : 48;
  std::vector<double> pt(dim, 0.0);
  double best = 0.0;
  std::vector<int> idx(dim, 0);
  while (true) {
    for (int j = 0; j < dim; ++j) pt[j] = -k + 2.0 * k * idx[j] / n;
    double v = std::fabs(f.eval_nd(pt) - g.eval_nd(pt));
    best = std::max(best, v);
    int j = 0;
    for (; j < dim; ++j) {
      if (++idx[j] <= n) break;
      idx[j] = 0;
    }
    if (j == dim) break;
  }
  return best;
}

double cube_l1(const FunctionSpec& f, const FunctionSpec& g, int dim, double k,
               double tol) {
  if (dim == 1) {
    auto diff1 = [&](double x) { return std::fabs(f.eval(x) - g.eval(x)); };
    std::vector<double> sing = f.singular_points;
    sing.insert(sing.end(), g.singular_points.begin(), g.singular_points.end());
    QuadOptions opt;
    opt.abs_tol = tol;
    QuadResult q = integrate(diff1, -k, k, sing, opt);
    if (q.overflow || q.nan_seen)
      throw EvaluationError("exhaustion_metric: L1 norm failed on cube");
    return q.value;
  }
  if (!f.eval_nd || !g.eval_nd)
    throw std::invalid_argument("exhaustion_metric: d >= 2 needs eval_nd");
  std::vector<Interval> box(dim, Interval{-k, k});
  auto diff = [&](std::span<const double> x) {
    return std::fabs(f.eval_nd(x) - g.eval_nd(x));
  };
  struct Rec {
    decltype(diff)& F;
    const std::vector<Interval>& box;
    double run(std::size_t i, std::vector<double>& pt, double tl) {
      auto line = [&](double x) -> double {
        pt[i] = x;
        if (i + 1 == box.size()) return F(pt);
        return run(i + 1, pt, tl / (2.0 * box[i].length() + 2.0));
      };
      QuadOptions opt;
      opt.abs_tol = tl;
      opt.max_cells = 2000;
      return integrate(line, box[i].a, box[i].b, {}, opt).value;
    }
  } rec{diff, box};
  std::vector<double> pt(dim, 0.0);
  return rec.run(0, pt, tol);
}

}  // namespace

double exhaustion_metric(const FunctionSpec& f, const FunctionSpec& g, int dim,
                         MetricMode mode, double eps_series) {
  if (!(eps_series > 0.0))
    throw std::invalid_argument("exhaustion_metric: eps_series > 0");
  int m = std::max(1, static_cast<int>(std::ceil(std::log2(1.0 / eps_series))));
  double total = 0.0;
  for (int k = 1; k <= m; ++k) {
    double r = (mode == MetricMode::Sup)
                   ? cube_sup(f, g, dim, k)
                   : cube_l1(f, g, dim, k, eps_series / 4.0);
    total += std::ldexp(r / (1.0 + r), -k);
  }
  return total;
}

}  // namespace varlp
