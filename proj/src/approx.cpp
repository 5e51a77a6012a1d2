#include "varlp/approx.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <vector>

namespace varlp {

const char* to_string(ApproxVerdict v) {
  switch (v) {
    case ApproxVerdict::Ok: return "ok";
    case ApproxVerdict::Failed: return "failed";
    case ApproxVerdict::NotApproximable: return "not_approximable";
  }
  return "?";
}

const char* to_string(ApproxDecision v) {
  switch (v) {
    case ApproxDecision::Approximable: return "approximable";
    case ApproxDecision::NotApproximable: return "not_approximable";
    case ApproxDecision::Inconclusive: return "inconclusive";
  }
  return "?";
}

namespace {

// Per-cell error of the step construction: deviation from the
// midpoint level.
double cell_step_err(const std::function<double(double)>& f, double a,
                     double b) {
  double mid = f(0.5 * (a + b));
  double worst = 0.0;
  for (int i = 0; i <= 8; ++i)
    worst = std::max(worst, std::fabs(f(a + (b - a) * i / 8.0) - mid));
  return worst;
}

// Per-cell error of piecewise-linear interpolation through the
// endpoints (second order for smooth f, so relu nets stay small).
double cell_pwl_err(const std::function<double(double)>& f, double a,
                    double b) {
  double fa = f(a), fb = f(b);
  double worst = 0.0;
  for (int i = 1; i < 8; ++i) {
    double t = i / 8.0;
    worst = std::max(worst, std::fabs(f(a + (b - a) * t) - (fa + t * (fb - fa))));
  }
  return worst;
}

// Partition [seeds.front(), seeds.back()] by bisecting cells until each
// cell's estimated construction error is below err_budget.
std::vector<double> adapt_knots(
    const std::function<double(double)>& f,
    const std::function<double(const std::function<double(double)>&, double,
                               double)>& cell_err,
    std::vector<double> seeds, double err_budget, int max_cells, bool& ok) {
  ok = true;
  std::sort(seeds.begin(), seeds.end());
  std::deque<std::pair<double, double>> work;
  // a few initial splits per seed gap so oscillation is not aliased away
  for (std::size_t i = 0; i + 1 < seeds.size(); ++i) {
    double a = seeds[i], b = seeds[i + 1];
    for (int j = 0; j < 8; ++j)
      work.push_back({a + (b - a) * j / 8.0, a + (b - a) * (j + 1) / 8.0});
  }
  std::vector<double> knots = {seeds.front()};
  int cells = 0;
  while (!work.empty()) {
    auto [a, b] = work.front();
    work.pop_front();
    double err = cell_err(f, a, b);
    if (err > err_budget) {
      double m = 0.5 * (a + b);
      if (cells + static_cast<int>(work.size()) < max_cells && m > a && m < b) {
        work.push_front({m, b});
        work.push_front({a, m});
        continue;
      }
      ok = false;
    }
    knots.push_back(b);
    ++cells;
  }
  return knots;
}

// Sup of |d| per cell: coarse scan plus local refinement around the max.
double knot_sup(const std::function<double(double)>& d,
                const std::vector<double>& knots) {
  double best = 0.0, best_x = knots.front();
  for (std::size_t i = 0; i + 1 < knots.size(); ++i) {
    double a = knots[i], b = knots[i + 1];
    for (int j = 0; j <= 16; ++j) {
      double x = a + (b - a) * j / 16.0;
      double v = std::fabs(d(x));
      if (v > best) {
        best = v;
        best_x = x;
      }
    }
  }
  double h = 0.0;
  for (std::size_t i = 0; i + 1 < knots.size(); ++i)
    h = std::max(h, (knots[i + 1] - knots[i]) / 16.0);
  double lo = knots.front(), hi = knots.back();
  for (int round = 0; round < 28; ++round) {
    h *= 0.5;
    for (double x : {best_x - h, best_x + h}) {
      if (x < lo || x > hi) continue;
      double v = std::fabs(d(x));
      if (v > best) {
        best = v;
        best_x = x;
      }
    }
  }
  return best;
}

struct StepBuild {
  ShallowNetwork net;
  double leak = 0.0;  // bound on the smooth steps' off-node leakage
  bool ok = false;
  std::string note;
};

// Step synthesis: levels at cell midpoints, one (normalized) step per
// interior knot, exact constant via a w=0 unit. For smooth sigmoids the
// steepness s is doubled until the total tail leakage
// sum |h_i| tail_bound(s*gamma) / (c+ - c-) drops under leak_budget,
// gamma = half the minimal knot gap. Steps and the constant whose total
// possible contribution is under drop_tol are omitted.
StepBuild build_step_net(const std::function<double(double)>& f,
                         const std::vector<double>& knots,
                         const Activation& sigma, double leak_budget,
                         double drop_tol) {
  StepBuild out;
  out.net.activation = sigma;
  const std::size_t n = knots.size() - 1;
  const double span = sigma.c_plus - sigma.c_minus;
  std::vector<double> level(n);
  for (std::size_t i = 0; i < n; ++i)
    level[i] = f(0.5 * (knots[i] + knots[i + 1]));

  double habs = 0.0;
  for (std::size_t i = 1; i < n; ++i) habs += std::fabs(level[i] - level[i - 1]);

  bool smooth = sigma.tag != ActivationTag::Heaviside;
  double s = 1.0;
  if (smooth && habs > 0.0) {
    double gamma = kInf;
    for (std::size_t i = 0; i + 1 < knots.size(); ++i)
      gamma = std::min(gamma, knots[i + 1] - knots[i]);
    gamma *= 0.5;
    while (habs * sigma.tail_bound(s * gamma) / std::fabs(span) > leak_budget) {
      s *= 2.0;
      if (s > 1e9) {
        out.note = "steepness budget exhausted";
        return out;
      }
    }
    out.leak = habs * sigma.tail_bound(s * gamma) / std::fabs(span);
  }

  double sum_h = 0.0;
  bool drop_steps = habs <= drop_tol;
  if (!drop_steps) {
    for (std::size_t i = 1; i < n; ++i) {
      double h = level[i] - level[i - 1];
      if (h == 0.0) continue;
      sum_h += h;
      out.net.units.push_back(Unit{h / span, {s}, -s * knots[i]});
    }
  }
  // the steps contribute c-/(c+-c-) * sum h at every point; fold it into
  // the constant so the left base level is exactly level[0]
  double C = level[0] - sigma.c_minus / span * sum_h;
  if (std::fabs(C) > drop_tol && std::fabs(C) > 0.0) {
    double s1 = sigma(1.0);
    if (s1 == 0.0) {
      // tanh-like odd activations have sigma(0)=0; sigma(1) != 0 for the
      // catalog, but guard anyway
      out.note = "cannot synthesize constant: sigma(1) = 0";
      return out;
    }
    out.net.units.push_back(Unit{C / s1, {0.0}, 1.0});
  }
  out.ok = true;
  return out;
}

// Exact piecewise-linear interpolation with relu units.
StepBuild build_pwl_net(const std::function<double(double)>& f,
                        const std::vector<double>& knots,
                        const Activation& sigma) {
  StepBuild out;
  out.net.activation = sigma;
  std::vector<double> v(knots.size());
  for (std::size_t i = 0; i < knots.size(); ++i) v[i] = f(knots[i]);
  if (v[0] != 0.0)
    out.net.units.push_back(
        Unit{v[0] < 0.0 ? -1.0 : 1.0, {0.0}, std::fabs(v[0])});
  double prev_slope = 0.0;
  for (std::size_t i = 0; i + 1 < knots.size(); ++i) {
    double slope = (v[i + 1] - v[i]) / (knots[i + 1] - knots[i]);
    double c = slope - prev_slope;
    if (c != 0.0) out.net.units.push_back(Unit{c, {1.0}, -knots[i]});
    prev_slope = slope;
  }
  out.ok = true;
  return out;
}

NormResult sup_result(double sup) {
  NormResult r;
  r.value = r.lo = r.hi = sup;
  r.status = Verdict::Converged;
  return r;
}

double norm_one(const ExponentFunction& p, const Domain& K, double tol) {
  FunctionSpec one;
  one.eval = [](double) { return 1.0; };
  one.name = "1";
  NormResult r = luxemburg_norm(one, p, K, tol);
  return r.status == Verdict::Converged ? std::max(1.0, r.hi) : kInf;
}

bool allowed_uniform_activation(const Activation& s) {
  switch (s.tag) {
    case ActivationTag::Heaviside:
    case ActivationTag::Logistic:
    case ActivationTag::Tanh:
    case ActivationTag::Relu:
    case ActivationTag::ReluPairSigmoid: return true;
  }
  return false;
}

ApproxReport uniform_core(const std::function<double(double)>& f,
                          std::vector<double> seeds, const Activation& sigma,
                          double eps) {
  ApproxReport rep;
  rep.target_eps = eps;
  rep.network.activation = sigma;
  if (!(eps > 0.0)) throw std::invalid_argument("approx: eps > 0");
  if (!allowed_uniform_activation(sigma)) {
    rep.note = "unsupported activation";
    return rep;
  }
  const bool pwl = sigma.tag == ActivationTag::Relu;
  double osc_budget = 0.5 * eps;
  double leak_budget = 0.25 * eps;
  double sup = kInf;
  for (int attempt = 0; attempt < 6; ++attempt) {
    bool grid_ok = false;
    std::vector<double> knots = adapt_knots(
        f, pwl ? cell_pwl_err : cell_step_err, seeds, osc_budget, 1 << 17,
        grid_ok);
    if (!grid_ok) {
      rep.note = "grid refinement exceeded its budget (f effectively discontinuous)";
      return rep;
    }
    StepBuild b = sigma.tag == ActivationTag::Relu
                      ? build_pwl_net(f, knots, sigma)
                      : build_step_net(f, knots, sigma, leak_budget,
                                       0.125 * eps);
    if (!b.ok) {
      rep.note = b.note;
      return rep;
    }
    ShallowNetwork net = b.net;
    sup = knot_sup([&](double x) { return f(x) - net_eval(net, x); }, knots);
    rep.network = std::move(net);
    if (sup < eps) break;
    osc_budget *= 0.5;
    leak_budget *= 0.5;
  }
  rep.stages.push_back({"uniform", eps, sup});
  rep.achieved = sup_result(sup);
  rep.verdict = sup < eps ? ApproxVerdict::Ok : ApproxVerdict::Failed;
  if (rep.verdict != ApproxVerdict::Ok && rep.note.empty())
    rep.note = "verified sup error did not reach eps";
  return rep;
}

}  // namespace

ApproxReport approx_uniform_compact(const FunctionSpec& f, const Interval& ab,
                                    const Activation& sigma, double eps) {
  if (!(ab.a < ab.b) || !ab.bounded())
    throw std::invalid_argument("approx_uniform_compact: need bounded a < b");
  return uniform_core([&f](double x) { return f.eval(x); }, {ab.a, ab.b}, sigma,
                      eps);
}

ApproxReport approx_c0(const FunctionSpec& f, const Activation& sigma,
                       double eps) {
  ApproxReport rep;
  rep.target_eps = eps;
  rep.network.activation = sigma;
  if (!(eps > 0.0)) throw std::invalid_argument("approx_c0: eps > 0");
  if (!f.support_hint) {
    rep.note = "approx_c0 needs a support_hint";
    return rep;
  }
  if (!sigma.sigmoidal() || !sigma.continuous ||
      sigma.c_plus == sigma.c_minus) {
    rep.note = "activation must be continuous, sigmoidal, non-constant";
    return rep;
  }
  double sa = f.support_hint->a, sb = f.support_hint->b;
  auto fe = [&f](double x) { return f.eval(x); };

  double osc_budget = 0.5 * eps;
  double leak_budget = 0.25 * eps;
  double sup_in = kInf, sup_out = kInf;
  for (int attempt = 0; attempt < 6; ++attempt) {
    bool grid_ok = false;
    // outermost cells sit wholly outside the support so the telescoping
    // levels start and end at exactly 0 (exact limits at +-infinity)
    std::vector<double> knots =
        adapt_knots(fe, cell_step_err, {sa - 1.0, sa, sb, sb + 1.0}, osc_budget,
                    1 << 17, grid_ok);
    if (!grid_ok) {
      rep.note = "grid refinement exceeded its budget";
      return rep;
    }
    StepBuild b = build_step_net(fe, knots, sigma, leak_budget, 0.0);
    if (!b.ok) {
      rep.note = b.note;
      return rep;
    }
    rep.network = b.net;
    const ShallowNetwork& net = rep.network;
    auto diff = [&](double x) { return f.eval(x) - net_eval(net, x); };
    sup_in = knot_sup(diff, knots);
    std::vector<double> wide;
    for (int i = 0; i <= 512; ++i)
      wide.push_back(sa - 99.0 + (sb + 99.0 - (sa - 99.0)) * i / 512.0);
    sup_out = knot_sup(diff, wide);
    if (std::max(sup_in, sup_out) < eps) break;
    osc_budget *= 0.5;
    leak_budget *= 0.5;
  }
  double sup = std::max(sup_in, sup_out);
  double lim = std::max(std::fabs(limit_at_infinity(rep.network, LimitSign::Plus)),
                        std::fabs(limit_at_infinity(rep.network, LimitSign::Minus)));
  rep.stages.push_back({"uniform", 0.5 * eps, sup_in});
  rep.stages.push_back({"tail", 0.5 * eps, std::max(sup_out, lim)});
  rep.achieved = sup_result(sup);
  rep.verdict = sup < eps && lim < eps ? ApproxVerdict::Ok : ApproxVerdict::Failed;
  if (rep.verdict != ApproxVerdict::Ok && rep.note.empty())
    rep.note = "verified sup over R did not reach eps";
  return rep;
}

ApproxReport approx_metric(const FunctionSpec& f, MetricMode mode,
                           const Activation& sigma, double eps) {
  ApproxReport rep;
  rep.target_eps = eps;
  rep.network.activation = sigma;
  if (!(eps > 0.0)) throw std::invalid_argument("approx_metric: eps > 0");
  int m = 1;
  while (std::ldexp(1.0, -m) >= 0.5 * eps) ++m;
  double delta = mode == MetricMode::Sup ? 0.5 * eps
                                         : eps / (2.0 * (2.0 * m));
  ApproxReport inner =
      approx_uniform_compact(f, {-static_cast<double>(m), static_cast<double>(m)},
                             sigma, delta);
  rep.network = inner.network;
  rep.stages.push_back({"uniform", delta, inner.achieved.value});
  rep.stages.push_back({"tail", std::ldexp(1.0, -m), std::ldexp(1.0, -m)});
  if (inner.verdict != ApproxVerdict::Ok) {
    rep.note = "uniform stage failed: " + inner.note;
    return rep;
  }
  double d = exhaustion_metric(f, net_function(rep.network), 1, mode,
                               std::min(1e-6, 0.1 * eps));
  rep.achieved = sup_result(d);
  rep.verdict = d < eps ? ApproxVerdict::Ok : ApproxVerdict::Failed;
  if (rep.verdict != ApproxVerdict::Ok)
    rep.note = "re-measured exhaustion metric did not reach eps";
  return rep;
}

namespace {

// |x| > T part of f, with the truncation boundary declared as a cut.
FunctionSpec outer_truncation(const FunctionSpec& f, double T) {
  FunctionSpec t;
  auto fe = f.eval;
  t.eval = [fe, T](double x) { return std::fabs(x) > T ? fe(x) : 0.0; };
  t.continuous = false;
  t.singular_points = f.singular_points;
  t.singular_points.push_back(T);
  t.singular_points.push_back(-T);
  t.name = f.name + "|tail";
  return t;
}

}  // namespace

ApproxReport approx_varlp_bounded(const FunctionSpec& f, const ExponentFunction& p,
                                  const Domain& omega, const Activation& sigma,
                                  double eps) {
  ApproxReport rep;
  rep.target_eps = eps;
  rep.network.activation = sigma;
  if (!(eps > 0.0)) throw std::invalid_argument("approx_varlp_bounded: eps > 0");
  if (!p.bounded) {
    rep.note = "p must be bounded (Cor 5.4 dichotomy)";
    return rep;
  }
  if (!omega.is_interval()) {
    rep.note = "interval domains only";
    return rep;
  }
  const double ntol = std::min(1e-4, eps / 20.0);

  // tail stage: certified ||f 1_{Omega \ K}|| < eps/2 with K = [-T, T]
  double T = 1.0;
  if (std::isfinite(omega.iv.a)) T = std::max(T, 2.0 * std::fabs(omega.iv.a) + 1.0);
  if (std::isfinite(omega.iv.b)) T = std::max(T, 2.0 * std::fabs(omega.iv.b) + 1.0);
  double tail_achieved = 0.0;
  if (!omega.bounded()) {
    if (!f.tail_envelope) {
      rep.note = "unbounded domain needs a tail_envelope";
      return rep;
    }
    bool certified = false;
    double best = kInf;
    int non_improving = 0;
    for (int i = 0; i < 40; ++i) {
      NormResult r = luxemburg_norm(outer_truncation(f, T), p, omega, ntol);
      if (r.status == Verdict::Converged && r.hi < 0.5 * eps) {
        tail_achieved = r.hi;
        certified = true;
        break;
      }
      double got = r.status == Verdict::Converged ? r.hi : kInf;
      if (got < best - 1e-12) {
        best = got;
        non_improving = 0;
      } else if (++non_improving >= 8) {
        break;
      }
      T *= 2.0;
    }
    if (!certified) {
      rep.note = "tail norm never certified below eps/2";
      return rep;
    }
  }
  Interval K{omega.bounded() ? omega.iv.a : std::max(omega.iv.a, -T),
             omega.bounded() ? omega.iv.b : std::min(omega.iv.b, T)};
  rep.stages.push_back({"tail", 0.5 * eps, tail_achieved});

  // singular-core stage: clamp f at height M and certify the clamp
  // excess (|f| - M)_+ -- which concentrates in shrinking
  // neighbourhoods of the declared singularities -- below eps/4, so
  // the uniform stage sees a continuous bounded target
  std::vector<double> cores;
  for (double s : f.singular_points)
    if (s > K.a && s < K.b) cores.push_back(s);
  double M = 1.0;
  bool have_core = !cores.empty();
  if (have_core) {
    bool ok = false;
    auto fe = f.eval;
    for (int round = 0; round < 40 && !ok; ++round, M *= 2.0) {
      FunctionSpec core;
      double Mc = M;
      core.eval = [fe, Mc](double x) {
        double v = std::fabs(fe(x));
        return std::isfinite(v) ? std::max(v - Mc, 0.0) : kInf;
      };
      core.continuous = false;
      core.singular_points = f.singular_points;
      core.name = f.name + "|excess";
      NormResult nc =
          luxemburg_norm(core, p, Domain::interval(K.a, K.b), ntol);
      if (nc.status == Verdict::Converged && nc.hi < 0.25 * eps) {
        rep.stages.push_back({"core", 0.25 * eps, nc.hi});
        ok = true;
        break;
      }
    }
    if (!ok) {
      rep.note = "singular core never certified below eps/4";
      return rep;
    }
  }

  // uniform stage on K with sup budget delta = budget / ||1_K||
  double nK = norm_one(p, Domain::interval(K.a, K.b), 1e-6);
  if (!std::isfinite(nK)) {
    rep.note = "||1_K|| not certified";
    return rep;
  }
  double ubudget = have_core ? 0.25 * eps : 0.5 * eps;
  double delta = ubudget / nK;
  auto fe = f.eval;
  double Mc = M;
  auto ftilde = [fe, Mc, have_core](double x) {
    double v = fe(x);
    if (!have_core) return v;
    if (!std::isfinite(v)) return v > 0.0 ? Mc : -Mc;
    return std::clamp(v, -Mc, Mc);
  };
  ApproxReport u = uniform_core(ftilde, {K.a, K.b}, sigma, delta);
  rep.network = u.network;
  rep.stages.push_back({"uniform", ubudget, u.achieved.value * nK});
  if (u.verdict != ApproxVerdict::Ok) {
    rep.note = "uniform stage failed: " + u.note;
    return rep;
  }

  // self-certification: re-measure || f - g 1_K || over Omega
  FunctionSpec res;
  const ShallowNetwork net = rep.network;
  res.eval = [fe, net, K](double x) {
    return fe(x) - (x >= K.a && x <= K.b ? net_eval(net, x) : 0.0);
  };
  res.continuous = false;
  res.singular_points = f.singular_points;
  if (!omega.bounded()) {
    res.singular_points.push_back(K.a);
    res.singular_points.push_back(K.b);
  }
  res.name = f.name + "-g";
  rep.achieved = luxemburg_norm(res, p, omega, ntol);
  rep.verdict = rep.achieved.status == Verdict::Converged &&
                        rep.achieved.hi < eps
                    ? ApproxVerdict::Ok
                    : ApproxVerdict::Failed;
  if (rep.verdict != ApproxVerdict::Ok)
    rep.note = "re-measured norm did not certify below eps";
  return rep;
}

ApproxReport approx_bounded_with_limit(const FunctionSpec& f,
                                       const ExponentFunction& p,
                                       const Domain& omega,
                                       const Activation& sigma, double eps) {
  ApproxReport rep;
  rep.target_eps = eps;
  rep.network.activation = sigma;
  if (!(eps > 0.0))
    throw std::invalid_argument("approx_bounded_with_limit: eps > 0");
  if (!omega.is_interval() || !std::isinf(omega.iv.b) ||
      !std::isfinite(omega.iv.a)) {
    rep.note = "domain must be [a, inf)";
    return rep;
  }
  if (p.bounded || !p.compactly_bounded) {
    rep.note = "p must be unbounded but bounded on compacts";
    return rep;
  }
  if (!sigma.sigmoidal() || sigma.c_plus == sigma.c_minus ||
      sigma.c_plus == 0.0) {
    rep.note = "activation must be bounded sigmoidal with c_plus != 0";
    return rep;
  }
  if (!f.limit_hint || !f.deviation_envelope) {
    rep.note = "needs limit_hint and deviation_envelope";
    return rep;
  }
  if (linf_embedding_check(p, omega) != EmbeddingVerdict::Embedded) {
    rep.note = "L^inf does not embed: Prop 5.9 hypothesis fails";
    return rep;
  }
  const double a = omega.iv.a;
  const double beta = *f.limit_hint;
  const double ntol = std::min(1e-4, eps / 20.0);

  double nOmega = norm_one(p, omega, 1e-4);
  if (!std::isfinite(nOmega)) {
    rep.note = "||1_Omega|| not certified";
    return rep;
  }
  const double delta = eps / (8.0 * nOmega);

  // one steep unit carrying the constant beta: (beta/c+) sigma(S(x-a)+S)
  double limit_err = 0.0;
  if (beta != 0.0) {
    double a0 = beta / sigma.c_plus;
    double S = 1.0;
    while (std::fabs(a0) * sigma.tail_bound(S) > delta && S < 1e9) S *= 2.0;
    limit_err = std::fabs(a0) * sigma.tail_bound(S);
    rep.network.units.push_back(Unit{a0, {S}, S * (1.0 - a)});
  }
  rep.stages.push_back({"limit", 0.25 * eps, limit_err * nOmega});

  // L with |f - beta| < delta beyond L, certified by the envelope
  double L = std::max(1.0, a);
  bool okL = false;
  for (int i = 0; i < 60; ++i) {
    if (f.deviation_envelope(L) <= delta) {
      okL = true;
      break;
    }
    L *= 2.0;
  }
  if (!okL) {
    rep.note = "deviation envelope never certified below delta";
    return rep;
  }
  double M = 2.0 * std::max(L, a + 1.0);

  // compact stage on [a, M] against f - h
  double nK = norm_one(p, Domain::interval(a, M), 1e-4);
  if (!std::isfinite(nK)) {
    rep.note = "||1_[a,M]|| not certified";
    return rep;
  }
  const ShallowNetwork h = rep.network;
  auto fe = f.eval;
  auto r = [fe, h](double x) { return fe(x) - net_eval(h, x); };
  double delta2 = 0.5 * eps / nK;
  ApproxReport u = uniform_core(r, {a, M}, sigma, delta2);
  rep.stages.push_back({"uniform", 0.5 * eps, u.achieved.value * nK});
  if (u.verdict != ApproxVerdict::Ok) {
    rep.note = "compact stage failed: " + u.note;
    return rep;
  }
  for (const Unit& unit : u.network.units) rep.network.units.push_back(unit);
  double spill =
      std::fabs(limit_at_infinity(u.network, LimitSign::Plus)) + delta2;
  rep.stages.push_back(
      {"tail", 0.25 * eps,
       (f.deviation_envelope(M) + limit_err + spill) * nOmega});

  FunctionSpec res;
  const ShallowNetwork g = rep.network;
  res.eval = [fe, g](double x) { return fe(x) - net_eval(g, x); };
  res.singular_points = f.singular_points;
  res.name = f.name + "-g";
  rep.achieved = luxemburg_norm(res, p, omega, ntol);
  rep.verdict = rep.achieved.status == Verdict::Converged &&
                        rep.achieved.hi < eps
                    ? ApproxVerdict::Ok
                    : ApproxVerdict::Failed;
  if (rep.verdict != ApproxVerdict::Ok)
    rep.note = "re-measured norm did not certify below eps";
  return rep;
}

namespace {

FunctionSpec shift_by_beta(const FunctionSpec& f, double beta) {
  FunctionSpec d;
  auto fe = f.eval;
  d.eval = [fe, beta](double x) { return fe(x) - beta; };
  d.singular_points = f.singular_points;
  d.continuous = f.continuous;
  if (f.limit_hint && f.deviation_envelope) {
    double shift = std::fabs(*f.limit_hint - beta);
    auto dev = f.deviation_envelope;
    d.tail_envelope = [dev, shift](double t) { return dev(t) + shift; };
    d.limit_hint = *f.limit_hint - beta;
    d.deviation_envelope = dev;
  } else if (f.tail_envelope) {
    auto env = f.tail_envelope;
    double ab = std::fabs(beta);
    d.tail_envelope = [env, ab](double t) { return env(t) + ab; };
  }
  d.name = f.name + "-beta";
  return d;
}

}  // namespace

ApproximabilityCertificate approximability_test(const FunctionSpec& f,
                                                const ExponentFunction& p,
                                                const Domain& omega,
                                                double tol) {
  ApproximabilityCertificate cert;
  if (!(tol > 0.0)) throw std::invalid_argument("approximability_test: tol > 0");
  if (!omega.is_interval() || !std::isinf(omega.iv.b)) {
    cert.note = "domain must be [a, inf)";
    return cert;
  }
  if (p.bounded) {
    cert.note = "p bounded: the quotient space is trivial";
    return cert;
  }
  const double qtol = 0.25 * tol;

  if (f.support_hint) {
    cert.beta = 0.0;
    cert.qnorm_at_beta = quotient_norm(f, p, omega, qtol);
    cert.beta_search_trace.push_back({0.0, cert.qnorm_at_beta.value});
    cert.decision = cert.qnorm_at_beta.status == Verdict::Converged &&
                            cert.qnorm_at_beta.hi <= tol
                        ? ApproxDecision::Approximable
                        : ApproxDecision::Inconclusive;
    cert.note = "compactly supported: quotient class of beta = 0";
    return cert;
  }
  if (linf_embedding_check(p, omega) != EmbeddingVerdict::Embedded) {
    cert.note = "L^inf does not embed";
    return cert;
  }

  // bracket seeded by tail samples over [Tmax/2, Tmax], widened by 1
  const double Tmax = std::max(2.0 * std::fabs(omega.iv.a) + 2.0, 1048576.0);
  double blo = kInf, bhi = -kInf;
  for (int i = 0; i <= 64; ++i) {
    double x = 0.5 * Tmax * std::pow(2.0, i / 64.0);
    double v = f.eval(x);
    if (!std::isfinite(v)) continue;
    blo = std::min(blo, v);
    bhi = std::max(bhi, v);
  }
  if (!(blo <= bhi)) {
    cert.note = "tail samples not finite";
    return cert;
  }
  blo -= 1.0;
  bhi += 1.0;
  const double bracket_lo = blo, bracket_hi = bhi;

  auto phi = [&](double beta) {
    NormResult r = quotient_norm(shift_by_beta(f, beta), p, omega, qtol);
    cert.beta_search_trace.push_back({beta, r.value});
    return r;
  };

  // golden section on the convex map beta -> qnorm(f - beta)
  const double kGold = 0.6180339887498949;
  double x1 = bhi - kGold * (bhi - blo);
  double x2 = blo + kGold * (bhi - blo);
  NormResult f1 = phi(x1), f2 = phi(x2);
  while (bhi - blo > 1e-4) {
    if (f1.value <= f2.value) {
      bhi = x2;
      x2 = x1;
      f2 = f1;
      x1 = bhi - kGold * (bhi - blo);
      f1 = phi(x1);
    } else {
      blo = x1;
      x1 = x2;
      f1 = f2;
      x2 = blo + kGold * (bhi - blo);
      f2 = phi(x2);
    }
  }
  double bstar = f1.value <= f2.value ? x1 : x2;
  NormResult best = f1.value <= f2.value ? f1 : f2;
  cert.beta = bstar;
  cert.qnorm_at_beta = best;

  if (best.status == Verdict::Converged && best.hi <= tol) {
    cert.decision = ApproxDecision::Approximable;
    return cert;
  }

  // certified lower bound: modular divergence at lambda across the
  // (original) bracket grid implies qnorm >= lambda for every grid beta
  double grid_lo = bracket_lo;
  double grid_hi = bracket_hi;
  double probe = 0.9 * (std::isfinite(best.lo) && best.lo > 0.0 ? best.lo
                                                                : best.value);
  if (!std::isfinite(probe) || probe <= 0.0) probe = 1.0;
  while (probe > tol) {
    bool all_divergent = true;
    for (int i = 0; i <= 16 && all_divergent; ++i) {
      double beta = grid_lo + (grid_hi - grid_lo) * i / 16.0;
      ModularValue m =
          modular(shift_by_beta(f, beta), p, omega, probe, 1e-6);
      if (m.status != Verdict::Divergent) all_divergent = false;
    }
    if (all_divergent) {
      cert.decision = ApproxDecision::NotApproximable;
      cert.qnorm_at_beta.lo = probe;
      cert.note = "modular diverges at lambda = " + std::to_string(probe) +
                  " across the beta bracket";
      return cert;
    }
    probe *= 0.5;
  }
  cert.decision = ApproxDecision::Inconclusive;
  cert.note = "no certificate either way within the probe budget";
  return cert;
}

ApproxReport approx_varlp_unbounded(const FunctionSpec& f,
                                    const ExponentFunction& p,
                                    const Domain& omega, const Activation& sigma,
                                    double eps) {
  ApproxReport rep;
  rep.target_eps = eps;
  rep.network.activation = sigma;
  if (!(eps > 0.0))
    throw std::invalid_argument("approx_varlp_unbounded: eps > 0");
  ApproximabilityCertificate cert = approximability_test(f, p, omega, 1e-3);
  if (cert.decision == ApproxDecision::NotApproximable) {
    rep.verdict = ApproxVerdict::NotApproximable;
    rep.note = "approximability_test: " + cert.note;
    return rep;
  }
  if (cert.decision != ApproxDecision::Approximable) {
    rep.note = "approximability_test inconclusive: " + cert.note;
    return rep;
  }
  const double beta = *cert.beta;
  const double a = omega.iv.a;
  const double ntol = std::min(1e-4, eps / 20.0);
  FunctionSpec d = shift_by_beta(f, beta);

  double nOmega = norm_one(p, omega, 1e-4);
  if (!std::isfinite(nOmega)) {
    rep.note = "||1_Omega|| not certified";
    return rep;
  }

  // truncation stage: || (f - beta) 1_(T,inf) || < eps/3, certified
  double T = 2.0 * std::max(1.0, std::fabs(a));
  double tail_achieved = kInf;
  {
    bool certified = false;
    double bestv = kInf;
    int non_improving = 0;
    for (int i = 0; i < 40; ++i) {
      FunctionSpec t;
      auto de = d.eval;
      double Tc = T;
      t.eval = [de, Tc](double x) { return x > Tc ? de(x) : 0.0; };
      t.continuous = false;
      t.singular_points = {T};
      if (d.tail_envelope) {
        auto env = d.tail_envelope;
        t.tail_envelope = [env, Tc](double s) { return env(std::max(s, Tc)); };
      }
      t.name = "tail";
      NormResult r = luxemburg_norm(t, p, omega, ntol);
      if (r.status == Verdict::Converged && r.hi < eps / 3.0) {
        tail_achieved = r.hi;
        certified = true;
        break;
      }
      double got = r.status == Verdict::Converged ? r.hi : kInf;
      if (got < bestv - 1e-12) {
        bestv = got;
        non_improving = 0;
      } else if (++non_improving >= 8) {
        break;
      }
      T *= 2.0;
    }
    if (!certified) {
      rep.note = "tail norm stalls above eps/3 despite qnorm ~ 0 "
                 "(truncations may not realize the quotient infimum)";
      return rep;
    }
  }
  // push T further so the compact stage's spill past T stays tiny
  if (f.deviation_envelope) {
    for (int i = 0;
         i < 20 && f.deviation_envelope(T) > eps / (12.0 * nOmega); ++i)
      T *= 2.0;
  }
  rep.stages.push_back({"tail", eps / 3.0, tail_achieved});

  // compact stage: g1 ~ (f - beta) on [a, T]
  double nK = norm_one(p, Domain::interval(a, T), 1e-4);
  if (!std::isfinite(nK)) {
    rep.note = "||1_[a,T]|| not certified";
    return rep;
  }
  double delta1 = eps / (6.0 * nK);
  auto de = d.eval;
  ApproxReport u = uniform_core([de](double x) { return de(x); }, {a, T}, sigma,
                                delta1);
  if (u.verdict != ApproxVerdict::Ok) {
    rep.note = "compact stage failed: " + u.note;
    return rep;
  }
  double spill = std::fabs(limit_at_infinity(u.network, LimitSign::Plus));
  rep.stages.push_back(
      {"uniform", eps / 3.0, u.achieved.value * nK + spill * nOmega});
  rep.network = u.network;

  // limit stage: the constant beta via Prop 5.9 on the constant function
  if (beta != 0.0) {
    FunctionSpec cb;
    cb.eval = [beta](double) { return beta; };
    cb.limit_hint = beta;
    cb.deviation_envelope = [](double) { return 0.0; };
    cb.name = "const beta";
    ApproxReport g2 = approx_bounded_with_limit(cb, p, omega, sigma, eps / 3.0);
    if (g2.verdict != ApproxVerdict::Ok) {
      rep.note = "limit stage failed: " + g2.note;
      return rep;
    }
    rep.stages.push_back({"limit", eps / 3.0, g2.achieved.hi});
    for (const Unit& unit : g2.network.units) rep.network.units.push_back(unit);
  } else {
    rep.stages.push_back({"limit", eps / 3.0, 0.0});
  }

  FunctionSpec res;
  auto fe = f.eval;
  const ShallowNetwork g = rep.network;
  res.eval = [fe, g](double x) { return fe(x) - net_eval(g, x); };
  res.singular_points = f.singular_points;
  res.name = f.name + "-g";
  rep.achieved = luxemburg_norm(res, p, omega, ntol);
  rep.verdict = rep.achieved.status == Verdict::Converged &&
                        rep.achieved.hi < eps
                    ? ApproxVerdict::Ok
                    : ApproxVerdict::Failed;
  if (rep.verdict != ApproxVerdict::Ok)
    rep.note = "re-measured norm did not certify below eps";
  return rep;
}

}  // namespace varlp
