#include <doctest.h>

#include <cmath>

#include "varlp/modular.hpp"
#include "test_util.hpp"

using namespace varlp;

namespace {

FunctionSpec inv_sqrt() {
  FunctionSpec f;
  f.eval = [](double x) { return 1.0 / std::sqrt(std::fabs(x)); };
  f.singular_points = {0.0};
  f.name = "inv-sqrt";
  return f;
}

// 1/sqrt|x| restricted to |x| > 1 (the paper's split-domain view of the
// same function).
FunctionSpec inv_sqrt_outer() {
  FunctionSpec f;
  f.eval = [](double x) {
    return std::fabs(x) > 1.0 ? 1.0 / std::sqrt(std::fabs(x)) : 0.0;
  };
  f.continuous = false;
  f.name = "inv-sqrt-outer";
  return f;
}

FunctionSpec atan_minus_limit() {
  FunctionSpec f;
  f.eval = [](double x) { return std::atan(x) - M_PI / 2.0; };
  f.limit_hint = 0.0;
  f.tail_envelope = [](double t) { return 1.0 / std::max(t, 1.0); };
  f.name = "atan-pi/2";
  return f;
}

}  // namespace

TEST_CASE("modular worked values (bounded domains)") {
  FunctionSpec ind = fn_indicator({0.0, 2.0});
  auto m = modular(ind, make_constant_exponent(3.0), Domain::interval(-5.0, 5.0),
                   1.0, 1e-10);
  CHECK(m.status == Verdict::Converged);
  CHECK(m.value == doctest::Approx(2.0).epsilon(1e-8));

  auto m2 = modular(inv_sqrt(), make_constant_exponent(1.0),
                    Domain::interval(-1.0, 1.0), 1.0, 1e-8);
  CHECK(m2.status == Verdict::Converged);
  CHECK(m2.value == doctest::Approx(4.0).epsilon(1e-6));
}

TEST_CASE("modular on the unbounded split domain") {
  auto m4 = modular(inv_sqrt_outer(), make_constant_exponent(4.0),
                    Domain::interval(-kInf, kInf), 1.0, 1e-8);
  CHECK(m4.status == Verdict::Converged);
  CHECK(m4.value == doctest::Approx(2.0).epsilon(1e-6));

  auto m1 = modular(inv_sqrt_outer(), make_constant_exponent(1.0),
                    Domain::interval(-kInf, kInf), 1.0, 1e-8);
  CHECK(m1.status == Verdict::Divergent);
}

TEST_CASE("modular is monotone in lambda") {
  FunctionSpec f;
  f.eval = [](double x) { return std::exp(-std::fabs(x)); };
  f.tail_envelope = [](double t) { return std::exp(-t); };
  auto p = make_constant_exponent(2.0);
  Domain om = Domain::interval(-kInf, kInf);
  double prev = kInf;
  for (double lam : {0.25, 0.5, 1.0, 2.0, 4.0, 8.0}) {
    auto m = modular(f, p, om, lam, 1e-9);
    REQUIRE(m.status == Verdict::Converged);
    CHECK(m.value <= prev + 1e-9);
    prev = m.value;
  }
}

TEST_CASE("luxemburg_norm worked values") {
  // |A| = 1 gives norm 1 for any exponent
  FunctionSpec ind = fn_indicator({1.0, 2.0});
  auto p2 = make_constant_exponent(2.0);
  auto r = luxemburg_norm(ind, p2, Domain::interval(0.0, 10.0), 1e-8);
  CHECK(r.status == Verdict::Converged);
  CHECK(r.value == doctest::Approx(1.0).epsilon(1e-6));

  auto plin = make_preset(ExponentPreset::Linear);
  auto r2 = luxemburg_norm(ind, plin, Domain::interval(1.0, 10.0), 1e-8);
  CHECK(r2.value == doctest::Approx(1.0).epsilon(1e-6));

  FunctionSpec fx;
  fx.eval = [](double x) { return x; };
  auto r3 = luxemburg_norm(fx, p2, Domain::interval(0.0, 1.0), 1e-9);
  CHECK(r3.value == doctest::Approx(1.0 / std::sqrt(3.0)).epsilon(1e-7));

  FunctionSpec big = fn_indicator({0.0, 16.0});
  auto r4 = luxemburg_norm(big, make_constant_exponent(4.0),
                           Domain::interval(-20.0, 20.0), 1e-9);
  CHECK(r4.value == doctest::Approx(2.0).epsilon(1e-7));
}

TEST_CASE("luxemburg_norm of zero is exactly zero") {
  FunctionSpec z;
  z.eval = [](double) { return 0.0; };
  auto r = luxemburg_norm(z, make_constant_exponent(2.0),
                          Domain::interval(0.0, 1.0), 1e-8);
  CHECK(r.value == 0.0);
  CHECK(r.status == Verdict::Converged);
}

TEST_CASE("constant-exponent equivalence with the classical Lp oracle") {
  auto g = testutil::rng(123);
  for (double q : {1.0, 2.0, 4.0}) {
    auto p = make_constant_exponent(q);
    for (int i = 0; i < 6; ++i) {
      auto poly = testutil::random_piecewise_poly(g);
      FunctionSpec f;
      f.eval = [&poly](double x) { return poly(x); };
      f.continuous = false;
      f.singular_points.assign(poly.knots.begin() + 1, poly.knots.end() - 1);
      auto r = luxemburg_norm(f, p, Domain::interval(0.0, 1.0), 1e-9);
      double oracle = testutil::lp_norm_oracle_cells(
          [&poly](double x) { return poly(x); }, poly.knots, q);
      REQUIRE(r.status == Verdict::Converged);
      CHECK(r.value == doctest::Approx(oracle).epsilon(1e-6));
    }
  }
}

TEST_CASE("quotient_norm analytic oracles") {
  FunctionSpec one = fn_indicator({1.0, kInf});
  Domain om = Domain::interval(1.0, kInf);

  // p(x)=x: int_1^inf lambda^-x dx finite iff lambda > 1
  auto q1 = quotient_norm(one, make_preset(ExponentPreset::Linear), om, 1e-5);
  CHECK(q1.status == Verdict::Converged);
  CHECK(q1.value == doctest::Approx(1.0).epsilon(1e-4));

  // p(x)=1+log x: int x^-log(lambda) dx finite iff log lambda > 1
  auto q2 = quotient_norm(one, make_preset(ExponentPreset::Log), om, 1e-4);
  CHECK(q2.status == Verdict::Converged);
  CHECK(q2.value == doctest::Approx(std::exp(1.0)).epsilon(1e-3));

  // decaying deviation: class of zero
  auto q3 = quotient_norm(atan_minus_limit(), make_preset(ExponentPreset::Linear),
                          om, 1e-5);
  CHECK(q3.status == Verdict::Converged);
  CHECK(q3.value == doctest::Approx(0.0).epsilon(1e-4));
}

TEST_CASE("quotient_norm of bounded p is zero by density") {
  FunctionSpec one = fn_indicator({0.0, kInf});
  auto r = quotient_norm(one, make_constant_exponent(2.0),
                         Domain::interval(0.0, kInf), 1e-6);
  CHECK(r.value == 0.0);
  CHECK(r.note.find("bounded") != std::string::npos);
}

TEST_CASE("indicator_weight and the embedding dichotomy") {
  Domain om = Domain::interval(1.0, kInf);
  auto w1 = indicator_weight(om, make_preset(ExponentPreset::Linear), om, 1e-4);
  CHECK(w1.value == doctest::Approx(1.0).epsilon(1e-3));

  // bounded A has weight 0 for any unbounded exponent
  auto w2 = indicator_weight(Domain::interval(2.0, 50.0),
                             make_preset(ExponentPreset::Linear), om, 1e-5);
  CHECK(w2.value == 0.0);

  auto w3 = indicator_weight(om, make_preset(ExponentPreset::LogLog), om, 1e-4);
  CHECK(w3.status == Verdict::Divergent);

  CHECK(linf_embedding_check(make_preset(ExponentPreset::Linear), om) ==
        EmbeddingVerdict::Embedded);
  CHECK(linf_embedding_check(make_preset(ExponentPreset::Log), om) ==
        EmbeddingVerdict::Embedded);
  CHECK(linf_embedding_check(make_preset(ExponentPreset::LogLog), om) ==
        EmbeddingVerdict::NotEmbedded);
}

TEST_CASE("exhaustion_metric closed forms") {
  FunctionSpec zero;
  zero.eval = [](double) { return 0.0; };
  FunctionSpec one;
  one.eval = [](double) { return 1.0; };

  CHECK(exhaustion_metric(one, one, 1, MetricMode::Sup, 1e-6) == 0.0);

  double d = exhaustion_metric(one, zero, 1, MetricMode::Sup, 1e-6);
  CHECK(d == doctest::Approx(0.5).epsilon(1e-5));

  FunctionSpec ind = fn_indicator({-1.0, 1.0});
  double d2 = exhaustion_metric(ind, zero, 1, MetricMode::L1, 1e-6);
  CHECK(d2 == doctest::Approx(2.0 / 3.0).epsilon(1e-5));
}

TEST_CASE("exhaustion_metric on a 2-d box") {
  FunctionSpec f, g;
  f.eval_nd = [](std::span<const double> x) { return x[0] + x[1]; };
  g.eval_nd = [](std::span<const double> x) { return x[0] + x[1]; };
  CHECK(exhaustion_metric(f, g, 2, MetricMode::Sup, 1e-4) == 0.0);

  FunctionSpec one2, zero2;
  one2.eval_nd = [](std::span<const double>) { return 1.0; };
  zero2.eval_nd = [](std::span<const double>) { return 0.0; };
  // r_k = (2k)^2 in L1; the series is dominated by r/(1+r) ~ 1
  double d = exhaustion_metric(one2, zero2, 2, MetricMode::L1, 1e-4);
  double expect = 0.0;
  for (int k = 1; k <= 14; ++k) {
    double r = 4.0 * k * k;
    expect += std::ldexp(r / (1 + r), -k);
  }
  CHECK(d == doctest::Approx(expect).epsilon(1e-3));
}

TEST_CASE("norm invariants on a small catalog") {
  Domain om = Domain::interval(0.0, 1.0);
  auto p = make_constant_exponent(2.0);
  ExponentFunction pv = parse_exponent("expr:1+x");
  pv.p_plus = 2.0;
  const double tol = 1e-8;

  auto g = testutil::rng(77);
  for (int i = 0; i < 5; ++i) {
    auto poly = testutil::random_piecewise_poly(g);
    auto poly2 = testutil::random_piecewise_poly(g);
    FunctionSpec f, h, sum;
    f.eval = [&poly](double x) { return poly(x); };
    f.continuous = false;
    h.eval = [&poly2](double x) { return poly2(x); };
    h.continuous = false;
    sum.eval = [&poly, &poly2](double x) { return poly(x) + poly2(x); };
    sum.continuous = false;

    for (const ExponentFunction* pe : {&p, &pv}) {
      double nf = luxemburg_norm(f, *pe, om, tol).value;
      double nh = luxemburg_norm(h, *pe, om, tol).value;
      double ns = luxemburg_norm(sum, *pe, om, tol).value;
      // triangle inequality
      CHECK(ns <= nf + nh + 3 * tol);

      // homogeneity
      for (double c : {-3.0, 0.5, 7.0}) {
        FunctionSpec cf;
        cf.eval = [&poly, c](double x) { return c * poly(x); };
        cf.continuous = false;
        double ncf = luxemburg_norm(cf, *pe, om, tol).value;
        CHECK(std::fabs(ncf - std::fabs(c) * nf) <= 3 * tol * std::max(1.0, std::fabs(c)));
      }

      // unit-ball identity (p bounded)
      if (nf > 1e-6) {
        FunctionSpec fn;
        fn.eval = [&poly, nf](double x) { return poly(x) / nf; };
        fn.continuous = false;
        auto m = modular(fn, *pe, om, 1.0, 1e-10);
        CHECK(m.value == doctest::Approx(1.0).epsilon(5e-6));
      }
    }
  }
}

TEST_CASE("quotient norm <= luxemburg norm") {
  Domain om = Domain::interval(1.0, kInf);
  auto p = make_preset(ExponentPreset::Linear);
  const double tol = 1e-5;

  FunctionSpec cases[] = {fn_indicator({1.0, kInf}), fn_indicator({2.0, 9.0}),
                          atan_minus_limit()};
  for (const auto& f : cases) {
    auto q = quotient_norm(f, p, om, tol);
    auto n = luxemburg_norm(f, p, om, tol);
    if (q.converged_finite() && n.converged_finite())
      CHECK(q.value <= n.value + 2 * tol);
  }
}

TEST_CASE("w is monotone in the set") {
  Domain om = Domain::interval(1.0, kInf);
  auto p = make_preset(ExponentPreset::Log);
  double wa = indicator_weight(Domain::interval(4.0, kInf), p, om, 1e-4).value;
  double wb = indicator_weight(om, p, om, 1e-4).value;
  CHECK(wa <= wb + 2e-4);
}

TEST_CASE("membership transfer on compacts (p1 <= p2)") {
  // finite modular under p2 implies finite luxemburg norm under p1
  Domain K = Domain::interval(0.0, 1.0);
  auto p1 = make_constant_exponent(1.0);
  auto p2 = make_constant_exponent(2.0);
  FunctionSpec f;
  f.eval = [](double x) { return std::pow(std::fabs(x), -0.4); };
  f.singular_points = {0.0};
  auto m2 = modular(f, p2, K, 1.0, 1e-8);
  REQUIRE(m2.status == Verdict::Converged);  // int x^-0.8 finite
  auto n1 = luxemburg_norm(f, p1, K, 1e-8);
  CHECK(n1.converged_finite());
}

TEST_CASE("modular box domain (d=2, constant exponent)") {
  FunctionSpec f;
  f.eval_nd = [](std::span<const double> x) { return x[0] * x[1]; };
  auto p = make_constant_exponent(2.0);
  Domain box = Domain::make_box({{0.0, 1.0}, {0.0, 1.0}});
  auto m = modular(f, p, box, 1.0, 1e-6);
  CHECK(m.status == Verdict::Converged);
  CHECK(m.value == doctest::Approx(1.0 / 9.0).epsilon(1e-4));
}
