#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "varlp/approx.hpp"
#include "test_util.hpp"

using namespace varlp;

namespace {

const double pi = std::acos(-1.0);

FunctionSpec fn(std::function<double(double)> e, std::string name) {
  FunctionSpec f;
  f.eval = std::move(e);
  f.name = std::move(name);
  return f;
}

double grid_sup(const ShallowNetwork& net, const std::function<double(double)>& f,
                double a, double b, int n = 20000) {
  double worst = 0.0;
  for (int i = 0; i <= n; ++i) {
    // offset off the lattice so step nets are probed between their knots
    double x = a + (b - a) * (i + 0.37) / (n + 1.0);
    worst = std::max(worst, std::fabs(f(x) - net_eval(net, x)));
  }
  return worst;
}

void check_budgets(const ApproxReport& rep) {
  double b = 0.0;
  for (const auto& st : rep.stages) b += st.budget;
  CHECK(b <= rep.target_eps + 1e-12);
}

// p(x) = 2 + sin^2 x, bounded with p+ = 3
ExponentFunction make_sin2_exponent() {
  ExponentFunction p;
  p.eval = [](double x) { return 2.0 + std::sin(x) * std::sin(x); };
  p.bounded = true;
  p.p_plus = 3.0;
  p.compactly_bounded = true;
  p.name = "2+sin^2";
  return p;
}

FunctionSpec make_exp_decay() {
  FunctionSpec f = fn([](double x) { return std::exp(-std::fabs(x)); }, "exp-decay");
  f.tail_envelope = [](double t) { return std::exp(-std::max(t, 0.0)); };
  return f;
}

FunctionSpec make_atan() {
  FunctionSpec f = fn([](double x) { return std::atan(x); }, "atan");
  f.limit_hint = pi / 2.0;
  f.deviation_envelope = [](double t) {
    return pi / 2.0 - std::atan(std::max(t, 0.0));
  };
  return f;
}

FunctionSpec make_bump13() {
  // triangular bump on [1,3], peak 1 at x=2
  FunctionSpec f =
      fn([](double x) { return std::max(0.0, 1.0 - std::fabs(x - 2.0)); }, "bump");
  f.support_hint = Interval{1.0, 3.0};
  return f;
}

}  // namespace

TEST_CASE("approx_uniform_compact: relu reproduces x exactly at the nodes") {
  auto relu = make_activation(ActivationTag::Relu);
  ApproxReport rep =
      approx_uniform_compact(fn([](double x) { return x; }, "id"), {0.0, 1.0},
                             relu, 0.01);
  REQUIRE(rep.verdict == ApproxVerdict::Ok);
  CHECK(rep.network.units.size() <= 3);
  CHECK(grid_sup(rep.network, [](double x) { return x; }, 0.0, 1.0) < 1e-12);
  check_budgets(rep);
}

TEST_CASE("approx_uniform_compact: constants take at most two units") {
  for (ActivationTag tag : {ActivationTag::Logistic, ActivationTag::Tanh}) {
    auto sig = make_activation(tag);
    ApproxReport rep = approx_uniform_compact(
        fn([](double) { return 0.7; }, "const"), {-2.0, 5.0}, sig, 0.01);
    REQUIRE(rep.verdict == ApproxVerdict::Ok);
    CHECK(rep.network.units.size() <= 2);
    CHECK(grid_sup(rep.network, [](double) { return 0.7; }, -2.0, 5.0) < 0.01);
  }
}

TEST_CASE("approx_uniform_compact: sin on [0,2pi], tanh") {
  auto sig = make_activation(ActivationTag::Tanh);
  ApproxReport rep = approx_uniform_compact(
      fn([](double x) { return std::sin(x); }, "sin"), {0.0, 2.0 * pi}, sig, 0.05);
  REQUIRE(rep.verdict == ApproxVerdict::Ok);
  CHECK(rep.achieved.value < 0.05);
  // independent dense-grid oracle
  CHECK(grid_sup(rep.network, [](double x) { return std::sin(x); }, 0.0,
                 2.0 * pi) < 0.05);
  check_budgets(rep);

  // tighter eps cannot need fewer units
  ApproxReport tight = approx_uniform_compact(
      fn([](double x) { return std::sin(x); }, "sin"), {0.0, 2.0 * pi}, sig, 0.02);
  REQUIRE(tight.verdict == ApproxVerdict::Ok);
  CHECK(tight.network.units.size() >= rep.network.units.size());
}

TEST_CASE("approx_uniform_compact: heaviside steps approximate x^2") {
  auto sig = make_activation(ActivationTag::Heaviside);
  ApproxReport rep = approx_uniform_compact(
      fn([](double x) { return x * x; }, "sq"), {0.0, 1.0}, sig, 0.1);
  REQUIRE(rep.verdict == ApproxVerdict::Ok);
  CHECK(grid_sup(rep.network, [](double x) { return x * x; }, 0.0, 1.0) < 0.1);
}

TEST_CASE("approx_uniform_compact refuses unbounded intervals") {
  auto sig = make_activation(ActivationTag::Tanh);
  CHECK_THROWS_AS(approx_uniform_compact(fn([](double) { return 0.0; }, "z"),
                                         {0.0, kInf}, sig, 0.1),
                  std::invalid_argument);
}

TEST_CASE("approx_c0: triangular bump, logistic") {
  FunctionSpec f = fn([](double x) { return std::max(0.0, 1.0 - std::fabs(x)); },
                      "tri");
  f.support_hint = Interval{-1.0, 1.0};
  auto sig = make_activation(ActivationTag::Logistic);
  ApproxReport rep = approx_c0(f, sig, 0.1);
  REQUIRE(rep.verdict == ApproxVerdict::Ok);
  CHECK(grid_sup(rep.network, f.eval, -50.0, 50.0) < 0.1);
  // telescoped step levels start and end at 0: exact limits
  CHECK(std::fabs(limit_at_infinity(rep.network, LimitSign::Plus)) < 1e-12);
  CHECK(std::fabs(limit_at_infinity(rep.network, LimitSign::Minus)) < 1e-12);
  check_budgets(rep);
}

TEST_CASE("approx_c0 refusals") {
  auto sig = make_activation(ActivationTag::Logistic);
  FunctionSpec bare = fn([](double) { return 0.0; }, "bare");
  CHECK(approx_c0(bare, sig, 0.1).verdict == ApproxVerdict::Failed);

  FunctionSpec f = make_bump13();
  auto relu = make_activation(ActivationTag::Relu);
  CHECK(approx_c0(f, relu, 0.1).verdict == ApproxVerdict::Failed);
}

TEST_CASE("approx_metric: x^2 in L1 mode") {
  auto relu = make_activation(ActivationTag::Relu);
  FunctionSpec f = fn([](double x) { return x * x; }, "sq");
  ApproxReport rep = approx_metric(f, MetricMode::L1, relu, 0.1);
  REQUIRE(rep.verdict == ApproxVerdict::Ok);
  CHECK(rep.achieved.value < 0.1);

  // independent oracle: d = sum 2^-k r_k/(1+r_k), r_k = int_{-k}^k |f-g|
  const ShallowNetwork net = rep.network;
  double d = 0.0;
  for (int k = 1; k <= 12; ++k) {
    double r = testutil::simpson(
        [&](double x) { return std::fabs(x * x - net_eval(net, x)); },
        -static_cast<double>(k), static_cast<double>(k), 4000);
    d += std::ldexp(r / (1.0 + r), -k);
  }
  CHECK(d + std::ldexp(1.0, -12) < 0.1);
}

TEST_CASE("approx_metric: e^x in L1 mode, x^2 in sup mode") {
  auto relu = make_activation(ActivationTag::Relu);
  ApproxReport rep =
      approx_metric(fn([](double x) { return std::exp(x); }, "exp"),
                    MetricMode::L1, relu, 0.2);
  CHECK(rep.verdict == ApproxVerdict::Ok);
  CHECK(rep.achieved.value < 0.2);

  ApproxReport sup = approx_metric(fn([](double x) { return x * x; }, "sq"),
                                   MetricMode::Sup, relu, 0.2);
  CHECK(sup.verdict == ApproxVerdict::Ok);
  CHECK(sup.achieved.value < 0.2);
}

TEST_CASE("approx_varlp_bounded: e^-|x| under p = 2+sin^2") {
  auto p = make_sin2_exponent();
  auto relu = make_activation(ActivationTag::Relu);
  FunctionSpec f = make_exp_decay();
  Domain omega = Domain::interval(-kInf, kInf);

  ApproxReport rep = approx_varlp_bounded(f, p, omega, relu, 0.1);
  REQUIRE(rep.verdict == ApproxVerdict::Ok);
  CHECK(rep.achieved.status == Verdict::Converged);
  CHECK(rep.achieved.hi < 0.1);
  check_budgets(rep);

  ApproxReport tight = approx_varlp_bounded(f, p, omega, relu, 0.01);
  REQUIRE(tight.verdict == ApproxVerdict::Ok);
  CHECK(tight.achieved.hi < 0.01);
  CHECK(tight.network.units.size() >= rep.network.units.size());
}

TEST_CASE("approx_varlp_bounded: integrable singularity 1/sqrt|x|") {
  auto p1 = make_constant_exponent(1.0);
  auto relu = make_activation(ActivationTag::Relu);
  FunctionSpec f = fn([](double x) { return 1.0 / std::sqrt(std::fabs(x)); },
                      "inv-sqrt");
  f.singular_points = {0.0};
  f.continuous = false;

  ApproxReport rep =
      approx_varlp_bounded(f, p1, Domain::interval(-1.0, 1.0), relu, 0.2);
  REQUIRE(rep.verdict == ApproxVerdict::Ok);
  CHECK(rep.achieved.hi < 0.2);
  bool has_core = false;
  for (const auto& st : rep.stages) has_core = has_core || st.name == "core";
  CHECK(has_core);
  check_budgets(rep);
}

TEST_CASE("approx_varlp_bounded: trivial and refused inputs") {
  auto relu = make_activation(ActivationTag::Relu);
  auto p2 = make_constant_exponent(2.0);
  ApproxReport z = approx_varlp_bounded(fn([](double) { return 0.0; }, "zero"),
                                        p2, Domain::interval(0.0, 1.0), relu, 0.05);
  CHECK(z.verdict == ApproxVerdict::Ok);
  CHECK(z.achieved.value == 0.0);

  auto plin = make_preset(ExponentPreset::Linear);
  ApproxReport r = approx_varlp_bounded(make_exp_decay(), plin,
                                        Domain::interval(1.0, kInf), relu, 0.1);
  CHECK(r.verdict == ApproxVerdict::Failed);
  CHECK(!r.note.empty());
}

TEST_CASE("approx_bounded_with_limit: constants (Prop 5.9 base case)") {
  auto plin = make_preset(ExponentPreset::Linear);
  auto sig = make_activation(ActivationTag::Logistic);
  FunctionSpec c = fn([](double) { return 2.0; }, "const2");
  c.limit_hint = 2.0;
  c.deviation_envelope = [](double) { return 0.0; };

  ApproxReport rep =
      approx_bounded_with_limit(c, plin, Domain::interval(1.0, kInf), sig, 0.1);
  REQUIRE(rep.verdict == ApproxVerdict::Ok);
  CHECK(rep.achieved.hi < 0.1);
  CHECK(limit_at_infinity(rep.network, LimitSign::Plus) ==
        doctest::Approx(2.0).epsilon(1e-2));
  check_budgets(rep);
}

TEST_CASE("approx_bounded_with_limit: atan under the linear preset") {
  auto plin = make_preset(ExponentPreset::Linear);
  auto sig = make_activation(ActivationTag::Logistic);
  ApproxReport rep = approx_bounded_with_limit(
      make_atan(), plin, Domain::interval(1.0, kInf), sig, 0.1);
  REQUIRE(rep.verdict == ApproxVerdict::Ok);
  CHECK(rep.achieved.status == Verdict::Converged);
  CHECK(rep.achieved.hi < 0.1);
  CHECK(std::fabs(limit_at_infinity(rep.network, LimitSign::Plus) - pi / 2.0) <
        0.05);
  check_budgets(rep);
}

TEST_CASE("approx_bounded_with_limit: beta + 1/x under the log preset") {
  auto plog = make_preset(ExponentPreset::Log);
  auto sig = make_activation(ActivationTag::Logistic);
  FunctionSpec f = fn([](double x) { return 0.5 + 1.0 / x; }, "b+1/x");
  f.limit_hint = 0.5;
  f.deviation_envelope = [](double t) { return 1.0 / std::max(t, 1.0); };

  ApproxReport rep =
      approx_bounded_with_limit(f, plog, Domain::interval(1.0, kInf), sig, 0.05);
  REQUIRE(rep.verdict == ApproxVerdict::Ok);
  CHECK(rep.achieved.hi < 0.05);
  CHECK(std::fabs(limit_at_infinity(rep.network, LimitSign::Plus) - 0.5) < 0.05);
}

TEST_CASE("approx_bounded_with_limit refusals") {
  auto plin = make_preset(ExponentPreset::Linear);
  auto p2 = make_constant_exponent(2.0);
  auto sig = make_activation(ActivationTag::Logistic);
  auto relu = make_activation(ActivationTag::Relu);
  Domain half = Domain::interval(1.0, kInf);

  CHECK(approx_bounded_with_limit(make_atan(), plin, half, relu, 0.1).verdict ==
        ApproxVerdict::Failed);
  CHECK(approx_bounded_with_limit(make_atan(), p2, half, sig, 0.1).verdict ==
        ApproxVerdict::Failed);
  CHECK(approx_bounded_with_limit(make_atan(), plin,
                                  Domain::interval(-kInf, kInf), sig, 0.1)
            .verdict == ApproxVerdict::Failed);
  FunctionSpec bare = fn([](double x) { return std::atan(x); }, "bare");
  CHECK(approx_bounded_with_limit(bare, plin, half, sig, 0.1).verdict ==
        ApproxVerdict::Failed);
}

TEST_CASE("approximability_test: atan is approximable with beta = pi/2") {
  auto plin = make_preset(ExponentPreset::Linear);
  ApproximabilityCertificate cert =
      approximability_test(make_atan(), plin, Domain::interval(1.0, kInf), 1e-3);
  REQUIRE(cert.decision == ApproxDecision::Approximable);
  REQUIRE(cert.beta.has_value());
  CHECK(std::fabs(*cert.beta - pi / 2.0) < 1e-3);
  CHECK(cert.qnorm_at_beta.hi <= 1e-3);
  CHECK(cert.beta_search_trace.size() >= 10);

  // the trace is unimodal about the optimum (up to solver noise)
  auto trace = cert.beta_search_trace;
  std::sort(trace.begin(), trace.end(),
            [](const BetaTracePoint& a, const BetaTracePoint& b) {
              return a.beta < b.beta;
            });
  std::size_t kmin = 0;
  for (std::size_t i = 0; i < trace.size(); ++i)
    if (trace[i].estimate < trace[kmin].estimate) kmin = i;
  for (std::size_t i = 0; i + 1 < kmin; ++i)
    CHECK(trace[i].estimate >= trace[i + 1].estimate - 5e-3);
  for (std::size_t i = kmin; i + 1 < trace.size(); ++i)
    CHECK(trace[i + 1].estimate >= trace[i].estimate - 5e-3);
}

TEST_CASE("approximability_test: sin(log x) has a certified lower bound") {
  auto plin = make_preset(ExponentPreset::Linear);
  FunctionSpec f = fn([](double x) { return std::sin(std::log(x)); }, "sin-log");
  ApproximabilityCertificate cert =
      approximability_test(f, plin, Domain::interval(1.0, kInf), 1e-3);
  CHECK(cert.decision == ApproxDecision::NotApproximable);
  CHECK(cert.qnorm_at_beta.lo >= 0.1);
}

TEST_CASE("approximability_test: compact support and bounded p") {
  auto plin = make_preset(ExponentPreset::Linear);
  ApproximabilityCertificate cert = approximability_test(
      make_bump13(), plin, Domain::interval(1.0, kInf), 1e-3);
  CHECK(cert.decision == ApproxDecision::Approximable);
  CHECK(*cert.beta == 0.0);

  auto p2 = make_constant_exponent(2.0);
  ApproximabilityCertificate triv = approximability_test(
      make_bump13(), p2, Domain::interval(1.0, kInf), 1e-3);
  CHECK(triv.decision == ApproxDecision::Inconclusive);
  CHECK(!triv.note.empty());
}

TEST_CASE("approx_varlp_unbounded: atan end to end") {
  auto plin = make_preset(ExponentPreset::Linear);
  auto sig = make_activation(ActivationTag::Logistic);
  ApproxReport rep = approx_varlp_unbounded(
      make_atan(), plin, Domain::interval(1.0, kInf), sig, 0.1);
  REQUIRE(rep.verdict == ApproxVerdict::Ok);
  CHECK(rep.achieved.status == Verdict::Converged);
  CHECK(rep.achieved.hi < 0.1);
  check_budgets(rep);
}

TEST_CASE("approx_varlp_unbounded: constants and compact support") {
  auto plin = make_preset(ExponentPreset::Linear);
  auto sig = make_activation(ActivationTag::Logistic);
  Domain half = Domain::interval(1.0, kInf);

  FunctionSpec c = fn([](double) { return 1.2; }, "const");
  c.limit_hint = 1.2;
  c.deviation_envelope = [](double) { return 0.0; };
  ApproxReport rep = approx_varlp_unbounded(c, plin, half, sig, 0.1);
  REQUIRE(rep.verdict == ApproxVerdict::Ok);
  CHECK(rep.network.units.size() <= 4);

  ApproxReport bump = approx_varlp_unbounded(make_bump13(), plin, half, sig, 0.2);
  REQUIRE(bump.verdict == ApproxVerdict::Ok);
  CHECK(bump.achieved.hi < 0.2);
}

TEST_CASE("approx_varlp_unbounded: sin(log x) is rejected") {
  auto plin = make_preset(ExponentPreset::Linear);
  auto sig = make_activation(ActivationTag::Logistic);
  FunctionSpec f = fn([](double x) { return std::sin(std::log(x)); }, "sin-log");
  ApproxReport rep =
      approx_varlp_unbounded(f, plin, Domain::interval(1.0, kInf), sig, 0.5);
  CHECK(rep.verdict == ApproxVerdict::NotApproximable);
}
