#include "varlp/cli.hpp"

#include <json.hpp>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "varlp/approx.hpp"
#include "varlp/catalog.hpp"
#include "varlp/modular.hpp"
#include "varlp/network.hpp"
#include "varlp/sequence.hpp"

namespace varlp {

namespace {

using ojson = nlohmann::ordered_json;

double parse_endpoint(const std::string& t) {
  if (t == "inf" || t == "+inf") return kInf;
  if (t == "-inf") return -kInf;
  return std::stod(t);
}

Domain parse_domain(const std::string& spec) {
  auto comma = spec.find(',');
  if (comma == std::string::npos)
    throw std::invalid_argument("domain must be <a>,<b>: " + spec);
  return Domain::interval(parse_endpoint(spec.substr(0, comma)),
                          parse_endpoint(spec.substr(comma + 1)));
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

ojson norm_json(const NormResult& r) {
  return ojson{{"value", r.value}, {"lo", r.lo},       {"hi", r.hi},
               {"status", to_string(r.status)},        {"cells", r.cells},
               {"T", r.truncation_T}};
}

ojson modular_json(const ModularValue& m) {
  return ojson{{"value", m.value}, {"lo", m.lo},       {"hi", m.hi},
               {"status", to_string(m.status)},        {"cells", m.cells},
               {"T", m.truncation_T}};
}

ojson report_json(const ApproxReport& rep) {
  ojson stages = ojson::array();
  for (const auto& st : rep.stages)
    stages.push_back(
        ojson{{"name", st.name}, {"budget", st.budget}, {"achieved", st.achieved}});
  ojson j{{"verdict", to_string(rep.verdict)},
          {"target_eps", rep.target_eps},
          {"achieved", norm_json(rep.achieved)},
          {"stages", stages},
          {"units", rep.network.units.size()},
          {"network", ojson::parse(net_to_json(rep.network))}};
  if (!rep.note.empty()) j["note"] = rep.note;
  return j;
}

struct Row {
  std::string kase, name, quantity;
  double value = 0.0, lo = 0.0, hi = 0.0;
  std::string status;
};

void write_rows(const std::vector<Row>& rows, const std::string& format,
                std::ostream& out) {
  if (format == "csv") {
    out << "case,name,quantity,value,lo,hi,status\n";
    for (const auto& r : rows)
      out << r.kase << ',' << r.name << ',' << r.quantity << ',' << fmt(r.value)
          << ',' << fmt(r.lo) << ',' << fmt(r.hi) << ',' << r.status << '\n';
    return;
  }
  ojson arr = ojson::array();
  for (const auto& r : rows)
    arr.push_back(ojson{{"case", r.kase},
                        {"name", r.name},
                        {"quantity", r.quantity},
                        {"value", r.value},
                        {"lo", r.lo},
                        {"hi", r.hi},
                        {"status", r.status}});
  out << arr.dump(2) << '\n';
}

int verdict_exit(Verdict v) {
  return v == Verdict::Converged || v == Verdict::Divergent ? 0 : 2;
}

int emit(const ojson& j, const Row& row, const ExperimentConfig& cfg,
         std::ostream& out, int code) {
  std::ostringstream art;
  if (cfg.format == "csv")
    write_rows({row}, "csv", art);
  else
    art << j.dump(2) << '\n';
  out << art.str();
  if (!cfg.output.empty()) {
    std::ofstream file(cfg.output);
    if (!file) throw std::runtime_error("cannot write " + cfg.output);
    file << art.str();
  }
  return code;
}

int run_demo(const ExperimentConfig& cfg, std::ostream& out) {
  if (!cfg.filter.empty() && cfg.filter != "paper-examples")
    throw std::invalid_argument("unknown demo: " + cfg.filter);
  std::vector<Row> rows;

  auto inv = parse_function("inv-sqrt");
  auto tailf = parse_function("inv-sqrt-tail");
  auto p1 = parse_exponent("const:1");
  auto p4 = parse_exponent("const:4");
  auto whole = Domain::interval(-kInf, kInf);

  ModularValue m1 = modular(inv, p1, Domain::interval(-1.0, 1.0), 1.0, 1e-8);
  rows.push_back({"demo", "inv-sqrt", "modular p=1 core", m1.value, m1.lo,
                  m1.hi, to_string(m1.status)});
  ModularValue m2 = modular(tailf, p4, whole, 1.0, 1e-8);
  rows.push_back({"demo", "inv-sqrt-tail", "modular p=4 tail", m2.value, m2.lo,
                  m2.hi, to_string(m2.status)});
  ModularValue m3 = modular(tailf, p1, whole, 1.0, 1e-8);
  rows.push_back({"demo", "inv-sqrt-tail", "modular p=1 tail", m3.value, m3.lo,
                  m3.hi, to_string(m3.status)});

  auto plin = parse_exponent("linear");
  NormResult n1 = luxemburg_norm(parse_function("one"), plin,
                                 Domain::interval(1.0, kInf), 1e-8);
  rows.push_back(
      {"demo", "one", "norm p=linear", n1.value, n1.lo, n1.hi,
       to_string(n1.status)});

  Domain half = Domain::interval(1.0, kInf);
  ApproximabilityCertificate ca =
      approximability_test(parse_function("atan"), plin, half, 1e-3);
  rows.push_back({"demo", "atan", "beta", ca.beta.value_or(0.0),
                  ca.qnorm_at_beta.lo, ca.qnorm_at_beta.hi,
                  to_string(ca.decision)});
  ApproximabilityCertificate cs =
      approximability_test(parse_function("sin-log"), plin, half, 1e-3);
  rows.push_back({"demo", "sin-log", "qnorm-lower-bound", cs.qnorm_at_beta.lo,
                  cs.qnorm_at_beta.lo, kInf, to_string(cs.decision)});

  std::ostringstream art;
  write_rows(rows, cfg.format, art);
  out << art.str();
  if (!cfg.output.empty()) {
    std::ofstream file(cfg.output);
    if (!file) throw std::runtime_error("cannot write " + cfg.output);
    file << art.str();
  }
  for (const auto& r : rows)
    if (r.status == "inconclusive" || r.status == "finite") return 2;
  return 0;
}

}  // namespace

double default_tolerance() {
  if (const char* env = std::getenv("VARLP_TOL")) {
    double t = std::atof(env);
    if (t > 0.0) return t;
  }
  return 1e-8;
}

ExperimentConfig config_from_json_text(const std::string& text) {
  ojson j = ojson::parse(text);
  ExperimentConfig cfg;
  for (const auto& [key, val] : j.items()) {
    if (key == "command") cfg.command = val.get<std::string>();
    else if (key == "f") cfg.f = val.get<std::string>();
    else if (key == "g") cfg.g = val.get<std::string>();
    else if (key == "x") cfg.x = val.get<std::string>();
    else if (key == "p") cfg.p = val.get<std::string>();
    else if (key == "set") cfg.set = val.get<std::string>();
    else if (key == "omega") cfg.omega = val.get<std::string>();
    else if (key == "sigma") cfg.sigma = val.get<std::string>();
    else if (key == "mode") cfg.mode = val.get<std::string>();
    else if (key == "metric") cfg.metric = val.get<std::string>();
    else if (key == "format") cfg.format = val.get<std::string>();
    else if (key == "filter") cfg.filter = val.get<std::string>();
    else if (key == "output") cfg.output = val.get<std::string>();
    else if (key == "tol") cfg.tol = val.get<double>();
    else if (key == "eps") cfg.eps = val.get<double>();
    else if (key == "lambda") cfg.lambda = val.get<double>();
    else throw std::invalid_argument("unknown config field: " + key);
  }
  return cfg;
}

int list_catalog(const std::string& filter, const std::string& format,
                 std::ostream& out) {
  bool want_fn = filter.empty() || filter == "function";
  bool want_p = filter.empty() || filter == "exponent";
  if (!want_fn && !want_p)
    throw std::invalid_argument("catalog filter must be function|exponent");
  if (format == "json") {
    ojson j;
    if (want_fn) {
      ojson arr = ojson::array();
      for (const auto& e : function_catalog())
        arr.push_back(ojson{{"name", e.name}, {"provenance", e.provenance}});
      j["functions"] = arr;
    }
    if (want_p) {
      ojson arr = ojson::array();
      for (const auto& e : exponent_catalog())
        arr.push_back(ojson{{"name", e.name}, {"provenance", e.provenance}});
      j["exponents"] = arr;
    }
    out << j.dump(2) << '\n';
    return 0;
  }
  if (want_fn) {
    out << "functions:\n";
    for (const auto& e : function_catalog())
      out << "  " << e.name << "  --  " << e.provenance << '\n';
  }
  if (want_p) {
    out << "exponents:\n";
    for (const auto& e : exponent_catalog())
      out << "  " << e.name << "  --  " << e.provenance << '\n';
  }
  return 0;
}

int run_command(const ExperimentConfig& cfg, std::ostream& out) {
  try {
    const double tol = cfg.tol > 0.0 ? cfg.tol : default_tolerance();
    const std::string& cmd = cfg.command;

    if (cmd == "catalog") return list_catalog(cfg.filter, cfg.format, out);
    if (cmd == "demo") return run_demo(cfg, out);

    if (cmd == "norm" || cmd == "qnorm") {
      FunctionSpec f = parse_function(cfg.f);
      ExponentFunction p = parse_exponent(cfg.p);
      Domain omega = parse_domain(cfg.omega);
      NormResult r = cmd == "norm" ? luxemburg_norm(f, p, omega, tol)
                                   : quotient_norm(f, p, omega, tol);
      ojson j{{"command", cmd}, {"f", cfg.f}, {"p", cfg.p},
              {"omega", cfg.omega}, {"result", norm_json(r)}};
      if (!r.note.empty()) j["note"] = r.note;
      return emit(j, {cmd, cfg.f, cmd, r.value, r.lo, r.hi, to_string(r.status)},
                  cfg, out, verdict_exit(r.status));
    }
    if (cmd == "modular") {
      FunctionSpec f = parse_function(cfg.f);
      ExponentFunction p = parse_exponent(cfg.p);
      Domain omega = parse_domain(cfg.omega);
      ModularValue m = modular(f, p, omega, cfg.lambda, tol);
      ojson j{{"command", cmd},     {"f", cfg.f},
              {"p", cfg.p},         {"omega", cfg.omega},
              {"lambda", cfg.lambda}, {"result", modular_json(m)}};
      return emit(j, {cmd, cfg.f, cmd, m.value, m.lo, m.hi, to_string(m.status)},
                  cfg, out, verdict_exit(m.status));
    }
    if (cmd == "weight") {
      ExponentFunction p = parse_exponent(cfg.p);
      Domain omega = parse_domain(cfg.omega);
      Domain A = parse_domain(cfg.set);
      NormResult r = indicator_weight(A, p, omega, tol);
      ojson j{{"command", cmd}, {"set", cfg.set}, {"p", cfg.p},
              {"omega", cfg.omega}, {"result", norm_json(r)}};
      if (!r.note.empty()) j["note"] = r.note;
      return emit(j, {cmd, cfg.set, cmd, r.value, r.lo, r.hi, to_string(r.status)},
                  cfg, out, verdict_exit(r.status));
    }
    if (cmd == "embed") {
      ExponentFunction p = parse_exponent(cfg.p);
      Domain omega = parse_domain(cfg.omega);
      EmbeddingVerdict v = linf_embedding_check(p, omega, std::min(tol, 1e-4));
      ojson j{{"command", cmd}, {"p", cfg.p}, {"omega", cfg.omega},
              {"status", to_string(v)}};
      return emit(j, {cmd, cfg.p, cmd, 0.0, 0.0, 0.0, to_string(v)}, cfg, out,
                  v == EmbeddingVerdict::Inconclusive ? 2 : 0);
    }
    if (cmd == "metric") {
      FunctionSpec f = parse_function(cfg.f);
      FunctionSpec g = parse_function(cfg.g);
      MetricMode mode = cfg.metric == "l1" ? MetricMode::L1 : MetricMode::Sup;
      double d = exhaustion_metric(f, g, 1, mode, std::min(tol, 1e-6));
      ojson j{{"command", cmd}, {"f", cfg.f}, {"g", cfg.g},
              {"mode", cfg.metric}, {"value", d}};
      return emit(j, {cmd, cfg.f, cmd, d, d, d, "converged"}, cfg, out, 0);
    }
    if (cmd == "approx") {
      FunctionSpec f = parse_function(cfg.f);
      ExponentFunction p = parse_exponent(cfg.p);
      Domain omega = parse_domain(cfg.omega);
      Activation sigma = parse_activation(cfg.sigma);
      bool bounded = cfg.mode == "bounded" ||
                     (cfg.mode == "auto" && p.bounded);
      if (cfg.mode != "bounded" && cfg.mode != "unbounded" && cfg.mode != "auto")
        throw std::invalid_argument("mode must be bounded|unbounded|auto");
      ApproxReport rep = bounded
                             ? approx_varlp_bounded(f, p, omega, sigma, cfg.eps)
                             : approx_varlp_unbounded(f, p, omega, sigma, cfg.eps);
      ojson j = report_json(rep);
      j["command"] = cmd;
      return emit(j,
                  {cmd, cfg.f, "approx-error", rep.achieved.value,
                   rep.achieved.lo, rep.achieved.hi, to_string(rep.verdict)},
                  cfg, out, rep.verdict == ApproxVerdict::Failed ? 2 : 0);
    }
    if (cmd == "approx-test") {
      FunctionSpec f = parse_function(cfg.f);
      ExponentFunction p = parse_exponent(cfg.p);
      Domain omega = parse_domain(cfg.omega);
      ApproximabilityCertificate cert =
          approximability_test(f, p, omega, std::max(tol, 1e-3));
      ojson trace = ojson::array();
      for (const auto& t : cert.beta_search_trace)
        trace.push_back(ojson{{"beta", t.beta}, {"estimate", t.estimate}});
      ojson j{{"command", cmd},
              {"decision", to_string(cert.decision)},
              {"qnorm", norm_json(cert.qnorm_at_beta)},
              {"trace", trace}};
      if (cert.beta) j["beta"] = *cert.beta;
      if (!cert.note.empty()) j["note"] = cert.note;
      return emit(j,
                  {cmd, cfg.f, "beta", cert.beta.value_or(0.0),
                   cert.qnorm_at_beta.lo, cert.qnorm_at_beta.hi,
                   to_string(cert.decision)},
                  cfg, out,
                  cert.decision == ApproxDecision::Inconclusive ? 2 : 0);
    }
    if (cmd == "seq-norm") {
      SequenceSpec x = parse_sequence(cfg.x);
      ExponentFunction p = parse_exponent(cfg.p);
      NormResult r = seq_norm(x, p, tol);
      ojson j{{"command", cmd}, {"x", cfg.x}, {"p", cfg.p},
              {"result", norm_json(r)}};
      if (!r.note.empty()) j["note"] = r.note;
      return emit(j, {cmd, cfg.x, cmd, r.value, r.lo, r.hi, to_string(r.status)},
                  cfg, out, verdict_exit(r.status));
    }
    if (cmd == "seq-approx") {
      SequenceSpec x = parse_sequence(cfg.x);
      ExponentFunction p = parse_exponent(cfg.p);
      Activation sigma = parse_activation(cfg.sigma);
      ApproxReport rep = seq_approx_convergent(x, p, sigma, cfg.eps);
      ojson j = report_json(rep);
      j["command"] = cmd;
      return emit(j,
                  {cmd, cfg.x, "approx-error", rep.achieved.value,
                   rep.achieved.lo, rep.achieved.hi, to_string(rep.verdict)},
                  cfg, out, rep.verdict == ApproxVerdict::Failed ? 2 : 0);
    }
    throw std::invalid_argument("unknown command: " + cmd);
  } catch (const std::exception& e) {
    out << ojson{{"error", e.what()}}.dump(2) << '\n';
    return 1;
  }
}

}  // namespace varlp
