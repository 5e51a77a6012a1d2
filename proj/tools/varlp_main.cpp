#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "varlp/cli.hpp"

int main(int argc, char** argv) {
  varlp::ExperimentConfig cfg;
  std::string config_path;

  CLI::App app{"variable-exponent Lebesgue space toolkit"};
  app.require_subcommand(0, 1);
  app.add_option("--config", config_path,
                 "JSON config file; fields mirror the flags");

  const char* commands[] = {"norm",   "modular",     "qnorm",    "weight",
                            "embed",  "metric",      "approx",   "approx-test",
                            "seq-norm", "seq-approx", "demo",    "catalog"};
  for (const char* name : commands) {
    auto* sub = app.add_subcommand(name);
    sub->add_option("--f", cfg.f, "function: catalog name, const:<v>, expr:<DSL>");
    sub->add_option("--g", cfg.g, "second function (metric)");
    sub->add_option("--x", cfg.x, "sequence: zero, inv-k, const:<v>, unit:<k>, expr:<DSL in k>");
    sub->add_option("--p", cfg.p, "exponent: const:<p>, linear, intpart, log, loglog, expr:<DSL>");
    sub->add_option("--set", cfg.set, "indicator set <a>,<b> (weight)");
    sub->add_option("--omega", cfg.omega, "domain <a>,<b>; endpoints may be inf");
    sub->add_option("--sigma", cfg.sigma, "activation tag");
    sub->add_option("--mode", cfg.mode, "approx mode: bounded|unbounded|auto");
    sub->add_option("--metric", cfg.metric, "metric mode: sup|l1");
    sub->add_option("--format", cfg.format, "output format: json|csv");
    sub->add_option("--out", cfg.output, "also write the artifact to this path");
    sub->add_option("--tol", cfg.tol, "tolerance (default VARLP_TOL or 1e-8)");
    sub->add_option("--eps", cfg.eps, "approximation target");
    sub->add_option("--lambda", cfg.lambda, "modular scale");
    sub->add_option("name", cfg.filter, "demo name / catalog filter");
  }

  CLI11_PARSE(app, argc, argv);

  if (!config_path.empty()) {
    std::ifstream in(config_path);
    if (!in) {
      std::cerr << "cannot read " << config_path << "\n";
      return 1;
    }
    std::ostringstream text;
    text << in.rdbuf();
    try {
      cfg = varlp::config_from_json_text(text.str());
    } catch (const std::exception& e) {
      std::cerr << e.what() << "\n";
      return 1;
    }
  } else {
    auto subs = app.get_subcommands();
    if (subs.empty()) {
      std::cout << app.help();
      return 1;
    }
    cfg.command = subs.front()->get_name();
  }

  return varlp::run_command(cfg, std::cout);
}
