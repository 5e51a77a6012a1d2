#pragma once

#include <iosfwd>
#include <string>

namespace varlp {

// One fully validated invocation. String fields keep the CLI spellings
// ("const:2", "1,inf", ...) so a JSON config file and a flag set are
// interchangeable representations of the same run.
struct ExperimentConfig {
  std::string command;
  std::string f;
  std::string g;        // second function (metric)
  std::string x;        // sequence spec
  std::string p;
  std::string set;      // indicator set (weight)
  std::string omega = "1,inf";
  std::string sigma = "logistic";
  std::string mode = "auto";     // approx: bounded | unbounded | auto
  std::string metric = "sup";    // metric: sup | l1
  std::string format = "json";   // json | csv
  std::string filter;            // catalog filter / demo name
  std::string output;            // artifact path; empty = stream only
  double tol = 0.0;              // 0 = default_tolerance()
  double eps = 0.1;
  double lambda = 1.0;
};

// VARLP_TOL when set, else 1e-8.
double default_tolerance();

// Strict parse: unknown fields rejected.
ExperimentConfig config_from_json_text(const std::string& text);

// Exit code: 0 definite answer, 2 inconclusive/unfinished, 1 error.
int run_command(const ExperimentConfig& cfg, std::ostream& out);

int list_catalog(const std::string& filter, const std::string& format,
                 std::ostream& out);

}  // namespace varlp
