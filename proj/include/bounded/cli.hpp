#pragma once

// Command implementations behind the bounded-effects binary. The run_*
// functions do the work and throw on failure; the cmd_* wrappers print,
// write output files atomically, and map errors to the exit-code taxonomy:
// 0 success, 1 I/O, 2 validation or configuration, 3 degenerate estimation.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "bounded/dataset.hpp"

namespace bounded {

struct EstimateRequest {
  std::string input;
  SchemaMap schema;
  std::string method = "did";  // did | cic | both | naive | selection-did
  std::vector<Direction> monotonicity;
  int grid = 99;
  int bootstrap = 999;
  std::uint64_t seed = 0;
  double alpha = 0.95;
  std::string out;             // empty means stdout
  std::string format = "json"; // json | csv (csv flattens the qtt table)
};

struct SimulateRequest {
  std::string config;
  std::optional<int> reps_override;
  std::optional<std::uint64_t> seed_override;
  std::string out;
};

struct ValidateRequest {
  std::string input;
  SchemaMap schema;
};

// "canonical=actual" comma list, e.g. "id=person,y1=wage_pre".
SchemaMap parse_schema_arg(const std::string& arg);

nlohmann::ordered_json run_estimate(const EstimateRequest& req,
                                    std::vector<std::string>* warnings = nullptr);
nlohmann::ordered_json run_simulate(const SimulateRequest& req);

int cmd_estimate(const EstimateRequest& req);
int cmd_simulate(const SimulateRequest& req);
int cmd_validate(const ValidateRequest& req);

int exit_code_for(const std::exception& e);

}  // namespace bounded
