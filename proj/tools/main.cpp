#include <cstdint>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "bounded/cli.hpp"
#include "bounded/dataset.hpp"
#include "bounded/errors.hpp"

namespace {

std::vector<bounded::Direction> parse_directions(const std::vector<std::string>& raw) {
  std::vector<bounded::Direction> out;
  out.reserve(raw.size());
  for (const auto& s : raw) out.push_back(bounded::direction_from_string(s));
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Partial identification bounds for treatment effects under sample selection"};
  app.require_subcommand(1);

  // estimate
  auto* est = app.add_subcommand("estimate", "Estimate bounds from a panel CSV");
  std::string est_input;
  std::string est_schema;
  std::vector<std::string> est_mono;
  bounded::EstimateRequest ereq;
  est->add_option("--input", est_input, "Input CSV path")->required();
  est->add_option("--schema", est_schema, "Column mapping, e.g. id=unit,g=treat");
  est->add_option("--method", ereq.method,
                  "did | cic | both | naive | selection-did")
      ->default_val("did");
  est->add_option("--monotonicity", est_mono,
                  "Direction per source: positive | negative")
      ->delimiter(',');
  est->add_option("--grid", ereq.grid, "Quantile grid size for cic")->default_val(99);
  est->add_option("--bootstrap", ereq.bootstrap, "Bootstrap replicates")->default_val(999);
  est->add_option("--seed", ereq.seed, "Bootstrap seed")->default_val(0);
  est->add_option("--alpha", ereq.alpha, "Confidence level")->default_val(0.95);
  est->add_option("--out", ereq.out, "Output path (stdout when omitted)");
  est->add_option("--format", ereq.format, "json | csv")->default_val("json");

  // simulate
  auto* sim = app.add_subcommand("simulate", "Run a coverage study from a config file");
  std::string sim_config;
  std::string sim_out;
  std::uint64_t sim_seed = 0;
  int sim_reps = 0;
  sim->add_option("--config", sim_config, "DGP + study config file")->required();
  auto* sim_reps_opt = sim->add_option("--reps", sim_reps, "Override the replication count");
  auto* sim_seed_opt = sim->add_option("--seed", sim_seed, "Override the study seed");
  sim->add_option("--out", sim_out, "Output path (stdout when omitted)");

  // validate
  auto* val = app.add_subcommand("validate", "Check a panel CSV against the data invariants");
  std::string val_input;
  std::string val_schema;
  val->add_option("--input", val_input, "Input CSV path")->required();
  val->add_option("--schema", val_schema, "Column mapping, e.g. id=unit,g=treat");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (est->parsed()) {
      ereq.input = est_input;
      ereq.schema = bounded::parse_schema_arg(est_schema);
      ereq.monotonicity = parse_directions(est_mono);
      return bounded::cmd_estimate(ereq);
    }
    if (sim->parsed()) {
      bounded::SimulateRequest sreq;
      sreq.config = sim_config;
      sreq.out = sim_out;
      if (sim_reps_opt->count() > 0) sreq.reps_override = sim_reps;
      if (sim_seed_opt->count() > 0) sreq.seed_override = sim_seed;
      return bounded::cmd_simulate(sreq);
    }
    bounded::ValidateRequest vreq;
    vreq.input = val_input;
    vreq.schema = bounded::parse_schema_arg(val_schema);
    return bounded::cmd_validate(vreq);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return bounded::exit_code_for(e);
  }
}
