#include "bounded/cli.hpp"

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "bounded/bounds.hpp"
#include "bounded/errors.hpp"
#include "bounded/inference.hpp"
#include "bounded/simulate.hpp"
#include "bounded/strata.hpp"

namespace bounded {

namespace {

using json = nlohmann::ordered_json;

void write_text_atomic(const std::string& path, const std::string& content) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open " + tmp + " for writing");
    out << content;
    if (!out) throw IoError("write failed: " + tmp);
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0)
    throw IoError("cannot rename " + tmp + " to " + path);
}

void emit(const std::string& out_path, const std::string& content) {
  if (out_path.empty())
    std::cout << content;
  else
    write_text_atomic(out_path, content);
}

json imputed_json(const std::vector<ImputedValue>& values) {
  json arr = json::array();
  for (const auto& v : values)
    arr.push_back({{"value", v.value}, {"raw", v.raw}, {"clamped", v.clamped}});
  return arr;
}

json proportions_json(const StrataProportions& p) {
  json j;
  j["pi0"] = p.pi0;
  j["pi0_raw"] = p.pi0_raw;
  j["pi0_clipped"] = p.pi0_clipped;
  j["pi1"] = p.pi1;
  j["pi1_raw"] = p.pi1_raw;
  j["pi1_clipped"] = p.pi1_clipped;
  j["imputed_s2_g1"] = imputed_json(p.imputed_s2_g1);
  j["imputed_s2_g0"] = imputed_json(p.imputed_s2_g0);
  return j;
}

json method_json(const PanelDataset& ds, const EstimatorSpec& spec, int n_boot,
                 std::uint64_t seed, double alpha, std::size_t n_used) {
  BoundsResult b = run_pipeline(ds, spec);
  BootstrapSigmas sig = bootstrap_sigmas(ds, spec, n_boot, seed);
  CiInterval ci = confidence_interval(b, sig, n_used, alpha);
  json j;
  j["bounds"] = {{"lb", b.lb}, {"ub", b.ub}};
  j["ci"] = {{"lo", ci.lo}, {"hi", ci.hi}, {"alpha", ci.alpha}, {"z_alpha", ci.z_alpha}};
  j["sigmas"] = {{"se_lb", sig.se_lb},       {"se_ub", sig.se_ub},
                 {"sigma_lb", ci.sigma_lb},  {"sigma_ub", ci.sigma_ub},
                 {"n_boot", sig.n_boot},     {"n_dropped", sig.n_dropped}};
  if (spec.method == Method::Cic) {
    j["clamp_events"] = b.clamp_events;
    json table = json::array();
    for (const auto& row : b.qtt_table)
      table.push_back({{"q", row.q}, {"lb", row.lb}, {"ub", row.ub}});
    j["qtt_table"] = std::move(table);
  }
  return j;
}

std::string qtt_csv(const json& method_block) {
  std::ostringstream out;
  out << "q,lb,ub\n";
  char buf[192];
  for (const auto& row : method_block.at("qtt_table")) {
    std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g\n",
                  row.at("q").get<double>(), row.at("lb").get<double>(),
                  row.at("ub").get<double>());
    out << buf;
  }
  return out.str();
}

}  // namespace

SchemaMap parse_schema_arg(const std::string& arg) {
  auto trimmed = [](const std::string& s) {
    const auto a = s.find_first_not_of(" \t");
    if (a == std::string::npos) return std::string();
    const auto b = s.find_last_not_of(" \t");
    return s.substr(a, b - a + 1);
  };
  // src<k>_t1 or src<k>_t2 with a 1-based source number.
  auto is_source_column = [](const std::string& name) {
    if (name.rfind("src", 0) != 0 || name.size() < 7) return false;
    const std::string tail = name.substr(name.size() - 3);
    if (tail != "_t1" && tail != "_t2") return false;
    const std::string digits = name.substr(3, name.size() - 6);
    if (digits.empty() || digits[0] == '0') return false;
    return digits.find_first_not_of("0123456789") == std::string::npos;
  };
  SchemaMap schema;
  std::stringstream ss(arg);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const std::string entry = trimmed(item);
    if (entry.empty()) continue;
    auto eq = entry.find('=');
    if (eq == std::string::npos)
      throw InvalidConfig("schema entry '" + entry + "' is not canonical=actual");
    const std::string canonical = trimmed(entry.substr(0, eq));
    const std::string actual = trimmed(entry.substr(eq + 1));
    const bool base = canonical == "id" || canonical == "g" || canonical == "y1" ||
                      canonical == "y2" || canonical == "s1" || canonical == "s2";
    if (!base && !is_source_column(canonical))
      throw InvalidConfig("unknown canonical column '" + canonical + "'");
    if (actual.empty())
      throw InvalidConfig("empty mapping for column '" + canonical + "'");
    schema[canonical] = actual;
  }
  return schema;
}

nlohmann::ordered_json run_estimate(const EstimateRequest& req,
                                    std::vector<std::string>* warnings) {
  if (req.format != "json" && req.format != "csv")
    throw InvalidConfig("format must be json or csv");
  if (!(req.alpha > 0.5 && req.alpha < 1.0)) throw InvalidAlpha(req.alpha);
  const bool needs_pi = req.method == "did" || req.method == "cic" || req.method == "both";
  if (!needs_pi && req.method != "naive" && req.method != "selection-did")
    throw InvalidConfig("method must be did, cic, both, naive or selection-did");
  if (req.format == "csv" && !(req.method == "cic" || req.method == "both"))
    throw InvalidConfig("csv output flattens the qtt table and needs method cic or both");

  std::vector<std::string> ignored;
  PanelDataset ds = load_csv(req.input, req.schema, &ignored);
  if (warnings != nullptr)
    for (const auto& col : ignored)
      warnings->push_back("ignoring unrecognized column '" + col + "'");

  const std::size_t J = ds.n_sources();
  EstimatorSpec spec;
  spec.grid_size = req.grid;
  if (needs_pi) {
    if (req.monotonicity.size() != J)
      throw DirectionMissing("need " + std::to_string(J) +
                             " direction(s) via --monotonicity, got " +
                             std::to_string(req.monotonicity.size()));
    if (J == 1) {
      spec.mode = ProportionsMode::Single;
      spec.single_direction = req.monotonicity[0];
    } else {
      spec.mode = ProportionsMode::Multi;
      ds = ds.with_directions(req.monotonicity);
    }
  }

  const auto& t = ds.tallies();
  const std::size_t n_used = static_cast<std::size_t>(t.s2_sum[0] + t.s2_sum[1]);

  json out;
  json cfg;
  cfg["input"] = req.input;
  cfg["method"] = req.method;
  json mono = json::array();
  for (Direction d : req.monotonicity) mono.push_back(to_string(d));
  cfg["monotonicity"] = std::move(mono);
  cfg["grid"] = req.grid;
  cfg["bootstrap"] = req.bootstrap;
  cfg["seed"] = req.seed;
  cfg["alpha"] = req.alpha;
  cfg["format"] = req.format;
  json schema = json::object();
  for (const auto& [k, v] : req.schema) schema[k] = v;
  cfg["schema"] = std::move(schema);
  cfg["n_sources"] = J;
  out["config"] = std::move(cfg);
  out["n_units"] = t.n;
  out["n_used"] = n_used;

  if (req.method == "naive") {
    out["naive"] = {{"did", naive_did(ds)}, {"cic", naive_cic(ds, req.grid)}};
    return out;
  }
  if (req.method == "selection-did") {
    json sel;
    sel["overall"] = selection_did(ds);
    json per = json::array();
    for (std::size_t j = 1; j <= J; ++j) per.push_back(selection_did(ds, j));
    sel["per_source"] = std::move(per);
    out["selection_did"] = std::move(sel);
    return out;
  }

  // Proportions are identical for did and cic; echo them once.
  out.update(proportions_json(estimate_proportions(ds, spec)));
  if (req.method == "did" || req.method == "both") {
    EstimatorSpec s = spec;
    s.method = Method::Did;
    json block = method_json(ds, s, req.bootstrap, req.seed, req.alpha, n_used);
    if (req.method == "did") out.update(block);
    else out["did"] = std::move(block);
  }
  if (req.method == "cic" || req.method == "both") {
    EstimatorSpec s = spec;
    s.method = Method::Cic;
    json block = method_json(ds, s, req.bootstrap, req.seed, req.alpha, n_used);
    if (req.method == "cic") out.update(block);
    else out["cic"] = std::move(block);
  }
  return out;
}

nlohmann::ordered_json run_simulate(const SimulateRequest& req) {
  std::ifstream in(req.config);
  if (!in) throw IoError("cannot open " + req.config);
  std::stringstream buf;
  buf << in.rdbuf();
  const std::string text = buf.str();

  DgpConfig cfg = parse_dgp_config_text(text);
  StudySpec study = parse_study_spec_text(text, cfg);
  if (req.reps_override) study.reps = *req.reps_override;
  if (req.seed_override) study.seed = *req.seed_override;
  CoverageReport rep = coverage_study(cfg, study);

  json out;
  json cfg_echo;
  cfg_echo["n"] = cfg.n;
  cfg_echo["p_treat"] = cfg.p_treat;
  cfg_echo["seed"] = cfg.seed;
  cfg_echo["selection_link"] = cfg.selection_link;
  const char* model = cfg.model == OutcomeModel::Additive ? "additive"
                      : cfg.model == OutcomeModel::Exp    ? "exp"
                                                          : "cubic";
  cfg_echo["outcome"] = {{"model", model},
                         {"lambda1", cfg.lambda1},
                         {"lambda2", cfg.lambda2},
                         {"sigma_noise", cfg.sigma_noise},
                         {"exp_scale", cfg.exp_scale},
                         {"cubic_coeff", cfg.cubic_coeff},
                         {"trend_ot", cfg.trend_ot},
                         {"trend_oc", cfg.trend_oc},
                         {"trend_no", cfg.trend_no}};
  cfg_echo["effect"] = {{"kind", cfg.effect == EffectKind::Constant ? "constant" : "linear"},
                        {"value", cfg.effect_value},
                        {"slope", cfg.effect_slope}};
  for (int g = 0; g < 2; ++g) {
    const GroupConfig& gc = cfg.group[g];
    cfg_echo["group" + std::to_string(g)] = {
        {"p_ao", gc.p_ao},       {"p_no", gc.p_no},   {"p_oc", gc.p_oc},
        {"p_ot", gc.p_ot},       {"u_mean", gc.u_mean}, {"u_sigma", gc.u_sigma},
        {"s1_missing", gc.s1_missing}};
  }
  json dirs = json::array();
  for (Direction d : cfg.directions) dirs.push_back(to_string(d));
  cfg_echo["sources"] = {{"directions", std::move(dirs)}, {"no_weights", cfg.no_weights}};
  out["config"] = std::move(cfg_echo);
  out["study"] = {{"reps", study.reps},
                  {"n_boot", study.n_boot},
                  {"alpha", study.alpha},
                  {"oracle_n", study.oracle_n},
                  {"seed", study.seed},
                  {"method", study.estimator.method == Method::Did ? "did" : "cic"},
                  {"grid", study.estimator.grid_size}};
  out["truth"] = {{"att_ao", rep.truth.att_ao},
                  {"pi0", rep.truth.pi0},
                  {"pi1", rep.truth.pi1},
                  {"oracle_n", rep.truth.oracle_n}};
  out["coverage"] = {{"bounds", rep.bounds_cover}, {"ci", rep.ci_cover}};
  out["estimates"] = {{"lb", {{"mean", rep.mean_lb}, {"sd", rep.sd_lb}}},
                      {"ub", {{"mean", rep.mean_ub}, {"sd", rep.sd_ub}}},
                      {"pi0", {{"mean", rep.mean_pi0}, {"sd", rep.sd_pi0}}},
                      {"pi1", {{"mean", rep.mean_pi1}, {"sd", rep.sd_pi1}}},
                      {"naive_did", {{"mean", rep.mean_naive_did}, {"sd", rep.sd_naive_did}}},
                      {"selection_did",
                       {{"mean", rep.mean_selection_did}, {"sd", rep.sd_selection_did}}},
                      {"mean_ci_width", rep.mean_ci_width}};
  out["events"] = {{"clip_rate", rep.clip_rate},
                   {"clamp_rate", rep.clamp_rate},
                   {"reps_failed", rep.reps_failed}};
  return out;
}

int exit_code_for(const std::exception& e) {
  if (dynamic_cast<const IoError*>(&e) != nullptr) return 1;
  if (dynamic_cast<const MissingColumn*>(&e) != nullptr) return 2;
  if (dynamic_cast<const ParseError*>(&e) != nullptr) return 2;
  if (dynamic_cast<const InvariantViolation*>(&e) != nullptr) return 2;
  if (dynamic_cast<const InvalidConfig*>(&e) != nullptr) return 2;
  if (dynamic_cast<const InvalidAlpha*>(&e) != nullptr) return 2;
  if (dynamic_cast<const DirectionMissing*>(&e) != nullptr) return 2;
  if (dynamic_cast<const EmptySelection*>(&e) != nullptr) return 3;
  if (dynamic_cast<const DegenerateTrim*>(&e) != nullptr) return 3;
  if (dynamic_cast<const DegenerateDenominator*>(&e) != nullptr) return 3;
  if (dynamic_cast<const DivisionByZeroBaseline*>(&e) != nullptr) return 3;
  if (dynamic_cast<const TooManyDegenerateReplicates*>(&e) != nullptr) return 3;
  if (dynamic_cast<const std::invalid_argument*>(&e) != nullptr) return 2;
  return 1;
}

int cmd_estimate(const EstimateRequest& req) {
  try {
    std::vector<std::string> warnings;
    json result = run_estimate(req, &warnings);
    for (const auto& w : warnings) std::cerr << "warning: " << w << "\n";
    if (req.format == "csv") {
      const json& block = req.method == "both" ? result.at("cic") : result;
      emit(req.out, qtt_csv(block));
    } else {
      emit(req.out, result.dump(2) + "\n");
    }
    return 0;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code_for(e);
  }
}

int cmd_simulate(const SimulateRequest& req) {
  try {
    json result = run_simulate(req);
    emit(req.out, result.dump(2) + "\n");
    return 0;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code_for(e);
  }
}

int cmd_validate(const ValidateRequest& req) {
  try {
    std::vector<std::string> ignored;
    PanelDataset ds = parse_csv(req.input, req.schema, &ignored);
    for (const auto& col : ignored)
      std::cerr << "warning: ignoring unrecognized column '" << col << "'\n";
    auto violations = validate(ds);
    for (const auto& v : violations)
      std::cout << "row " << v.row << ": " << v.rule << " (unit " << v.unit_id << ")\n";
    if (violations.empty()) {
      std::cout << "ok: " << ds.units().size() << " units, "
                << ds.n_sources() << " source(s)\n";
      return 0;
    }
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code_for(e);
  }
}

}  // namespace bounded
