/*
 * Copyright 2026 The confgen Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "cli.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "confgen/calibrate.hpp"
#include "confgen/error.hpp"
#include "confgen/infer.hpp"
#include "record_io.hpp"

namespace confgen::cli {

using nlohmann::json;

namespace {

[[noreturn]] void ConfigFail(const std::string& rule) {
  throw Error(ErrorCode::kConfiguration, "invalid configuration: " + rule);
}

template <typename T>
T Get(const json& j, const char* key) {
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    ConfigFail(std::string("'") + key + "' has the wrong type or is missing");
  }
}

std::optional<double> GetOptionalNumber(const json& j, const char* key) {
  if (!j.contains(key) || j[key].is_null()) return std::nullopt;
  if (!j[key].is_number()) ConfigFail(std::string("'") + key + "' must be a number");
  return j[key].get<double>();
}

std::size_t GetCount(const json& j, const char* key) {
  if (!j.contains(key) || !j[key].is_number_integer() ||
      j[key].get<std::int64_t>() < 1) {
    ConfigFail(std::string("'") + key + "' must be a positive integer");
  }
  return j[key].get<std::size_t>();
}

std::uint64_t ParseSeed(const json& value) {
  if (value.is_number_unsigned()) return value.get<std::uint64_t>();
  if (value.is_number_integer() && value.get<std::int64_t>() >= 0) {
    return static_cast<std::uint64_t>(value.get<std::int64_t>());
  }
  if (value.is_string()) {
    const std::string s = value.get<std::string>();
    std::uint64_t seed = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), seed);
    if (ec == std::errc() && ptr == s.data() + s.size()) return seed;
  }
  ConfigFail("'seed' must be a non-negative 64-bit integer");
}

SelectorKind ResolveSelector(const json& j) {
  const std::string name = Get<std::string>(j, "selector");
  std::optional<Accum> accum;
  if (j.contains("accum") && !j["accum"].is_null()) {
    const std::string a = Get<std::string>(j, "accum");
    if (a == "max") {
      accum = Accum::kMax;
    } else if (a == "sum") {
      accum = Accum::kSum;
    } else {
      ConfigFail("'accum' must be \"max\" or \"sum\"");
    }
  }
  if (name == "running") {
    return accum == Accum::kSum ? SelectorKind::kRunningSum
                                : SelectorKind::kRunningMax;
  }
  const auto kind = ParseSelector(name);
  if (!kind) ConfigFail("unknown selector '" + name + "'");
  if (accum) {
    const auto native = AccumOf(*kind);
    if (!native) {
      ConfigFail("accum does not apply to selector " + name);
    }
    if (*native != *accum) {
      ConfigFail("accum '" + Get<std::string>(j, "accum") +
                 "' conflicts with selector " + name);
    }
  }
  return *kind;
}

ScoreModel ResolveScoreModel(const json& s) {
  ScoreModel m;
  const std::string dist = Get<std::string>(s, "dist");
  if (dist == "normal") {
    m.kind = ScoreModel::Kind::kNormal;
  } else if (dist == "uniform") {
    m.kind = ScoreModel::Kind::kUniform;
  } else if (dist == "exponential") {
    m.kind = ScoreModel::Kind::kExponential;
  } else {
    ConfigFail("process.score.dist must be normal, uniform or exponential");
  }
  m.p1 = Get<double>(s, "p1");
  m.p2 = Get<double>(s, "p2");
  return m;
}

LinkModel ResolveLink(const json& l) {
  LinkModel m;
  const std::string kind = Get<std::string>(l, "kind");
  if (kind == "logistic") {
    m.kind = LinkModel::Kind::kLogistic;
  } else if (kind == "constant") {
    m.kind = LinkModel::Kind::kConstant;
  } else {
    ConfigFail("process.link.kind must be logistic or constant");
  }
  m.a = Get<double>(l, "a");
  m.b = Get<double>(l, "b");
  return m;
}

json ParseNumberJson(const std::string& text) {
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    ConfigFail("'" + text + "' is not a number");
  }
  return v;
}

// Collects flags that were actually given, so they can be layered on top of
// the config file.
struct FlagState {
  std::string config_path;
  json overrides = json::object();
  std::string out_path;
};

void AddCommonOptions(CLI::App* app, FlagState& f) {
  auto set = [&f](std::string key) {
    return [&f, key](const std::string& v) { f.overrides[key] = v; };
  };
  auto set_number = [&f](std::string key) {
    return [&f, key](double v) { f.overrides[key] = v; };
  };
  app->add_option("--config", f.config_path, "JSON config file");
  app->add_option("--out", f.out_path, "Write output to this file");
  app->add_option_function<std::string>("--selector", set("selector"),
                                        "Selection function");
  app->add_option_function<std::string>("--accum", set("accum"), "max|sum");
  app->add_option_function<std::string>("--agg", set("agg"),
                                        "max|min|recall|count_at_least");
  app->add_option_function<double>("--beta", set_number("beta"),
                                   "Recall threshold");
  app->add_option_function<int>(
      "--k", [&f](int v) { f.overrides["k"] = v; }, "Count threshold");
  app->add_option_function<double>("--a-max", set_number("a_max"),
                                   "Upper bound of admissibility");
  app->add_option_function<double>("--a-min", set_number("a_min"),
                                   "Lower bound of admissibility");
  app->add_option_function<double>("--abstain", set_number("abstain"),
                                   "Admissibility of the abstain output");
  app->add_option_function<double>("--gamma", set_number("gamma"),
                                   "Admissibility target");
  app->add_option_function<std::string>("--gamma-grid", set("gamma_grid"),
                                        "Comma separated targets or 'default'");
  app->add_flag_function(
      "--dedup", [&f](std::int64_t) { f.overrides["dedup"] = true; },
      "Drop selected elements with repeated dedup keys");
  app->add_option_function<std::string>("--seed", set("seed"), "RNG seed");
  app->add_option_function<int>(
      "--reps", [&f](int v) { f.overrides["reps"] = v; },
      "Monte Carlo repetitions");
}

void AddProcessOptions(CLI::App* app, FlagState& f) {
  app->add_option_function<int>(
      "--n-cal", [&f](int v) { f.overrides["n_cal"] = v; },
      "Calibration records per rep");
  app->add_option_function<int>(
      "--n-test", [&f](int v) { f.overrides["n_test"] = v; },
      "Test records per rep");
  app->add_option_function<int>(
      "--n-elements",
      [&f](int v) {
        f.overrides["process"]["min_elements"] = v;
        f.overrides["process"]["max_elements"] = v;
      },
      "Elements per generated sequence");
  app->add_option_function<std::string>(
      "--score-dist",
      [&f](const std::string& v) { f.overrides["process"]["score"]["dist"] = v; },
      "normal|uniform|exponential");
  app->add_option_function<double>(
      "--score-p1", [&f](double v) { f.overrides["process"]["score"]["p1"] = v; },
      "Mean / low / rate");
  app->add_option_function<double>(
      "--score-p2", [&f](double v) { f.overrides["process"]["score"]["p2"] = v; },
      "Stddev / high");
  app->add_option_function<std::string>(
      "--link",
      [&f](const std::string& v) { f.overrides["process"]["link"]["kind"] = v; },
      "logistic|constant");
  app->add_option_function<double>(
      "--link-a", [&f](double v) { f.overrides["process"]["link"]["a"] = v; },
      "Logistic slope or constant probability");
  app->add_option_function<double>(
      "--link-b", [&f](double v) { f.overrides["process"]["link"]["b"] = v; },
      "Logistic intercept");
}

json Effective(const FlagState& f) {
  json j = DefaultConfigJson();
  if (const char* env = std::getenv("CONFGEN_SEED"); env && *env) {
    j["seed"] = std::string(env);
  }
  if (!f.config_path.empty()) {
    std::ifstream in(f.config_path);
    if (!in) {
      throw Error(ErrorCode::kParse, "cannot open config " + f.config_path);
    }
    try {
      j.merge_patch(json::parse(in));
    } catch (const json::parse_error& e) {
      throw Error(ErrorCode::kParse,
                  f.config_path + ": malformed JSON: " + e.what());
    }
  }
  j.merge_patch(f.overrides);
  return j;
}

json IndicesToJson(const std::vector<std::size_t>& indices) {
  json arr = json::array();
  for (std::size_t i : indices) arr.push_back(i + 1);
  return arr;
}

double RequireGamma(const RunConfig& cfg) {
  if (!cfg.gamma) ConfigFail("'gamma' is required for this command");
  return *cfg.gamma;
}

int RunCalibrate(const RunConfig& cfg, const std::string& path,
                 std::ostream& out, std::ostream& err) {
  const auto records = ReadRecordsFile(path);
  const CalibrationResult r =
      Calibrate(records, cfg.sel, cfg.adm, RequireGamma(cfg));
  json j;
  j["lambda_hat"] = LambdaToJson(r.lambda_hat);
  j["gamma"] = r.gamma;
  j["threshold"] = r.threshold;
  j["achieved"] = r.achieved;
  j["n"] = r.n;
  j["warnings"] = r.warnings;
  json trace = json::array();
  for (const auto& p : r.trace) {
    trace.push_back({LambdaToJson(p.lambda), p.mean_admissibility});
  }
  j["trace"] = std::move(trace);
  j["config"] = cfg.effective;
  out << j.dump() << '\n';
  for (const auto& w : r.warnings) err << "warning: " << w << '\n';
  return r.lambda_hat.is_pos_inf() ? kExitAbstain : kExitOk;
}

int RunApply(const RunConfig& cfg, const std::string& path,
             const std::string& lambda_text, std::ostream& out,
             std::ostream& err) {
  const auto lambda = ExtendedLambda::Parse(lambda_text);
  if (!lambda) {
    throw Error(ErrorCode::kParse, "--lambda-hat must be a number, -inf or inf");
  }
  const auto records = ReadRecordsFile(path);
  err << "# config: " << cfg.effective.dump() << '\n';
  for (const auto& record : records) {
    const SelectionOutput o = Apply(cfg.sel, *lambda, record);
    json j;
    j["id"] = record.id;
    j["indices"] = IndicesToJson(o.indices);
    j["pulled"] = o.pulled_count;
    out << j.dump() << '\n';
  }
  return kExitOk;
}

int RunSweep(const RunConfig& cfg, const std::string& cal_path,
             const std::string& test_path, bool forest, std::ostream& out) {
  out << "# confgen sweep config_hash=" << ConfigHash(cfg.effective)
      << " config=" << cfg.effective.dump() << '\n';
  out << "# note: single calibration split; the guarantee holds in "
         "expectation over calibration draws, so rows may dip below gamma\n";
  if (forest) {
    const auto rows = ForestDemo(ReadForestFile(cal_path),
                                 ReadForestFile(test_path), cfg.adm.k,
                                 cfg.gamma_grid);
    WriteForestCsv(out, rows);
  } else {
    const auto cal = ReadRecordsFile(cal_path);
    const auto test = ReadRecordsFile(test_path);
    const auto rows = Sweep(cal, test, cfg.sel, cfg.adm, cfg.gamma_grid);
    WriteSweepCsv(out, rows);
  }
  return kExitOk;
}

int RunSimulate(const RunConfig& cfg, bool forest, std::ostream& out) {
  SimulationResult result;
  if (forest) {
    ForestProcess proc = cfg.forest;
    proc.seed = cfg.seed;
    result = SimulateForest(proc, cfg.n_cal, cfg.n_test, cfg.reps, cfg.adm.k,
                            cfg.gamma_grid);
  } else {
    ProcessSpec proc = cfg.process;
    proc.seed = cfg.seed;
    result = Simulate(proc, cfg.n_cal, cfg.n_test, cfg.reps, cfg.sel, cfg.adm,
                      cfg.gamma_grid);
  }
  out << "# confgen simulate seed=" << cfg.seed
      << " config_hash=" << ConfigHash(cfg.effective)
      << " config=" << cfg.effective.dump() << '\n';
  for (const auto& w : result.warnings) out << "# warning: " << w << '\n';
  WriteCoverageCsv(out, result.rows);
  return kExitOk;
}

int RunDiagnose(const RunConfig& cfg, const std::string& path,
                std::ostream& out) {
  const auto records = ReadRecordsFile(path);
  const DiagnosticsReport d =
      UpperBoundDiag(records, cfg.sel, cfg.adm, RequireGamma(cfg));
  json j;
  j["gamma"] = *cfg.gamma;
  j["n_plus_one"] = d.n_plus_one;
  j["lambda_star"] = LambdaToJson(d.lambda_star);
  j["lambda_star_star"] = LambdaToJson(d.lambda_star_star);
  j["H"] = d.h;
  j["upper_bound"] = d.upper_bound;
  j["monotone_fraction"] = d.monotone_fraction;
  j["coincident_breakpoints"] = d.coincident_breakpoints;
  j["config"] = cfg.effective;
  out << j.dump() << '\n';
  return kExitOk;
}

}  // namespace

json DefaultConfigJson() {
  return json{
      {"selector", "running_max"},
      {"accum", nullptr},
      {"agg", "max"},
      {"beta", 1.0},
      {"k", 1},
      {"a_max", 1.0},
      {"a_min", 0.0},
      {"abstain", nullptr},
      {"dedup", false},
      {"gamma", nullptr},
      {"gamma_grid", "default"},
      {"seed", 0},
      {"reps", 100},
      {"n_cal", 100},
      {"n_test", 100},
      {"process",
       {{"min_elements", 10},
        {"max_elements", 10},
        {"score", {{"dist", "normal"}, {"p1", 0.0}, {"p2", 1.0}}},
        {"link", {{"kind", "logistic"}, {"a", 2.0}, {"b", -1.0}}},
        {"a_max", nullptr}}},
      {"forest",
       {{"n_trees", 20},
        {"accuracy", 0.8},
        {"weight_low", 0.5},
        {"weight_high", 1.5}}},
  };
}

std::vector<double> ParseGammaGrid(const std::string& text) {
  if (text == "default") return DefaultGammaGrid();
  std::vector<double> grid;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    grid.push_back(ParseNumberJson(item).get<double>());
  }
  if (grid.empty()) ConfigFail("'gamma_grid' is empty");
  return grid;
}

std::string ConfigHash(const json& config) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : config.dump()) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(h));
  return buf;
}

RunConfig ResolveConfig(const json& effective) {
  RunConfig cfg;
  cfg.effective = effective;
  const json& j = effective;

  const SelectorKind kind = ResolveSelector(j);
  cfg.sel = MakeSelection(kind, Get<bool>(j, "dedup"));

  const std::string agg = Get<std::string>(j, "agg");
  const auto agg_kind = ParseAgg(agg);
  if (!agg_kind) ConfigFail("unknown agg '" + agg + "'");
  cfg.adm.agg = *agg_kind;
  cfg.adm.beta = Get<double>(j, "beta");
  if (!j["k"].is_number_integer()) ConfigFail("'k' must be an integer");
  cfg.adm.k = j["k"].get<int>();
  cfg.adm.a_max = GetOptionalNumber(j, "a_max");
  cfg.adm.a_min = GetOptionalNumber(j, "a_min").value_or(0.0);
  cfg.adm.abstain = GetOptionalNumber(j, "abstain");
  try {
    Validate(cfg.adm);
  } catch (const Error& e) {
    ConfigFail(e.what());
  }

  cfg.gamma = GetOptionalNumber(j, "gamma");
  const json& grid = j.at("gamma_grid");
  if (grid.is_null()) {
    cfg.gamma_grid = DefaultGammaGrid();
  } else if (grid.is_string()) {
    cfg.gamma_grid = ParseGammaGrid(grid.get<std::string>());
  } else if (grid.is_array()) {
    cfg.gamma_grid = Get<std::vector<double>>(j, "gamma_grid");
  } else {
    ConfigFail("'gamma_grid' must be a list, a comma string or \"default\"");
  }

  cfg.seed = ParseSeed(j.at("seed"));
  cfg.effective["seed"] = cfg.seed;
  cfg.reps = GetCount(j, "reps");
  cfg.n_cal = GetCount(j, "n_cal");
  cfg.n_test = GetCount(j, "n_test");

  const json& p = j.at("process");
  cfg.process.min_elements = GetCount(p, "min_elements");
  cfg.process.max_elements = GetCount(p, "max_elements");
  cfg.process.score = ResolveScoreModel(p.at("score"));
  cfg.process.link = ResolveLink(p.at("link"));
  cfg.process.a_max =
      GetOptionalNumber(p, "a_max").value_or(cfg.adm.a_max.value_or(1.0));
  try {
    Validate(cfg.process);
  } catch (const Error& e) {
    ConfigFail(e.what());
  }

  const json& fj = j.at("forest");
  cfg.forest.n_trees = GetCount(fj, "n_trees");
  cfg.forest.accuracy = Get<double>(fj, "accuracy");
  cfg.forest.weight_low = Get<double>(fj, "weight_low");
  cfg.forest.weight_high = Get<double>(fj, "weight_high");
  return cfg;
}

int Main(int argc, const char* const* argv, std::ostream& out,
         std::ostream& err) {
  CLI::App app{"Calibrated selection of generated outputs with conformal "
               "admissibility guarantees"};
  app.require_subcommand(1);
  FlagState flags;

  std::string path, test_path, lambda_text;
  bool forest = false;

  auto* calibrate = app.add_subcommand("calibrate", "Compute lambda_hat");
  calibrate->add_option("records", path, "Calibration JSONL")->required();
  AddCommonOptions(calibrate, flags);

  auto* apply = app.add_subcommand("apply", "Apply lambda_hat to records");
  apply->add_option("records", path, "Records JSONL")->required();
  apply->add_option("--lambda-hat", lambda_text, "Calibrated threshold")
      ->required();
  AddCommonOptions(apply, flags);

  auto* sweep = app.add_subcommand("sweep", "Coverage over a gamma grid");
  sweep->add_option("cal", path, "Calibration JSONL (or forest JSON)")
      ->required();
  sweep->add_option("test", test_path, "Test JSONL (or forest JSON)")
      ->required();
  sweep->add_flag("--forest", forest, "Inputs are forest matrix files");
  AddCommonOptions(sweep, flags);

  auto* simulate =
      app.add_subcommand("simulate", "Monte Carlo coverage verification");
  simulate->add_flag("--forest", forest, "Simulate the tree-ensemble demo");
  AddCommonOptions(simulate, flags);
  AddProcessOptions(simulate, flags);

  auto* diagnose =
      app.add_subcommand("diagnose", "Upper-bound diagnostics on n+1 records");
  diagnose->add_option("records", path, "Calibration + test JSONL")->required();
  AddCommonOptions(diagnose, flags);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitValidation;
  }

  try {
    const RunConfig cfg = ResolveConfig(Effective(flags));
    std::ofstream file;
    std::ostream* sink = &out;
    if (!flags.out_path.empty()) {
      file.open(flags.out_path);
      if (!file) {
        throw Error(ErrorCode::kParse, "cannot write " + flags.out_path);
      }
      sink = &file;
    }
    if (calibrate->parsed()) return RunCalibrate(cfg, path, *sink, err);
    if (apply->parsed()) return RunApply(cfg, path, lambda_text, *sink, err);
    if (sweep->parsed()) return RunSweep(cfg, path, test_path, forest, *sink);
    if (simulate->parsed()) return RunSimulate(cfg, forest, *sink);
    if (diagnose->parsed()) return RunDiagnose(cfg, path, *sink);
  } catch (const Error& e) {
    err << "error [" << ErrorCodeName(e.code()) << "]: " << e.what() << '\n';
    return kExitValidation;
  }
  return kExitValidation;
}

}  // namespace confgen::cli
