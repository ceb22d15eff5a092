#include <CLI11.hpp>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "ncrat/idtest.hpp"
#include "ncrat/lab.hpp"
#include "ncrat/parse.hpp"
#include "ncrat/realization.hpp"
#include "ncrat/serialize.hpp"

namespace {

using namespace ncrat;
using nlohmann::json;

// Exit codes, stable across releases:
//   0 success / ProbablyEqual
//   1 file, shape or configuration error
//   2 parse error
//   3 domain error (evaluation)
//   4 realization verification above tolerance
//   5 identity test: Distinct
//   6 identity test: NoCommonDomainPoint
constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitParse = 2;
constexpr int kExitDomain = 3;
constexpr int kExitVerify = 4;
constexpr int kExitDistinct = 5;
constexpr int kExitNoCommon = 6;

std::uint64_t default_seed() {
  if (const char* env = std::getenv("NCRAT_SEED")) {
    char* end = nullptr;
    const unsigned long long value = std::strtoull(env, &end, 10);
    if (end && *end == '\0') return static_cast<std::uint64_t>(value);
    std::cerr << "warning: ignoring malformed NCRAT_SEED=\"" << env << "\"\n";
  }
  return kDefaultSeed;
}

Expression parse_or_exit(const std::string& text) {
  try {
    return parse(text);
  } catch (const ParseException& ex) {
    std::cerr << ex.what() << "\n";
    std::exit(kExitParse);
  }
}

json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    std::cerr << "cannot open " << path << "\n";
    std::exit(kExitConfig);
  }
  try {
    return json::parse(in);
  } catch (const json::exception& ex) {
    std::cerr << path << ": " << ex.what() << "\n";
    std::exit(kExitConfig);
  }
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    std::cerr << "cannot write " << path << "\n";
    std::exit(kExitConfig);
  }
  out << content;
}

Complex parse_complex_flag(const std::string& text) {
  // "re" or "re,im"
  const auto comma = text.find(',');
  try {
    if (comma == std::string::npos) return Complex{std::stod(text), 0.0};
    return Complex{std::stod(text.substr(0, comma)), std::stod(text.substr(comma + 1))};
  } catch (const std::exception&) {
    std::cerr << "malformed complex value \"" << text << "\" (want re or re,im)\n";
    std::exit(kExitConfig);
  }
}

std::vector<VariableEnsemble> parse_ensemble_flags(const std::vector<std::string>& flags) {
  std::vector<VariableEnsemble> out;
  for (const std::string& flag : flags) {
    const auto colon = flag.find(':');
    const std::string name = flag.substr(0, colon == std::string::npos ? flag.size() : colon);
    const auto kind = kind_from_name(name);
    if (!kind) {
      std::cerr << "unknown ensemble \"" << name << "\"\n";
      std::exit(kExitConfig);
    }
    VariableEnsemble e{*kind, {}};
    if (colon != std::string::npos) e.param = parse_complex_flag(flag.substr(colon + 1));
    out.push_back(e);
  }
  return out;
}

int cmd_parse(const std::string& expr_text) {
  const Expression e = parse_or_exit(expr_text);
  const VariableInventory inv = inventory(e);
  json adjoints = json::array();
  for (int i = 1; i <= inv.num_variables; ++i)
    if (inv.adjoint_used(i)) adjoints.push_back(i);
  const json out{{"format_version", io::kFormatVersion},
                 {"expression", expr_text},
                 {"pretty", pretty_print(e)},
                 {"level", level(e)},
                 {"variables", inv.num_variables},
                 {"adjoint_variables", adjoints},
                 {"ast", io::expression_ast_to_json(e)}};
  std::cout << out.dump(2) << "\n";
  return kExitOk;
}

int cmd_eval(const std::string& expr_text, const std::string& matrices_path, double tol) {
  const Expression e = parse_or_exit(expr_text);
  MatrixTuple tuple;
  try {
    tuple = MatrixTuple::of(io::matrix_file_from_json(load_json_file(matrices_path)));
  } catch (const std::exception& ex) {
    std::cerr << matrices_path << ": " << ex.what() << "\n";
    return kExitConfig;
  }
  if (inventory(e).num_variables > tuple.size()) {
    std::cerr << "matrix file covers " << tuple.size() << " variables, expression needs "
              << inventory(e).num_variables << "\n";
    return kExitConfig;
  }
  const EvalOutcome out = evaluate(e, tuple, tol);
  if (const auto* err = std::get_if<DomainError>(&out)) {
    std::cerr << "domain error at " << pretty_print(err->failing_subexpression)
              << ": sigma_min=" << io::csv_double(err->sigma_min)
              << " sigma_max=" << io::csv_double(err->sigma_max) << "\n";
    return kExitDomain;
  }
  std::cout << io::matrix_file_to_json({std::get<ComplexMatrix>(out)}).dump(2) << "\n";
  return kExitOk;
}

int cmd_realize(const std::string& expr_text, int check_trials, Eigen::Index dim,
                std::uint64_t seed, double tol) {
  const Expression e = parse_or_exit(expr_text);
  const Realization r = realize(e);
  json out = io::realization_to_json(r);
  if (check_trials > 0) {
    const VerificationReport report = verify_realization(e, r, check_trials, dim, seed, tol);
    out["verification"] = json{{"trials", report.trials},
                               {"both_defined", report.both_defined},
                               {"eval_only", report.eval_only},
                               {"realization_only", report.realization_only},
                               {"max_rel_error", report.max_rel_error},
                               {"dim", dim},
                               {"seed", seed},
                               {"tol", tol}};
    std::cout << out.dump(2) << "\n";
    if (report.max_rel_error > tol) {
      std::cerr << "verification failed: max relative error "
                << io::csv_double(report.max_rel_error) << " exceeds " << io::csv_double(tol)
                << "\n";
      return kExitVerify;
    }
    return kExitOk;
  }
  std::cout << out.dump(2) << "\n";
  return kExitOk;
}

int cmd_idtest(const std::string& e1_text, const std::string& e2_text, Eigen::Index max_size,
               int trials, double tol, std::uint64_t seed) {
  const Expression e1 = parse_or_exit(e1_text);
  const Expression e2 = parse_or_exit(e2_text);
  IdentityVerdict verdict;
  try {
    verdict = test_identity(e1, e2, max_size, trials, tol, seed);
  } catch (const std::exception& ex) {
    std::cerr << ex.what() << "\n";
    return kExitConfig;
  }
  std::cout << io::verdict_to_json(verdict).dump(2) << "\n";
  switch (verdict.kind) {
    case IdentityVerdict::Kind::Distinct:
      std::cerr << "distinct: witness size=" << verdict.witness->size
                << " trial=" << verdict.witness->trial
                << " deviation=" << io::csv_double(verdict.witness->deviation) << "\n";
      return kExitDistinct;
    case IdentityVerdict::Kind::NoCommonDomainPoint:
      return kExitNoCommon;
    case IdentityVerdict::Kind::ProbablyEqual:
      return kExitOk;
  }
  return kExitConfig;
}

struct ConvergeFlags {
  std::string config_path;
  std::string expr_text;
  std::vector<std::string> ensembles;
  std::vector<Eigen::Index> sizes;
  int trials = -1;
  std::optional<std::uint64_t> seed;
  double tol = -1.0;
  std::string out_prefix;
};

std::optional<ConvergenceConfig> merge_config(const ConvergeFlags& flags) {
  ConvergenceConfig cfg;
  bool have_base = false;
  if (!flags.config_path.empty()) {
    try {
      cfg = io::config_from_json(load_json_file(flags.config_path));
      have_base = true;
    } catch (const std::exception& ex) {
      std::cerr << flags.config_path << ": " << ex.what() << "\n";
      return std::nullopt;
    }
  }
  // Flags win over the file.
  if (!flags.expr_text.empty()) {
    cfg.expression_text = flags.expr_text;
    cfg.expression = parse_or_exit(flags.expr_text);
  } else if (!have_base) {
    std::cerr << "converge: need --config or --expr\n";
    return std::nullopt;
  }
  if (!flags.ensembles.empty()) cfg.ensembles = parse_ensemble_flags(flags.ensembles);
  if (!flags.sizes.empty()) cfg.sizes = flags.sizes;
  if (flags.trials >= 0) cfg.trials = flags.trials;
  if (flags.seed) cfg.seed = *flags.seed;
  if (!have_base && !flags.seed) cfg.seed = default_seed();
  if (flags.tol > 0.0) cfg.tol = flags.tol;
  try {
    validate(cfg);
  } catch (const std::exception& ex) {
    std::cerr << "invalid configuration: " << ex.what() << "\n";
    return std::nullopt;
  }
  return cfg;
}

int cmd_converge(const ConvergeFlags& flags) {
  const std::optional<ConvergenceConfig> cfg = merge_config(flags);
  if (!cfg) return kExitConfig;
  const ConvergenceReport report = run_convergence(*cfg);
  write_file(flags.out_prefix + ".json", io::report_to_json(report).dump(2) + "\n");
  write_file(flags.out_prefix + ".csv", io::report_to_csv(report));
  std::cout << "wrote " << flags.out_prefix << ".json and " << flags.out_prefix << ".csv\n";
  return kExitOk;
}

int cmd_domain(const ConvergeFlags& flags) {
  const std::optional<ConvergenceConfig> cfg = merge_config(flags);
  if (!cfg) return kExitConfig;
  const std::vector<DomainCurvePoint> curve = eventual_domain_curve(*cfg);
  write_file(flags.out_prefix + ".json", io::domain_curve_to_json(*cfg, curve).dump(2) + "\n");
  write_file(flags.out_prefix + ".csv", io::domain_curve_to_csv(curve));
  std::cout << "wrote " << flags.out_prefix << ".json and " << flags.out_prefix << ".csv\n";
  return kExitOk;
}

int cmd_outlier(const ConvergeFlags& flags, const std::string& rule_name) {
  const std::optional<ConvergenceConfig> cfg = merge_config(flags);
  if (!cfg) return kExitConfig;
  OutlierRule rule;
  if (rule_name == "one") {
    rule.kind = OutlierRule::Kind::ConstantOne;
  } else if (rule_name == "reciprocal") {
    rule.kind = OutlierRule::Kind::ReciprocalNPlusOne;
  } else {
    std::cerr << "unknown outlier rule \"" << rule_name << "\" (want reciprocal or one)\n";
    return kExitConfig;
  }
  const OutlierReport report = run_outlier_experiment(*cfg, rule);
  write_file(flags.out_prefix + ".json", io::outlier_report_to_json(report).dump(2) + "\n");
  write_file(flags.out_prefix + ".csv", io::outlier_report_to_csv(report));
  std::cout << "wrote " << flags.out_prefix << ".json and " << flags.out_prefix << ".csv\n";
  return kExitOk;
}

int cmd_sample(const std::string& kind_name_flag, Eigen::Index size, std::uint64_t seed,
               std::uint64_t index, std::uint64_t trial, const std::string& param_text) {
  const auto kind = kind_from_name(kind_name_flag);
  if (!kind) {
    std::cerr << "unknown ensemble \"" << kind_name_flag << "\"\n";
    return kExitConfig;
  }
  EnsembleSpec spec{*kind, size, seed};
  if (!param_text.empty()) spec.param = parse_complex_flag(param_text);
  const ComplexMatrix m = sample(spec, index, trial);
  std::cout << io::matrix_file_to_json({m}).dump(2) << "\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"non-commutative rational expressions: evaluation, realizations, "
               "identity testing and strong-convergence experiments"};
  app.require_subcommand(1);

  std::string expr_text, expr2_text;
  std::string matrices_path;
  double tol = kDefaultInvertTol;

  auto* parse_cmd = app.add_subcommand("parse", "parse an expression and dump AST, level, inventory");
  parse_cmd->add_option("expression", expr_text)->required();

  auto* eval_cmd = app.add_subcommand("eval", "evaluate an expression on a matrix tuple");
  eval_cmd->add_option("expression", expr_text)->required();
  eval_cmd->add_option("--matrices", matrices_path, "MatrixFile JSON, entry i is variable xi")
      ->required();
  eval_cmd->add_option("--tol", tol, "relative invertibility threshold");

  int check_trials = 0;
  Eigen::Index dim = 5;
  std::optional<std::uint64_t> seed_flag;
  auto* realize_cmd = app.add_subcommand("realize", "build a u A^-1 v realization");
  realize_cmd->add_option("expression", expr_text)->required();
  realize_cmd->add_option("--check", check_trials, "verify on this many random tuples");
  realize_cmd->add_option("--dim", dim, "matrix dimension for --check");
  realize_cmd->add_option("--seed", seed_flag, "seed for --check sampling");
  realize_cmd->add_option("--tol", tol, "verification tolerance");

  Eigen::Index max_size = kIdTestDefaultMaxSize;
  int id_trials = kIdTestDefaultTrials;
  double id_tol = kIdTestDefaultTol;
  auto* idtest_cmd = app.add_subcommand("idtest", "probabilistic rational identity test");
  idtest_cmd->add_option("expr1", expr_text)->required();
  idtest_cmd->add_option("expr2", expr2_text)->required();
  idtest_cmd->add_option("--max-size", max_size);
  idtest_cmd->add_option("--trials", id_trials, "trials per size");
  idtest_cmd->add_option("--tol", id_tol, "deviation tolerance");
  idtest_cmd->add_option("--seed", seed_flag);

  ConvergeFlags conv;
  auto add_converge_flags = [&](CLI::App* cmd) {
    cmd->add_option("--config", conv.config_path, "ConvergenceConfig JSON file");
    cmd->add_option("--expr", conv.expr_text, "expression (overrides config)");
    cmd->add_option("--ensemble", conv.ensembles,
                    "per-variable ensemble kind[:re[,im]] (repeatable)");
    cmd->add_option("--sizes", conv.sizes, "size schedule")->delimiter(',');
    cmd->add_option("--trials", conv.trials, "trials per size");
    cmd->add_option("--seed", conv.seed);
    cmd->add_option("--tol", conv.tol);
    cmd->add_option("--out", conv.out_prefix, "output prefix (PREFIX.json, PREFIX.csv)")
        ->required();
  };
  auto* converge_cmd =
      app.add_subcommand("converge", "trace/norm convergence experiment, JSON + CSV reports");
  add_converge_flags(converge_cmd);

  auto* domain_cmd =
      app.add_subcommand("domain", "eventual domain membership curve for an expression");
  add_converge_flags(domain_cmd);

  std::string rule_name = "reciprocal";
  auto* outlier_cmd = app.add_subcommand(
      "outlier", "paired outlier experiment: Y = diag(rule(n), X) against the base X");
  add_converge_flags(outlier_cmd);
  outlier_cmd->add_option("--rule", rule_name, "outlier value rule: reciprocal | one");

  std::string ensemble_name;
  Eigen::Index sample_size = 4;
  std::uint64_t sample_index = 1, sample_trial = 0;
  std::string param_text;
  auto* sample_cmd = app.add_subcommand("sample", "draw one ensemble matrix as MatrixFile JSON");
  sample_cmd->add_option("--ensemble", ensemble_name)->required();
  sample_cmd->add_option("--size", sample_size)->required();
  sample_cmd->add_option("--seed", seed_flag);
  sample_cmd->add_option("--index", sample_index, "tuple slot (1-based)");
  sample_cmd->add_option("--trial", sample_trial);
  sample_cmd->add_option("--param", param_text, "offset/value as re or re,im");

  CLI11_PARSE(app, argc, argv);

  const std::uint64_t seed = seed_flag.value_or(default_seed());

  try {
    if (parse_cmd->parsed()) return cmd_parse(expr_text);
    if (eval_cmd->parsed()) return cmd_eval(expr_text, matrices_path, tol);
    if (realize_cmd->parsed()) return cmd_realize(expr_text, check_trials, dim, seed, tol);
    if (idtest_cmd->parsed()) return cmd_idtest(expr_text, expr2_text, max_size, id_trials, id_tol, seed);
    if (converge_cmd->parsed()) return cmd_converge(conv);
    if (domain_cmd->parsed()) return cmd_domain(conv);
    if (outlier_cmd->parsed()) return cmd_outlier(conv, rule_name);
    if (sample_cmd->parsed())
      return cmd_sample(ensemble_name, sample_size, seed, sample_index, sample_trial, param_text);
  } catch (const std::exception& ex) {
    std::cerr << "error: " << ex.what() << "\n";
    return kExitConfig;
  }
  return kExitConfig;
}
