// Command-line front end: dataset generation, subset selection, model export,
// SVM training/prediction, metric evaluation, and the experiment harness.

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "kta/alignment.hpp"
#include "kta/baselines.hpp"
#include "kta/experiment.hpp"
#include "kta/json_io.hpp"
#include "kta/milo.hpp"
#include "kta/solver.hpp"
#include "kta/svm.hpp"
#include "kta/synthgen.hpp"

namespace {

using nlohmann::json;

void write_text(const std::string& path, const std::string& content) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write file: " + path);
  out << content;
}

void emit(const json& j, const std::string& path) {
  if (path.empty())
    std::cout << j.dump(2) << '\n';
  else
    write_text(path, j.dump(2) + "\n");
}

std::vector<std::size_t> parse_feature_list(const std::string& csv) {
  std::vector<std::size_t> out;
  std::stringstream ss(csv);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (tok.empty()) continue;
    const long v = std::stol(tok);
    if (v < 1) throw std::runtime_error("feature indices are 1-based");
    out.push_back(static_cast<std::size_t>(v - 1));
  }
  return out;
}

struct GammaChoice {
  std::string spec = "auto";  // "auto" or a positive number
  double beta = 1.0;

  // resolves gamma (and the sigest estimate when used)
  std::pair<double, double> resolve(const kta::PairStructure& ps, std::size_t theta) const {
    if (spec == "auto") {
      const double hat = kta::sigest_gamma(ps, theta, ps.p);
      return {beta * hat, hat};
    }
    const double g = std::stod(spec);
    if (g <= 0.0) throw std::runtime_error("gamma must be positive");
    return {g, 0.0};
  }
};

kta::Dataset load_standardized(const std::string& path) {
  return kta::standardize(kta::load_csv(path)).data;
}

int cmd_gen(const kta::GenConfig& cfg, const std::string& prefix) {
  kta::SyntheticData sd = kta::generate(cfg);
  kta::write_csv(sd.train, prefix + "_train.csv");
  kta::write_csv(sd.test, prefix + "_test.csv");
  write_text(prefix + "_meta.json", kta::sidecar_json(sd).dump(2) + "\n");
  std::cout << "wrote " << prefix << "_train.csv, " << prefix << "_test.csv, " << prefix
            << "_meta.json\n";
  return 0;
}

int cmd_select(const std::string& input, const std::string& method_name, std::size_t theta,
               const GammaChoice& gamma_choice, double C, double time_limit,
               const std::string& output) {
  const kta::Method method = kta::method_from_string(method_name);
  kta::Dataset ds = load_standardized(input);
  kta::PairStructure ps = kta::build_pair_structure(ds);
  const auto [gamma, gamma_hat] = gamma_choice.resolve(ps, theta);

  json out = {
      {"input", input},
      {"method", method_name},
      {"theta", theta},
      {"beta", gamma_choice.beta},
      {"gamma", gamma},
  };
  if (gamma_hat > 0.0) out["gamma_hat"] = gamma_hat;

  kta::SubsetMask mask;
  switch (method) {
    case kta::Method::bnb: {
      kta::SolveLimits lim;
      lim.time_limit_s = time_limit;
      kta::SolveResult r = kta::solve_bnb(ps, theta, gamma, lim);
      out["result"] = kta::to_json(r);
      mask = r.z_best;
      break;
    }
    case kta::Method::brute: {
      kta::SolveResult r = kta::brute_force(ps, theta, gamma);
      out["result"] = kta::to_json(r);
      mask = r.z_best;
      break;
    }
    case kta::Method::greedy: {
      kta::SelectionTrace t = kta::greedy_forward(ps, theta, gamma);
      out["trace"] = kta::to_json(t);
      out["objective"] = kta::alignment_objective(ps, t.mask, gamma);
      mask = t.mask;
      break;
    }
    case kta::Method::rfe: {
      kta::SelectionTrace t = kta::rfe_k(ds, theta, C, gamma);
      out["trace"] = kta::to_json(t);
      out["objective"] = kta::alignment_objective(ps, t.mask, gamma);
      mask = t.mask;
      break;
    }
  }
  json selected = json::array();
  std::vector<std::string> names;
  for (std::size_t j : mask.selected()) {
    selected.push_back(j + 1);
    names.push_back(ds.feature_names[j]);
  }
  out["selected_features"] = selected;
  out["selected_names"] = names;
  emit(out, output);
  return 0;
}

int cmd_export(const std::string& input, std::size_t theta, const GammaChoice& gamma_choice,
               const std::string& variant, const std::string& format, bool stabilized,
               double big_m_value, const std::string& output) {
  kta::Dataset ds = load_standardized(input);
  kta::PairStructure ps = kta::build_pair_structure(ds);
  const auto [gamma, gamma_hat] = gamma_choice.resolve(ps, theta);
  (void)gamma_hat;

  kta::MiloModel model;
  if (variant == "full")
    model = kta::build_milo(ps, gamma, theta, big_m_value);
  else if (variant == "reduced")
    model = kta::build_rmilo(ps, gamma, theta, stabilized);
  else
    throw std::runtime_error("unknown variant '" + variant + "' (expected full or reduced)");

  kta::ExportFormat fmt;
  if (format == "lp")
    fmt = kta::ExportFormat::lp_text;
  else if (format == "mps")
    fmt = kta::ExportFormat::mps_text;
  else
    throw std::runtime_error("unknown format '" + format + "' (expected lp or mps)");

  const std::string text = kta::export_model(model, fmt);
  if (output.empty())
    std::cout << text;
  else
    write_text(output, text);
  return 0;
}

int cmd_svm(const std::string& input, const std::string& predict_path,
            const std::string& features, double C, const GammaChoice& gamma_choice,
            const std::string& kernel_name, std::size_t theta_opt,
            const std::string& output, const std::string& pred_out) {
  kta::Dataset ds = load_standardized(input);
  const std::size_t p = ds.p();

  kta::SubsetMask mask;
  if (features.empty()) {
    std::vector<std::uint8_t> all(p, 1);
    mask = kta::SubsetMask{all, p};
  } else {
    const auto idx = parse_feature_list(features);
    const std::size_t budget = theta_opt > 0 ? theta_opt : idx.size();
    mask = kta::SubsetMask::from_indices(p, budget, idx);
  }

  kta::PairStructure ps = kta::build_pair_structure(ds);
  const std::size_t theta_for_gamma = mask.cardinality() > 0 ? mask.cardinality() : p;
  const auto [gamma, gamma_hat] = gamma_choice.resolve(ps, theta_for_gamma);
  (void)gamma_hat;

  kta::KernelKind kind;
  if (kernel_name == "gaussian")
    kind = kta::KernelKind::gaussian;
  else if (kernel_name == "linear")
    kind = kta::KernelKind::linear;
  else
    throw std::runtime_error("unknown kernel '" + kernel_name + "'");

  kta::SvmModel model = kta::train(ds, kta::SvmKernel{kind, gamma, mask}, C);
  json out;
  out["model"] = kta::to_json(model);
  out["kernel"] = kernel_name;
  out["dual_objective"] = model.dual_objective_value;
  out["iterations"] = model.iterations;

  if (!predict_path.empty()) {
    kta::Dataset test = load_standardized(predict_path);
    const std::vector<double> preds = kta::predict(model, test);
    std::size_t hits = 0;
    for (std::size_t i = 0; i < preds.size(); ++i)
      if ((preds[i] > 0) == (test.y[i] > 0)) ++hits;
    out["test_accuracy"] =
        static_cast<double>(hits) / static_cast<double>(std::max<std::size_t>(preds.size(), 1));
    if (!pred_out.empty()) {
      std::ostringstream csv;
      csv << "y_pred\n";
      for (double v : preds) csv << (v > 0 ? "1" : "-1") << '\n';
      write_text(pred_out, csv.str());
    }
  }
  emit(out, output);
  return 0;
}

std::vector<double> read_label_column(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open file: " + path);
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("empty file: " + path);
  // header is either a bare label column or a full dataset whose last column is y
  std::vector<double> out;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto pos = line.find_last_of(',');
    const std::string cell = pos == std::string::npos ? line : line.substr(pos + 1);
    out.push_back(std::stod(cell));
  }
  return out;
}

int cmd_eval(const std::string& true_set, const std::string& selected_set,
             const std::string& pred_path, const std::string& truth_path,
             const std::string& output) {
  json out;
  bool any = false;
  if (!true_set.empty() || !selected_set.empty()) {
    if (true_set.empty()) throw std::runtime_error("--true-set is required with --selected");
    out["set_f1"] = kta::set_f1(parse_feature_list(true_set), parse_feature_list(selected_set));
    any = true;
  }
  if (!pred_path.empty() || !truth_path.empty()) {
    if (pred_path.empty() || truth_path.empty())
      throw std::runtime_error("--pred and --truth must be given together");
    out["cls_acc"] = kta::cls_acc(read_label_column(pred_path), read_label_column(truth_path));
    any = true;
  }
  if (!any) throw std::runtime_error("nothing to evaluate; pass sets or label files");
  emit(out, output);
  return 0;
}

kta::ExperimentConfig parse_experiment_config(const json& j) {
  kta::ExperimentConfig cfg;
  cfg.method = kta::method_from_string(j.at("method").get<std::string>());
  cfg.theta = j.at("theta").get<std::size_t>();
  cfg.beta = j.value("beta", 1.0);
  cfg.C = j.value("C", 1.0);
  cfg.time_limit_s = j.value("time_limit_s", 10000.0);
  cfg.repetitions = j.value("repetitions", std::size_t{1});
  if (j.contains("seeds")) cfg.seeds = j.at("seeds").get<std::vector<std::uint64_t>>();
  if (j.contains("gen")) {
    const json& g = j.at("gen");
    kta::GenConfig gen;
    gen.n_train = g.at("n_train").get<std::size_t>();
    gen.n_test = g.at("n_test").get<std::size_t>();
    gen.p = g.at("p").get<std::size_t>();
    gen.theta_star = g.at("theta_star").get<std::size_t>();
    gen.expansion = g.value("expansion", 25.0);
    gen.seed = g.value("seed", std::uint64_t{1});
    gen.max_class_imbalance = g.value("max_class_imbalance", std::size_t{1});
    cfg.gen = gen;
  }
  cfg.train_csv = j.value("train_csv", std::string{});
  cfg.test_csv = j.value("test_csv", std::string{});
  return cfg;
}

int cmd_bench(const std::string& config_path, const std::string& output,
              const std::string& table_path) {
  std::ifstream in(config_path);
  if (!in) throw std::runtime_error("cannot open config: " + config_path);
  json spec = json::parse(in);

  // either a single config object or {"runs": [...]}
  std::vector<json> configs;
  if (spec.contains("runs"))
    for (const auto& r : spec.at("runs")) configs.push_back(r);
  else
    configs.push_back(spec);

  std::vector<kta::ReportRow> rows;
  json results = json::array();
  for (const auto& c : configs) {
    kta::ExperimentConfig cfg = parse_experiment_config(c);
    std::vector<kta::ReportRow> part = kta::run_experiment(cfg);
    results.push_back(kta::experiment_json(cfg, part));
    rows.insert(rows.end(), part.begin(), part.end());
  }

  const std::string table = kta::format_table(rows);
  std::cout << table;
  if (!table_path.empty()) write_text(table_path, table);
  emit(json{{"runs", results}}, output);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact feature-subset selection for Gaussian-kernel SVM classification"};
  app.require_subcommand(1);

  // gen
  auto* gen_cmd = app.add_subcommand("gen", "generate a synthetic train/test pair");
  kta::GenConfig gen_cfg;
  std::string gen_prefix = "synthetic";
  gen_cmd->add_option("--n-train", gen_cfg.n_train, "training rows");
  gen_cmd->add_option("--n-test", gen_cfg.n_test, "test rows");
  gen_cmd->add_option("--p", gen_cfg.p, "total feature count");
  gen_cmd->add_option("--theta-star", gen_cfg.theta_star, "relevant feature count");
  gen_cmd->add_option("--expansion", gen_cfg.expansion, "cluster spread factor");
  gen_cmd->add_option("--seed", gen_cfg.seed, "RNG seed");
  gen_cmd->add_option("--out", gen_prefix, "output path prefix");

  // select
  auto* sel_cmd = app.add_subcommand("select", "select a feature subset");
  std::string sel_input, sel_method = "bnb", sel_output;
  std::size_t sel_theta = 3;
  double sel_C = 1.0, sel_time_limit = 10000.0;
  GammaChoice sel_gamma;
  sel_cmd->add_option("--input", sel_input, "training CSV")->required();
  sel_cmd->add_option("--method", sel_method, "bnb | brute | greedy | rfe");
  sel_cmd->add_option("--theta", sel_theta, "subset budget")->required();
  sel_cmd->add_option("--beta", sel_gamma.beta, "scale factor on the sigest estimate");
  sel_cmd->add_option("--gamma", sel_gamma.spec, "auto or an explicit positive value");
  sel_cmd->add_option("--C", sel_C, "misclassification penalty (rfe)");
  sel_cmd->add_option("--time-limit", sel_time_limit, "seconds (bnb)");
  sel_cmd->add_option("--output", sel_output, "result JSON path (default stdout)");

  // export
  auto* exp_cmd = app.add_subcommand("export", "write the optimization model");
  std::string exp_input, exp_variant = "reduced", exp_format = "lp", exp_output;
  std::size_t exp_theta = 3;
  bool exp_stabilized = true;
  double exp_big_m = 1.0;
  GammaChoice exp_gamma;
  exp_cmd->add_option("--input", exp_input, "training CSV")->required();
  exp_cmd->add_option("--theta", exp_theta, "subset budget")->required();
  exp_cmd->add_option("--variant", exp_variant, "full | reduced");
  exp_cmd->add_option("--format", exp_format, "lp | mps");
  exp_cmd->add_flag("--stabilized,!--no-stabilized", exp_stabilized,
                    "stabilized big-M coefficients (reduced variant)");
  exp_cmd->add_option("--big-m", exp_big_m, "uniform M for the full variant");
  exp_cmd->add_option("--beta", exp_gamma.beta, "scale factor on the sigest estimate");
  exp_cmd->add_option("--gamma", exp_gamma.spec, "auto or an explicit positive value");
  exp_cmd->add_option("--output", exp_output, "model file path (default stdout)");

  // svm
  auto* svm_cmd = app.add_subcommand("svm", "train (and optionally predict)");
  std::string svm_input, svm_predict, svm_features, svm_kernel = "gaussian";
  std::string svm_output, svm_pred_out;
  double svm_C = 1.0;
  std::size_t svm_theta = 0;
  GammaChoice svm_gamma;
  svm_cmd->add_option("--input", svm_input, "training CSV")->required();
  svm_cmd->add_option("--predict", svm_predict, "test CSV to label");
  svm_cmd->add_option("--features", svm_features, "1-based feature list, e.g. 1,3,4");
  svm_cmd->add_option("--C", svm_C, "misclassification penalty");
  svm_cmd->add_option("--gamma", svm_gamma.spec, "auto or an explicit positive value");
  svm_cmd->add_option("--beta", svm_gamma.beta, "scale factor on the sigest estimate");
  svm_cmd->add_option("--kernel", svm_kernel, "gaussian | linear");
  svm_cmd->add_option("--theta", svm_theta, "budget recorded in the mask");
  svm_cmd->add_option("--output", svm_output, "model JSON path (default stdout)");
  svm_cmd->add_option("--pred-out", svm_pred_out, "predictions CSV path");

  // eval
  auto* eval_cmd = app.add_subcommand("eval", "compute selection/classification metrics");
  std::string ev_true, ev_selected, ev_pred, ev_truth, ev_output;
  eval_cmd->add_option("--true-set", ev_true, "1-based relevant features");
  eval_cmd->add_option("--selected", ev_selected, "1-based selected features");
  eval_cmd->add_option("--pred", ev_pred, "predictions CSV (label column last)");
  eval_cmd->add_option("--truth", ev_truth, "ground-truth CSV (label column last)");
  eval_cmd->add_option("--output", ev_output, "metrics JSON path (default stdout)");

  // bench
  auto* bench_cmd = app.add_subcommand("bench", "run an experiment config");
  std::string bench_config, bench_output, bench_table;
  bench_cmd->add_option("--config", bench_config, "experiment JSON config")->required();
  bench_cmd->add_option("--output", bench_output, "results JSON path (default stdout)");
  bench_cmd->add_option("--table", bench_table, "aligned-text table path");

  CLI11_PARSE(app, argc, argv);

  try {
    if (gen_cmd->parsed()) return cmd_gen(gen_cfg, gen_prefix);
    if (sel_cmd->parsed())
      return cmd_select(sel_input, sel_method, sel_theta, sel_gamma, sel_C, sel_time_limit,
                        sel_output);
    if (exp_cmd->parsed())
      return cmd_export(exp_input, exp_theta, exp_gamma, exp_variant, exp_format,
                        exp_stabilized, exp_big_m, exp_output);
    if (svm_cmd->parsed())
      return cmd_svm(svm_input, svm_predict, svm_features, svm_C, svm_gamma, svm_kernel,
                     svm_theta, svm_output, svm_pred_out);
    if (eval_cmd->parsed())
      return cmd_eval(ev_true, ev_selected, ev_pred, ev_truth, ev_output);
    if (bench_cmd->parsed()) return cmd_bench(bench_config, bench_output, bench_table);
  } catch (const std::exception& ex) {
    nlohmann::json err = {{"error", ex.what()}};
    std::cerr << err.dump() << '\n';
    return 1;
  }
  return 0;
}
