#include "kta/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <set>
#include <sstream>
#include <stdexcept>

#include "kta/alignment.hpp"
#include "kta/baselines.hpp"
#include "kta/svm.hpp"

namespace kta {

Method method_from_string(const std::string& s) {
  if (s == "bnb") return Method::bnb;
  if (s == "brute") return Method::brute;
  if (s == "greedy") return Method::greedy;
  if (s == "rfe") return Method::rfe;
  throw std::invalid_argument("unknown method '" + s + "' (expected bnb, brute, greedy, rfe)");
}

std::string to_string(Method m) {
  switch (m) {
    case Method::bnb: return "bnb";
    case Method::brute: return "brute";
    case Method::greedy: return "greedy";
    case Method::rfe: return "rfe";
  }
  return "unknown";
}

double set_f1(const std::vector<std::size_t>& s_star, const std::vector<std::size_t>& s_hat) {
  if (s_star.empty()) throw std::invalid_argument("true relevant set must be nonempty");
  if (s_hat.empty()) return 0.0;
  const std::set<std::size_t> truth(s_star.begin(), s_star.end());
  std::size_t overlap = 0;
  for (std::size_t v : s_hat) overlap += truth.count(v);
  if (overlap == 0) return 0.0;
  const double recall = static_cast<double>(overlap) / static_cast<double>(truth.size());
  const double precision = static_cast<double>(overlap) / static_cast<double>(s_hat.size());
  return 2.0 * recall * precision / (recall + precision);
}

double cls_acc(const std::vector<double>& preds, const std::vector<double>& truth) {
  if (preds.size() != truth.size())
    throw std::invalid_argument("prediction and truth vectors differ in length");
  if (preds.empty()) throw std::invalid_argument("empty label vectors");
  std::size_t hits = 0;
  for (std::size_t i = 0; i < preds.size(); ++i)
    if ((preds[i] > 0) == (truth[i] > 0)) ++hits;
  return static_cast<double>(hits) / static_cast<double>(preds.size());
}

namespace {

struct Stats {
  double mean = 0.0;
  double stderr_ = 0.0;
};

Stats mean_stderr(const std::vector<double>& v) {
  Stats s;
  if (v.empty()) return s;
  for (double x : v) s.mean += x;
  s.mean /= static_cast<double>(v.size());
  if (v.size() > 1) {
    double ss = 0.0;
    for (double x : v) ss += (x - s.mean) * (x - s.mean);
    const double sd = std::sqrt(ss / static_cast<double>(v.size() - 1));
    s.stderr_ = sd / std::sqrt(static_cast<double>(v.size()));
  }
  return s;
}

RepetitionOutcome run_one(const ExperimentConfig& cfg, std::uint64_t seed) {
  RepetitionOutcome rep;
  rep.seed = seed;

  Dataset train_ds;
  std::optional<Dataset> test;
  std::vector<std::size_t> relevant;
  if (cfg.gen) {
    GenConfig g = *cfg.gen;
    g.seed = seed;
    SyntheticData sd = generate(g);
    train_ds = std::move(sd.train);
    test = std::move(sd.test);
    relevant = std::move(sd.relevant);
  } else {
    train_ds = standardize(load_csv(cfg.train_csv)).data;
    if (!cfg.test_csv.empty()) {
      Dataset t = load_csv(cfg.test_csv);
      if (t.p() != train_ds.p())
        throw std::runtime_error("test set feature count differs from training set");
      test = standardize(t).data;  // file-mode splits are standardized independently
    }
  }

  const PairStructure ps = build_pair_structure(train_ds);
  rep.gamma_hat = sigest_gamma(ps, cfg.theta, ps.p);
  const KernelConfig kernel = kernel_config_from_sigest(ps, cfg.theta, cfg.beta);
  rep.gamma = kernel.gamma;

  const auto start = std::chrono::steady_clock::now();
  SubsetMask mask;
  switch (cfg.method) {
    case Method::bnb: {
      SolveLimits lim;
      lim.time_limit_s = cfg.time_limit_s;
      const SolveResult r = solve_bnb(ps, cfg.theta, rep.gamma, lim);
      mask = r.z_best;
      rep.obj_val = r.objective;
      rep.has_gap = true;
      rep.gap = r.gap;
      rep.status = to_string(r.status);
      break;
    }
    case Method::brute: {
      const SolveResult r = brute_force(ps, cfg.theta, rep.gamma);
      mask = r.z_best;
      rep.obj_val = r.objective;
      rep.has_gap = true;
      rep.gap = r.gap;
      rep.status = to_string(r.status);
      break;
    }
    case Method::greedy: {
      mask = greedy_forward(ps, cfg.theta, rep.gamma).mask;
      rep.obj_val = alignment_objective(ps, mask, rep.gamma);
      break;
    }
    case Method::rfe: {
      mask = rfe_k(train_ds, cfg.theta, cfg.C, rep.gamma).mask;
      rep.obj_val = alignment_objective(ps, mask, rep.gamma);
      break;
    }
  }
  rep.time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  rep.selected = mask.selected();

  if (test) {
    const SvmModel model = train(train_ds, mask, rep.gamma, cfg.C);
    rep.cls_acc = cls_acc(predict(model, *test), test->y);
  }
  if (!relevant.empty()) rep.set_f1 = set_f1(relevant, rep.selected);
  return rep;
}

}  // namespace

std::vector<ReportRow> run_experiment(const ExperimentConfig& cfg) {
  if (cfg.repetitions < 1) throw std::invalid_argument("repetitions must be at least 1");
  if (cfg.beta <= 0.0) throw std::invalid_argument("beta must be positive");
  if (!cfg.gen && cfg.train_csv.empty())
    throw std::invalid_argument("either a generator config or a training CSV is required");
  if (!cfg.seeds.empty() && cfg.seeds.size() != cfg.repetitions)
    throw std::invalid_argument("seed list length must equal repetitions");

  std::vector<std::uint64_t> seeds = cfg.seeds;
  if (seeds.empty())
    for (std::size_t i = 1; i <= cfg.repetitions; ++i) seeds.push_back(i);

  ReportRow row;
  row.method = to_string(cfg.method);
  row.repetitions = cfg.repetitions;
  row.time_limit_s = cfg.time_limit_s;
  row.has_gap = cfg.method == Method::bnb || cfg.method == Method::brute;

  std::vector<double> objs, sizes, times, accs, f1s, gaps;
  bool gap_sentinel = false;
  for (std::uint64_t seed : seeds) {
    RepetitionOutcome rep;
    try {
      rep = run_one(cfg, seed);
    } catch (const std::exception& ex) {
      rep.seed = seed;
      rep.failed = true;
      rep.fail_reason = ex.what();
      rep.status = "failed";
      ++row.failed;
      row.reps.push_back(std::move(rep));
      continue;
    }
    objs.push_back(rep.obj_val);
    sizes.push_back(static_cast<double>(rep.selected.size()));
    times.push_back(rep.time_s);
    if (rep.cls_acc) accs.push_back(*rep.cls_acc);
    if (rep.set_f1) f1s.push_back(*rep.set_f1);
    if (rep.has_gap) {
      if (rep.gap.sentinel) gap_sentinel = true;
      else gaps.push_back(rep.gap.percent);
    }
    if (rep.status == "time_limit") row.hit_time_limit = true;
    row.reps.push_back(std::move(rep));
  }

  row.obj_val = mean_stderr(objs).mean;
  row.subset_size = mean_stderr(sizes).mean;
  row.time_s = mean_stderr(times).mean;
  if (row.has_gap) {
    if (gap_sentinel) row.gap = {0.0, true};
    else row.gap = {mean_stderr(gaps).mean, false};
  }
  if (!accs.empty()) {
    const Stats s = mean_stderr(accs);
    row.cls_acc_mean = s.mean;
    row.cls_acc_stderr = s.stderr_;
  }
  if (!f1s.empty()) {
    const Stats s = mean_stderr(f1s);
    row.set_f1_mean = s.mean;
    row.set_f1_stderr = s.stderr_;
  }
  return {row};
}

std::string format_table(const std::vector<ReportRow>& rows) {
  std::ostringstream out;
  char line[256];
  std::snprintf(line, sizeof line, "%-8s %10s %12s %6s %12s %18s %18s\n", "method",
                "ObjVal", "OptGap", "|S|", "Time", "ClsAcc", "SetF1");
  out << line;
  for (const auto& r : rows) {
    std::string gap = r.has_gap ? format_opt_gap(r.gap) : "---";
    char time_buf[32];
    if (r.hit_time_limit)
      std::snprintf(time_buf, sizeof time_buf, ">%.1f", r.time_limit_s);
    else
      std::snprintf(time_buf, sizeof time_buf, "%.1f", r.time_s);
    auto pm = [](const std::optional<double>& mean, const std::optional<double>& se) {
      if (!mean) return std::string("---");
      char buf[40];
      std::snprintf(buf, sizeof buf, "%.3f (+-%.3f)", *mean, se.value_or(0.0));
      return std::string(buf);
    };
    std::snprintf(line, sizeof line, "%-8s %10.3f %12s %6.1f %12s %18s %18s\n",
                  r.method.c_str(), r.obj_val, gap.c_str(), r.subset_size, time_buf,
                  pm(r.cls_acc_mean, r.cls_acc_stderr).c_str(),
                  pm(r.set_f1_mean, r.set_f1_stderr).c_str());
    out << line;
  }
  return out.str();
}

}  // namespace kta
