#ifndef KTA_EXPERIMENT_HPP
#define KTA_EXPERIMENT_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "kta/solver.hpp"
#include "kta/synthgen.hpp"

namespace kta {

enum class Method { bnb, brute, greedy, rfe };

Method method_from_string(const std::string& s);
std::string to_string(Method m);

struct ExperimentConfig {
  Method method = Method::bnb;
  std::size_t theta = 3;
  double beta = 1.0;
  double C = 1.0;
  double time_limit_s = 10000.0;
  std::size_t repetitions = 1;
  std::vector<std::uint64_t> seeds;  // empty: 1..repetitions

  std::optional<GenConfig> gen;  // synthetic mode; per-repetition seed override
  std::string train_csv;         // file mode when gen is absent
  std::string test_csv;          // optional held-out set for ClsAcc
};

struct RepetitionOutcome {
  std::uint64_t seed = 0;
  bool failed = false;
  std::string fail_reason;
  double gamma_hat = 0.0;
  double gamma = 0.0;
  double obj_val = 0.0;
  bool has_gap = false;
  OptGap gap;
  std::string status = "done";
  std::vector<std::size_t> selected;  // 0-based
  double time_s = 0.0;
  std::optional<double> cls_acc;
  std::optional<double> set_f1;
};

/// One aggregate table row (means with standard errors over repetitions).
struct ReportRow {
  std::string method;
  std::size_t repetitions = 0;
  std::size_t failed = 0;
  double obj_val = 0.0;
  bool has_gap = false;
  OptGap gap;  // mean percentage; sentinel if any repetition overflowed
  double subset_size = 0.0;
  double time_s = 0.0;
  double time_limit_s = 0.0;
  bool hit_time_limit = false;
  std::optional<double> cls_acc_mean, cls_acc_stderr;
  std::optional<double> set_f1_mean, set_f1_stderr;
  std::vector<RepetitionOutcome> reps;
};

/// F1 score of a selected feature set against the true relevant set.
/// Throws when s_star is empty; returns 0 when s_hat or the overlap is empty.
double set_f1(const std::vector<std::size_t>& s_star, const std::vector<std::size_t>& s_hat);

/// Fraction of matching labels. Throws on length mismatch.
double cls_acc(const std::vector<double>& preds, const std::vector<double>& truth);

/// Runs the full pipeline per repetition (generate/load, estimate gamma,
/// select, train, evaluate) and aggregates. A failing repetition is recorded
/// with its reason and the run continues.
std::vector<ReportRow> run_experiment(const ExperimentConfig& cfg);

/// Fixed-width table mirroring the report row layout.
std::string format_table(const std::vector<ReportRow>& rows);

}  // namespace kta

#endif
