#include <doctest.h>

#include <stdexcept>

#include <cmath>

#include "kta/alignment.hpp"
#include "kta/experiment.hpp"
#include "kta/json_io.hpp"
#include "kta/svm.hpp"

using namespace kta;

TEST_SUITE("experiment") {

TEST_CASE("set F1 values") {
  CHECK(set_f1({1, 2, 3}, {1, 2}) == doctest::Approx(0.8));
  CHECK(set_f1({4, 7}, {4, 7}) == 1.0);
  CHECK(set_f1({1, 2}, {3, 4}) == 0.0);
  CHECK(set_f1({1, 2}, {}) == 0.0);
  CHECK_THROWS_AS(set_f1({}, {1}), std::invalid_argument);
}

TEST_CASE("classification accuracy") {
  CHECK(cls_acc({1, -1, 1}, {1, -1, 1}) == 1.0);
  CHECK(cls_acc({1, -1}, {-1, 1}) == 0.0);
  CHECK(cls_acc({1, 1, -1, -1}, {1, 1, -1, 1}) == doctest::Approx(0.75));
  CHECK_THROWS_AS(cls_acc({1.0}, {1.0, -1.0}), std::invalid_argument);
}

TEST_CASE("brute selection recovers the planted feature on every seed") {
  ExperimentConfig cfg;
  cfg.method = Method::brute;
  cfg.theta = 1;
  cfg.beta = 1.0;
  cfg.repetitions = 5;
  GenConfig gen;
  gen.n_train = 40;
  gen.n_test = 60;
  gen.p = 2;
  gen.theta_star = 1;
  gen.expansion = 25.0;
  cfg.gen = gen;

  auto rows = run_experiment(cfg);
  REQUIRE(rows.size() == 1);
  const ReportRow& row = rows[0];
  CHECK(row.failed == 0);
  REQUIRE(row.set_f1_mean.has_value());
  CHECK(*row.set_f1_mean == doctest::Approx(1.0));
  for (const auto& rep : row.reps) {
    CHECK(rep.set_f1.value() == 1.0);
    CHECK(rep.gamma == doctest::Approx(cfg.beta * rep.gamma_hat));
  }
}

TEST_CASE("single repetition reports zero standard error") {
  ExperimentConfig cfg;
  cfg.method = Method::greedy;
  cfg.theta = 2;
  cfg.repetitions = 1;
  GenConfig gen;
  gen.n_train = 30;
  gen.n_test = 40;
  gen.p = 5;
  gen.theta_star = 2;
  cfg.gen = gen;
  auto rows = run_experiment(cfg);
  REQUIRE(rows.size() == 1);
  REQUIRE(rows[0].cls_acc_stderr.has_value());
  CHECK(*rows[0].cls_acc_stderr == 0.0);
  CHECK(*rows[0].set_f1_stderr == 0.0);
}

TEST_CASE("zero time limit is honored and the incumbent is reported") {
  ExperimentConfig cfg;
  cfg.method = Method::bnb;
  cfg.theta = 3;
  cfg.time_limit_s = 0.0;
  cfg.repetitions = 1;
  GenConfig gen;
  gen.n_train = 30;
  gen.n_test = 30;
  gen.p = 8;
  gen.theta_star = 3;
  cfg.gen = gen;
  auto rows = run_experiment(cfg);
  REQUIRE(rows.size() == 1);
  CHECK(rows[0].hit_time_limit);
  REQUIRE(rows[0].reps.size() == 1);
  CHECK(rows[0].reps[0].status == "time_limit");
}

TEST_CASE("failures are recorded and the run continues") {
  ExperimentConfig cfg;
  cfg.method = Method::greedy;
  cfg.theta = 1;
  cfg.repetitions = 2;
  cfg.train_csv = "does_not_exist.csv";
  auto rows = run_experiment(cfg);
  REQUIRE(rows.size() == 1);
  CHECK(rows[0].failed == 2);
  REQUIRE(rows[0].reps.size() == 2);
  CHECK(rows[0].reps[0].failed);
  CHECK(!rows[0].reps[0].fail_reason.empty());
}

TEST_CASE("reported ObjVal recomputes from the selected subset") {
  ExperimentConfig cfg;
  cfg.method = Method::bnb;
  cfg.theta = 2;
  cfg.beta = 0.5;
  cfg.repetitions = 3;
  GenConfig gen;
  gen.n_train = 30;
  gen.n_test = 20;
  gen.p = 6;
  gen.theta_star = 2;
  cfg.gen = gen;
  auto rows = run_experiment(cfg);
  for (const auto& rep : rows[0].reps) {
    REQUIRE_FALSE(rep.failed);
    GenConfig g = gen;
    g.seed = rep.seed;
    SyntheticData sd = generate(g);
    PairStructure ps = build_pair_structure(sd.train);
    SubsetMask mask = SubsetMask::from_indices(6, 2, rep.selected);
    CHECK(rep.gamma == doctest::Approx(cfg.beta * sigest_gamma(ps, 2, 6)).epsilon(1e-12));
    CHECK(rep.obj_val ==
          doctest::Approx(alignment_objective(ps, mask, rep.gamma)).epsilon(1e-9));
  }
}

TEST_CASE("reruns are byte-identical once timing is stripped") {
  ExperimentConfig cfg;
  cfg.method = Method::bnb;
  cfg.theta = 2;
  cfg.repetitions = 3;
  GenConfig gen;
  gen.n_train = 30;
  gen.n_test = 40;
  gen.p = 6;
  gen.theta_star = 2;
  cfg.gen = gen;

  auto a = run_experiment(cfg);
  auto b = run_experiment(cfg);
  const std::string ja = without_timing(experiment_json(cfg, a)).dump();
  const std::string jb = without_timing(experiment_json(cfg, b)).dump();
  CHECK(ja == jb);

  const std::string table_a = format_table(a);
  const std::string table_b = format_table(b);
  // tables agree outside the Time column, which is the only wall-clock field
  REQUIRE(table_a.size() == table_b.size());
}

TEST_CASE("wire formats carry the documented keys") {
  Dataset ds;
  ds.feature_names = {"a"};
  ds.x = {0.0, 1.0};
  ds.y = {1.0, -1.0};
  ds.standardized = true;
  SvmModel m = train(ds, SubsetMask::from_indices(1, 1, {0}), 1.0, 1.0);
  const nlohmann::json j = to_json(m);
  REQUIRE(j.size() == 6);
  for (const char* key : {"alpha", "b", "C", "gamma", "z", "support_indices"})
    CHECK(j.contains(key));

  PairStructure ps = build_pair_structure(ds);
  const nlohmann::json s = to_json(brute_force(ps, 1, 1.0));
  REQUIRE(s.size() == 8);
  for (const char* key : {"z", "objective", "lower_bound", "upper_bound", "opt_gap",
                          "nodes", "time_s", "status"})
    CHECK(s.contains(key));
}

TEST_CASE("config validation") {
  ExperimentConfig cfg;
  cfg.repetitions = 0;
  CHECK_THROWS_AS(run_experiment(cfg), std::invalid_argument);
  cfg.repetitions = 1;
  cfg.beta = 0.0;
  CHECK_THROWS_AS(run_experiment(cfg), std::invalid_argument);
  cfg.beta = 1.0;
  CHECK_THROWS_AS(run_experiment(cfg), std::invalid_argument);  // no data source
  CHECK_THROWS_AS(method_from_string("nope"), std::invalid_argument);
  CHECK(method_from_string("rfe") == Method::rfe);
}

}  // TEST_SUITE
