#include "kta/json_io.hpp"

namespace kta {

namespace {

nlohmann::json one_based(const std::vector<std::size_t>& idx) {
  nlohmann::json arr = nlohmann::json::array();
  for (std::size_t v : idx) arr.push_back(v + 1);
  return arr;
}

nlohmann::json mask_json(const SubsetMask& m) {
  nlohmann::json arr = nlohmann::json::array();
  for (std::uint8_t v : m.z) arr.push_back(static_cast<int>(v));
  return arr;
}

}  // namespace

nlohmann::json to_json(const OptGap& g) {
  if (g.sentinel) return format_opt_gap(g);
  return g.percent;
}

nlohmann::json to_json(const SolveResult& r) {
  return {
      {"z", mask_json(r.z_best)},
      {"objective", r.objective},
      {"lower_bound", r.lower_bound},
      {"upper_bound", r.upper_bound},
      {"opt_gap", to_json(r.gap)},
      {"nodes", r.nodes_explored},
      {"time_s", r.wall_time_s},
      {"status", to_string(r.status)},
  };
}

nlohmann::json to_json(const SvmModel& m) {
  nlohmann::json sv = nlohmann::json::array();
  for (std::size_t i : m.support) sv.push_back(i + 1);
  return {
      {"alpha", m.alpha},
      {"b", m.b},
      {"C", m.C},
      {"gamma", m.kernel.gamma},
      {"z", mask_json(m.kernel.mask)},
      {"support_indices", sv},
  };
}

nlohmann::json to_json(const SelectionTrace& t) {
  nlohmann::json steps = nlohmann::json::array();
  for (const auto& s : t.steps)
    steps.push_back({{"feature", s.feature + 1}, {"criterion", s.criterion}});
  return steps;
}

nlohmann::json to_json(const GenConfig& cfg) {
  return {
      {"n_train", cfg.n_train},
      {"n_test", cfg.n_test},
      {"p", cfg.p},
      {"theta_star", cfg.theta_star},
      {"expansion", cfg.expansion},
      {"seed", cfg.seed},
      {"max_class_imbalance", cfg.max_class_imbalance},
  };
}

nlohmann::json sidecar_json(const SyntheticData& sd) {
  return {
      {"seed", sd.config.seed},
      {"relevant_features", one_based(sd.relevant)},
      {"permutation", one_based(sd.permutation)},
      {"config", to_json(sd.config)},
  };
}

nlohmann::json to_json(const ExperimentConfig& cfg) {
  nlohmann::json j = {
      {"method", to_string(cfg.method)},
      {"theta", cfg.theta},
      {"beta", cfg.beta},
      {"C", cfg.C},
      {"time_limit_s", cfg.time_limit_s},
      {"repetitions", cfg.repetitions},
      {"seeds", cfg.seeds},
  };
  if (cfg.gen) j["gen"] = to_json(*cfg.gen);
  if (!cfg.train_csv.empty()) j["train_csv"] = cfg.train_csv;
  if (!cfg.test_csv.empty()) j["test_csv"] = cfg.test_csv;
  return j;
}

nlohmann::json to_json(const RepetitionOutcome& rep) {
  nlohmann::json j = {
      {"seed", rep.seed},
      {"failed", rep.failed},
      {"status", rep.status},
      {"time_s", rep.time_s},
  };
  if (rep.failed) {
    j["reason"] = rep.fail_reason;
    return j;
  }
  j["gamma_hat"] = rep.gamma_hat;
  j["gamma"] = rep.gamma;
  j["obj_val"] = rep.obj_val;
  j["selected_features"] = one_based(rep.selected);
  if (rep.has_gap) j["opt_gap"] = to_json(rep.gap);
  if (rep.cls_acc) j["cls_acc"] = *rep.cls_acc;
  if (rep.set_f1) j["set_f1"] = *rep.set_f1;
  return j;
}

nlohmann::json to_json(const ReportRow& row) {
  nlohmann::json j = {
      {"method", row.method},
      {"repetitions", row.repetitions},
      {"failed", row.failed},
      {"obj_val", row.obj_val},
      {"subset_size", row.subset_size},
      {"time_s", row.time_s},
      {"hit_time_limit", row.hit_time_limit},
  };
  if (row.has_gap) j["opt_gap"] = to_json(row.gap);
  if (row.cls_acc_mean) {
    j["cls_acc"] = {{"mean", *row.cls_acc_mean}, {"stderr", *row.cls_acc_stderr}};
  }
  if (row.set_f1_mean) {
    j["set_f1"] = {{"mean", *row.set_f1_mean}, {"stderr", *row.set_f1_stderr}};
  }
  nlohmann::json reps = nlohmann::json::array();
  for (const auto& r : row.reps) reps.push_back(to_json(r));
  j["reps"] = reps;
  return j;
}

nlohmann::json experiment_json(const ExperimentConfig& cfg,
                               const std::vector<ReportRow>& rows) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& r : rows) arr.push_back(to_json(r));
  return {{"config", to_json(cfg)}, {"rows", arr}};
}

nlohmann::json without_timing(nlohmann::json j) {
  if (j.is_object()) {
    j.erase("time_s");
    j.erase("wall_time_s");
    for (auto& [key, value] : j.items()) value = without_timing(value);
  } else if (j.is_array()) {
    for (auto& value : j) value = without_timing(value);
  }
  return j;
}

}  // namespace kta
