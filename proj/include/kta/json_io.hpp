#ifndef KTA_JSON_IO_HPP
#define KTA_JSON_IO_HPP

#include <json.hpp>

#include "kta/baselines.hpp"
#include "kta/experiment.hpp"
#include "kta/solver.hpp"
#include "kta/svm.hpp"
#include "kta/synthgen.hpp"

namespace kta {

// JSON wire formats. Feature and instance indices are 1-based; z vectors are
// positional 0/1 arrays. Keys are emitted in sorted order, so serializations
// of equal values are byte-identical.

nlohmann::json to_json(const OptGap& g);  // number (percent) or sentinel string
nlohmann::json to_json(const SolveResult& r);
nlohmann::json to_json(const SvmModel& m);
nlohmann::json to_json(const SelectionTrace& t);  // array of steps
nlohmann::json sidecar_json(const SyntheticData& sd);
nlohmann::json to_json(const GenConfig& cfg);
nlohmann::json to_json(const ExperimentConfig& cfg);
nlohmann::json to_json(const RepetitionOutcome& rep);
nlohmann::json to_json(const ReportRow& row);
nlohmann::json experiment_json(const ExperimentConfig& cfg, const std::vector<ReportRow>& rows);

/// Strips every "time_s" / "wall_time_s" entry (recursively) so outputs can
/// be compared across reruns.
nlohmann::json without_timing(nlohmann::json j);

}  // namespace kta

#endif
