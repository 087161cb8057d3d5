#ifndef KTA_SOLVER_HPP
#define KTA_SOLVER_HPP

#include <cstdint>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "kta/dataset.hpp"

namespace kta {

/// Relative bound gap |ub - lb| / lb as a percentage. The sentinel flag is
/// set when lb <= 0 or the gap exceeds 1000%, rendered as ">1000.0%".
struct OptGap {
  double percent = 0.0;
  bool sentinel = false;
};

OptGap opt_gap(double lb, double ub);
std::string format_opt_gap(const OptGap& g);

enum class SolveStatus { optimal, time_limit, node_limit };

std::string to_string(SolveStatus s);

struct SolveLimits {
  double time_limit_s = 10000.0;
  std::uint64_t node_cap = std::numeric_limits<std::uint64_t>::max();
  // Absolute bound slack: nodes whose upper bound is within gap_tol of the
  // incumbent are not explored. 0 proves optimality.
  double gap_tol = 0.0;
};

struct SolveResult {
  SubsetMask z_best;
  double objective = 0.0;  // alignment objective of z_best
  double lower_bound = 0.0;
  double upper_bound = 0.0;
  OptGap gap;
  std::uint64_t nodes_explored = 0;
  double wall_time_s = 0.0;
  SolveStatus status = SolveStatus::optimal;
};

/// Search node: features forced in (S1), forced out (S0), the rest free.
struct BnbNode {
  std::vector<std::uint8_t> fixed_in;   // p entries
  std::vector<std::uint8_t> fixed_out;  // p entries
  double bound = 0.0;
};

inline constexpr std::uint64_t kBruteForceCap = std::uint64_t{1} << 24;

/// Exhaustive search over all masks with cardinality <= theta; ties resolved
/// toward the lexicographically smallest mask. Throws when the feasible
/// subset count exceeds kBruteForceCap.
SolveResult brute_force(const PairStructure& ps, std::size_t theta, double gamma);

/// Valid upper bound on the objective over every completion of the node.
/// Each pair is bounded independently: same-class pairs assume no further
/// distance is added beyond the forced features; opposite-class pairs assume
/// the remaining budget picks their largest free distances.
double node_upper_bound(const BnbNode& node, const PairStructure& ps, std::size_t theta,
                        double gamma);

struct GreedyStep {
  std::size_t feature;
  double objective;  // objective after adding the feature
};

/// Forward selection: repeatedly adds the feature with the largest objective
/// improvement (ties to the smallest index) until theta features are chosen
/// or no strict improvement remains.
SubsetMask greedy_incumbent(const PairStructure& ps, std::size_t theta, double gamma,
                            std::vector<GreedyStep>* trace = nullptr);

using IncumbentCallback = std::function<void(double objective, const SubsetMask& z)>;

/// Best-first branch and bound, seeded with the greedy incumbent. With
/// default limits the result is provably optimal (gap 0); under a time or
/// node limit the incumbent and the residual bounds are returned.
SolveResult solve_bnb(const PairStructure& ps, std::size_t theta, double gamma,
                      const SolveLimits& limits = {},
                      const IncumbentCallback& on_incumbent = {});

}  // namespace kta

#endif
