#ifndef KTA_BASELINES_HPP
#define KTA_BASELINES_HPP

#include <cstddef>
#include <vector>

#include "kta/dataset.hpp"

namespace kta {

struct SelectionStep {
  std::size_t feature;  // 0-based
  double criterion;
};

/// Ordered record of selection decisions and the resulting mask. Greedy
/// steps record the objective after adding the feature; elimination steps
/// record the removal criterion.
struct SelectionTrace {
  std::vector<SelectionStep> steps;
  SubsetMask mask;
};

/// Forward alignment selection: adds the best-improving feature per step,
/// stops at theta features or when no strict improvement remains.
SelectionTrace greedy_forward(const PairStructure& ps, std::size_t theta, double gamma);

/// Recursive feature elimination for the kernel SVM: trains on the surviving
/// features and removes the feature whose exclusion changes the frozen-alpha
/// dual objective the least, until theta features remain. The kernel scale is
/// re-estimated per step from the surviving features; `gamma` is the fallback
/// when that estimate is unavailable.
SelectionTrace rfe_k(const Dataset& ds, std::size_t theta, double C, double gamma);

}  // namespace kta

#endif
