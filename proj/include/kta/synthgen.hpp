#ifndef KTA_SYNTHGEN_HPP
#define KTA_SYNTHGEN_HPP

#include <cstddef>
#include <cstdint>
#include <vector>

#include "kta/dataset.hpp"

namespace kta {

/// Configuration for the clusters-on-cube generator. The first theta_star
/// features (before shuffling) are relevant: samples are drawn around the
/// vertices of the {-1,+1}^theta_star cube with per-axis variance
/// expansion/100, labels alternating with vertex parity. The remaining
/// features are standard normal noise.
struct GenConfig {
  std::size_t n_train = 50;
  std::size_t n_test = 1000;
  std::size_t p = 10;
  std::size_t theta_star = 3;
  double expansion = 25.0;
  std::uint64_t seed = 1;
  std::size_t max_class_imbalance = 1;
};

struct SyntheticData {
  Dataset train;
  Dataset test;
  std::vector<std::size_t> relevant;     // 0-based columns of the shuffled layout
  std::vector<std::size_t> permutation;  // permutation[k] = pre-shuffle column at k
  GenConfig config;
};

/// Deterministic generation: the same config yields byte-identical datasets.
/// All columns are standardized jointly over the pooled train+test sample.
SyntheticData generate(const GenConfig& cfg);

}  // namespace kta

#endif
