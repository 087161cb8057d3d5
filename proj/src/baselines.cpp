#include "kta/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "kta/alignment.hpp"
#include "kta/solver.hpp"
#include "kta/svm.hpp"

namespace kta {

SelectionTrace greedy_forward(const PairStructure& ps, std::size_t theta, double gamma) {
  if (theta < 1 || theta > ps.p) throw std::invalid_argument("theta must lie in [1, p]");
  SelectionTrace trace;
  std::vector<GreedyStep> steps;
  trace.mask = greedy_incumbent(ps, theta, gamma, &steps);
  for (const auto& s : steps) trace.steps.push_back({s.feature, s.objective});
  return trace;
}

namespace {

// Median of (theta/|surviving|) * sum_{j surviving} d_ihj over all pairs;
// returns 0 when duplicates dominate.
double surviving_sigest(const PairStructure& ps, const std::vector<std::uint8_t>& alive,
                        std::size_t n_alive, std::size_t theta) {
  std::vector<double> sums(ps.pairs.size());
  const double scale = static_cast<double>(theta) / static_cast<double>(n_alive);
  for (std::size_t k = 0; k < ps.pairs.size(); ++k) {
    const double* d = ps.pair_dist(k);
    double s = 0.0;
    for (std::size_t j = 0; j < ps.p; ++j)
      if (alive[j]) s += d[j];
    sums[k] = scale * s;
  }
  std::sort(sums.begin(), sums.end());
  const std::size_t m = sums.size();
  const double median =
      (m % 2 == 1) ? sums[m / 2] : 0.5 * (sums[m / 2 - 1] + sums[m / 2]);
  return median > 0.0 ? 1.0 / median : 0.0;
}

}  // namespace

SelectionTrace rfe_k(const Dataset& ds, std::size_t theta, double C, double gamma) {
  const std::size_t p = ds.p();
  if (theta < 1 || theta > p) throw std::invalid_argument("theta must lie in [1, p]");
  Dataset scratch;
  if (!ds.standardized) {
    StandardizeResult sr = standardize(ds);
    if (!sr.dropped.empty())
      throw std::invalid_argument("remove constant columns before rfe_k; feature indices "
                                  "would shift");
    scratch = std::move(sr.data);
  }
  const Dataset& data = ds.standardized ? ds : scratch;
  const PairStructure ps = build_pair_structure(data);
  const std::size_t n = data.n();

  std::vector<std::uint8_t> alive(p, 1);
  std::size_t n_alive = p;
  SelectionTrace trace;

  // Per-pair masked squared distances, kept in a dense n x n layout so the
  // frozen-alpha criterion can strip one feature with an elementwise rescale.
  std::vector<double> dist_sum(n * n, 0.0);

  while (n_alive > theta) {
    const double sig = surviving_sigest(ps, alive, n_alive, theta);
    const double g = sig > 0.0 ? sig : gamma;

    SubsetMask mask{alive, n_alive};
    const SvmModel model = train(data, mask, g, C);

    for (std::size_t i = 0; i < n * n; ++i) dist_sum[i] = 0.0;
    for (std::size_t k = 0; k < ps.pairs.size(); ++k) {
      const auto [i, h] = ps.pairs[k];
      const double* d = ps.pair_dist(k);
      double s = 0.0;
      for (std::size_t j = 0; j < p; ++j)
        if (alive[j]) s += d[j];
      dist_sum[i * n + h] = s;
      dist_sum[h * n + i] = s;
    }

    const double w_full = model.dual_objective_value;
    std::size_t drop = p;
    double drop_crit = std::numeric_limits<double>::infinity();
    std::vector<double> K(n * n);
    for (std::size_t j = 0; j < p; ++j) {
      if (!alive[j]) continue;
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t h = 0; h < n; ++h) {
          const double dj = ps.dist_at(i, h, j);
          K[i * n + h] = std::exp(-g * (dist_sum[i * n + h] - dj));
        }
      }
      const double crit = std::abs(w_full - dual_objective(model.alpha, data.y, K));
      if (crit < drop_crit) {
        drop_crit = crit;
        drop = j;
      }
    }

    alive[drop] = 0;
    --n_alive;
    trace.steps.push_back({drop, drop_crit});
  }

  trace.mask = SubsetMask{alive, theta};
  return trace;
}

}  // namespace kta
