#include "kta/alignment.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace kta {

double subset_kernel(std::span<const double> pair_dists, const SubsetMask& z, double gamma) {
  double s = 0.0;
  for (std::size_t j = 0; j < pair_dists.size(); ++j)
    if (z.z[j]) s += pair_dists[j];
  return std::exp(-gamma * s);
}

double reduced_objective(const PairStructure& ps, const SubsetMask& z, double gamma) {
  double acc = 0.0;
  for (std::size_t k = 0; k < ps.pairs.size(); ++k) {
    const auto [i, h] = ps.pairs[k];
    acc += ps.psi[i] * ps.psi[h] *
           subset_kernel(std::span(ps.pair_dist(k), ps.p), z, gamma);
  }
  return acc;
}

double psi_norm_sq(const PairStructure& ps) {
  double s = 0.0;
  for (double v : ps.psi) s += v * v;
  return s;
}

double alignment_objective(const PairStructure& ps, const SubsetMask& z, double gamma) {
  return psi_norm_sq(ps) + 2.0 * reduced_objective(ps, z, gamma);
}

double normalized_alignment(const std::vector<double>& K, const std::vector<double>& y) {
  const std::size_t n = y.size();
  if (K.size() != n * n) throw std::invalid_argument("kernel matrix size must be n*n");
  double dot = 0.0, frob = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t h = 0; h < n; ++h) {
      const double k = K[i * n + h];
      if (!std::isfinite(k)) throw std::invalid_argument("kernel matrix must be finite");
      dot += k * y[i] * y[h];
      frob += k * k;
    }
  }
  if (frob == 0.0) throw std::runtime_error("kernel matrix has zero Frobenius norm");
  return dot / (static_cast<double>(n) * std::sqrt(frob));
}

double sigest_gamma(const PairStructure& ps, std::size_t theta, std::size_t p) {
  if (ps.pairs.empty()) throw std::invalid_argument("sigest needs at least one pair");
  if (p == 0) throw std::invalid_argument("p must be positive");
  const double scale = static_cast<double>(theta) / static_cast<double>(p);

  std::vector<double> sums(ps.pairs.size());
  for (std::size_t k = 0; k < ps.pairs.size(); ++k) {
    double s = 0.0;
    const double* d = ps.pair_dist(k);
    for (std::size_t j = 0; j < ps.p; ++j) s += d[j];
    sums[k] = scale * s;
  }
  std::sort(sums.begin(), sums.end());
  const std::size_t m = sums.size();
  const double median =
      (m % 2 == 1) ? sums[m / 2] : 0.5 * (sums[m / 2 - 1] + sums[m / 2]);
  if (median <= 0.0)
    throw std::runtime_error("median pair distance is zero; duplicate instances dominate");
  return 1.0 / median;
}

KernelConfig kernel_config_from_sigest(const PairStructure& ps, std::size_t theta,
                                       double beta) {
  if (beta <= 0.0) throw std::invalid_argument("beta must be positive");
  return KernelConfig{beta * sigest_gamma(ps, theta, ps.p), beta};
}

}  // namespace kta
