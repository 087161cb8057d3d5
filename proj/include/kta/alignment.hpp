#ifndef KTA_ALIGNMENT_HPP
#define KTA_ALIGNMENT_HPP

#include <cstddef>
#include <span>
#include <vector>

#include "kta/dataset.hpp"

namespace kta {

/// Gaussian kernel scale gamma together with the scaling factor beta used to
/// derive it from the sigest estimate (gamma = beta * gamma_hat).
struct KernelConfig {
  double gamma = 1.0;
  double beta = 1.0;
};

/// exp(-gamma * sum_j z_j d_j) for one instance pair's squared differences.
double subset_kernel(std::span<const double> pair_dists, const SubsetMask& z, double gamma);

/// sum_{(i,h) in H, i<h} psi_i psi_h exp(-gamma sum_j z_j d_ihj).
double reduced_objective(const PairStructure& ps, const SubsetMask& z, double gamma);

/// Kernel-target alignment over all ordered instance pairs, evaluated through
/// the half-sum decomposition: sum_i psi_i^2 + 2 * reduced_objective.
double alignment_objective(const PairStructure& ps, const SubsetMask& z, double gamma);

/// sum_i psi_i^2 (the diagonal part of the alignment objective).
double psi_norm_sq(const PairStructure& ps);

/// Normalized alignment (K . yy^T) / (n ||K||_F) for a dense symmetric kernel
/// matrix K (row-major, n*n). Throws if ||K||_F is zero.
double normalized_alignment(const std::vector<double>& K, const std::vector<double>& y);

/// Scale estimate gamma_hat = 1 / median{(theta/p) * sum_j d_ihj : (i,h) in H}.
/// The median of an even-length list is the mean of its two central values.
/// Throws if the median is zero (duplicate-dominated data).
double sigest_gamma(const PairStructure& ps, std::size_t theta, std::size_t p);

/// gamma = beta * gamma_hat with gamma_hat from sigest_gamma.
KernelConfig kernel_config_from_sigest(const PairStructure& ps, std::size_t theta,
                                       double beta);

}  // namespace kta

#endif
