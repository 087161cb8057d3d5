#ifndef KTA_DATASET_HPP
#define KTA_DATASET_HPP

#include <cstddef>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace kta {

/// Labeled dataset: n x p feature matrix (row-major) with labels in {-1,+1}.
struct Dataset {
  std::vector<double> x;                   // n * p, row-major
  std::vector<double> y;                   // n entries, each +1 or -1
  std::vector<std::string> feature_names;  // p entries
  bool standardized = false;

  std::size_t n() const { return y.size(); }
  std::size_t p() const { return feature_names.size(); }

  double at(std::size_t i, std::size_t j) const { return x[i * p() + j]; }
  double& at(std::size_t i, std::size_t j) { return x[i * p() + j]; }
};

/// Per-instance class weights psi_i = y_i / |{h : y_h = y_i}| together with
/// the instance-pair lists and the per-pair squared feature differences.
///
/// Pairs (i, h) with i < h are stored in lexicographic order; h_plus/h_minus
/// index into `pairs` and partition it by the sign of psi_i * psi_h (positive
/// means both instances belong to the same class).
struct PairStructure {
  std::size_t n = 0;
  std::size_t p = 0;
  std::vector<double> psi;                                  // n
  std::vector<std::pair<std::size_t, std::size_t>> pairs;   // |H| = n(n-1)/2
  std::vector<std::int8_t> pair_sign;                       // +1 same class, -1 otherwise
  std::vector<std::size_t> h_plus;                          // ascending indices into pairs
  std::vector<std::size_t> h_minus;
  std::vector<double> dist;                                 // |H| * p, d_ihj = (x_ij - x_hj)^2

  const double* pair_dist(std::size_t k) const { return dist.data() + k * p; }

  /// Index into `pairs` of (i, h) with i < h.
  std::size_t pair_index(std::size_t i, std::size_t h) const {
    return i * n - i * (i + 1) / 2 + (h - i - 1);
  }

  /// d_ihj for any ordered pair, including i == h (zero) and i > h.
  double dist_at(std::size_t i, std::size_t h, std::size_t j) const {
    if (i == h) return 0.0;
    if (i > h) std::swap(i, h);
    return dist[pair_index(i, h) * p + j];
  }
};

/// Binary feature-selection vector with a cardinality budget theta.
struct SubsetMask {
  std::vector<std::uint8_t> z;  // p entries in {0,1}
  std::size_t theta = 0;

  std::size_t p() const { return z.size(); }
  std::size_t cardinality() const;
  std::vector<std::size_t> selected() const;  // 0-based indices with z_j = 1

  static SubsetMask none(std::size_t p, std::size_t theta);
  static SubsetMask from_indices(std::size_t p, std::size_t theta,
                                 const std::vector<std::size_t>& idx);
};

struct StandardizeResult {
  Dataset data;
  std::vector<std::string> dropped;  // names of constant columns removed first
};

/// Reads a UTF-8 comma-separated file with a header row; the final column
/// must be named "y" and hold labels in {-1,+1}. Throws std::runtime_error
/// with row/column context on malformed input.
Dataset load_csv(const std::string& path);

/// Writes a dataset in the load_csv format with full double precision.
void write_csv(const Dataset& ds, const std::string& path);

/// Centers each column and scales it to unit population variance (divide by
/// n). Constant columns are dropped first and reported in the result.
StandardizeResult standardize(const Dataset& ds);

/// Precomputes psi, the pair index sets, and the squared-difference tensor.
/// Requires a standardized dataset with both classes present.
PairStructure build_pair_structure(const Dataset& ds);

}  // namespace kta

#endif
