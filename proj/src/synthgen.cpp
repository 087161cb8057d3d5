#include "kta/synthgen.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>

namespace kta {

namespace {

// mt19937_64 bit stream with fixed conversions, so output does not depend on
// the standard library's distribution implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  double uniform() {  // [0, 1)
    return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
  }

  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    const double u1 = 1.0 - uniform();  // (0, 1]
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 2.0 * 3.14159265358979323846 * u2;
    spare_ = r * std::sin(a);
    have_spare_ = true;
    return r * std::cos(a);
  }

  std::size_t below(std::size_t bound) {
    return static_cast<std::size_t>(gen_() % bound);
  }

 private:
  std::mt19937_64 gen_;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

struct Block {
  std::vector<double> x;  // rows * p
  std::vector<double> y;
};

Block sample_block(const GenConfig& cfg, std::size_t rows, Rng& rng) {
  const std::size_t k = cfg.theta_star;
  const std::size_t vertices = std::size_t{1} << k;
  std::vector<std::size_t> pos_vertices, neg_vertices;
  for (std::size_t v = 0; v < vertices; ++v) {
    const bool odd = std::popcount(v) % 2 == 1;
    (odd ? pos_vertices : neg_vertices).push_back(v);
  }

  const double sigma = std::sqrt(cfg.expansion / 100.0);
  Block blk;
  blk.x.resize(rows * cfg.p);
  blk.y.resize(rows);
  for (std::size_t i = 0; i < rows; ++i) {
    // alternate labels so train and test splits stay near-balanced
    const bool positive = i % 2 == 0;
    blk.y[i] = positive ? 1.0 : -1.0;
    const auto& verts = positive ? pos_vertices : neg_vertices;
    const std::size_t v = verts[rng.below(verts.size())];
    for (std::size_t j = 0; j < k; ++j) {
      const double center = (v >> j) & 1 ? 1.0 : -1.0;
      blk.x[i * cfg.p + j] = center + sigma * rng.normal();
    }
    for (std::size_t j = k; j < cfg.p; ++j) blk.x[i * cfg.p + j] = rng.normal();
  }
  return blk;
}

}  // namespace

SyntheticData generate(const GenConfig& cfg) {
  if (cfg.theta_star < 1 || cfg.theta_star > cfg.p)
    throw std::invalid_argument("theta_star must lie in [1, p]");
  if (cfg.theta_star >= 63) throw std::invalid_argument("theta_star too large");
  if (cfg.n_train < 4) throw std::invalid_argument("n_train must be at least 4");
  if (cfg.n_test < 1) throw std::invalid_argument("n_test must be at least 1");
  if (cfg.expansion <= 0.0) throw std::invalid_argument("expansion must be positive");
  if (cfg.max_class_imbalance < 1)
    throw std::invalid_argument("max_class_imbalance must be at least 1; label "
                                "alternation cannot balance an odd row count exactly");

  Rng rng(cfg.seed);
  Block train_blk = sample_block(cfg, cfg.n_train, rng);
  Block test_blk = sample_block(cfg, cfg.n_test, rng);

  // Pooled standardization over train+test, one column at a time.
  const std::size_t n_total = cfg.n_train + cfg.n_test;
  for (std::size_t j = 0; j < cfg.p; ++j) {
    double mean = 0.0;
    for (std::size_t i = 0; i < cfg.n_train; ++i) mean += train_blk.x[i * cfg.p + j];
    for (std::size_t i = 0; i < cfg.n_test; ++i) mean += test_blk.x[i * cfg.p + j];
    mean /= static_cast<double>(n_total);
    double var = 0.0;
    for (std::size_t i = 0; i < cfg.n_train; ++i) {
      const double c = train_blk.x[i * cfg.p + j] - mean;
      var += c * c;
    }
    for (std::size_t i = 0; i < cfg.n_test; ++i) {
      const double c = test_blk.x[i * cfg.p + j] - mean;
      var += c * c;
    }
    var /= static_cast<double>(n_total);
    if (var <= 0.0) throw std::runtime_error("degenerate constant column in generator");
    const double inv = 1.0 / std::sqrt(var);
    for (std::size_t i = 0; i < cfg.n_train; ++i)
      train_blk.x[i * cfg.p + j] = (train_blk.x[i * cfg.p + j] - mean) * inv;
    for (std::size_t i = 0; i < cfg.n_test; ++i)
      test_blk.x[i * cfg.p + j] = (test_blk.x[i * cfg.p + j] - mean) * inv;
  }

  // Shuffle columns so the relevant block is not trivially the prefix.
  std::vector<std::size_t> perm(cfg.p);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  for (std::size_t j = cfg.p; j > 1; --j) std::swap(perm[j - 1], perm[rng.below(j)]);

  SyntheticData out;
  out.config = cfg;
  out.permutation = perm;
  for (std::size_t k = 0; k < cfg.p; ++k)
    if (perm[k] < cfg.theta_star) out.relevant.push_back(k);

  auto assemble = [&](const Block& blk, std::size_t rows) {
    Dataset ds;
    ds.standardized = true;
    ds.y = blk.y;
    ds.feature_names.resize(cfg.p);
    for (std::size_t k = 0; k < cfg.p; ++k) ds.feature_names[k] = "f" + std::to_string(k + 1);
    ds.x.resize(rows * cfg.p);
    for (std::size_t i = 0; i < rows; ++i)
      for (std::size_t k = 0; k < cfg.p; ++k)
        ds.x[i * cfg.p + k] = blk.x[i * cfg.p + perm[k]];
    return ds;
  };
  out.train = assemble(train_blk, cfg.n_train);
  out.test = assemble(test_blk, cfg.n_test);
  return out;
}

}  // namespace kta
