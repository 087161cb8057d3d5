#include <doctest.h>

#include <stdexcept>

#include <cmath>
#include <random>

#include "kta/alignment.hpp"
#include "test_util.hpp"

using namespace kta;

namespace {

// n=2 fixture with a single feature at squared distance 1 and opposite labels
PairStructure two_point_ps() {
  Dataset ds;
  ds.feature_names = {"a"};
  ds.x = {0.5, -0.5};
  ds.y = {1.0, -1.0};
  ds.standardized = true;
  return build_pair_structure(ds);
}

}  // namespace

TEST_SUITE("alignment") {

TEST_CASE("subset kernel basics") {
  SubsetMask none = SubsetMask::none(3, 3);
  const double d[3] = {1.0, 2.0, 3.0};
  CHECK(subset_kernel({d, 3}, none, 1.0) == 1.0);

  SubsetMask one = SubsetMask::from_indices(1, 1, {0});
  const double d1[1] = {1.0};
  CHECK(subset_kernel({d1, 1}, one, 1.0) == doctest::Approx(0.3678794).epsilon(1e-7));

  const double zero[3] = {0.0, 0.0, 0.0};
  SubsetMask all = SubsetMask::from_indices(3, 3, {0, 1, 2});
  CHECK(subset_kernel({zero, 3}, all, 2.5) == 1.0);
}

TEST_CASE("kernel value stays in (0,1] and never grows with more features") {
  std::mt19937_64 gen(17);
  std::uniform_real_distribution<double> unif(0.0, 4.0);
  for (int rep = 0; rep < 50; ++rep) {
    const std::size_t p = 1 + gen() % 6;
    std::vector<double> d(p);
    for (auto& v : d) v = unif(gen);
    SubsetMask m = SubsetMask::none(p, p);
    double prev = subset_kernel(d, m, 0.7);
    CHECK(prev == 1.0);
    for (std::size_t j = 0; j < p; ++j) {
      m.z[j] = 1;
      const double cur = subset_kernel(d, m, 0.7);
      CHECK(cur > 0.0);
      CHECK(cur <= prev + 1e-15);
      prev = cur;
    }
  }
}

TEST_CASE("two-point objective values") {
  PairStructure ps = two_point_ps();
  SubsetMask z = SubsetMask::from_indices(1, 1, {0});
  CHECK(alignment_objective(ps, z, 1.0) == doctest::Approx(1.2642411).epsilon(1e-7));
  CHECK(reduced_objective(ps, z, 1.0) == doctest::Approx(-0.3678794).epsilon(1e-7));
  // decomposition check: 1 + 1 + 2*(-e^-1)
  CHECK(alignment_objective(ps, z, 1.0) ==
        doctest::Approx(psi_norm_sq(ps) + 2.0 * reduced_objective(ps, z, 1.0)));
}

TEST_CASE("empty mask collapses to (sum psi)^2 = 0") {
  Dataset ds = testutil::random_dataset(13, 4, 2);
  PairStructure ps = build_pair_structure(ds);
  SubsetMask none = SubsetMask::none(4, 4);
  CHECK(std::abs(alignment_objective(ps, none, 1.3)) < 1e-12);
  CHECK(reduced_objective(ps, none, 1.3) ==
        doctest::Approx(-psi_norm_sq(ps) / 2.0).epsilon(1e-12));
}

TEST_CASE("single same-class pair with zero distance contributes +psi_i*psi_h") {
  Dataset ds;
  ds.feature_names = {"a"};
  ds.x = {1.0, 1.0, -2.0};
  ds.y = {1.0, 1.0, -1.0};
  ds.standardized = true;
  PairStructure ps = build_pair_structure(ds);
  REQUIRE(ps.h_plus.size() == 1);
  // restrict to the H+ pair: its distance is zero, so the term is psi_i*psi_h
  const std::size_t k = ps.h_plus[0];
  const auto [i, h] = ps.pairs[k];
  SubsetMask all = SubsetMask::from_indices(1, 1, {0});
  const double term = ps.psi[i] * ps.psi[h] *
                      subset_kernel({ps.pair_dist(k), 1}, all, 2.0);
  CHECK(term == doctest::Approx(0.25));
}

TEST_CASE("full form equals diagonal plus twice the reduced form") {
  std::mt19937_64 gen(31);
  for (int rep = 0; rep < 25; ++rep) {
    Dataset ds = testutil::random_dataset(6 + gen() % 10, 1 + gen() % 5, gen());
    PairStructure ps = build_pair_structure(ds);
    std::vector<std::uint8_t> z(ps.p);
    for (auto& v : z) v = gen() % 2;
    SubsetMask mask{z, ps.p};
    const double full = testutil::alignment_oracle(ds, z, 0.9);
    const double decomposed = psi_norm_sq(ps) + 2.0 * reduced_objective(ps, mask, 0.9);
    CHECK(full == doctest::Approx(decomposed).epsilon(1e-12));
    CHECK(alignment_objective(ps, mask, 0.9) == doctest::Approx(full).epsilon(1e-12));
  }
}

TEST_CASE("objective equals the centroid-distance form") {
  std::mt19937_64 gen(47);
  for (int rep = 0; rep < 10; ++rep) {
    Dataset ds = testutil::random_dataset(10 + gen() % 8, 3, gen());
    PairStructure ps = build_pair_structure(ds);
    std::vector<std::uint8_t> z(ps.p, 1);
    if (ps.p > 1) z[gen() % ps.p] = 0;
    SubsetMask mask{z, ps.p};
    const double gamma = 0.8;

    // centroid form via explicit kernel block sums over the two classes
    std::vector<std::size_t> pos, neg;
    for (std::size_t i = 0; i < ds.n(); ++i) (ds.y[i] > 0 ? pos : neg).push_back(i);
    auto kern = [&](std::size_t a, std::size_t b) {
      double s = 0.0;
      for (std::size_t j = 0; j < ds.p(); ++j) {
        if (!z[j]) continue;
        const double diff = ds.at(a, j) - ds.at(b, j);
        s += diff * diff;
      }
      return std::exp(-gamma * s);
    };
    double within_pos = 0.0, within_neg = 0.0, across = 0.0;
    for (std::size_t a : pos)
      for (std::size_t b : pos) within_pos += kern(a, b);
    for (std::size_t a : neg)
      for (std::size_t b : neg) within_neg += kern(a, b);
    for (std::size_t a : neg)
      for (std::size_t b : pos) across += kern(a, b);
    const double np = static_cast<double>(pos.size());
    const double nn = static_cast<double>(neg.size());
    const double centroid =
        within_neg / (nn * nn) + within_pos / (np * np) - 2.0 * across / (nn * np);

    CHECK(alignment_objective(ps, mask, gamma) ==
          doctest::Approx(centroid).epsilon(1e-10));
  }
}

TEST_CASE("all-ones mask matches the plain Gaussian kernel") {
  Dataset ds = testutil::random_dataset(9, 4, 12);
  PairStructure ps = build_pair_structure(ds);
  std::vector<std::uint8_t> ones(4, 1);
  const double via_subset = alignment_objective(ps, SubsetMask{ones, 4}, 1.1);
  const double via_plain = testutil::alignment_oracle(ds, ones, 1.1);
  CHECK(via_subset == doctest::Approx(via_plain).epsilon(1e-12));
}

TEST_CASE("normalized alignment reference values") {
  const std::size_t n = 6;
  std::vector<double> y(n);
  for (std::size_t i = 0; i < n; ++i) y[i] = i % 2 == 0 ? 1.0 : -1.0;

  std::vector<double> yyT(n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t h = 0; h < n; ++h) yyT[i * n + h] = y[i] * y[h];
  CHECK(normalized_alignment(yyT, y) == doctest::Approx(1.0).epsilon(1e-12));

  std::vector<double> eye(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) eye[i * n + i] = 1.0;
  CHECK(normalized_alignment(eye, y) ==
        doctest::Approx(1.0 / std::sqrt(static_cast<double>(n))).epsilon(1e-12));

  std::vector<double> ones(n * n, 1.0);
  CHECK(normalized_alignment(ones, y) == doctest::Approx(0.0).scale(1).epsilon(1e-12));

  std::vector<double> zeros(n * n, 0.0);
  CHECK_THROWS_AS(normalized_alignment(zeros, y), std::runtime_error);
}

TEST_CASE("sigest on the standardized three-point column") {
  Dataset ds;
  ds.feature_names = {"a"};
  ds.x = {1.0, 2.0, 3.0};
  ds.y = {1.0, -1.0, 1.0};
  PairStructure ps = build_pair_structure(standardize(ds).data);
  // pair sums {1.5, 6.0, 1.5}; median 1.5
  CHECK(sigest_gamma(ps, 1, 1) == doctest::Approx(0.6666667).epsilon(1e-6));
}

TEST_CASE("sigest scales linearly in theta") {
  Dataset ds = testutil::random_dataset(15, 6, 77);
  PairStructure ps = build_pair_structure(ds);
  const double g4 = sigest_gamma(ps, 4, 6);
  const double g2 = sigest_gamma(ps, 2, 6);
  CHECK(g2 == doctest::Approx(2.0 * g4).epsilon(1e-12));
}

TEST_CASE("sigest rejects duplicate-dominated data") {
  Dataset ds;
  ds.feature_names = {"a"};
  ds.x = {1.0, 1.0, 1.0, -1.0};
  ds.y = {1.0, 1.0, 1.0, -1.0};
  ds.standardized = true;
  PairStructure ps = build_pair_structure(ds);
  // 6 pairs, distances {0,0,0,4,4,4}: median of sums is (0+4)/2 = 2, fine;
  // shrink to the three duplicate rows plus one more duplicate to force 0
  Dataset dup;
  dup.feature_names = {"a"};
  dup.x = {1.0, 1.0, 1.0, 1.0, -1.0};
  dup.y = {1.0, 1.0, 1.0, 1.0, -1.0};
  dup.standardized = true;
  PairStructure psd = build_pair_structure(dup);
  // 10 pairs, 6 with distance 0 -> median 0
  CHECK_THROWS_AS(sigest_gamma(psd, 1, 1), std::runtime_error);
  CHECK(sigest_gamma(ps, 1, 1) == doctest::Approx(0.5));
}

}  // TEST_SUITE
