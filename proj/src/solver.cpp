#include "kta/solver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <queue>
#include <stdexcept>

#include "kta/alignment.hpp"

namespace kta {

OptGap opt_gap(double lb, double ub) {
  if (ub < lb) ub = lb;  // tolerate bound noise
  if (lb <= 0.0) return {0.0, true};
  const double pct = (ub - lb) / lb * 100.0;
  if (pct > 1000.0) return {0.0, true};
  return {pct, false};
}

std::string format_opt_gap(const OptGap& g) {
  if (g.sentinel) return ">1000.0%";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.1f%%", g.percent);
  return buf;
}

std::string to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::optimal: return "optimal";
    case SolveStatus::time_limit: return "time_limit";
    case SolveStatus::node_limit: return "node_limit";
  }
  return "unknown";
}

namespace {

bool lex_less(const std::vector<std::uint8_t>& a, const std::vector<std::uint8_t>& b) {
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

std::uint64_t feasible_subset_count(std::size_t p, std::size_t theta) {
  // sum_{k=0}^{theta} C(p, k), saturating above the brute-force cap
  double total = 0.0;
  double binom = 1.0;  // C(p, 0)
  for (std::size_t k = 0; k <= std::min(theta, p); ++k) {
    if (k > 0) binom = binom * static_cast<double>(p - k + 1) / static_cast<double>(k);
    total += binom;
    if (total > 2.0 * static_cast<double>(kBruteForceCap)) return UINT64_MAX;
  }
  return static_cast<std::uint64_t>(total);
}

class Timer {
 public:
  Timer() : start_(std::chrono::steady_clock::now()) {}
  double elapsed_s() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

}  // namespace

SolveResult brute_force(const PairStructure& ps, std::size_t theta, double gamma) {
  const std::size_t p = ps.p;
  if (theta > p) throw std::invalid_argument("theta must not exceed p");
  if (feasible_subset_count(p, theta) > kBruteForceCap)
    throw std::runtime_error(
        "feasible subset count exceeds the enumeration cap; use solve_bnb");

  Timer timer;
  SubsetMask best = SubsetMask::none(p, theta);
  double best_obj = alignment_objective(ps, best, gamma);
  std::uint64_t evaluated = 1;

  std::vector<std::size_t> idx;
  SubsetMask cand = SubsetMask::none(p, theta);
  for (std::size_t k = 1; k <= theta; ++k) {
    idx.resize(k);
    for (std::size_t t = 0; t < k; ++t) idx[t] = t;
    while (true) {
      std::fill(cand.z.begin(), cand.z.end(), std::uint8_t{0});
      for (std::size_t t : idx) cand.z[t] = 1;
      const double obj = alignment_objective(ps, cand, gamma);
      ++evaluated;
      if (obj > best_obj || (obj == best_obj && lex_less(cand.z, best.z))) {
        best_obj = obj;
        best = cand;
      }
      // next k-combination in lexicographic index order
      std::size_t t = k;
      while (t > 0 && idx[t - 1] == p - k + t - 1) --t;
      if (t == 0) break;
      ++idx[t - 1];
      for (std::size_t s = t; s < k; ++s) idx[s] = idx[s - 1] + 1;
    }
  }

  SolveResult res;
  res.z_best = best;
  res.objective = best_obj;
  res.lower_bound = best_obj;
  res.upper_bound = best_obj;
  res.gap = opt_gap(best_obj, best_obj);
  res.nodes_explored = evaluated;
  res.wall_time_s = timer.elapsed_s();
  res.status = SolveStatus::optimal;
  return res;
}

double node_upper_bound(const BnbNode& node, const PairStructure& ps, std::size_t theta,
                        double gamma) {
  const std::size_t p = ps.p;
  std::size_t fixed = 0;
  for (std::size_t j = 0; j < p; ++j) fixed += node.fixed_in[j];
  const std::size_t r = theta > fixed ? theta - fixed : 0;

  std::vector<double> free_d;
  free_d.reserve(p);
  double acc = 0.0;
  for (std::size_t k = 0; k < ps.pairs.size(); ++k) {
    const auto [i, h] = ps.pairs[k];
    const double* d = ps.pair_dist(k);
    double base = 0.0;
    for (std::size_t j = 0; j < p; ++j)
      if (node.fixed_in[j]) base += d[j];
    const double w = ps.psi[i] * ps.psi[h];
    if (ps.pair_sign[k] > 0) {
      acc += w * std::exp(-gamma * base);
    } else {
      free_d.clear();
      for (std::size_t j = 0; j < p; ++j)
        if (!node.fixed_in[j] && !node.fixed_out[j]) free_d.push_back(d[j]);
      const std::size_t take = std::min(r, free_d.size());
      std::partial_sort(free_d.begin(), free_d.begin() + take, free_d.end(),
                        std::greater<double>());
      double top = 0.0;
      for (std::size_t t = 0; t < take; ++t) top += free_d[t];
      acc += w * std::exp(-gamma * (base + top));
    }
  }
  return psi_norm_sq(ps) + 2.0 * acc;
}

SubsetMask greedy_incumbent(const PairStructure& ps, std::size_t theta, double gamma,
                            std::vector<GreedyStep>* trace) {
  const std::size_t p = ps.p;
  SubsetMask mask = SubsetMask::none(p, theta);
  double cur = alignment_objective(ps, mask, gamma);
  for (std::size_t step = 0; step < theta; ++step) {
    std::size_t best_j = p;
    double best_obj = cur;
    for (std::size_t j = 0; j < p; ++j) {
      if (mask.z[j]) continue;
      mask.z[j] = 1;
      const double obj = alignment_objective(ps, mask, gamma);
      mask.z[j] = 0;
      if (obj > best_obj) {
        best_obj = obj;
        best_j = j;
      }
    }
    if (best_j == p) break;  // no strict improvement
    mask.z[best_j] = 1;
    cur = best_obj;
    if (trace) trace->push_back({best_j, best_obj});
  }
  return mask;
}

namespace {

struct QueueEntry {
  double bound;
  std::uint64_t seq;
  BnbNode node;
};

struct QueueOrder {
  bool operator()(const QueueEntry& a, const QueueEntry& b) const {
    if (a.bound != b.bound) return a.bound < b.bound;
    return a.seq > b.seq;  // FIFO among equal bounds
  }
};

}  // namespace

SolveResult solve_bnb(const PairStructure& ps, std::size_t theta, double gamma,
                      const SolveLimits& limits, const IncumbentCallback& on_incumbent) {
  const std::size_t p = ps.p;
  if (theta < 1 || theta > p) throw std::invalid_argument("theta must lie in [1, p]");
  if (limits.time_limit_s < 0.0 || limits.gap_tol < 0.0)
    throw std::invalid_argument("limits must be nonnegative");

  Timer timer;
  SubsetMask best = greedy_incumbent(ps, theta, gamma);
  double lb = alignment_objective(ps, best, gamma);
  if (on_incumbent) on_incumbent(lb, best);

  auto consider = [&](const SubsetMask& cand) {
    const double obj = alignment_objective(ps, cand, gamma);
    if (obj > lb || (obj == lb && lex_less(cand.z, best.z))) {
      lb = std::max(lb, obj);
      best = cand;
      if (on_incumbent) on_incumbent(obj, cand);
    }
  };

  std::priority_queue<QueueEntry, std::vector<QueueEntry>, QueueOrder> open;
  std::uint64_t seq = 0;
  BnbNode root{std::vector<std::uint8_t>(p, 0), std::vector<std::uint8_t>(p, 0), 0.0};
  root.bound = node_upper_bound(root, ps, theta, gamma);
  open.push({root.bound, seq++, std::move(root)});

  std::uint64_t nodes = 0;
  SolveStatus status = SolveStatus::optimal;
  double residual_ub = -std::numeric_limits<double>::infinity();

  while (!open.empty()) {
    if (timer.elapsed_s() >= limits.time_limit_s) {
      status = SolveStatus::time_limit;
      break;
    }
    if (nodes >= limits.node_cap) {
      status = SolveStatus::node_limit;
      break;
    }
    QueueEntry top = open.top();
    open.pop();
    ++nodes;
    if (top.bound <= lb + limits.gap_tol) {
      // Best-first: every open node is bounded by this one; search is done.
      residual_ub = std::max(lb, top.bound);
      break;
    }

    BnbNode& node = top.node;
    std::size_t in_count = 0;
    std::vector<std::size_t> free;
    for (std::size_t j = 0; j < p; ++j) {
      in_count += node.fixed_in[j];
      if (!node.fixed_in[j] && !node.fixed_out[j]) free.push_back(j);
    }
    if (in_count >= theta || free.empty()) {
      consider(SubsetMask{node.fixed_in, theta});
      continue;
    }

    // Branch on the free feature with the largest aggregate weighted
    // contribution sum_H |psi_i psi_h| d_ihj exp(-gamma base_ih).
    std::vector<double> score(p, 0.0);
    for (std::size_t k = 0; k < ps.pairs.size(); ++k) {
      const auto [i, h] = ps.pairs[k];
      const double* d = ps.pair_dist(k);
      double base = 0.0;
      for (std::size_t j = 0; j < p; ++j)
        if (node.fixed_in[j]) base += d[j];
      const double w = std::abs(ps.psi[i] * ps.psi[h]) * std::exp(-gamma * base);
      for (std::size_t j : free) score[j] += w * d[j];
    }
    std::size_t branch_j = free[0];
    for (std::size_t j : free)
      if (score[j] > score[branch_j]) branch_j = j;

    BnbNode child_in = node;
    child_in.fixed_in[branch_j] = 1;
    consider(SubsetMask{child_in.fixed_in, theta});
    child_in.bound = node_upper_bound(child_in, ps, theta, gamma);
    if (child_in.bound > lb + limits.gap_tol)
      open.push({child_in.bound, seq++, std::move(child_in)});

    BnbNode child_out = node;
    child_out.fixed_out[branch_j] = 1;
    child_out.bound = node_upper_bound(child_out, ps, theta, gamma);
    if (child_out.bound > lb + limits.gap_tol)
      open.push({child_out.bound, seq++, std::move(child_out)});
  }

  const double ub = status == SolveStatus::optimal
                        ? std::max(lb, residual_ub)
                        : std::max(lb, open.empty() ? lb : open.top().bound);

  SolveResult res;
  res.z_best = best;
  res.objective = lb;
  res.lower_bound = lb;
  res.upper_bound = ub;
  res.gap = opt_gap(lb, ub);
  res.nodes_explored = nodes;
  res.wall_time_s = timer.elapsed_s();
  res.status = status;
  return res;
}

}  // namespace kta
