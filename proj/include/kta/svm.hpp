#ifndef KTA_SVM_HPP
#define KTA_SVM_HPP

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "kta/dataset.hpp"

namespace kta {

enum class KernelKind { gaussian, linear };

/// Kernel specification: Gaussian k(x,x') = exp(-gamma sum_j z_j (x_j-x'_j)^2)
/// or linear k(x,x') = sum_j z_j x_j x'_j, both restricted to the mask z.
struct SvmKernel {
  KernelKind kind = KernelKind::gaussian;
  double gamma = 1.0;
  SubsetMask mask;

  double operator()(std::span<const double> a, std::span<const double> b) const;
};

struct SvmModel {
  std::vector<double> alpha;
  double b = 0.0;
  double C = 1.0;
  SvmKernel kernel;
  std::vector<std::size_t> support;  // indices with alpha_i > 0
  double dual_objective_value = 0.0;
  std::size_t iterations = 0;

  // training references for kernel evaluation at prediction time
  std::vector<double> x_train;  // n * p
  std::vector<double> y_train;
  std::size_t n = 0, p = 0;
};

struct TrainOptions {
  double tol = 1e-6;                          // pairwise KKT tolerance
  std::size_t max_iter = 1000000;             // working-set updates before giving up
  std::function<void(double)> on_iteration;   // dual objective after each update
};

/// Trains the soft-margin dual by two-variable coordinate ascent on the
/// maximal-KKT-violating pair. Throws on non-convergence (message carries the
/// last dual objective value).
SvmModel train(const Dataset& ds, const SvmKernel& kernel, double C,
               const TrainOptions& opts = {});

/// Convenience overload for the Gaussian subset kernel.
SvmModel train(const Dataset& ds, const SubsetMask& z, double gamma, double C,
               const TrainOptions& opts = {});

/// sum_i alpha_i - 1/2 sum_i sum_h alpha_i alpha_h y_i y_h K_ih.
double dual_objective(const std::vector<double>& alpha, const std::vector<double>& y,
                      const std::vector<double>& K);

/// Bias consistent with the KKT conditions: the average of y_i - f_i over
/// unbounded support vectors (0 < alpha_i < C), falling back to the midpoint
/// of the feasible interval when none exist. Throws if no support vectors.
double compute_bias(const SvmModel& m);

/// Decision value f(x) = sum_i alpha_i y_i k(x_i, x) + b.
double decision_value(const SvmModel& m, std::span<const double> x_new);

/// Predicted label: -1 when f(x) < 0, otherwise +1.
double predict(const SvmModel& m, std::span<const double> x_new);

/// Labels for every row of a dataset sharing the training feature layout.
std::vector<double> predict(const SvmModel& m, const Dataset& test);

}  // namespace kta

#endif
