#include "kta/svm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace kta {

double SvmKernel::operator()(std::span<const double> a, std::span<const double> b) const {
  double acc = 0.0;
  if (kind == KernelKind::gaussian) {
    for (std::size_t j = 0; j < a.size(); ++j) {
      if (!mask.z[j]) continue;
      const double diff = a[j] - b[j];
      acc += diff * diff;
    }
    return std::exp(-gamma * acc);
  }
  for (std::size_t j = 0; j < a.size(); ++j)
    if (mask.z[j]) acc += a[j] * b[j];
  return acc;
}

double dual_objective(const std::vector<double>& alpha, const std::vector<double>& y,
                      const std::vector<double>& K) {
  const std::size_t n = alpha.size();
  if (y.size() != n || K.size() != n * n)
    throw std::invalid_argument("dual_objective dimension mismatch");
  double lin = 0.0, quad = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    lin += alpha[i];
    for (std::size_t h = 0; h < n; ++h)
      quad += alpha[i] * alpha[h] * y[i] * y[h] * K[i * n + h];
  }
  return lin - 0.5 * quad;
}

namespace {

constexpr double kTau = 1e-12;  // floor for non-positive curvature

std::vector<double> kernel_matrix(const Dataset& ds, const SvmKernel& kernel) {
  const std::size_t n = ds.n(), p = ds.p();
  std::vector<double> K(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    std::span<const double> xi(ds.x.data() + i * p, p);
    K[i * n + i] = kernel(xi, xi);
    for (std::size_t h = i + 1; h < n; ++h) {
      std::span<const double> xh(ds.x.data() + h * p, p);
      const double v = kernel(xi, xh);
      K[i * n + h] = v;
      K[h * n + i] = v;
    }
  }
  return K;
}

}  // namespace

SvmModel train(const Dataset& ds, const SvmKernel& kernel, double C,
               const TrainOptions& opts) {
  const std::size_t n = ds.n();
  if (C <= 0.0) throw std::invalid_argument("C must be positive");
  if (kernel.mask.p() != ds.p()) throw std::invalid_argument("mask length must equal p");
  bool has_pos = false, has_neg = false;
  for (double v : ds.y) (v > 0 ? has_pos : has_neg) = true;
  if (!has_pos || !has_neg) throw std::invalid_argument("both classes must be present");

  const std::vector<double> K = kernel_matrix(ds, kernel);
  const std::vector<double>& y = ds.y;

  // Minimize 1/2 a'Qa - e'a with Q_ih = y_i y_h K_ih, subject to y'a = 0 and
  // 0 <= a <= C. G is the gradient of that objective.
  std::vector<double> alpha(n, 0.0);
  std::vector<double> G(n, -1.0);

  auto in_up = [&](std::size_t t) {
    return y[t] > 0 ? alpha[t] < C : alpha[t] > 0.0;
  };
  auto in_low = [&](std::size_t t) {
    return y[t] > 0 ? alpha[t] > 0.0 : alpha[t] < C;
  };

  std::size_t iter = 0;
  for (;; ++iter) {
    if (iter >= opts.max_iter) {
      throw std::runtime_error(
          "svm training did not converge after " + std::to_string(opts.max_iter) +
          " iterations; last dual objective " +
          std::to_string(dual_objective(alpha, y, K)));
    }

    std::size_t i = n, j = n;
    double up_max = -std::numeric_limits<double>::infinity();
    double low_min = std::numeric_limits<double>::infinity();
    for (std::size_t t = 0; t < n; ++t) {
      const double v = -y[t] * G[t];
      if (in_up(t) && v > up_max) {
        up_max = v;
        i = t;
      }
      if (in_low(t) && v < low_min) {
        low_min = v;
        j = t;
      }
    }
    if (i == n || j == n || up_max - low_min <= opts.tol) break;

    const double old_ai = alpha[i], old_aj = alpha[j];
    if (y[i] != y[j]) {
      double quad = K[i * n + i] + K[j * n + j] + 2.0 * K[i * n + j] * y[i] * y[j];
      if (quad <= 0.0) quad = kTau;
      const double delta = (-G[i] - G[j]) / quad;
      const double diff = alpha[i] - alpha[j];
      alpha[i] += delta;
      alpha[j] += delta;
      if (diff > 0.0) {
        if (alpha[j] < 0.0) { alpha[j] = 0.0; alpha[i] = diff; }
      } else {
        if (alpha[i] < 0.0) { alpha[i] = 0.0; alpha[j] = -diff; }
      }
      if (diff > 0.0) {
        if (alpha[i] > C) { alpha[i] = C; alpha[j] = C - diff; }
      } else {
        if (alpha[j] > C) { alpha[j] = C; alpha[i] = C + diff; }
      }
    } else {
      double quad = K[i * n + i] + K[j * n + j] - 2.0 * K[i * n + j];
      if (quad <= 0.0) quad = kTau;
      const double delta = (G[i] - G[j]) / quad;
      const double sum = alpha[i] + alpha[j];
      alpha[i] -= delta;
      alpha[j] += delta;
      if (sum > C) {
        if (alpha[i] > C) { alpha[i] = C; alpha[j] = sum - C; }
      } else {
        if (alpha[j] < 0.0) { alpha[j] = 0.0; alpha[i] = sum; }
      }
      if (sum > C) {
        if (alpha[j] > C) { alpha[j] = C; alpha[i] = sum - C; }
      } else {
        if (alpha[i] < 0.0) { alpha[i] = 0.0; alpha[j] = sum; }
      }
    }

    const double dai = alpha[i] - old_ai;
    const double daj = alpha[j] - old_aj;
    for (std::size_t t = 0; t < n; ++t)
      G[t] += y[t] * y[i] * K[t * n + i] * dai + y[t] * y[j] * K[t * n + j] * daj;

    if (opts.on_iteration) opts.on_iteration(dual_objective(alpha, y, K));
  }

  SvmModel m;
  m.alpha = alpha;
  m.C = C;
  m.kernel = kernel;
  m.x_train = ds.x;
  m.y_train = ds.y;
  m.n = n;
  m.p = ds.p();
  m.dual_objective_value = dual_objective(alpha, y, K);
  m.iterations = iter;
  for (std::size_t t = 0; t < n; ++t)
    if (alpha[t] > 0.0) m.support.push_back(t);
  m.b = compute_bias(m);
  return m;
}

SvmModel train(const Dataset& ds, const SubsetMask& z, double gamma, double C,
               const TrainOptions& opts) {
  return train(ds, SvmKernel{KernelKind::gaussian, gamma, z}, C, opts);
}

double compute_bias(const SvmModel& m) {
  if (m.support.empty()) throw std::runtime_error("model has no support vectors");
  const std::size_t n = m.n, p = m.p;
  const double eps = 1e-8 * std::max(1.0, m.C);

  std::vector<double> f(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    std::span<const double> xi(m.x_train.data() + i * p, p);
    for (std::size_t h : m.support) {
      std::span<const double> xh(m.x_train.data() + h * p, p);
      f[i] += m.alpha[h] * m.y_train[h] * m.kernel(xh, xi);
    }
  }

  double free_sum = 0.0;
  std::size_t free_count = 0;
  double lower = -std::numeric_limits<double>::infinity();
  double upper = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) {
    const double v = m.y_train[i] - f[i];
    const bool at_zero = m.alpha[i] <= eps;
    const bool at_c = m.alpha[i] >= m.C - eps;
    if (!at_zero && !at_c) {
      free_sum += v;
      ++free_count;
    } else if ((m.y_train[i] > 0 && at_zero) || (m.y_train[i] < 0 && at_c)) {
      lower = std::max(lower, v);
    } else {
      upper = std::min(upper, v);
    }
  }
  if (free_count > 0) return free_sum / static_cast<double>(free_count);
  return 0.5 * (lower + upper);
}

double decision_value(const SvmModel& m, std::span<const double> x_new) {
  if (x_new.size() != m.p) throw std::invalid_argument("feature count mismatch");
  double f = m.b;
  for (std::size_t i : m.support) {
    std::span<const double> xi(m.x_train.data() + i * m.p, m.p);
    f += m.alpha[i] * m.y_train[i] * m.kernel(xi, x_new);
  }
  return f;
}

double predict(const SvmModel& m, std::span<const double> x_new) {
  return decision_value(m, x_new) < 0.0 ? -1.0 : 1.0;
}

std::vector<double> predict(const SvmModel& m, const Dataset& test) {
  if (test.p() != m.p) throw std::invalid_argument("feature count mismatch");
  std::vector<double> out(test.n());
  for (std::size_t i = 0; i < test.n(); ++i)
    out[i] = predict(m, std::span<const double>(test.x.data() + i * m.p, m.p));
  return out;
}

}  // namespace kta
