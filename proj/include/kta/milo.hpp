#ifndef KTA_MILO_HPP
#define KTA_MILO_HPP

#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "kta/dataset.hpp"

namespace kta {

enum class MiloVariant { full, reduced };
enum class ExportFormat { lp_text, mps_text };

/// Margin added to the reduced-variant big-M coefficients when stabilization
/// is on; the stabilized value is capped at 1.0.
inline constexpr double kBigMStabilizationMargin = 0.1;

/// Big-M coefficient for one (pair, feature) coupling constraint.
/// Unstabilized: 1 - exp(-gamma*d). Stabilized: min(1 - exp(-gamma*d) + 0.1, 1).
double big_m(double d, double gamma, bool stabilized);

/// Linearized subset-selection model over binaries z_1..z_p and the layered
/// auxiliary variables e_{ih,j}, j in [p+1].
///
/// The full variant ranges over all n^2 ordered instance pairs with a uniform
/// big-M; the reduced variant keeps only pairs (i,h), i < h, drops the
/// constraint side made redundant by the maximization direction (upper
/// couplings for same-class pairs, lower couplings otherwise), and uses
/// per-constraint big-M values.
struct MiloModel {
  MiloVariant variant = MiloVariant::reduced;
  std::size_t n = 0, p = 0, theta = 0;
  double gamma = 1.0;
  bool stabilized = false;   // reduced variant only
  double uniform_m = 1.0;    // full variant only

  std::vector<std::pair<std::size_t, std::size_t>> pairs;  // full: all (i,h); reduced: i<h
  std::vector<std::int8_t> pair_sign;                      // sign of psi_i*psi_h per pair
  std::vector<double> obj_coef;                            // psi_i*psi_h per pair
  std::vector<double> coef;      // exp(-gamma*d_ihj), pairs.size() * p
  std::vector<double> big_m_coef;  // reduced: pairs.size() * p; full: empty

  std::size_t num_binaries() const { return p; }
  std::size_t num_continuous() const { return pairs.size() * (p + 1); }
  std::size_t num_coupling_constraints() const {
    return pairs.size() * p * (variant == MiloVariant::full ? 4 : 2);
  }
  std::size_t num_layer1_equalities() const { return pairs.size(); }

  // Variable ids: z_j -> j; e(pair k, layer l) -> p + k*(p+1) + l, l in [0,p].
  std::size_t num_variables() const { return p + num_continuous(); }
  std::size_t e_var(std::size_t pair, std::size_t layer) const {
    return p + pair * (p + 1) + layer;
  }
  std::string var_name(std::size_t id) const;
};

/// Builds the full-variant model over all n^2 ordered pairs with uniform M.
MiloModel build_milo(const PairStructure& ps, double gamma, std::size_t theta, double m = 1.0);

/// Builds the reduced-variant model over H with per-constraint big-M values.
MiloModel build_rmilo(const PairStructure& ps, double gamma, std::size_t theta,
                      bool stabilized = true);

/// Layered auxiliary values e_{ih,j} for each pair of the chosen variant.
struct EMatrix {
  std::size_t num_pairs = 0;
  std::size_t layers = 0;  // p + 1
  std::vector<double> values;

  double at(std::size_t pair, std::size_t layer) const {
    return values[pair * layers + layer];
  }
  double& at(std::size_t pair, std::size_t layer) { return values[pair * layers + layer]; }
};

/// Rebuilds the e variables implied by a subset mask through the layer
/// recursion e_{ih,1} = 1, e_{ih,j+1} = (z_j ? exp(-gamma*d_ihj) : 1) * e_{ih,j}.
/// The final layer equals the subset kernel value of the pair.
EMatrix reconstruct_e(const SubsetMask& z, const PairStructure& ps, double gamma,
                      MiloVariant variant);

struct ConstraintViolation {
  std::string name;
  double slack;  // negative by at least tol
};

struct VerificationReport {
  std::vector<ConstraintViolation> violations;
  double objective = 0.0;  // model objective recomputed at (e, z)
  bool ok() const { return violations.empty(); }
};

/// Checks (e, z) against every model constraint; violations are reported with
/// their slack. Throws on dimension mismatch.
VerificationReport verify_solution(const MiloModel& m, const EMatrix& e, const SubsetMask& z,
                                   double tol = 1e-9);

/// Renders the model as solver-exchange text. Deterministic: exporting the
/// same model twice yields identical bytes.
std::string export_model(const MiloModel& m, ExportFormat format);

namespace detail {

enum class RowSense { le, ge, eq };

struct LinearTerm {
  std::size_t var;
  double coef;
};

struct RowView {
  const char* name_prefix;          // "card", "init", "dl", ...
  std::size_t i, h, j;              // 1-based name components; 0 = unused
  int name_parts;                   // how many of i,h,j participate in the name
  RowSense sense;
  const LinearTerm* terms;
  std::size_t num_terms;
  double rhs;
  std::string name() const;
};

/// Walks every constraint row in the fixed export order:
/// cardinality, layer-1 equalities by pair, couplings by pair then layer.
void for_each_row(const MiloModel& m, const std::function<void(const RowView&)>& fn);

}  // namespace detail

}  // namespace kta

#endif
