#include "kta/milo.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

namespace kta {

double big_m(double d, double gamma, bool stabilized) {
  const double m = 1.0 - std::exp(-gamma * d);
  if (!stabilized) return m;
  return std::min(m + kBigMStabilizationMargin, 1.0);
}

std::string MiloModel::var_name(std::size_t id) const {
  char buf[64];
  if (id < p) {
    std::snprintf(buf, sizeof buf, "z_%zu", id + 1);
    return buf;
  }
  const std::size_t k = (id - p) / (p + 1);
  const std::size_t layer = (id - p) % (p + 1);
  std::snprintf(buf, sizeof buf, "e_%zu_%zu_%zu", pairs[k].first + 1, pairs[k].second + 1,
                layer + 1);
  return buf;
}

namespace {

void validate_budget(const PairStructure& ps, std::size_t theta) {
  if (theta < 1 || theta > ps.p)
    throw std::invalid_argument("theta must lie in [1, p]");
}

void fill_common(MiloModel& m, const PairStructure& ps, double gamma, std::size_t theta) {
  m.n = ps.n;
  m.p = ps.p;
  m.theta = theta;
  m.gamma = gamma;
  m.coef.resize(m.pairs.size() * m.p);
  for (std::size_t k = 0; k < m.pairs.size(); ++k) {
    const auto [i, h] = m.pairs[k];
    for (std::size_t j = 0; j < m.p; ++j)
      m.coef[k * m.p + j] = std::exp(-gamma * ps.dist_at(i, h, j));
  }
}

}  // namespace

MiloModel build_milo(const PairStructure& ps, double gamma, std::size_t theta, double big) {
  validate_budget(ps, theta);
  if (big <= 0.0) throw std::invalid_argument("M must be positive");
  MiloModel m;
  m.variant = MiloVariant::full;
  m.uniform_m = big;
  m.pairs.reserve(ps.n * ps.n);
  for (std::size_t i = 0; i < ps.n; ++i)
    for (std::size_t h = 0; h < ps.n; ++h) m.pairs.emplace_back(i, h);
  fill_common(m, ps, gamma, theta);
  m.obj_coef.resize(m.pairs.size());
  m.pair_sign.resize(m.pairs.size());
  for (std::size_t k = 0; k < m.pairs.size(); ++k) {
    const auto [i, h] = m.pairs[k];
    const double c = ps.psi[i] * ps.psi[h];
    m.obj_coef[k] = c;
    m.pair_sign[k] = c > 0 ? 1 : -1;
  }
  return m;
}

MiloModel build_rmilo(const PairStructure& ps, double gamma, std::size_t theta,
                      bool stabilized) {
  validate_budget(ps, theta);
  MiloModel m;
  m.variant = MiloVariant::reduced;
  m.stabilized = stabilized;
  m.pairs = ps.pairs;
  m.pair_sign = ps.pair_sign;
  fill_common(m, ps, gamma, theta);
  m.obj_coef.resize(m.pairs.size());
  for (std::size_t k = 0; k < m.pairs.size(); ++k) {
    const auto [i, h] = m.pairs[k];
    m.obj_coef[k] = ps.psi[i] * ps.psi[h];
  }
  m.big_m_coef.resize(m.pairs.size() * m.p);
  for (std::size_t k = 0; k < m.pairs.size(); ++k) {
    const auto [i, h] = m.pairs[k];
    for (std::size_t j = 0; j < m.p; ++j)
      m.big_m_coef[k * m.p + j] = big_m(ps.dist_at(i, h, j), gamma, stabilized);
  }
  return m;
}

EMatrix reconstruct_e(const SubsetMask& z, const PairStructure& ps, double gamma,
                      MiloVariant variant) {
  if (z.p() != ps.p) throw std::invalid_argument("mask length must equal p");
  EMatrix e;
  e.layers = ps.p + 1;
  if (variant == MiloVariant::reduced) {
    e.num_pairs = ps.pairs.size();
    e.values.resize(e.num_pairs * e.layers);
    for (std::size_t k = 0; k < e.num_pairs; ++k) {
      const double* d = ps.pair_dist(k);
      double v = 1.0;
      e.at(k, 0) = v;
      for (std::size_t j = 0; j < ps.p; ++j) {
        if (z.z[j]) v *= std::exp(-gamma * d[j]);
        e.at(k, j + 1) = v;
      }
    }
  } else {
    e.num_pairs = ps.n * ps.n;
    e.values.resize(e.num_pairs * e.layers);
    std::size_t k = 0;
    for (std::size_t i = 0; i < ps.n; ++i) {
      for (std::size_t h = 0; h < ps.n; ++h, ++k) {
        double v = 1.0;
        e.at(k, 0) = v;
        for (std::size_t j = 0; j < ps.p; ++j) {
          if (z.z[j]) v *= std::exp(-gamma * ps.dist_at(i, h, j));
          e.at(k, j + 1) = v;
        }
      }
    }
  }
  return e;
}

namespace detail {

std::string RowView::name() const {
  char buf[96];
  switch (name_parts) {
    case 0:
      return name_prefix;
    case 2:
      std::snprintf(buf, sizeof buf, "%s_%zu_%zu", name_prefix, i, h);
      return buf;
    default:
      std::snprintf(buf, sizeof buf, "%s_%zu_%zu_%zu", name_prefix, i, h, j);
      return buf;
  }
}

void for_each_row(const MiloModel& m, const std::function<void(const RowView&)>& fn) {
  std::vector<LinearTerm> card(m.p);
  for (std::size_t j = 0; j < m.p; ++j) card[j] = {j, 1.0};
  fn(RowView{"card", 0, 0, 0, 0, RowSense::le, card.data(), card.size(),
             static_cast<double>(m.theta)});

  LinearTerm t[3];
  for (std::size_t k = 0; k < m.pairs.size(); ++k) {
    const auto [i, h] = m.pairs[k];
    t[0] = {m.e_var(k, 0), 1.0};
    fn(RowView{"init", i + 1, h + 1, 0, 2, RowSense::eq, t, 1, 1.0});
  }

  for (std::size_t k = 0; k < m.pairs.size(); ++k) {
    const auto [i, h] = m.pairs[k];
    for (std::size_t j = 0; j < m.p; ++j) {
      const double a = m.coef[k * m.p + j];
      const std::size_t ecur = m.e_var(k, j);
      const std::size_t enext = m.e_var(k, j + 1);
      if (m.variant == MiloVariant::full) {
        const double M = m.uniform_m;
        // -M z_j <= e_next - e_cur <= M z_j
        t[0] = {enext, 1.0}; t[1] = {ecur, -1.0}; t[2] = {j, M};
        fn(RowView{"dl", i + 1, h + 1, j + 1, 3, RowSense::ge, t, 3, 0.0});
        t[2] = {j, -M};
        fn(RowView{"du", i + 1, h + 1, j + 1, 3, RowSense::le, t, 3, 0.0});
        // -M(1-z_j) <= e_next - a e_cur <= M(1-z_j)
        t[1] = {ecur, -a}; t[2] = {j, -M};
        fn(RowView{"gl", i + 1, h + 1, j + 1, 3, RowSense::ge, t, 3, -M});
        t[2] = {j, M};
        fn(RowView{"gu", i + 1, h + 1, j + 1, 3, RowSense::le, t, 3, M});
      } else {
        const double M = m.big_m_coef[k * m.p + j];
        if (m.pair_sign[k] > 0) {
          // e_next - e_cur <= 0
          t[0] = {enext, 1.0}; t[1] = {ecur, -1.0};
          fn(RowView{"mono", i + 1, h + 1, j + 1, 3, RowSense::le, t, 2, 0.0});
          // e_next - a e_cur <= M (1 - z_j)
          t[1] = {ecur, -a}; t[2] = {j, M};
          fn(RowView{"gate", i + 1, h + 1, j + 1, 3, RowSense::le, t, 3, M});
        } else {
          // e_next - e_cur >= -M z_j
          t[0] = {enext, 1.0}; t[1] = {ecur, -1.0}; t[2] = {j, M};
          fn(RowView{"mono", i + 1, h + 1, j + 1, 3, RowSense::ge, t, 3, 0.0});
          // e_next - a e_cur >= 0
          t[1] = {ecur, -a};
          fn(RowView{"gate", i + 1, h + 1, j + 1, 3, RowSense::ge, t, 2, 0.0});
        }
      }
    }
  }
}

}  // namespace detail

VerificationReport verify_solution(const MiloModel& m, const EMatrix& e, const SubsetMask& z,
                                   double tol) {
  if (z.p() != m.p) throw std::invalid_argument("mask length must equal p");
  if (e.num_pairs != m.pairs.size() || e.layers != m.p + 1)
    throw std::invalid_argument("e matrix shape does not match model");

  auto value_of = [&](std::size_t var) -> double {
    if (var < m.p) return z.z[var] ? 1.0 : 0.0;
    const std::size_t k = (var - m.p) / (m.p + 1);
    const std::size_t layer = (var - m.p) % (m.p + 1);
    return e.at(k, layer);
  };

  VerificationReport rep;
  detail::for_each_row(m, [&](const detail::RowView& row) {
    double lhs = 0.0;
    for (std::size_t t = 0; t < row.num_terms; ++t)
      lhs += row.terms[t].coef * value_of(row.terms[t].var);
    double slack = 0.0;
    switch (row.sense) {
      case detail::RowSense::le: slack = row.rhs - lhs; break;
      case detail::RowSense::ge: slack = lhs - row.rhs; break;
      case detail::RowSense::eq: slack = -std::abs(lhs - row.rhs); break;
    }
    if (slack < -tol) rep.violations.push_back({row.name(), slack});
  });
  for (std::size_t k = 0; k < m.pairs.size(); ++k)
    rep.objective += m.obj_coef[k] * e.at(k, m.p);
  return rep;
}

namespace {

std::string fmt_num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string export_lp(const MiloModel& m) {
  std::ostringstream out;
  out << "\\ kta subset selection model ("
      << (m.variant == MiloVariant::full ? "full" : "reduced") << ")\n";
  out << "Maximize\n obj:";
  std::size_t on_line = 0;
  for (std::size_t k = 0; k < m.pairs.size(); ++k) {
    const double c = m.obj_coef[k];
    out << (c < 0 ? " - " : " + ") << fmt_num(std::abs(c)) << ' '
        << m.var_name(m.e_var(k, m.p));
    if (++on_line % 4 == 0 && k + 1 < m.pairs.size()) out << "\n    ";
  }
  out << "\nSubject To\n";
  detail::for_each_row(m, [&](const detail::RowView& row) {
    out << ' ' << row.name() << ':';
    for (std::size_t t = 0; t < row.num_terms; ++t) {
      const double c = row.terms[t].coef;
      out << (c < 0 ? " - " : " + ") << fmt_num(std::abs(c)) << ' '
          << m.var_name(row.terms[t].var);
    }
    switch (row.sense) {
      case detail::RowSense::le: out << " <= "; break;
      case detail::RowSense::ge: out << " >= "; break;
      case detail::RowSense::eq: out << " = "; break;
    }
    out << fmt_num(row.rhs) << '\n';
  });
  out << "Binaries\n";
  for (std::size_t j = 0; j < m.p; ++j) out << ' ' << m.var_name(j);
  out << "\nEnd\n";
  return out.str();
}

std::string export_mps(const MiloModel& m) {
  // Column-major layout: gather each variable's (row, coef) entries while
  // walking rows once in the canonical order.
  std::vector<std::vector<std::pair<std::string, double>>> cols(m.num_variables());
  std::ostringstream rows;
  std::ostringstream rhs;
  detail::for_each_row(m, [&](const detail::RowView& row) {
    const std::string name = row.name();
    char sense = 'L';
    if (row.sense == detail::RowSense::ge) sense = 'G';
    if (row.sense == detail::RowSense::eq) sense = 'E';
    rows << ' ' << sense << "  " << name << '\n';
    for (std::size_t t = 0; t < row.num_terms; ++t)
      cols[row.terms[t].var].emplace_back(name, row.terms[t].coef);
    if (row.rhs != 0.0) rhs << "    RHS  " << name << "  " << fmt_num(row.rhs) << '\n';
  });

  for (std::size_t k = 0; k < m.pairs.size(); ++k)
    cols[m.e_var(k, m.p)].emplace_back("obj", m.obj_coef[k]);

  std::ostringstream out;
  out << "NAME  kta_milo_" << (m.variant == MiloVariant::full ? "full" : "reduced") << '\n';
  out << "OBJSENSE\n    MAX\n";
  out << "ROWS\n N  obj\n" << rows.str();
  out << "COLUMNS\n";
  out << "    MARKER  'MARKER'  'INTORG'\n";
  for (std::size_t j = 0; j < m.p; ++j)
    for (const auto& [row, coef] : cols[j])
      out << "    " << m.var_name(j) << "  " << row << "  " << fmt_num(coef) << '\n';
  out << "    MARKER  'MARKER'  'INTEND'\n";
  for (std::size_t v = m.p; v < m.num_variables(); ++v)
    for (const auto& [row, coef] : cols[v])
      out << "    " << m.var_name(v) << "  " << row << "  " << fmt_num(coef) << '\n';
  out << "RHS\n" << rhs.str();
  out << "BOUNDS\n";
  for (std::size_t j = 0; j < m.p; ++j) out << " BV BND  " << m.var_name(j) << '\n';
  out << "ENDATA\n";
  return out.str();
}

}  // namespace

std::string export_model(const MiloModel& m, ExportFormat format) {
  switch (format) {
    case ExportFormat::lp_text: return export_lp(m);
    case ExportFormat::mps_text: return export_mps(m);
  }
  throw std::invalid_argument("unsupported export format");
}

}  // namespace kta
