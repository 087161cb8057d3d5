#include "kta/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace kta {

namespace {

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::stringstream ss(line);
  while (std::getline(ss, cell, ',')) cells.push_back(cell);
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

double parse_cell(const std::string& raw, std::size_t row, std::size_t col) {
  const std::string s = trim(raw);
  if (s.empty()) {
    throw std::runtime_error("missing value at data row " + std::to_string(row) +
                             ", column " + std::to_string(col) +
                             "; remove or pre-clean instances with missing values");
  }
  std::size_t pos = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &pos);
  } catch (const std::exception&) {
    throw std::runtime_error("non-numeric cell '" + s + "' at data row " +
                             std::to_string(row) + ", column " + std::to_string(col));
  }
  if (pos != s.size()) {
    throw std::runtime_error("non-numeric cell '" + s + "' at data row " +
                             std::to_string(row) + ", column " + std::to_string(col));
  }
  return v;
}

}  // namespace

std::size_t SubsetMask::cardinality() const {
  return static_cast<std::size_t>(std::count(z.begin(), z.end(), std::uint8_t{1}));
}

std::vector<std::size_t> SubsetMask::selected() const {
  std::vector<std::size_t> idx;
  for (std::size_t j = 0; j < z.size(); ++j)
    if (z[j]) idx.push_back(j);
  return idx;
}

SubsetMask SubsetMask::none(std::size_t p, std::size_t theta) {
  return SubsetMask{std::vector<std::uint8_t>(p, 0), theta};
}

SubsetMask SubsetMask::from_indices(std::size_t p, std::size_t theta,
                                    const std::vector<std::size_t>& idx) {
  SubsetMask m = none(p, theta);
  for (std::size_t j : idx) {
    if (j >= p) throw std::invalid_argument("feature index out of range");
    m.z[j] = 1;
  }
  if (m.cardinality() > theta)
    throw std::invalid_argument("subset exceeds cardinality budget theta");
  return m;
}

Dataset load_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open file: " + path);

  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("empty file: " + path);
  auto header = split_line(line);
  if (header.size() < 2)
    throw std::runtime_error("header must contain at least one feature column and 'y'");
  for (auto& h : header) h = trim(h);
  if (header.back() != "y")
    throw std::runtime_error("last column must be named 'y', got '" + header.back() + "'");

  const std::size_t p = header.size() - 1;
  Dataset ds;
  ds.feature_names.assign(header.begin(), header.end() - 1);

  std::size_t row = 0;
  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    ++row;
    auto cells = split_line(line);
    if (cells.size() != p + 1) {
      throw std::runtime_error("data row " + std::to_string(row) + " has " +
                               std::to_string(cells.size()) + " cells, expected " +
                               std::to_string(p + 1));
    }
    for (std::size_t j = 0; j < p; ++j) ds.x.push_back(parse_cell(cells[j], row, j + 1));
    const double label = parse_cell(cells[p], row, p + 1);
    if (label != 1.0 && label != -1.0) {
      throw std::runtime_error("label must be -1 or +1, got '" + trim(cells[p]) +
                               "' at data row " + std::to_string(row));
    }
    ds.y.push_back(label);
  }
  if (ds.y.empty()) throw std::runtime_error("no data rows in " + path);

  const bool has_pos = std::find(ds.y.begin(), ds.y.end(), 1.0) != ds.y.end();
  const bool has_neg = std::find(ds.y.begin(), ds.y.end(), -1.0) != ds.y.end();
  if (!has_pos || !has_neg)
    throw std::runtime_error("both classes must be present, found only one label value");
  return ds;
}

void write_csv(const Dataset& ds, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write file: " + path);
  for (std::size_t j = 0; j < ds.p(); ++j) out << ds.feature_names[j] << ',';
  out << "y\n";
  char buf[40];
  for (std::size_t i = 0; i < ds.n(); ++i) {
    for (std::size_t j = 0; j < ds.p(); ++j) {
      std::snprintf(buf, sizeof buf, "%.17g", ds.at(i, j));
      out << buf << ',';
    }
    out << (ds.y[i] > 0 ? "1" : "-1") << '\n';
  }
}

StandardizeResult standardize(const Dataset& ds) {
  if (ds.standardized) return {ds, {}};
  const std::size_t n = ds.n();
  if (n < 2) throw std::runtime_error("standardize requires at least 2 instances");

  const std::size_t p = ds.p();
  std::vector<double> mean(p, 0.0), var(p, 0.0);
  for (std::size_t j = 0; j < p; ++j) {
    double m = 0.0;
    for (std::size_t i = 0; i < n; ++i) m += ds.at(i, j);
    m /= static_cast<double>(n);
    double v = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double c = ds.at(i, j) - m;
      v += c * c;
    }
    mean[j] = m;
    var[j] = v / static_cast<double>(n);  // population variance
  }

  StandardizeResult res;
  std::vector<std::size_t> keep;
  for (std::size_t j = 0; j < p; ++j) {
    if (var[j] <= 0.0) {
      res.dropped.push_back(ds.feature_names[j]);
      std::cerr << "warning: dropping constant column '" << ds.feature_names[j] << "'\n";
    } else {
      keep.push_back(j);
    }
  }
  if (keep.empty()) throw std::runtime_error("all columns are constant");

  Dataset out;
  out.y = ds.y;
  out.standardized = true;
  for (std::size_t j : keep) out.feature_names.push_back(ds.feature_names[j]);
  out.x.resize(n * keep.size());
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < keep.size(); ++k) {
      const std::size_t j = keep[k];
      out.x[i * keep.size() + k] = (ds.at(i, j) - mean[j]) / std::sqrt(var[j]);
    }
  }
  res.data = std::move(out);
  return res;
}

PairStructure build_pair_structure(const Dataset& ds) {
  if (!ds.standardized) throw std::runtime_error("pair structure requires standardized data");
  const std::size_t n = ds.n();
  const std::size_t p = ds.p();

  std::size_t n_pos = 0, n_neg = 0;
  for (double v : ds.y) (v > 0 ? n_pos : n_neg)++;
  if (n_pos == 0 || n_neg == 0) throw std::runtime_error("both classes must be present");

  PairStructure ps;
  ps.n = n;
  ps.p = p;
  ps.psi.resize(n);
  for (std::size_t i = 0; i < n; ++i)
    ps.psi[i] = ds.y[i] > 0 ? 1.0 / static_cast<double>(n_pos)
                            : -1.0 / static_cast<double>(n_neg);

  const std::size_t m = n * (n - 1) / 2;
  ps.pairs.reserve(m);
  ps.pair_sign.reserve(m);
  ps.dist.resize(m * p);
  std::size_t k = 0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t h = i + 1; h < n; ++h, ++k) {
      ps.pairs.emplace_back(i, h);
      const bool same = (ds.y[i] > 0) == (ds.y[h] > 0);
      ps.pair_sign.push_back(same ? std::int8_t{1} : std::int8_t{-1});
      (same ? ps.h_plus : ps.h_minus).push_back(k);
      for (std::size_t j = 0; j < p; ++j) {
        const double diff = ds.at(i, j) - ds.at(h, j);
        ps.dist[k * p + j] = diff * diff;
      }
    }
  }
  return ps;
}

}  // namespace kta
