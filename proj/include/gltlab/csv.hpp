#pragma once

#include <charconv>
#include <fstream>
#include <sstream>
#include <string>

#include "gltlab/spectral.hpp"

namespace gltlab {

// Shortest round-trip decimal representation (std::to_chars on doubles).
inline std::string format_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

// Dense matrix CSV: one text row per matrix row, entries as re,im pairs.
inline void write_matrix_csv(const Matrix& M, std::ostream& os) {
  for (int i = 0; i < M.rows(); ++i) {
    for (int j = 0; j < M.cols(); ++j) {
      if (j) os << ',';
      os << format_double(M(i, j).real()) << ',' << format_double(M(i, j).imag());
    }
    os << '\n';
  }
}

inline void write_matrix_csv(const Matrix& M, const std::string& path) {
  std::ofstream os(path);
  if (!os) throw Error("cannot open for writing: " + path);
  write_matrix_csv(M, os);
}

inline std::vector<double> parse_csv_line(const std::string& line) {
  std::vector<double> out;
  size_t pos = 0;
  while (pos <= line.size()) {
    size_t comma = line.find(',', pos);
    if (comma == std::string::npos) comma = line.size();
    const std::string field = line.substr(pos, comma - pos);
    if (!field.empty()) {
      double v = 0.0;
      auto res = std::from_chars(field.data(), field.data() + field.size(), v);
      if (res.ec != std::errc()) throw Error("bad CSV field: '" + field + "'");
      out.push_back(v);
    }
    if (comma == line.size()) break;
    pos = comma + 1;
  }
  return out;
}

inline Matrix read_matrix_csv(std::istream& is) {
  std::vector<std::vector<double>> rows;
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty() || line[0] == '#') continue;
    rows.push_back(parse_csv_line(line));
  }
  if (rows.empty()) throw Error("matrix CSV: no data");
  const size_t fields = rows.front().size();
  if (fields % 2 != 0) throw Error("matrix CSV: expected re,im pairs");
  for (const auto& r : rows)
    if (r.size() != fields) throw Error("matrix CSV: ragged rows");
  Matrix M(int(rows.size()), int(fields / 2));
  for (int i = 0; i < M.rows(); ++i)
    for (int j = 0; j < M.cols(); ++j)
      M(i, j) = cdouble(rows[i][2 * j], rows[i][2 * j + 1]);
  return M;
}

inline Matrix read_matrix_csv(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw Error("cannot open for reading: " + path);
  return read_matrix_csv(is);
}

// GridSymbol CSV: header x...,theta...,block_row,block_col,re,im and one line
// per block entry.
inline void write_grid_symbol_csv(const GridSymbol& g, std::ostream& os) {
  for (int i = 0; i < g.d; ++i) os << (g.d == 1 ? std::string("x") : "x" + std::to_string(i + 1)) << ',';
  for (int i = 0; i < g.d; ++i)
    os << (g.d == 1 ? std::string("theta") : "theta" + std::to_string(i + 1)) << ',';
  os << "block_row,block_col,re,im\n";
  std::vector<double> x, th;
  for (long node = 0; node < g.node_count(); ++node) {
    detail::decode_node(node, g, x, th);
    for (int a = 0; a < g.r; ++a)
      for (int b = 0; b < g.r; ++b) {
        for (double v : x) os << format_double(v) << ',';
        for (double v : th) os << format_double(v) << ',';
        os << a << ',' << b << ',' << format_double(g.values[node](a, b).real()) << ','
           << format_double(g.values[node](a, b).imag()) << '\n';
      }
  }
}

inline void write_grid_symbol_csv(const GridSymbol& g, const std::string& path) {
  std::ofstream os(path);
  if (!os) throw Error("cannot open for writing: " + path);
  write_grid_symbol_csv(g, os);
}

// Reads back a GridSymbol CSV written by write_grid_symbol_csv. Grid geometry
// is reconstructed from the distinct coordinates per column.
inline GridSymbol read_grid_symbol_csv(std::istream& is) {
  std::string header;
  if (!std::getline(is, header)) throw Error("grid symbol CSV: empty");
  int d = 0;
  {
    std::stringstream ss(header);
    std::string col;
    while (std::getline(ss, col, ','))
      if (col.rfind("x", 0) == 0) ++d;
  }
  if (d < 1) throw Error("grid symbol CSV: no x columns in header");

  struct Entry {
    std::vector<double> coord;
    int a, b;
    cdouble v;
  };
  std::vector<Entry> entries;
  int r = 1;
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    auto f = parse_csv_line(line);
    if (int(f.size()) != 2 * d + 4) throw Error("grid symbol CSV: bad field count");
    Entry e;
    e.coord.assign(f.begin(), f.begin() + 2 * d);
    e.a = int(f[2 * d]);
    e.b = int(f[2 * d + 1]);
    e.v = cdouble(f[2 * d + 2], f[2 * d + 3]);
    r = std::max(r, std::max(e.a, e.b) + 1);
    entries.push_back(std::move(e));
  }

  GridSymbol g;
  g.d = d;
  g.r = r;
  // distinct coordinate values per dimension, in first-seen (lexicographic) order
  std::vector<std::vector<double>> levels(2 * d);
  for (const auto& e : entries)
    for (int i = 0; i < 2 * d; ++i) {
      auto& lv = levels[i];
      bool found = false;
      for (double v : lv)
        if (v == e.coord[i]) found = true;
      if (!found) lv.push_back(e.coord[i]);
    }
  g.m_x.resize(d);
  g.m_theta.resize(d);
  for (int i = 0; i < d; ++i) g.m_x[i] = int(levels[i].size());
  for (int i = 0; i < d; ++i) g.m_theta[i] = int(levels[d + i].size());
  g.values.assign(g.node_count(), Matrix(r, r));
  for (const auto& e : entries) {
    long node = 0;
    for (int i = 0; i < 2 * d; ++i) {
      const auto& lv = levels[i];
      long pos = std::find(lv.begin(), lv.end(), e.coord[i]) - lv.begin();
      node = node * long(lv.size()) + pos;
    }
    g.values[node](e.a, e.b) = e.v;
  }
  return g;
}

inline GridSymbol read_grid_symbol_csv(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw Error("cannot open for reading: " + path);
  return read_grid_symbol_csv(is);
}

// Report summary CSV: n,lambda_min,lambda_max,sup_dist,l1_dist,frac_below
inline void write_report_summary_header(std::ostream& os) {
  os << "n,lambda_min,lambda_max,sup_dist,l1_dist,frac_below\n";
}

inline void write_report_summary_row(const SpectralReport& rep, std::ostream& os) {
  os << rep.n << ',' << format_double(rep.lambda_min) << ',' << format_double(rep.lambda_max)
     << ',' << format_double(rep.sup_distance) << ',' << format_double(rep.l1_distance) << ','
     << format_double(rep.below_threshold_fraction) << '\n';
}

// Two-column overlay (eigenvalue, matching symbol quantile) for plotting.
inline void write_overlay_csv(const SpectralReport& rep, std::ostream& os) {
  os << "eigenvalue,quantile\n";
  for (size_t i = 0; i < rep.sorted_eigenvalues.size(); ++i)
    os << format_double(rep.sorted_eigenvalues[i]) << ','
       << format_double(rep.symbol_quantiles[i]) << '\n';
}

inline void write_decay_csv(const DecayTable& t, std::ostream& os) {
  os << "n,lambda,tau,alpha,flagged\n";
  for (const auto& row : t.rows) {
    os << row.n << ',' << format_double(row.lambda) << ',' << format_double(row.tau) << ',';
    if (std::isnan(row.alpha))
      os << "";
    else
      os << format_double(row.alpha);
    os << ',' << (row.flagged ? 1 : 0) << '\n';
  }
}

}  // namespace gltlab
