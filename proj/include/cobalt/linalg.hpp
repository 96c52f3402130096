#pragma once

#include <algorithm>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "cobalt/scalars.hpp"

namespace cobalt {

using QRow = std::vector<QScalar>;
using QMatrix = std::vector<QRow>;

// Thrown when a symbolic rank disagrees with its rational specializations.
// This is a consistency failure of the computation itself, never caught
// and "handled": a build that trips it is wrong and must stop.
struct RankMismatch : std::runtime_error {
  explicit RankMismatch(const std::string& m) : std::runtime_error(m) {}
};

namespace detail {

using LRow = std::vector<Laurent>;

inline void strip_content(LRow& row);

// Scale a row of field elements to a primitive Laurent row: clear
// denominators, then strip the common content. Row-space preserved.
inline LRow primitive_row(const QRow& row) {
  Laurent l(1);
  for (const auto& e : row) {
    if (e.is_zero()) continue;
    Laurent g = Laurent::gcd(l, e.den());
    l = Laurent::divexact(l * e.den(), g);
  }
  LRow out(row.size());
  for (size_t j = 0; j < row.size(); ++j) {
    if (row[j].is_zero()) continue;
    out[j] = row[j].num() * Laurent::divexact(l, row[j].den());
  }
  strip_content(out);
  return out;
}

inline void strip_content(LRow& row) {
  Laurent g(0);
  long lo = 0;
  bool any = false;
  for (const auto& e : row) {
    if (e.is_zero()) continue;
    g = g.is_zero() ? e.unit_normal() : Laurent::gcd(g, e);
    lo = any ? std::min(lo, e.lo()) : e.lo();
    any = true;
  }
  if (!any) return;
  for (auto& e : row) {
    if (e.is_zero()) continue;
    e = Laurent::divexact(e, g);
  }
  // Re-anchor exponents so the smallest one present is 0.
  long m = 0;
  bool first = true;
  for (const auto& e : row) {
    if (e.is_zero()) continue;
    m = first ? e.lo() : std::min(m, e.lo());
    first = false;
  }
  if (m != 0)
    for (auto& e : row)
      if (!e.is_zero()) e = e.shifted(-m);
}

inline size_t laurent_rank(std::vector<LRow> rows) {
  size_t rank = 0;
  size_t cols = rows.empty() ? 0 : rows[0].size();
  for (size_t col = 0; col < cols && rank < rows.size(); ++col) {
    size_t piv = rank;
    while (piv < rows.size() && rows[piv][col].is_zero()) ++piv;
    if (piv == rows.size()) continue;
    std::swap(rows[rank], rows[piv]);
    const LRow pivot = rows[rank];
    for (size_t i = rank + 1; i < rows.size(); ++i) {
      if (rows[i][col].is_zero()) continue;
      Laurent a = pivot[col], b = rows[i][col];
      for (size_t j = col; j < cols; ++j) rows[i][j] = a * rows[i][j] - b * pivot[j];
      strip_content(rows[i]);
    }
    ++rank;
  }
  return rank;
}

inline size_t rational_rank(const std::vector<LRow>& m, const mpq_class& q0) {
  std::vector<std::vector<mpq_class>> rows;
  rows.reserve(m.size());
  for (const auto& r : m) {
    std::vector<mpq_class> row;
    row.reserve(r.size());
    for (const auto& e : r) row.push_back(e.eval(q0));
    rows.push_back(std::move(row));
  }
  size_t rank = 0;
  size_t cols = rows.empty() ? 0 : rows[0].size();
  for (size_t col = 0; col < cols && rank < rows.size(); ++col) {
    size_t piv = rank;
    while (piv < rows.size() && rows[piv][col] == 0) ++piv;
    if (piv == rows.size()) continue;
    std::swap(rows[rank], rows[piv]);
    for (size_t i = rank + 1; i < rows.size(); ++i) {
      if (rows[i][col] == 0) continue;
      mpq_class f = rows[i][col] / rows[rank][col];
      for (size_t j = col; j < cols; ++j) rows[i][j] -= f * rows[rank][j];
    }
    ++rank;
  }
  return rank;
}

inline std::vector<LRow> to_laurent(const QMatrix& m) {
  std::vector<LRow> rows;
  rows.reserve(m.size());
  for (const auto& r : m) rows.push_back(primitive_row(r));
  return rows;
}

}  // namespace detail

// Rank of the row space, computed symbolically over Q(q) and cross-checked
// against exact rational elimination at q = 2 and q = 3.
inline size_t checked_rank(const QMatrix& m, const std::string& label = "") {
  if (m.empty()) return 0;
  auto rows = detail::to_laurent(m);
  size_t sym = detail::laurent_rank(rows);
  for (long q0 : {2L, 3L}) {
    size_t spec = detail::rational_rank(rows, mpq_class(q0));
    if (spec != sym)
      throw RankMismatch("rank mismatch" + (label.empty() ? "" : " in " + label) +
                         ": symbolic " + std::to_string(sym) + " vs q=" +
                         std::to_string(q0) + " rank " + std::to_string(spec));
  }
  return sym;
}

// Row-reduced echelon form over the field, with per-pivot-column bookkeeping.
struct Echelon {
  QMatrix rows;              // nonzero rows, leading entry 1
  std::vector<size_t> lead;  // pivot column of each row
};

inline Echelon echelonize(QMatrix m) {
  Echelon e;
  size_t cols = m.empty() ? 0 : m[0].size();
  size_t rank = 0;
  for (size_t col = 0; col < cols && rank < m.size(); ++col) {
    size_t piv = rank;
    while (piv < m.size() && m[piv][col].is_zero()) ++piv;
    if (piv == m.size()) continue;
    std::swap(m[rank], m[piv]);
    QScalar inv = m[rank][col].inv();
    for (size_t j = col; j < cols; ++j)
      if (!m[rank][j].is_zero()) m[rank][j] *= inv;
    for (size_t i = 0; i < m.size(); ++i) {
      if (i == rank || m[i][col].is_zero()) continue;
      QScalar f = m[i][col];
      for (size_t j = col; j < cols; ++j)
        if (!m[rank][j].is_zero()) m[i][j] -= f * m[rank][j];
    }
    e.lead.push_back(col);
    ++rank;
  }
  m.resize(rank);
  e.rows = std::move(m);
  return e;
}

// Reduce v against an echelon basis; the residue is zero iff v lies in the
// row space.
inline QRow reduce_mod(QRow v, const Echelon& e) {
  for (size_t i = 0; i < e.rows.size(); ++i) {
    const QScalar& c = v[e.lead[i]];
    if (c.is_zero()) continue;
    QScalar f = c;
    for (size_t j = 0; j < v.size(); ++j)
      if (!e.rows[i][j].is_zero()) v[j] -= f * e.rows[i][j];
  }
  return v;
}

inline bool is_zero_row(const QRow& v) {
  return std::all_of(v.begin(), v.end(), [](const QScalar& x) { return x.is_zero(); });
}

inline bool in_rowspace(const QRow& v, const Echelon& e) {
  return is_zero_row(reduce_mod(v, e));
}

// Basis of { c : sum_i c_i * row_i = 0 }, the left kernel of m.
// Row-reduces m while carrying the transformation matrix alongside.
inline QMatrix left_kernel(const QMatrix& m) {
  size_t n = m.size();
  size_t cols = m.empty() ? 0 : m[0].size();
  QMatrix work = m;
  QMatrix trans(n, QRow(n, QScalar(0)));
  for (size_t i = 0; i < n; ++i) trans[i][i] = QScalar(1);
  size_t rank = 0;
  for (size_t col = 0; col < cols && rank < n; ++col) {
    size_t piv = rank;
    while (piv < n && work[piv][col].is_zero()) ++piv;
    if (piv == n) continue;
    std::swap(work[rank], work[piv]);
    std::swap(trans[rank], trans[piv]);
    for (size_t i = rank + 1; i < n; ++i) {
      if (work[i][col].is_zero()) continue;
      QScalar f = work[i][col] / work[rank][col];
      for (size_t j = col; j < cols; ++j)
        if (!work[rank][j].is_zero()) work[i][j] -= f * work[rank][j];
      for (size_t j = 0; j < n; ++j)
        if (!trans[rank][j].is_zero()) trans[i][j] -= f * trans[rank][j];
    }
    ++rank;
  }
  QMatrix kernel;
  for (size_t i = rank; i < n; ++i) kernel.push_back(trans[i]);
  return kernel;
}

// Coefficients c with c * m = v, if v lies in the row space of m.  Found
// by stacking v under m and looking for a kernel vector that uses it.
inline std::optional<QRow> solve_in_rowspace(const QMatrix& m, const QRow& v) {
  if (is_zero_row(v)) return QRow(m.size(), QScalar(0));
  if (m.empty()) return std::nullopt;
  QMatrix stacked = m;
  stacked.push_back(v);
  for (const auto& k : left_kernel(stacked)) {
    if (k.back().is_zero()) continue;
    QScalar scale = -k.back().inv();
    QRow c(m.size(), QScalar(0));
    for (size_t i = 0; i < m.size(); ++i)
      if (!k[i].is_zero()) c[i] = scale * k[i];
    return c;
  }
  return std::nullopt;
}

// dim(rowspace(a) `intersect` rowspace(b)) via rank arithmetic.
inline size_t intersection_dim(const QMatrix& a, const QMatrix& b, const std::string& label = "") {
  if (a.empty() || b.empty()) return 0;
  QMatrix stacked = a;
  stacked.insert(stacked.end(), b.begin(), b.end());
  size_t ra = checked_rank(a, label.empty() ? label : label + ".a");
  size_t rb = checked_rank(b, label.empty() ? label : label + ".b");
  size_t rs = checked_rank(stacked, label.empty() ? label : label + ".stack");
  return ra + rb - rs;
}

}  // namespace cobalt
