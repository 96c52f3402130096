#pragma once

// Tensor-power chain spaces over a presented Hopf algebra.  A chain of
// degree n is a finite linear combination of pure tensors with n slots,
// each slot a normal-form monomial word.  Degree 0 is the scalar line,
// keyed by the empty tuple.

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "cobalt/linalg.hpp"
#include "cobalt/presentation.hpp"

namespace cobalt {

using Tensor = std::vector<Word>;

struct ChainElement {
  long degree = 0;
  std::map<Tensor, QScalar> terms;

  bool is_zero() const { return terms.empty(); }
  bool operator==(const ChainElement& o) const {
    return degree == o.degree && terms == o.terms;
  }
};

inline ChainElement chain_zero(long n) { return ChainElement{n, {}}; }

inline void add_chain(ChainElement& c, const Tensor& t, const QScalar& s) {
  if (s.is_zero()) return;
  if (static_cast<long>(t.size()) != c.degree)
    throw std::logic_error("add_chain: slot count does not match degree");
  auto it = c.terms.find(t);
  if (it == c.terms.end()) {
    c.terms.emplace(t, s);
  } else {
    it->second += s;
    if (it->second.is_zero()) c.terms.erase(it);
  }
}

inline ChainElement chain_term(long n, const Tensor& t, const QScalar& s = QScalar(1)) {
  ChainElement c = chain_zero(n);
  add_chain(c, t, s);
  return c;
}

inline ChainElement operator+(const ChainElement& a, const ChainElement& b) {
  if (a.degree != b.degree) throw std::logic_error("chain sum: degree mismatch");
  ChainElement c = a;
  for (const auto& [t, s] : b.terms) add_chain(c, t, s);
  return c;
}

inline ChainElement operator*(const QScalar& s, const ChainElement& a) {
  ChainElement c = chain_zero(a.degree);
  if (s.is_zero()) return c;
  for (const auto& [t, v] : a.terms) c.terms.emplace(t, s * v);
  return c;
}

inline ChainElement operator-(const ChainElement& a, const ChainElement& b) {
  return a + (QScalar(-1) * b);
}

// Replace slot i through a word -> Element map, distributing over terms.
template <class F>
ChainElement map_slot(const ChainElement& c, long i, F f) {
  ChainElement out = chain_zero(c.degree);
  for (const auto& [t, s] : c.terms) {
    Element img = f(t[static_cast<size_t>(i)]);
    for (const auto& [w, v] : img) {
      Tensor nt = t;
      nt[static_cast<size_t>(i)] = w;
      add_chain(out, nt, s * v);
    }
  }
  return out;
}

// Replace slot i by the two legs of a word -> Element2 map; degree rises.
template <class F>
ChainElement split_slot(const ChainElement& c, long i, F f) {
  ChainElement out = chain_zero(c.degree + 1);
  for (const auto& [t, s] : c.terms) {
    Element2 img = f(t[static_cast<size_t>(i)]);
    for (const auto& [legs, v] : img) {
      Tensor nt;
      nt.reserve(t.size() + 1);
      nt.insert(nt.end(), t.begin(), t.begin() + i);
      nt.push_back(legs.first);
      nt.push_back(legs.second);
      nt.insert(nt.end(), t.begin() + i + 1, t.end());
      add_chain(out, nt, s * v);
    }
  }
  return out;
}

// Remove slot i through a word -> QScalar map; degree drops.
template <class F>
ChainElement contract_slot(const ChainElement& c, long i, F f) {
  ChainElement out = chain_zero(c.degree - 1);
  for (const auto& [t, s] : c.terms) {
    QScalar v = f(t[static_cast<size_t>(i)]);
    if (v.is_zero()) continue;
    Tensor nt;
    nt.reserve(t.size() - 1);
    nt.insert(nt.end(), t.begin(), t.begin() + i);
    nt.insert(nt.end(), t.begin() + i + 1, t.end());
    add_chain(out, nt, s * v);
  }
  return out;
}

// Insert a fixed normal-form word as a new slot at position i.
inline ChainElement insert_slot(const ChainElement& c, long i, const Word& w) {
  ChainElement out = chain_zero(c.degree + 1);
  for (const auto& [t, s] : c.terms) {
    Tensor nt;
    nt.reserve(t.size() + 1);
    nt.insert(nt.end(), t.begin(), t.begin() + i);
    nt.push_back(canon_word(w));
    nt.insert(nt.end(), t.begin() + i, t.end());
    add_chain(out, nt, s);
  }
  return out;
}

// Total grading of a tensor, slotwise sum.
inline std::vector<long> tensor_grade(const HopfPresentation& p, const Tensor& t) {
  std::vector<long> g(p.grade_dim(), 0);
  for (const auto& w : t) {
    auto gw = p.grade(w);
    for (size_t k = 0; k < g.size(); ++k) g[k] += gw[k];
  }
  return g;
}

// A finite slice of a chain space: exponent caps per generator, an optional
// total-grade filter, and optionally only tensors with no unit slot.
struct Window {
  long degree = 0;
  std::map<std::string, long> caps;
  std::optional<std::vector<long>> grade;
  bool normalized = false;
};

inline std::vector<Tensor> window_basis(const HopfPresentation& p, const Window& win) {
  std::vector<Tensor> out;
  if (win.degree == 0) {
    bool keep = !win.grade ||
                *win.grade == std::vector<long>(p.grade_dim(), 0);
    if (keep) out.push_back({});
    return out;
  }
  auto slot_words = p.graded_basis(win.caps, std::nullopt);
  if (win.normalized) {
    std::vector<Word> nw;
    for (auto& w : slot_words)
      if (!w.empty()) nw.push_back(w);
    slot_words = nw;
  }
  std::vector<std::vector<long>> slot_grades;
  slot_grades.reserve(slot_words.size());
  for (const auto& w : slot_words) slot_grades.push_back(p.grade(w));

  Tensor cur(static_cast<size_t>(win.degree));
  std::vector<long> acc(p.grade_dim(), 0);
  auto rec = [&](auto&& self, long slot) -> void {
    if (slot == win.degree) {
      if (!win.grade || acc == *win.grade) out.push_back(cur);
      return;
    }
    for (size_t k = 0; k < slot_words.size(); ++k) {
      cur[static_cast<size_t>(slot)] = slot_words[k];
      for (size_t d = 0; d < acc.size(); ++d) acc[d] += slot_grades[k][d];
      self(self, slot + 1);
      for (size_t d = 0; d < acc.size(); ++d) acc[d] -= slot_grades[k][d];
    }
  };
  rec(rec, 0);
  return out;
}

// Coordinates of a chain against an explicit basis; terms outside the
// basis are returned as the residue rather than dropped.
struct Coordinates {
  QRow coeffs;
  ChainElement residue;
  bool inside() const { return residue.is_zero(); }
};

inline Coordinates coordinates(const ChainElement& c, const std::vector<Tensor>& basis) {
  Coordinates r;
  r.coeffs.assign(basis.size(), QScalar(0));
  r.residue = chain_zero(c.degree);
  std::map<Tensor, size_t> index;
  for (size_t i = 0; i < basis.size(); ++i) index.emplace(basis[i], i);
  for (const auto& [t, s] : c.terms) {
    auto it = index.find(t);
    if (it == index.end())
      add_chain(r.residue, t, s);
    else
      r.coeffs[it->second] = s;
  }
  return r;
}

inline std::string chain_str(const HopfPresentation& p, const ChainElement& c) {
  if (c.terms.empty()) return "0";
  std::string s;
  for (const auto& [t, v] : c.terms) {
    if (!s.empty()) s += " + ";
    std::string cs = v.str();
    if (cs.find(' ') != std::string::npos) cs = "(" + cs + ")";
    s += cs;
    for (size_t i = 0; i < t.size(); ++i)
      s += (i == 0 ? " · " : " ⊗ ") + p.word_str(t[i]);
  }
  return s;
}

}  // namespace cobalt
