#pragma once

// Coalgebra coextensions pi : C -> D given by a kill-set of generators:
// pi sends a normal word to itself unless it contains a killed letter.
// Provides the projection pair (pi, reduced pi), the two-differential
// auxiliary complex on tagged slots, cotensor membership tests, and the
// closed-form family for cosemisimple quotients.

#include <algorithm>
#include <set>

#include "cobalt/complexes.hpp"

namespace cobalt {

struct Coextension {
  const HopfPresentation* source = nullptr;
  std::set<int> kill;
  Word sigma;
  std::string label;
};

inline Coextension make_coextension(const HopfPresentation& p,
                                    const std::vector<std::string>& killed,
                                    const Word& sigma) {
  Coextension e;
  e.source = &p;
  e.sigma = canon_word(sigma);
  std::string lab = "kill:";
  for (size_t i = 0; i < killed.size(); ++i) {
    e.kill.insert(p.index_of(killed[i]));
    lab += (i ? "," : "") + killed[i];
  }
  e.label = lab;
  return e;
}

// pi on a normal word; nullopt when the word contains a killed letter.
inline std::optional<Word> project(const Coextension& e, const Word& w) {
  for (const auto& [g, ex] : w)
    if (e.kill.count(g)) return std::nullopt;
  return w;
}

// Reduced projection: also drops the unit.
inline std::optional<Word> project_reduced(const Coextension& e, const Word& w) {
  auto p = project(e, w);
  if (p && p->empty()) return std::nullopt;
  return p;
}

// Coproduct of the quotient coalgebra on a quotient word, both legs reduced.
inline Element2 quotient_coproduct(const Coextension& e, const Word& w) {
  Element2 out;
  for (const auto& [legs, c] : e.source->coproduct(w)) {
    auto p1 = project_reduced(e, legs.first);
    auto p2 = project_reduced(e, legs.second);
    if (!p1 || !p2) continue;
    add_term2(out, {*p1, *p2}, c);
  }
  return out;
}

// Tagged slots: a whole-coalgebra slot (units allowed) or a reduced
// quotient slot (no unit, no killed letters).
struct TaggedSlot {
  bool reduced = false;
  Word w;
  auto operator<=>(const TaggedSlot&) const = default;
};

using TaggedTensor = std::vector<TaggedSlot>;

struct TaggedChain {
  long degree = 0;
  std::map<TaggedTensor, QScalar> terms;
  bool is_zero() const { return terms.empty(); }
  bool operator==(const TaggedChain& o) const {
    return degree == o.degree && terms == o.terms;
  }
};

inline void add_tagged(TaggedChain& c, const TaggedTensor& t, const QScalar& s) {
  if (s.is_zero()) return;
  if (static_cast<long>(t.size()) != c.degree)
    throw std::logic_error("add_tagged: slot count does not match degree");
  auto it = c.terms.find(t);
  if (it == c.terms.end()) {
    c.terms.emplace(t, s);
  } else {
    it->second += s;
    if (it->second.is_zero()) c.terms.erase(it);
  }
}

inline TaggedChain tagged_zero(long n) { return TaggedChain{n, {}}; }

inline TaggedChain tagged_term(long n, const TaggedTensor& t, const QScalar& s = QScalar(1)) {
  TaggedChain c = tagged_zero(n);
  add_tagged(c, t, s);
  return c;
}

inline TaggedChain operator+(const TaggedChain& a, const TaggedChain& b) {
  if (a.degree != b.degree) throw std::logic_error("tagged sum: degree mismatch");
  TaggedChain c = a;
  for (const auto& [t, s] : b.terms) add_tagged(c, t, s);
  return c;
}

inline TaggedChain operator*(const QScalar& s, const TaggedChain& a) {
  TaggedChain c = tagged_zero(a.degree);
  if (s.is_zero()) return c;
  for (const auto& [t, v] : a.terms) c.terms.emplace(t, s * v);
  return c;
}

inline TaggedChain operator-(const TaggedChain& a, const TaggedChain& b) {
  return a + (QScalar(-1) * b);
}

// Column and row count: (whole slots, reduced slots).
inline std::pair<long, long> bidegree(const TaggedTensor& t) {
  long i = 0;
  for (const auto& s : t)
    if (!s.reduced) ++i;
  return {i, static_cast<long>(t.size()) - i};
}

// Vertical differential: raises the reduced count by one.  Slot t carries
// sign (-1)^(t+1); the appended reduced sigma slot carries (-1)^(n+1).
inline TaggedChain z_d0(const Coextension& e, const TaggedChain& c) {
  const HopfPresentation& p = *e.source;
  TaggedChain out = tagged_zero(c.degree + 1);
  for (const auto& [ch, s] : c.terms) {
    long n = static_cast<long>(ch.size());
    for (long t = 0; t < n; ++t) {
      QScalar sgn((t + 1) % 2 == 0 ? 1 : -1);
      auto splice = [&](const TaggedSlot& a, const TaggedSlot& b, const QScalar& v) {
        TaggedTensor nt(ch.begin(), ch.begin() + t);
        nt.push_back(a);
        nt.push_back(b);
        nt.insert(nt.end(), ch.begin() + t + 1, ch.end());
        add_tagged(out, nt, v);
      };
      const auto& slot = ch[static_cast<size_t>(t)];
      if (slot.reduced) {
        for (const auto& [legs, d] : quotient_coproduct(e, slot.w))
          splice({true, legs.first}, {true, legs.second}, s * d * sgn);
      } else {
        for (const auto& [legs, d] : p.coproduct(slot.w)) {
          if (auto p1 = project_reduced(e, legs.first))
            splice({true, *p1}, {false, legs.second}, s * d * sgn);
          if (auto p2 = project_reduced(e, legs.second))
            splice({false, legs.first}, {true, *p2}, s * d * sgn);
        }
      }
    }
    if (auto ps = project_reduced(e, e.sigma)) {
      TaggedTensor nt = ch;
      nt.push_back({true, *ps});
      add_tagged(out, nt, s * QScalar((n + 1) % 2 == 0 ? 1 : -1));
    }
  }
  return out;
}

// Horizontal differential: raises the whole count by one.  Front insertion
// of the unit has sign +1, slot t (whole slots only) has (-1)^(t+1), the
// appended whole sigma slot has (-1)^(n+1).
inline TaggedChain z_d1(const Coextension& e, const TaggedChain& c) {
  const HopfPresentation& p = *e.source;
  TaggedChain out = tagged_zero(c.degree + 1);
  for (const auto& [ch, s] : c.terms) {
    long n = static_cast<long>(ch.size());
    {
      TaggedTensor nt;
      nt.push_back({false, {}});
      nt.insert(nt.end(), ch.begin(), ch.end());
      add_tagged(out, nt, s);
    }
    for (long t = 0; t < n; ++t) {
      const auto& slot = ch[static_cast<size_t>(t)];
      if (slot.reduced) continue;
      QScalar sgn((t + 1) % 2 == 0 ? 1 : -1);
      for (const auto& [legs, d] : p.coproduct(slot.w)) {
        TaggedTensor nt(ch.begin(), ch.begin() + t);
        nt.push_back({false, legs.first});
        nt.push_back({false, legs.second});
        nt.insert(nt.end(), ch.begin() + t + 1, ch.end());
        add_tagged(out, nt, s * d * sgn);
      }
    }
    TaggedTensor nt = ch;
    nt.push_back({false, e.sigma});
    add_tagged(out, nt, s * QScalar((n + 1) % 2 == 0 ? 1 : -1));
  }
  return out;
}

inline TaggedChain z_b(const Coextension& e, const TaggedChain& c) {
  return z_d0(e, c) + z_d1(e, c);
}

inline std::vector<long> tagged_grade(const HopfPresentation& p, const TaggedTensor& t) {
  std::vector<long> g(p.grade_dim(), 0);
  for (const auto& s : t) {
    auto gw = p.grade(s.w);
    for (size_t k = 0; k < g.size(); ++k) g[k] += gw[k];
  }
  return g;
}

inline std::string tagged_str(const HopfPresentation& p, const TaggedChain& c) {
  if (c.terms.empty()) return "0";
  std::string s;
  for (const auto& [t, v] : c.terms) {
    if (!s.empty()) s += " + ";
    std::string cs = v.str();
    if (cs.find(' ') != std::string::npos) cs = "(" + cs + ")";
    s += cs;
    if (t.empty()) continue;
    for (size_t i = 0; i < t.size(); ++i) {
      std::string wd = p.word_str(t[i].w);
      if (t[i].reduced) wd = "[" + wd + "]";
      s += (i == 0 ? " · " : " ⊗ ") + wd;
    }
  }
  return s;
}

// Basis of the tagged slice with a fixed reduced/whole pattern: whole
// slots range over the capped basis, reduced slots over its nonunit
// projectable part; optional total-grade filter.
inline std::vector<TaggedTensor> tagged_basis(const Coextension& e,
                                              const std::vector<bool>& reduced_pattern,
                                              const std::map<std::string, long>& caps,
                                              const std::optional<std::vector<long>>& grade) {
  const HopfPresentation& p = *e.source;
  auto all = p.graded_basis(caps, std::nullopt);
  std::vector<Word> whole = all, reduced;
  for (const auto& w : all)
    if (!w.empty() && project(e, w)) reduced.push_back(w);

  std::vector<TaggedTensor> out;
  TaggedTensor cur(reduced_pattern.size());
  std::vector<long> acc(p.grade_dim(), 0);
  auto rec = [&](auto&& self, size_t slot) -> void {
    if (slot == reduced_pattern.size()) {
      if (!grade || acc == *grade) out.push_back(cur);
      return;
    }
    const auto& pool = reduced_pattern[slot] ? reduced : whole;
    for (const auto& w : pool) {
      cur[slot] = {reduced_pattern[slot], w};
      auto gw = p.grade(w);
      for (size_t d = 0; d < acc.size(); ++d) acc[d] += gw[d];
      self(self, slot + 1);
      for (size_t d = 0; d < acc.size(); ++d) acc[d] -= gw[d];
    }
  };
  rec(rec, 0);
  return out;
}

// Cotensor membership of an untagged chain: adjacent slots must agree
// through the quotient and the last slot must coact along sigma.
struct Membership {
  bool member = false;
  std::string residual;  // first nonzero defect, printable
};

inline Membership membership_check(const Coextension& e, const ChainElement& c) {
  const HopfPresentation& p = *e.source;
  auto proj2_right = [&](const Word& w) {
    Element2 out;
    for (const auto& [legs, v] : p.coproduct(w))
      if (auto pr = project(e, legs.second)) add_term2(out, {legs.first, *pr}, v);
    return out;
  };
  auto proj2_left = [&](const Word& w) {
    Element2 out;
    for (const auto& [legs, v] : p.coproduct(w))
      if (auto pl = project(e, legs.first)) add_term2(out, {*pl, legs.second}, v);
    return out;
  };

  Membership r;
  long n = c.degree;
  if (n == 0) {
    r.member = true;
    return r;
  }
  for (long k = 0; k + 1 < n; ++k) {
    ChainElement lhs = split_slot(c, k, proj2_right);
    ChainElement rhs = split_slot(c, k + 1, proj2_left);
    ChainElement defect = lhs - rhs;
    if (!defect.is_zero()) {
      r.residual = chain_str(p, defect);
      return r;
    }
  }
  auto ps = project(e, e.sigma);
  ChainElement edge_lhs = split_slot(c, n - 1, proj2_right);
  ChainElement edge_rhs = chain_zero(n + 1);
  if (ps)
    for (const auto& [t, s] : c.terms) {
      Tensor nt = t;
      nt.push_back(*ps);
      add_chain(edge_rhs, nt, s);
    }
  ChainElement defect = edge_lhs - edge_rhs;
  if (!defect.is_zero()) {
    r.residual = chain_str(p, defect);
    return r;
  }
  r.member = true;
  return r;
}

// The cotensor subspace inside an explicit windowed slice, as row vectors
// over the given basis.  Exact: the conditions are evaluated in the full
// span of their images, so no closure assumption is needed.
inline std::vector<QRow> cotensor_kernel(const Coextension& e,
                                         const std::vector<Tensor>& basis) {
  if (basis.empty()) return {};
  const HopfPresentation& p = *e.source;
  long n = basis.front().empty() ? 0 : static_cast<long>(basis.front().size());
  if (n == 0) return {QRow(basis.size(), QScalar(1))};

  // Stack the defect chains of every condition for each basis vector.
  std::vector<ChainElement> defects;
  defects.reserve(basis.size());
  std::map<std::pair<long, Tensor>, size_t> col;
  auto proj2_right = [&](const Word& w) {
    Element2 out;
    for (const auto& [legs, v] : p.coproduct(w))
      if (auto pr = project(e, legs.second)) add_term2(out, {legs.first, *pr}, v);
    return out;
  };
  auto proj2_left = [&](const Word& w) {
    Element2 out;
    for (const auto& [legs, v] : p.coproduct(w))
      if (auto pl = project(e, legs.first)) add_term2(out, {*pl, legs.second}, v);
    return out;
  };
  auto ps = project(e, e.sigma);

  std::vector<std::vector<std::pair<size_t, QScalar>>> rows(basis.size());
  for (size_t b = 0; b < basis.size(); ++b) {
    ChainElement x = chain_term(n, basis[b]);
    for (long k = 0; k + 1 < n; ++k) {
      ChainElement d = split_slot(x, k, proj2_right) - split_slot(x, k + 1, proj2_left);
      for (const auto& [t, s] : d.terms) {
        auto key = std::make_pair(k, t);
        auto [it, fresh] = col.emplace(key, col.size());
        rows[b].push_back({it->second, s});
      }
    }
    ChainElement edge = split_slot(x, n - 1, proj2_right);
    if (ps) {
      Tensor nt = basis[b];
      nt.push_back(*ps);
      ChainElement rhs = chain_term(n + 1, nt);
      edge = edge - rhs;
    }
    for (const auto& [t, s] : edge.terms) {
      auto key = std::make_pair(n, t);
      auto [it, fresh] = col.emplace(key, col.size());
      rows[b].push_back({it->second, s});
    }
  }
  QMatrix m(basis.size(), QRow(col.size(), QScalar(0)));
  for (size_t b = 0; b < basis.size(); ++b)
    for (const auto& [j, s] : rows[b]) m[b][j] += s;
  return left_kernel(m);
}

// Closed-form cotensor family over a cosemisimple quotient: one chain per
// arrangement of the given letters, each slot twisted so that adjacent
// slots agree and the right edge lands on sigma.  Every member is
// certified by membership_check.
struct CotorFamily {
  long degree = 0;
  std::vector<long> weight;
  long dim = 0;
  std::vector<Tensor> basis;
  bool certified = false;
};

inline CotorFamily cosemisimple_cotor(const Coextension& e,
                                      const std::vector<std::string>& letters,
                                      const std::vector<long>& mult, long degree) {
  const HopfPresentation& p = *e.source;
  CotorFamily fam;
  fam.degree = degree;
  fam.weight.assign(p.grade_dim(), 0);
  long total = 0;
  for (size_t i = 0; i < letters.size(); ++i) {
    auto g = p.grade(p.letter(letters[i]));
    for (size_t d = 0; d < fam.weight.size(); ++d)
      fam.weight[d] += mult[i] * g[d];
    total += mult[i];
  }
  if (total != degree) {
    fam.dim = 0;
    fam.certified = true;
    return fam;
  }

  // All distinct arrangements of the letter multiset.
  std::vector<size_t> arrangement;
  for (size_t i = 0; i < letters.size(); ++i)
    arrangement.insert(arrangement.end(), static_cast<size_t>(mult[i]), i);
  std::sort(arrangement.begin(), arrangement.end());

  // The coproduct of a fiber letter must have the shape g (x) T_g + 1 (x) g
  // with T_g a projectable group-like twist; read T_g off the coproduct.
  auto twist_of = [&](size_t li) -> Word {
    Word lw = p.letter(letters[li]);
    for (const auto& [legs, v] : p.coproduct(lw))
      if (legs.first == canon_word(lw)) return legs.second;
    throw std::logic_error("cosemisimple_cotor: no diagonal twist for " + letters[li]);
  };

  do {
    long n = degree;
    std::vector<Word> twists(static_cast<size_t>(n));
    Word acc = e.sigma;  // T_k = sigma * prod_{j >= k} T_{g_j}^{-1}
    for (long k = n - 1; k >= 0; --k) {
      Word tw = twist_of(arrangement[static_cast<size_t>(k)]);
      Word inv;
      for (auto it = tw.rbegin(); it != tw.rend(); ++it)
        inv.push_back({it->first, -it->second});
      Word joined = acc;
      joined.insert(joined.end(), inv.begin(), inv.end());
      Element red = p.reduce(joined);
      if (red.size() != 1 || !(red.begin()->second == QScalar(1)))
        throw std::logic_error("cosemisimple_cotor: twist is not a plain monomial");
      acc = red.begin()->first;
      twists[static_cast<size_t>(k)] = acc;
    }
    Tensor chain(static_cast<size_t>(n));
    for (long k = 0; k < n; ++k) {
      Word w = twists[static_cast<size_t>(k)];
      Word lw = p.letter(letters[arrangement[static_cast<size_t>(k)]]);
      w.insert(w.end(), lw.begin(), lw.end());
      Element red = p.reduce(w);
      if (red.size() != 1)
        throw std::logic_error("cosemisimple_cotor: twisted slot is not a monomial");
      chain[static_cast<size_t>(k)] = red.begin()->first;
    }
    fam.basis.push_back(chain);
  } while (std::next_permutation(arrangement.begin(), arrangement.end()));

  fam.dim = static_cast<long>(fam.basis.size());
  fam.certified = true;
  for (const auto& t : fam.basis) {
    ChainElement c = chain_term(degree, t);
    if (!membership_check(e, c).member) fam.certified = false;
  }
  return fam;
}

}  // namespace cobalt
