#pragma once

// Cocyclic structure on the tensor powers of a presented Hopf algebra,
// with one-dimensional coefficients given by a character delta and a
// group-like monomial sigma.  Faces insert the unit in front, split a
// slot with the coproduct, or append sigma; degeneracies apply the
// counit; the cyclic operator rotates through the twisted antipode leg.

#include <vector>

#include "cobalt/presets.hpp"
#include "cobalt/tensorspace.hpp"

namespace cobalt {

class CyclicOps {
 public:
  CyclicOps(const HopfPresentation& p, MPI m) : p_(p), m_(std::move(m)) {
    m_.sigma = canon_word(m_.sigma);
  }

  const HopfPresentation& presentation() const { return p_; }
  const MPI& coefficients() const { return m_; }

  // d_i : C^n -> C^{n+1}, 0 <= i <= n+1.
  ChainElement face(long i, const ChainElement& c) const {
    long n = c.degree;
    if (i < 0 || i > n + 1) throw std::logic_error("face index out of range");
    if (i == 0) return insert_slot(c, 0, {});
    if (i == n + 1) {
      ChainElement out = chain_zero(n + 1);
      for (const auto& [t, s] : c.terms) {
        Tensor nt = t;
        nt.push_back(m_.sigma);
        add_chain(out, nt, s);
      }
      return out;
    }
    return split_slot(c, i - 1, [&](const Word& w) { return p_.coproduct(w); });
  }

  // s_j : C^n -> C^{n-1}, 0 <= j <= n-1.
  ChainElement degeneracy(long j, const ChainElement& c) const {
    if (j < 0 || j >= c.degree) throw std::logic_error("degeneracy index out of range");
    return contract_slot(c, j, [&](const Word& w) { return p_.counit(p_.monomial(w)); });
  }

  ChainElement hochschild_b(const ChainElement& c) const {
    ChainElement out = chain_zero(c.degree + 1);
    for (long i = 0; i <= c.degree + 1; ++i) {
      QScalar sgn(i % 2 == 0 ? 1 : -1);
      out = out + (sgn * face(i, c));
    }
    return out;
  }

  // The cyclic rotation: the first slot is consumed, its delta-weighted
  // antipode leg is split across the remaining slots (with sigma appended)
  // and multiplies them from the left.  Identity in degree zero.
  ChainElement cyclic_t(const ChainElement& c) const {
    long n = c.degree;
    ChainElement out = chain_zero(n);
    for (const auto& [t, s] : c.terms) {
      if (n == 0) {
        add_chain(out, t, s);
        continue;
      }
      Tensor rest(t.begin() + 1, t.end());
      rest.push_back(m_.sigma);
      for (const auto& [legs, d] : p_.coproduct(t[0])) {
        QScalar cf = s * d * character_value(p_, m_.delta, legs.first);
        if (cf.is_zero()) continue;
        Element sw = p_.antipode(p_.monomial(legs.second));
        for (const auto& [split, d2] : split_into(sw, n)) {
          std::vector<std::pair<Tensor, QScalar>> terms{{Tensor{}, cf * d2}};
          for (long k = 0; k < n; ++k) {
            Element prod = p_.multiply(p_.monomial(split[static_cast<size_t>(k)]),
                                       p_.monomial(rest[static_cast<size_t>(k)]));
            std::vector<std::pair<Tensor, QScalar>> next;
            for (const auto& [tup, cc] : terms)
              for (const auto& [w, cw] : prod) {
                Tensor nt = tup;
                nt.push_back(w);
                next.push_back({nt, cc * cw});
              }
            terms = std::move(next);
          }
          for (const auto& [tup, cc] : terms) add_chain(out, tup, cc);
        }
      }
    }
    return out;
  }

  // The boundary pairing with b: N_{n-1} s_{n-1} t (1 - (-1)^n t), where
  // N_m = sum_{i=0}^{m} (-1)^{m i} t^i.  In degree zero there is nothing
  // below, so the degree-zero zero chain stands in for the result.
  ChainElement connes_B(const ChainElement& c) const {
    long n = c.degree;
    if (n == 0) return chain_zero(0);
    ChainElement x = c;
    QScalar sgn(n % 2 == 0 ? -1 : 1);  // -(-1)^n
    x = x + (sgn * cyclic_t(c));
    ChainElement y = degeneracy(n - 1, cyclic_t(x));
    long m = n - 1;
    ChainElement out = chain_zero(n - 1);
    ChainElement acc = y;
    for (long i = 0; i <= m; ++i) {
      QScalar si((m * i) % 2 == 0 ? 1 : -1);
      out = out + (si * acc);
      if (i < m) acc = cyclic_t(acc);
    }
    return out;
  }

 private:
  // n-fold coproduct splitting of an element, as tensors of n legs.
  std::map<Tensor, QScalar> split_into(const Element& el, long n) const {
    std::map<Tensor, QScalar> cur;
    for (const auto& [w, c] : el) {
      auto it = cur.find(Tensor{w});
      if (it == cur.end())
        cur.emplace(Tensor{w}, c);
      else
        it->second += c;
    }
    for (long step = 1; step < n; ++step) {
      std::map<Tensor, QScalar> next;
      for (const auto& [legs, c] : cur) {
        for (const auto& [pair, d] : p_.coproduct(legs.back())) {
          Tensor nt(legs.begin(), legs.end() - 1);
          nt.push_back(pair.first);
          nt.push_back(pair.second);
          QScalar v = c * d;
          if (v.is_zero()) continue;
          auto it = next.find(nt);
          if (it == next.end()) {
            next.emplace(std::move(nt), v);
          } else {
            it->second += v;
            if (it->second.is_zero()) next.erase(it);
          }
        }
      }
      cur = std::move(next);
    }
    return cur;
  }

  const HopfPresentation& p_;
  MPI m_;
};

struct OpsReport {
  long checked = 0;
  long skipped = 0;
  struct Failure {
    std::string identity;
    std::string witness;
  };
  std::vector<Failure> failures;
  bool pass() const { return failures.empty(); }
};

// Randomized identity suite for the cocyclic operators: cyclic order
// t^{n+1} = 1, b^2 = 0, the rotation rules against faces and
// degeneracies, counital faces, B^2 = 0 and b B + B b = 0.
inline OpsReport ops_audit(const CyclicOps& ops, const std::vector<Word>& pool,
                           long maxdeg = 3, long samples_per_deg = 8,
                           unsigned seed = 11) {
  OpsReport rep;
  const auto& p = ops.presentation();
  std::mt19937 rng(seed);
  std::uniform_int_distribution<size_t> pick(0, pool.size() - 1);
  std::uniform_int_distribution<int> nterms(1, 3);
  std::uniform_int_distribution<long> coeff(-3, 3);

  for (long n = 1; n <= maxdeg; ++n) {
    for (long s = 0; s < samples_per_deg; ++s) {
      ChainElement x = chain_zero(n);
      for (int k = nterms(rng); k > 0; --k) {
        Tensor t(static_cast<size_t>(n));
        for (auto& w : t) w = pool[pick(rng)];
        add_chain(x, t, QScalar(coeff(rng)));
      }
      if (x.is_zero()) continue;
      std::string wit = chain_str(p, x);
      auto fail = [&](const std::string& id) { rep.failures.push_back({id, wit}); };
      try {
        ChainElement y = x;
        for (long i = 0; i <= n; ++i) y = ops.cyclic_t(y);
        if (!(y == x)) fail("t^(n+1) = id");
        if (!ops.hochschild_b(ops.hochschild_b(x)).is_zero()) fail("b^2 = 0");
        for (long i = 1; i <= n + 1; ++i)
          if (!(ops.cyclic_t(ops.face(i, x)) == ops.face(i - 1, ops.cyclic_t(x))))
            fail("t d_i = d_(i-1) t");
        if (!(ops.cyclic_t(ops.face(0, x)) == ops.face(n + 1, x)))
          fail("t d_0 = d_(n+1)");
        if (n >= 2) {
          for (long j = 1; j <= n - 1; ++j)
            if (!(ops.cyclic_t(ops.degeneracy(j, x)) ==
                  ops.degeneracy(j - 1, ops.cyclic_t(x))))
              fail("t s_j = s_(j-1) t");
          if (!(ops.cyclic_t(ops.degeneracy(0, x)) ==
                ops.degeneracy(n - 1, ops.cyclic_t(ops.cyclic_t(x)))))
            fail("t s_0 = s_(n-1) t^2");
        }
        for (long j = 0; j <= n; ++j) {
          if (!(ops.degeneracy(j, ops.face(j, x)) == x)) fail("s_j d_j = id");
          if (!(ops.degeneracy(j, ops.face(j + 1, x)) == x)) fail("s_j d_(j+1) = id");
        }
        ChainElement Bx = ops.connes_B(x);
        if (n >= 2 && !ops.connes_B(Bx).is_zero()) fail("B^2 = 0");
        if (!(ops.hochschild_b(Bx) + ops.connes_B(ops.hochschild_b(x))).is_zero())
          fail("b B + B b = 0");
        ++rep.checked;
      } catch (const CapOverflow&) {
        ++rep.skipped;
      }
    }
  }
  return rep;
}

// Sample words staying far enough from the generator window to keep the
// audit compositions representable.
inline std::vector<Word> audit_pool(const HopfPresentation& p) {
  std::vector<Word> pool;
  pool.push_back({});
  if (p.has_generator("E")) {
    for (const char* s : {"E", "F", "K"}) pool.push_back(p.letter(s));
    pool.push_back(p.letter("K^-1"));
    pool.push_back(canon_word({{p.index_of("F"), 1}, {p.index_of("K"), 1}}));
    pool.push_back(canon_word({{p.index_of("K"), 1}, {p.index_of("E"), 1}}));
  } else if (p.has_generator("d1")) {
    for (const char* s : {"d1", "d2", "X", "Y"}) pool.push_back(p.letter(s));
    pool.push_back(canon_word({{p.index_of("Y"), 2}}));
    pool.push_back(canon_word({{p.index_of("d1"), 1}, {p.index_of("Y"), 1}}));
    pool.push_back(canon_word({{p.index_of("X"), 1}, {p.index_of("Y"), 1}}));
  } else {
    for (size_t g = 0; g < p.primary_count(); ++g)
      pool.push_back(p.letter(p.gen_name(static_cast<int>(g))));
  }
  return pool;
}

}  // namespace cobalt
