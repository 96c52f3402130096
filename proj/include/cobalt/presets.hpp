#pragma once

#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "cobalt/presentation.hpp"

namespace cobalt {

struct CartanDatum {
  long rank = 0;
  std::vector<std::vector<long>> A;
  std::vector<long> d;
  std::vector<long> two_rho;  // coordinates of 2rho in the simple-root basis
  std::string type;

  void validate() const {
    if (rank <= 0 || A.size() != static_cast<size_t>(rank))
      throw std::invalid_argument("CartanDatum: bad rank");
    for (const auto& row : A)
      if (row.size() != static_cast<size_t>(rank))
        throw std::invalid_argument("CartanDatum: A not square");
    for (long i = 0; i < rank; ++i) {
      if (A[i][i] != 2) throw std::invalid_argument("CartanDatum: diagonal must be 2");
      for (long j = 0; j < rank; ++j) {
        if (i != j && A[i][j] > 0)
          throw std::invalid_argument("CartanDatum: positive off-diagonal");
        if (d[i] * A[i][j] != d[j] * A[j][i])
          throw std::invalid_argument("CartanDatum: d does not symmetrize A");
      }
      if (two_rho[i] <= 0) throw std::invalid_argument("CartanDatum: two_rho must be positive");
    }
  }
};

// The three shipped Cartan types. two_rho values are pinned as data; the
// defining property (sum of positive roots) is re-derived in the test suite.
inline CartanDatum cartan_datum(const std::string& type) {
  CartanDatum c;
  if (type == "A1") {
    c = {1, {{2}}, {1}, {1}, type};
  } else if (type == "A2") {
    c = {2, {{2, -1}, {-1, 2}}, {1, 1}, {2, 2}, type};
  } else if (type == "A3") {
    c = {3, {{2, -1, 0}, {-1, 2, -1}, {0, -1, 2}}, {1, 1, 1}, {3, 4, 3}, type};
  } else {
    throw std::invalid_argument("unknown Cartan type: " + type);
  }
  c.validate();
  return c;
}

namespace detail {

// Balanced q-integer in the base q^di.
inline QScalar q_int_base(long n, long di) {
  if (n == 0) return QScalar(0);
  if (n < 0) return -q_int_base(-n, di);
  Laurent a;
  for (long k = 0; k < n; ++k) a = a + Laurent::monomial(1, di * (n - 1 - 2 * k));
  return QScalar(a);
}

inline QScalar q_binomial_base(long n, long r, long di) {
  QScalar num(1), den(1);
  for (long t = 1; t <= n; ++t) num *= q_int_base(t, di);
  for (long t = 1; t <= r; ++t) den *= q_int_base(t, di);
  for (long t = 1; t <= n - r; ++t) den *= q_int_base(t, di);
  return num / den;
}

inline std::string idx_name(const std::string& base, long i, long rank) {
  return rank == 1 ? base : base + std::to_string(i + 1);
}

}  // namespace detail

// Drinfeld-Jimbo U_q(g) from a Cartan datum. Generators in normal-order
// blocks F, K, E; root-lattice multigrading.
inline HopfPresentation build_uq(const CartanDatum& c) {
  c.validate();
  long l = c.rank;
  HopfPresentation p;
  p.name = c.type.empty() ? "uq" : "uq:" + c.type;
  auto ei = [&](long i) {
    std::vector<long> v(static_cast<size_t>(l), 0);
    v[static_cast<size_t>(i)] = 1;
    return v;
  };
  auto neg = [](std::vector<long> v) {
    for (auto& x : v) x = -x;
    return v;
  };
  std::vector<int> F(static_cast<size_t>(l)), K(static_cast<size_t>(l)), E(static_cast<size_t>(l));
  for (long i = 0; i < l; ++i)
    F[static_cast<size_t>(i)] = p.add_primary(detail::idx_name("F", i, l), neg(ei(i)));
  for (long i = 0; i < l; ++i)
    K[static_cast<size_t>(i)] = p.add_primary(detail::idx_name("K", i, l),
                                              std::vector<long>(static_cast<size_t>(l), 0), true);
  for (long i = 0; i < l; ++i)
    E[static_cast<size_t>(i)] = p.add_primary(detail::idx_name("E", i, l), ei(i));

  auto Fi = [&](long i) { return F[static_cast<size_t>(i)]; };
  auto Ki = [&](long i) { return K[static_cast<size_t>(i)]; };
  auto Ei = [&](long i) { return E[static_cast<size_t>(i)]; };
  auto mono = [&](const Word& w, const QScalar& s = QScalar(1)) { return p.monomial(w, s); };

  // K-block sorting, all sign combinations.
  for (long i = 0; i < l; ++i)
    for (long j = 0; j < l; ++j)
      if (i > j)
        for (long s : {1L, -1L})
          for (long t : {1L, -1L})
            p.add_rule({{Ki(i), s}, {Ki(j), t}}, mono({{Ki(j), t}, {Ki(i), s}}));
  // E_i K_j^s -> q_j^(-s a_ji) K_j^s E_i
  for (long i = 0; i < l; ++i)
    for (long j = 0; j < l; ++j)
      for (long s : {1L, -1L})
        p.add_rule({{Ei(i), 1}, {Ki(j), s}},
                   mono({{Ki(j), s}, {Ei(i), 1}}, QScalar::q_pow(-s * c.d[static_cast<size_t>(j)] *
                                                                 c.A[static_cast<size_t>(j)][static_cast<size_t>(i)])));
  // K_j^s F_i -> q_j^(-s a_ji) F_i K_j^s
  for (long i = 0; i < l; ++i)
    for (long j = 0; j < l; ++j)
      for (long s : {1L, -1L})
        p.add_rule({{Ki(j), s}, {Fi(i), 1}},
                   mono({{Fi(i), 1}, {Ki(j), s}}, QScalar::q_pow(-s * c.d[static_cast<size_t>(j)] *
                                                                 c.A[static_cast<size_t>(j)][static_cast<size_t>(i)])));
  // E_i F_j -> F_j E_i + delta_ij (K_i - K_i^-1)/(q_i - q_i^-1)
  for (long i = 0; i < l; ++i)
    for (long j = 0; j < l; ++j) {
      Element rhs = mono({{Fi(j), 1}, {Ei(i), 1}});
      if (i == j) {
        QScalar cc = QScalar(1) / (QScalar::q_pow(c.d[static_cast<size_t>(i)]) -
                                   QScalar::q_pow(-c.d[static_cast<size_t>(i)]));
        rhs = rhs + mono({{Ki(i), 1}}, cc) + mono({{Ki(i), -1}}, -cc);
      }
      p.add_rule({{Ei(i), 1}, {Fi(j), 1}}, rhs);
    }
  // q-Serre, oriented to rewrite the lexicographically greatest word.
  auto wkey = [&](const Word& w) {
    std::vector<int> seq;
    for (const auto& [g, e] : w)
      for (long t = 0; t < std::labs(e); ++t) seq.push_back(g);
    return seq;
  };
  for (long i = 0; i < l; ++i)
    for (long j = 0; j < l; ++j) {
      if (i == j || c.A[static_cast<size_t>(i)][static_cast<size_t>(j)] == 0) continue;
      long N = 1 - c.A[static_cast<size_t>(i)][static_cast<size_t>(j)];
      for (bool use_e : {true, false}) {
        int gi = use_e ? Ei(i) : Fi(i);
        int gj = use_e ? Ei(j) : Fi(j);
        std::vector<std::pair<QScalar, Word>> terms;
        for (long r = 0; r <= N; ++r) {
          QScalar cc = detail::q_binomial_base(N, r, c.d[static_cast<size_t>(i)]);
          if (r % 2) cc = -cc;
          Word w;
          if (N - r) w.push_back({gi, N - r});
          w.push_back({gj, 1});
          if (r) w.push_back({gi, r});
          terms.push_back({cc, w});
        }
        size_t lead = 0;
        for (size_t t = 1; t < terms.size(); ++t)
          if (wkey(terms[t].second) > wkey(terms[lead].second)) lead = t;
        Element rhs;
        for (size_t t = 0; t < terms.size(); ++t)
          if (t != lead) add_term(rhs, terms[t].second, -(terms[t].first / terms[lead].first));
        p.add_rule(terms[lead].second, rhs);
      }
    }
  // Distant simple roots commute.
  for (long i = 0; i < l; ++i)
    for (long j = 0; j < l; ++j)
      if (i > j && c.A[static_cast<size_t>(i)][static_cast<size_t>(j)] == 0) {
        p.add_rule({{Ei(i), 1}, {Ei(j), 1}}, mono({{Ei(j), 1}, {Ei(i), 1}}));
        p.add_rule({{Fi(i), 1}, {Fi(j), 1}}, mono({{Fi(j), 1}, {Fi(i), 1}}));
      }
  // Hopf structure.
  for (long i = 0; i < l; ++i) {
    size_t k = static_cast<size_t>(Ki(i)), e = static_cast<size_t>(Ei(i)),
           f = static_cast<size_t>(Fi(i));
    p.coproduct_gen[k] = {{QScalar(1), {{Ki(i), 1}}, {{Ki(i), 1}}}};
    p.coproduct_gen[e] = {{QScalar(1), {{Ei(i), 1}}, {{Ki(i), 1}}}, {QScalar(1), {}, {{Ei(i), 1}}}};
    p.coproduct_gen[f] = {{QScalar(1), {{Fi(i), 1}}, {}}, {QScalar(1), {{Ki(i), -1}}, {{Fi(i), 1}}}};
    p.counit_gen[k] = QScalar(1);
    p.counit_gen[e] = QScalar(0);
    p.counit_gen[f] = QScalar(0);
    p.antipode_gen[k] = mono({{Ki(i), -1}});
    p.antipode_gen[e] = mono({{Ei(i), 1}, {Ki(i), -1}}, QScalar(-1));
    p.antipode_gen[f] = mono({{Ki(i), 1}, {Fi(i), 1}}, QScalar(-1));
  }
  return p;
}

// Positive (E, K) or negative (F, K) Borel half of U_q(g).
inline HopfPresentation build_uq_borel(const CartanDatum& c, bool plus) {
  c.validate();
  long l = c.rank;
  HopfPresentation p;
  p.name = std::string("uq-borel-") + (plus ? "plus" : "minus") + (c.type.empty() ? "" : ":" + c.type);
  auto rootvec = [&](long i, long s) {
    std::vector<long> v(static_cast<size_t>(l), 0);
    v[static_cast<size_t>(i)] = s;
    return v;
  };
  std::vector<int> X(static_cast<size_t>(l)), K(static_cast<size_t>(l));
  if (!plus)
    for (long i = 0; i < l; ++i)
      X[static_cast<size_t>(i)] = p.add_primary(detail::idx_name("F", i, l), rootvec(i, -1));
  for (long i = 0; i < l; ++i)
    K[static_cast<size_t>(i)] = p.add_primary(detail::idx_name("K", i, l),
                                              std::vector<long>(static_cast<size_t>(l), 0), true);
  if (plus)
    for (long i = 0; i < l; ++i)
      X[static_cast<size_t>(i)] = p.add_primary(detail::idx_name("E", i, l), rootvec(i, 1));

  auto mono = [&](const Word& w, const QScalar& s = QScalar(1)) { return p.monomial(w, s); };
  for (long i = 0; i < l; ++i)
    for (long j = 0; j < l; ++j)
      if (i > j)
        for (long s : {1L, -1L})
          for (long t : {1L, -1L})
            p.add_rule({{K[static_cast<size_t>(i)], s}, {K[static_cast<size_t>(j)], t}},
                       mono({{K[static_cast<size_t>(j)], t}, {K[static_cast<size_t>(i)], s}}));
  for (long i = 0; i < l; ++i)
    for (long j = 0; j < l; ++j)
      for (long s : {1L, -1L}) {
        QScalar cc = QScalar::q_pow(-s * c.d[static_cast<size_t>(j)] *
                                    c.A[static_cast<size_t>(j)][static_cast<size_t>(i)]);
        int xi = X[static_cast<size_t>(i)], kj = K[static_cast<size_t>(j)];
        if (plus)
          p.add_rule({{xi, 1}, {kj, s}}, mono({{kj, s}, {xi, 1}}, cc));
        else
          p.add_rule({{kj, s}, {xi, 1}}, mono({{xi, 1}, {kj, s}}, cc));
      }
  auto wkey = [&](const Word& w) {
    std::vector<int> seq;
    for (const auto& [g, e] : w)
      for (long t = 0; t < std::labs(e); ++t) seq.push_back(g);
    return seq;
  };
  for (long i = 0; i < l; ++i)
    for (long j = 0; j < l; ++j) {
      if (i == j || c.A[static_cast<size_t>(i)][static_cast<size_t>(j)] == 0) continue;
      long N = 1 - c.A[static_cast<size_t>(i)][static_cast<size_t>(j)];
      int gi = X[static_cast<size_t>(i)], gj = X[static_cast<size_t>(j)];
      std::vector<std::pair<QScalar, Word>> terms;
      for (long r = 0; r <= N; ++r) {
        QScalar cc = detail::q_binomial_base(N, r, c.d[static_cast<size_t>(i)]);
        if (r % 2) cc = -cc;
        Word w;
        if (N - r) w.push_back({gi, N - r});
        w.push_back({gj, 1});
        if (r) w.push_back({gi, r});
        terms.push_back({cc, w});
      }
      size_t lead = 0;
      for (size_t t = 1; t < terms.size(); ++t)
        if (wkey(terms[t].second) > wkey(terms[lead].second)) lead = t;
      Element rhs;
      for (size_t t = 0; t < terms.size(); ++t)
        if (t != lead) add_term(rhs, terms[t].second, -(terms[t].first / terms[lead].first));
      p.add_rule(terms[lead].second, rhs);
    }
  for (long i = 0; i < l; ++i)
    for (long j = 0; j < l; ++j)
      if (i > j && c.A[static_cast<size_t>(i)][static_cast<size_t>(j)] == 0)
        p.add_rule({{X[static_cast<size_t>(i)], 1}, {X[static_cast<size_t>(j)], 1}},
                   mono({{X[static_cast<size_t>(j)], 1}, {X[static_cast<size_t>(i)], 1}}));
  for (long i = 0; i < l; ++i) {
    size_t k = static_cast<size_t>(K[static_cast<size_t>(i)]);
    size_t x = static_cast<size_t>(X[static_cast<size_t>(i)]);
    int ki = K[static_cast<size_t>(i)], xi = X[static_cast<size_t>(i)];
    p.coproduct_gen[k] = {{QScalar(1), {{ki, 1}}, {{ki, 1}}}};
    p.counit_gen[k] = QScalar(1);
    p.antipode_gen[k] = mono({{ki, -1}});
    if (plus) {
      p.coproduct_gen[x] = {{QScalar(1), {{xi, 1}}, {{ki, 1}}}, {QScalar(1), {}, {{xi, 1}}}};
      p.antipode_gen[x] = mono({{xi, 1}, {ki, -1}}, QScalar(-1));
    } else {
      p.coproduct_gen[x] = {{QScalar(1), {{xi, 1}}, {}}, {QScalar(1), {{ki, -1}}, {{xi, 1}}}};
      p.antipode_gen[x] = mono({{ki, 1}, {xi, 1}}, QScalar(-1));
    }
    p.counit_gen[x] = QScalar(0);
  }
  return p;
}

// H1: generators d1..d_maxIndex, X, Y with [Y,X]=X, [Y,dn]=n dn,
// [X,dn]=d_{n+1}; weight grading w(dn)=n, w(X)=1, w(Y)=0.
inline HopfPresentation build_h1(long max_index = 6) {
  if (max_index < 2)
    throw std::invalid_argument("build_h1: max_index must be at least 2");
  HopfPresentation p;
  p.name = "h1";
  std::vector<int> D(static_cast<size_t>(max_index + 1), -1);
  for (long n = 1; n <= max_index; ++n)
    D[static_cast<size_t>(n)] = p.add_primary("d" + std::to_string(n), {n});
  int X = p.add_primary("X", {1});
  int Y = p.add_primary("Y", {0});
  auto mono = [&](const Word& w, const QScalar& s = QScalar(1)) { return p.monomial(w, s); };

  p.add_rule({{Y, 1}, {X, 1}}, mono({{X, 1}, {Y, 1}}) + mono({{X, 1}}));
  for (long n = 1; n <= max_index; ++n) {
    int dn = D[static_cast<size_t>(n)];
    p.add_rule({{Y, 1}, {dn, 1}}, mono({{dn, 1}, {Y, 1}}) + mono({{dn, 1}}, QScalar(n)));
    if (n < max_index)
      p.add_rule({{X, 1}, {dn, 1}},
                 mono({{dn, 1}, {X, 1}}) + mono({{D[static_cast<size_t>(n + 1)], 1}}));
    else
      p.add_rule({{X, 1}, {dn, 1}}, std::nullopt);
  }
  for (long n = 1; n <= max_index; ++n)
    for (long m = 1; m < n; ++m)
      p.add_rule({{D[static_cast<size_t>(n)], 1}, {D[static_cast<size_t>(m)], 1}},
                 mono({{D[static_cast<size_t>(m)], 1}, {D[static_cast<size_t>(n)], 1}}));

  auto prim = [&](int g) {
    p.coproduct_gen[static_cast<size_t>(g)] = {{QScalar(1), {{g, 1}}, {}},
                                               {QScalar(1), {}, {{g, 1}}}};
    p.counit_gen[static_cast<size_t>(g)] = QScalar(0);
    p.antipode_gen[static_cast<size_t>(g)] = mono({{g, 1}}, QScalar(-1));
  };
  prim(Y);
  prim(D[1]);
  p.coproduct_gen[static_cast<size_t>(X)] = {{QScalar(1), {{X, 1}}, {}},
                                             {QScalar(1), {}, {{X, 1}}},
                                             {QScalar(1), {{D[1], 1}}, {{Y, 1}}}};
  p.counit_gen[static_cast<size_t>(X)] = QScalar(0);
  p.antipode_gen[static_cast<size_t>(X)] =
      mono({{X, 1}}, QScalar(-1)) + mono({{D[1], 1}, {Y, 1}});

  // d_{n+1} = [X, d_n]: push the structure maps up the tower.
  for (long n = 1; n < max_index; ++n) {
    int dn = D[static_cast<size_t>(n)], dn1 = D[static_cast<size_t>(n + 1)];
    Element2 DX, Dd;
    for (const auto& [cc, w1, w2] : p.coproduct_gen[static_cast<size_t>(X)])
      add_term2(DX, {w1, w2}, cc);
    for (const auto& [cc, w1, w2] : p.coproduct_gen[static_cast<size_t>(dn)])
      add_term2(Dd, {w1, w2}, cc);
    Element2 comm = p.multiply2(DX, Dd);
    for (const auto& [w, cc] : p.multiply2(Dd, DX)) add_term2(comm, w, -cc);
    auto& list = p.coproduct_gen[static_cast<size_t>(dn1)];
    for (const auto& [w, cc] : comm) list.push_back({cc, w.first, w.second});
    p.counit_gen[static_cast<size_t>(dn1)] = QScalar(0);
    const Element& Sx = p.antipode_gen[static_cast<size_t>(X)];
    const Element& Sd = p.antipode_gen[static_cast<size_t>(dn)];
    p.antipode_gen[static_cast<size_t>(dn1)] =
        p.multiply(Sd, Sx) - p.multiply(Sx, Sd);
  }
  return p;
}

// H1S: generators Z, X, Y with [Y,X]=X, [Y,Z]=Z, [X,Z]=Z^2/2; Z primitive.
inline HopfPresentation build_h1s() {
  HopfPresentation p;
  p.name = "h1s";
  int Z = p.add_primary("Z", {1});
  int X = p.add_primary("X", {1});
  int Y = p.add_primary("Y", {0});
  auto mono = [&](const Word& w, const QScalar& s = QScalar(1)) { return p.monomial(w, s); };
  p.add_rule({{Y, 1}, {X, 1}}, mono({{X, 1}, {Y, 1}}) + mono({{X, 1}}));
  p.add_rule({{Y, 1}, {Z, 1}}, mono({{Z, 1}, {Y, 1}}) + mono({{Z, 1}}));
  p.add_rule({{X, 1}, {Z, 1}},
             mono({{Z, 1}, {X, 1}}) + mono({{Z, 2}}, QScalar(mpq_class(1, 2))));
  auto prim = [&](int g) {
    p.coproduct_gen[static_cast<size_t>(g)] = {{QScalar(1), {{g, 1}}, {}},
                                               {QScalar(1), {}, {{g, 1}}}};
    p.counit_gen[static_cast<size_t>(g)] = QScalar(0);
    p.antipode_gen[static_cast<size_t>(g)] = mono({{g, 1}}, QScalar(-1));
  };
  prim(Z);
  prim(Y);
  p.coproduct_gen[static_cast<size_t>(X)] = {{QScalar(1), {{X, 1}}, {}},
                                             {QScalar(1), {}, {{X, 1}}},
                                             {QScalar(1), {{Z, 1}}, {{Y, 1}}}};
  p.counit_gen[static_cast<size_t>(X)] = QScalar(0);
  p.antipode_gen[static_cast<size_t>(X)] =
      mono({{X, 1}}, QScalar(-1)) + mono({{Z, 1}, {Y, 1}});
  return p;
}

// F: the commutative Hopf subalgebra of H1 spanned by the d_n. Structure
// maps are transported from a full H1 build of the same index window.
inline HopfPresentation build_f(long max_index = 6) {
  HopfPresentation h1 = build_h1(max_index);
  HopfPresentation p;
  p.name = "f";
  for (long n = 1; n <= max_index; ++n) p.add_primary("d" + std::to_string(n), {n});
  auto port_word = [&](const Word& w) {
    Word r;
    for (const auto& [g, e] : w) {
      const std::string& nm = h1.gen_name(g);
      if (nm[0] != 'd')
        throw std::logic_error("build_f: structure map leaves the d-span at " + nm);
      r.push_back({p.index_of(nm), e});
    }
    return r;
  };
  for (long n = 1; n <= max_index; ++n)
    for (long m = 1; m < n; ++m)
      p.add_rule({{p.index_of("d" + std::to_string(n)), 1},
                  {p.index_of("d" + std::to_string(m)), 1}},
                 p.monomial({{p.index_of("d" + std::to_string(m)), 1},
                             {p.index_of("d" + std::to_string(n)), 1}}));
  for (long n = 1; n <= max_index; ++n) {
    size_t src = static_cast<size_t>(h1.index_of("d" + std::to_string(n)));
    size_t dst = static_cast<size_t>(p.index_of("d" + std::to_string(n)));
    for (const auto& [cc, w1, w2] : h1.coproduct_gen[src])
      p.coproduct_gen[dst].push_back({cc, port_word(w1), port_word(w2)});
    p.counit_gen[dst] = h1.counit_gen[src];
    Element s;
    for (const auto& [w, cc] : h1.antipode_gen[src]) add_term(s, port_word(w), cc);
    p.antipode_gen[dst] = s;
  }
  return p;
}

// U(gl1^aff): primitive X, Y with [Y,X]=X.
inline HopfPresentation build_gl1aff() {
  HopfPresentation p;
  p.name = "gl1aff";
  int X = p.add_primary("X", {1});
  int Y = p.add_primary("Y", {0});
  p.add_rule({{Y, 1}, {X, 1}}, p.monomial({{X, 1}, {Y, 1}}) + p.monomial({{X, 1}}));
  for (int g : {X, Y}) {
    p.coproduct_gen[static_cast<size_t>(g)] = {{QScalar(1), {{g, 1}}, {}},
                                               {QScalar(1), {}, {{g, 1}}}};
    p.counit_gen[static_cast<size_t>(g)] = QScalar(0);
    p.antipode_gen[static_cast<size_t>(g)] = p.monomial({{g, 1}}, QScalar(-1));
  }
  return p;
}

// Modular pair: a character delta (values on primary generators, extended
// as an algebra map) and a group-like monomial sigma.
struct MPI {
  std::map<std::string, QScalar> delta;
  Word sigma;
  std::string delta_label;
  std::string sigma_label;
};

inline QScalar character_value(const HopfPresentation& p,
                               const std::map<std::string, QScalar>& chi, const Word& w) {
  QScalar v(1);
  for (const auto& [g, e] : w) {
    auto it = chi.find(p.gen_name(g));
    QScalar base = it == chi.end() ? QScalar(0) : it->second;
    if (base.is_zero()) return QScalar(0);
    v *= base.pow(e);
  }
  return v;
}

inline QScalar character_value(const HopfPresentation& p,
                               const std::map<std::string, QScalar>& chi, const Element& el) {
  QScalar v(0);
  for (const auto& [w, c] : el) v += c * character_value(p, chi, w);
  return v;
}

// Twisted antipode S_delta(h) = delta(h_(1)) S(h_(2)).
inline Element twisted_antipode(const HopfPresentation& p, const MPI& m, const Element& el) {
  Element out;
  for (const auto& [pair, c] : p.coproduct(el)) {
    QScalar d = character_value(p, m.delta, pair.first);
    if (d.is_zero()) continue;
    for (const auto& [w, cc] : p.antipode(p.monomial(pair.second)))
      add_term(out, w, c * d * cc);
  }
  return out;
}

struct MpiReport {
  long checked = 0;
  long skipped = 0;  // sample words outside a preset's finite generator window
  struct Failure {
    std::string identity;
    std::string witness;
  };
  std::vector<Failure> failures;
  bool pass() const { return failures.empty(); }
};

// Checks delta(sigma) = 1, group-likeness of sigma, and the involution
// S_delta^2 = Ad_sigma on all alphabet letters plus random short words.
inline MpiReport mpi_verify(const HopfPresentation& p, const MPI& m, long samples = 100,
                            unsigned seed = 1) {
  MpiReport rep;
  auto fail = [&](const std::string& id, const std::string& wit) {
    rep.failures.push_back({id, wit});
  };
  ++rep.checked;
  if (character_value(p, m.delta, m.sigma) != QScalar(1))
    fail("delta(sigma)=1", p.word_str(m.sigma));
  Element2 ds = p.coproduct(p.monomial(m.sigma));
  Element2 expect;
  expect.emplace(Word2{canon_word(m.sigma), canon_word(m.sigma)}, QScalar(1));
  ++rep.checked;
  if (ds != expect) fail("sigma group-like", p.word_str(m.sigma));

  Element sig = p.monomial(m.sigma);
  Word sig_inv;
  for (auto it = m.sigma.rbegin(); it != m.sigma.rend(); ++it)
    sig_inv.push_back({it->first, -it->second});
  Element sigi = p.monomial(sig_inv);

  auto check_ad = [&](const Word& raw, const std::string& wit) {
    try {
      Element x = p.reduce(raw);
      Element lhs = twisted_antipode(p, m, twisted_antipode(p, m, x));
      Element rhs = p.multiply(p.multiply(sig, x), sigi);
      ++rep.checked;
      if (lhs != rhs) fail("S_delta^2 = Ad_sigma", wit);
    } catch (const CapOverflow&) {
      ++rep.skipped;
    }
  };
  for (const auto& g : p.generators) check_ad(p.letter(g.name), g.name);
  std::mt19937 rng(seed);
  std::uniform_int_distribution<size_t> pick(0, p.generators.size() - 1);
  std::uniform_int_distribution<int> len(1, 4);
  for (long s = 0; s < samples; ++s) {
    Word w;
    std::string wit;
    int L = len(rng);
    for (int t = 0; t < L; ++t) {
      const auto& g = p.generators[pick(rng)];
      Word lw = p.letter(g.name);
      w.insert(w.end(), lw.begin(), lw.end());
      wit += (wit.empty() ? "" : " ") + g.name;
    }
    check_ad(w, wit);
  }
  return rep;
}

// The coefficient pair each preset carries.
inline MPI mpi_of(const HopfPresentation& p) {
  MPI m;
  const std::string& n = p.name;
  auto is_uq = n.rfind("uq", 0) == 0;
  if (is_uq) {
    size_t colon = n.find(':');
    if (colon == std::string::npos)
      throw std::invalid_argument("mpi_of: preset lacks a Cartan type: " + n);
    CartanDatum c = cartan_datum(n.substr(colon + 1));
    for (size_t i = 0; i < p.primary_count(); ++i) {
      const std::string& g = p.gen_name(static_cast<int>(i));
      m.delta[g] = (g[0] == 'K') ? QScalar(1) : QScalar(0);
    }
    for (long i = 0; i < c.rank; ++i) {
      std::string kn = detail::idx_name("K", i, c.rank);
      if (!p.has_generator(kn))
        throw std::invalid_argument("mpi_of: preset is missing " + kn);
      m.sigma.push_back({p.index_of(kn), c.two_rho[static_cast<size_t>(i)]});
    }
    m.delta_label = "eps";
    m.sigma_label = "K_2rho";
    return m;
  }
  if (n == "h1" || n == "h1s") {
    for (size_t i = 0; i < p.primary_count(); ++i) {
      const std::string& g = p.gen_name(static_cast<int>(i));
      m.delta[g] = (g == "Y") ? QScalar(1) : QScalar(0);
    }
    m.delta_label = "delta";
    m.sigma_label = "1";
    return m;
  }
  throw std::invalid_argument("mpi_of: no modular pair shipped for preset " + n);
}

// Trivial coefficients (eps, 1), the negative control for the U_q presets.
inline MPI mpi_trivial(const HopfPresentation& p) {
  MPI m;
  for (size_t i = 0; i < p.primary_count(); ++i)
    m.delta[p.gen_name(static_cast<int>(i))] = p.counit_gen[i];
  m.delta_label = "eps";
  m.sigma_label = "1";
  return m;
}

// W: the group algebra of Z^ell on group-like K_i.
inline HopfPresentation build_w(long ell) {
  if (ell <= 0) throw std::invalid_argument("build_w: rank must be positive");
  HopfPresentation p;
  p.name = "w:" + std::to_string(ell);
  std::vector<int> K(static_cast<size_t>(ell));
  for (long i = 0; i < ell; ++i)
    K[static_cast<size_t>(i)] = p.add_primary(detail::idx_name("K", i, ell),
                                              std::vector<long>(static_cast<size_t>(ell), 0), true);
  for (long i = 0; i < ell; ++i)
    for (long j = 0; j < ell; ++j)
      if (i > j)
        for (long s : {1L, -1L})
          for (long t : {1L, -1L})
            p.add_rule({{K[static_cast<size_t>(i)], s}, {K[static_cast<size_t>(j)], t}},
                       p.monomial({{K[static_cast<size_t>(j)], t}, {K[static_cast<size_t>(i)], s}}));
  for (long i = 0; i < ell; ++i) {
    int k = K[static_cast<size_t>(i)];
    p.coproduct_gen[static_cast<size_t>(k)] = {{QScalar(1), {{k, 1}}, {{k, 1}}}};
    p.counit_gen[static_cast<size_t>(k)] = QScalar(1);
    p.antipode_gen[static_cast<size_t>(k)] = p.monomial({{k, -1}});
  }
  return p;
}

// CLI-addressable preset names.
inline HopfPresentation preset_by_name(const std::string& name) {
  if (name == "h1") return build_h1();
  if (name == "h1s") return build_h1s();
  if (name == "f") return build_f();
  if (name == "gl1aff") return build_gl1aff();
  auto split = name.find(':');
  std::string head = split == std::string::npos ? name : name.substr(0, split);
  std::string arg = split == std::string::npos ? "" : name.substr(split + 1);
  if (head == "w" && !arg.empty()) return build_w(std::stol(arg));
  if (head == "uq" && !arg.empty()) return build_uq(cartan_datum(arg));
  if (head == "uq-borel-plus" && !arg.empty())
    return build_uq_borel(cartan_datum(arg), true);
  if (head == "uq-borel-minus" && !arg.empty())
    return build_uq_borel(cartan_datum(arg), false);
  throw std::invalid_argument("unknown preset: " + name);
}

// Deliberate defects for negative-control runs.
//   drop-delta1Y: removes the mixed term from the coproduct of X, so the
//     coproduct stops being an algebra map (witness: the word X d1) and the
//     antipode axiom breaks on X.
//   flip-antipode: negates the antipode of the last generator, breaking the
//     antipode axiom on that letter.
inline void apply_mutation(HopfPresentation& p, const std::string& mutation) {
  if (mutation == "drop-delta1Y") {
    if (!p.has_generator("X"))
      throw std::invalid_argument("mutation drop-delta1Y needs a preset with X");
    auto& list = p.coproduct_gen[static_cast<size_t>(p.index_of("X"))];
    if (list.size() < 3)
      throw std::invalid_argument("mutation drop-delta1Y: coproduct of X has no mixed term");
    list.pop_back();
    return;
  }
  if (mutation == "flip-antipode") {
    size_t g = p.primary_count() - 1;
    p.antipode_gen[g] = QScalar(-1) * p.antipode_gen[g];
    return;
  }
  throw std::invalid_argument("unknown mutation: " + mutation);
}

}  // namespace cobalt
