#include <catch2/catch_amalgamated.hpp>

#include <gmpxx.h>

#include "cobalt/presets.hpp"

using namespace cobalt;

namespace {

Word w_of(const HopfPresentation& p, std::initializer_list<std::pair<const char*, long>> fs) {
  Word w;
  for (const auto& [n, e] : fs) w.push_back({p.index_of(n), e});
  return canon_word(w);
}

Element el_of(std::initializer_list<std::pair<QScalar, Word>> terms) {
  Element e;
  for (const auto& [c, w] : terms) add_term(e, w, c);
  return e;
}

// Independent count for type A: the positive roots are the intervals
// [i..j], so the multiplicity of the k-th simple root in their sum is
// (number of intervals through k) = (k+1)(rank-k).
std::vector<long> interval_root_sum(long rank) {
  std::vector<long> v(static_cast<size_t>(rank));
  for (long k = 0; k < rank; ++k) v[static_cast<size_t>(k)] = (k + 1) * (rank - k);
  return v;
}

}  // namespace

TEST_CASE("cartan data and the weighted root sum", "[presets]") {
  for (const auto& [type, rank] : {std::pair<const char*, long>{"A1", 1}, {"A2", 2}, {"A3", 3}}) {
    CartanDatum c = cartan_datum(type);
    CHECK(c.rank == rank);
    CHECK(c.two_rho == interval_root_sum(rank));
    for (long i = 0; i < rank; ++i) {
      CHECK(c.d[static_cast<size_t>(i)] == 1);
      for (long j = 0; j < rank; ++j)
        CHECK(c.A[static_cast<size_t>(i)][static_cast<size_t>(j)] ==
              (i == j ? 2 : (std::labs(i - j) == 1 ? -1 : 0)));
    }
  }

  CHECK_THROWS_AS(cartan_datum("B2"), std::invalid_argument);

  CartanDatum bad{2, {{2, 1}, {-1, 2}}, {1, 1}, {2, 2}, "bad"};
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  CartanDatum skew{2, {{2, -2}, {-1, 2}}, {1, 1}, {2, 2}, "skew"};
  CHECK_THROWS_AS(skew.validate(), std::invalid_argument);
  CartanDatum diag{1, {{1}}, {1}, {1}, "diag"};
  CHECK_THROWS_AS(diag.validate(), std::invalid_argument);
}

TEST_CASE("every preset passes the hopf audit at length two", "[presets]") {
  for (const char* name : {"h1", "h1s", "f", "gl1aff", "w:1", "w:2", "uq:A1", "uq:A2",
                           "uq-borel-plus:A1", "uq-borel-minus:A1"}) {
    auto p = preset_by_name(name);
    auto rep = p.verify_hopf(2);
    INFO(name);
    CHECK(rep.pass());
    CHECK(rep.words_checked > 0);
  }
}

TEST_CASE("serre rewriting sends the lex-greatest word down", "[presets]") {
  auto p = build_uq(cartan_datum("A2"));
  QScalar two_q = q_int(2);  // q + q^-1

  Element left = p.reduce(w_of(p, {{"E2", 1}, {"E1", 2}}));
  CHECK(left == el_of({{two_q, w_of(p, {{"E1", 1}, {"E2", 1}, {"E1", 1}})},
                       {QScalar(-1), w_of(p, {{"E1", 2}, {"E2", 1}})}}));

  Element right = p.reduce(w_of(p, {{"E2", 2}, {"E1", 1}}));
  CHECK(right == el_of({{two_q, w_of(p, {{"E2", 1}, {"E1", 1}, {"E2", 1}})},
                        {QScalar(-1), w_of(p, {{"E1", 1}, {"E2", 2}})}}));

  // Both Serre targets are themselves normal forms.
  CHECK(p.reduce(w_of(p, {{"E1", 1}, {"E2", 1}, {"E1", 1}})) ==
        p.monomial(w_of(p, {{"E1", 1}, {"E2", 1}, {"E1", 1}})));

  // Distant generators commute in A3.
  auto a3 = build_uq(cartan_datum("A3"));
  CHECK(a3.reduce(w_of(a3, {{"E3", 1}, {"E1", 1}})) ==
        a3.monomial(w_of(a3, {{"E1", 1}, {"E3", 1}})));
  CHECK(a3.reduce(w_of(a3, {{"F3", 1}, {"F1", 1}})) ==
        a3.monomial(w_of(a3, {{"F1", 1}, {"F3", 1}})));
}

TEST_CASE("sigma is the weighted torus monomial", "[presets]") {
  auto a1 = build_uq(cartan_datum("A1"));
  MPI m1 = mpi_of(a1);
  CHECK(a1.word_str(m1.sigma) == "K");
  CHECK(m1.delta_label == "eps");
  CHECK(m1.sigma_label == "K_2rho");
  CHECK(m1.delta.at("K") == QScalar(1));
  CHECK(m1.delta.at("E").is_zero());
  CHECK(m1.delta.at("F").is_zero());

  auto a2 = build_uq(cartan_datum("A2"));
  CHECK(a2.word_str(mpi_of(a2).sigma) == "K1^2 K2^2");
  auto a3 = build_uq(cartan_datum("A3"));
  CHECK(a3.word_str(mpi_of(a3).sigma) == "K1^3 K2^4 K3^3");

  auto h = build_h1();
  MPI mh = mpi_of(h);
  CHECK(mh.sigma.empty());
  CHECK(mh.delta.at("Y") == QScalar(1));
  CHECK(mh.delta.at("X").is_zero());
  CHECK(mh.delta.at("d1").is_zero());
  CHECK(mh.delta_label == "delta");
  CHECK(mh.sigma_label == "1");

  auto g = build_gl1aff();
  CHECK_THROWS_AS(mpi_of(g), std::invalid_argument);
}

TEST_CASE("modular pairs are in involution", "[presets]") {
  auto a1 = build_uq(cartan_datum("A1"));
  auto rep1 = mpi_verify(a1, mpi_of(a1), 60, 7);
  CHECK(rep1.pass());
  CHECK(rep1.checked >= 60);

  auto a2 = build_uq(cartan_datum("A2"));
  CHECK(mpi_verify(a2, mpi_of(a2), 40, 7).pass());

  auto h = build_h1();
  MPI mh = mpi_of(h);
  auto reph = mpi_verify(h, mh, 60, 7);
  CHECK(reph.pass());

  // S_delta^2(X) = X, spelled out: S_delta(X) = S(X), and the second pass
  // uses delta(Y) = 1 to cancel the leftover d1 Y term.
  Element x = h.monomial(w_of(h, {{"X", 1}}));
  Element sdx = twisted_antipode(h, mh, x);
  CHECK(sdx == el_of({{QScalar(-1), w_of(h, {{"X", 1}})},
                      {QScalar(1), w_of(h, {{"d1", 1}, {"Y", 1}})}}));
  CHECK(twisted_antipode(h, mh, sdx) == x);

  auto hs = build_h1s();
  MPI ms = mpi_of(hs);
  CHECK(mpi_verify(hs, ms, 60, 7).pass());
  Element xs = hs.monomial(w_of(hs, {{"X", 1}}));
  CHECK(twisted_antipode(hs, ms, twisted_antipode(hs, ms, xs)) == xs);
}

TEST_CASE("trivial coefficients fail the involution on E", "[presets]") {
  auto a1 = build_uq(cartan_datum("A1"));
  auto rep = mpi_verify(a1, mpi_trivial(a1), 10, 7);
  CHECK(!rep.pass());
  bool on_e = false;
  for (const auto& f : rep.failures)
    if (f.identity == "S_delta^2 = Ad_sigma" && f.witness == "E") on_e = true;
  CHECK(on_e);

  // A non-group-like sigma is rejected up front.
  MPI bad = mpi_trivial(a1);
  bad.sigma = w_of(a1, {{"E", 1}});
  auto rep2 = mpi_verify(a1, bad, 0, 7);
  bool flagged = false;
  for (const auto& f : rep2.failures)
    if (f.identity == "sigma group-like") flagged = true;
  CHECK(flagged);
}

TEST_CASE("coproducts follow the binomial pattern", "[presets]") {
  auto p = build_gl1aff();
  int X = p.index_of("X"), Y = p.index_of("Y");
  auto binom = [](long n, long r) {
    mpz_class b;
    mpz_bin_uiui(b.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(r));
    return QScalar(b);
  };
  for (long a = 0; a <= 2; ++a)
    for (long b = 0; b <= 2; ++b) {
      if (a == 0 && b == 0) continue;
      Word w;
      if (a > 0) w.push_back({X, a});
      if (b > 0) w.push_back({Y, b});
      Element2 expect;
      for (long i = 0; i <= a; ++i)
        for (long j = 0; j <= b; ++j) {
          Word l, r;
          if (i > 0) l.push_back({X, i});
          if (j > 0) l.push_back({Y, j});
          if (a - i > 0) r.push_back({X, a - i});
          if (b - j > 0) r.push_back({Y, b - j});
          add_term2(expect, {l, r}, binom(a, i) * binom(b, j));
        }
      CHECK(p.coproduct(w) == expect);
    }
}

TEST_CASE("group algebra preset", "[presets]") {
  auto p = build_w(2);
  Word k1 = w_of(p, {{"K1", 1}});
  Element2 dk = p.coproduct(k1);
  Element2 expect;
  add_term2(expect, {k1, k1}, QScalar(1));
  CHECK(dk == expect);
  CHECK(p.counit(p.monomial(w_of(p, {{"K1", -1}}))) == QScalar(1));
  CHECK(p.antipode(w_of(p, {{"K1", 1}, {"K2", -1}})) ==
        p.monomial(w_of(p, {{"K1", -1}, {"K2", 1}})));

  // Exponent window 1 in each generator: 3 x 3 grid of monomials.
  auto basis = p.graded_basis({{"K1", 1}, {"K2", 1}}, std::nullopt);
  CHECK(basis.size() == 9);

  CHECK_THROWS_AS(build_w(0), std::invalid_argument);
}

TEST_CASE("borel halves keep one triangle", "[presets]") {
  auto bp = build_uq_borel(cartan_datum("A1"), true);
  CHECK(bp.has_generator("E"));
  CHECK(!bp.has_generator("F"));
  CHECK(bp.reduce(w_of(bp, {{"E", 1}, {"K", 1}})) ==
        bp.monomial(w_of(bp, {{"K", 1}, {"E", 1}}), QScalar::q_pow(-2)));

  auto bm = build_uq_borel(cartan_datum("A1"), false);
  CHECK(bm.has_generator("F"));
  CHECK(!bm.has_generator("E"));
  CHECK(bm.reduce(w_of(bm, {{"K", 1}, {"F", 1}})) ==
        bm.monomial(w_of(bm, {{"F", 1}, {"K", 1}}), QScalar::q_pow(-2)));
}

TEST_CASE("counit and antipode pins", "[presets]") {
  auto a1 = build_uq(cartan_datum("A1"));
  CHECK(a1.counit(a1.monomial(w_of(a1, {{"E", 1}}))).is_zero());
  CHECK(a1.counit(a1.monomial(w_of(a1, {{"F", 1}}))).is_zero());
  CHECK(a1.counit(a1.monomial(w_of(a1, {{"K", 1}}))) == QScalar(1));
  CHECK(a1.counit(a1.monomial(w_of(a1, {{"K", -1}}))) == QScalar(1));

  auto hs = build_h1s();
  Element2 dz = hs.coproduct(w_of(hs, {{"Z", 1}}));
  Element2 prim;
  add_term2(prim, {w_of(hs, {{"Z", 1}}), {}}, QScalar(1));
  add_term2(prim, {{}, w_of(hs, {{"Z", 1}})}, QScalar(1));
  CHECK(dz == prim);
  CHECK(hs.antipode(w_of(hs, {{"X", 1}})) ==
        el_of({{QScalar(-1), w_of(hs, {{"X", 1}})},
               {QScalar(1), w_of(hs, {{"Z", 1}, {"Y", 1}})}}));
  // [X, Z] = Z^2/2 under the chosen normal order.
  CHECK(hs.reduce(w_of(hs, {{"X", 1}, {"Z", 1}})) ==
        el_of({{QScalar(1), w_of(hs, {{"Z", 1}, {"X", 1}})},
               {QScalar(mpq_class(1, 2)), w_of(hs, {{"Z", 2}})}}));
}

TEST_CASE("preset dispatch and guard rails", "[presets]") {
  CHECK(preset_by_name("uq:A2").name == "uq:A2");
  CHECK(preset_by_name("w:3").primary_count() == 3);
  CHECK(preset_by_name("f").primary_count() == 6);
  CHECK_THROWS_WITH(preset_by_name("nope"), Catch::Matchers::ContainsSubstring("unknown preset"));
  CHECK_THROWS_AS(preset_by_name("uq:Z9"), std::invalid_argument);
  CHECK_THROWS_AS(build_h1(1), std::invalid_argument);
}

TEST_CASE("mutations corrupt exactly what they claim", "[presets]") {
  auto p = build_uq(cartan_datum("A1"));
  CHECK_THROWS_AS(apply_mutation(p, "drop-delta1Y"), std::invalid_argument);
  CHECK_THROWS_AS(apply_mutation(p, "no-such-defect"), std::invalid_argument);

  auto hs = build_h1s();
  apply_mutation(hs, "flip-antipode");
  auto rep = hs.verify_hopf(1);
  CHECK(!rep.pass());
  bool on_y = false;
  for (const auto& f : rep.failures)
    if (f.witness == "Y" && f.identity.rfind("antipode", 0) == 0) on_y = true;
  CHECK(on_y);
}
