#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "cobalt/coextension.hpp"

using namespace cobalt;

namespace {

Word w_of(const HopfPresentation& p, std::initializer_list<std::pair<const char*, long>> fs) {
  Word w;
  for (const auto& [n, e] : fs) w.push_back({p.index_of(n), e});
  return canon_word(w);
}

}  // namespace

TEST_CASE("projection splits the normal basis", "[coextension]") {
  auto p = build_uq(cartan_datum("A1"));
  auto e = make_coextension(p, {"E", "F"}, w_of(p, {{"K", 1}}));
  CHECK(e.label == "kill:E,F");

  CHECK(project(e, w_of(p, {{"K", 2}})) == w_of(p, {{"K", 2}}));
  CHECK(!project(e, w_of(p, {{"K", 1}, {"E", 1}})).has_value());
  CHECK(project(e, Word{}) == Word{});
  CHECK(!project_reduced(e, Word{}).has_value());
  CHECK(project_reduced(e, w_of(p, {{"K", -1}})) == w_of(p, {{"K", -1}}));

  // Quotient coproduct drops units and killed legs.
  auto h = build_h1();
  auto he = make_coextension(h, {"X", "Y"}, {});
  Element2 qd = quotient_coproduct(he, w_of(h, {{"d2", 1}}));
  Element2 expect;
  add_term2(expect, {w_of(h, {{"d1", 1}}), w_of(h, {{"d1", 1}})}, QScalar(1));
  CHECK(qd == expect);
}

TEST_CASE("membership needs the sigma twist", "[coextension]") {
  auto p = build_uq(cartan_datum("A1"));
  Word k = w_of(p, {{"K", 1}});
  auto e = make_coextension(p, {"F"}, k);

  // sigma F is a cotensor element over the quotient that kills F; its
  // normal form is a scalar multiple of the word F K.
  auto kf = chain_term(1, {w_of(p, {{"F", 1}, {"K", 1}})});
  CHECK(membership_check(e, kf).member);

  // Without the twist the edge condition leaves F (x) (1 - K).
  auto f = chain_term(1, {w_of(p, {{"F", 1}})});
  auto r = membership_check(e, f);
  CHECK(!r.member);
  CHECK(r.residual == "1 · F ⊗ 1 + -1 · F ⊗ K");

  // Degree-two junctions: K^-1 E (x) E passes, E (x) E does not.
  auto e2 = make_coextension(p, {"E", "F"}, k);
  Word kie = w_of(p, {{"K", -1}, {"E", 1}});
  Word ee = w_of(p, {{"E", 1}});
  CHECK(membership_check(e2, chain_term(2, {kie, ee})).member);
  CHECK(!membership_check(e2, chain_term(2, {ee, ee})).member);
  CHECK(membership_check(e2, chain_term(0, {})).member);
}

TEST_CASE("cotensor kernel inside a window", "[coextension]") {
  auto p = build_uq(cartan_datum("A1"));
  auto e = make_coextension(p, {"E", "F"}, w_of(p, {{"K", 1}}));
  Window win{1, {{"E", 1}, {"F", 1}, {"K", 1}}, std::nullopt, false};
  auto basis = window_basis(p, win);

  auto kernel = cotensor_kernel(e, basis);
  CHECK(kernel.size() == 4);

  // Each kernel vector is a genuine member, and the expected four words
  // E, K, F E, K F all lie in the span.
  auto ech = echelonize(kernel);
  for (const auto& row : kernel) {
    ChainElement c = chain_zero(1);
    for (size_t i = 0; i < basis.size(); ++i) add_chain(c, basis[i], row[i]);
    CHECK(membership_check(e, c).member);
  }
  for (auto member : {w_of(p, {{"E", 1}}), w_of(p, {{"K", 1}}),
                      w_of(p, {{"F", 1}, {"E", 1}}), w_of(p, {{"F", 1}, {"K", 1}})}) {
    QRow v(basis.size(), QScalar(0));
    bool found = false;
    for (size_t i = 0; i < basis.size(); ++i)
      if (basis[i] == Tensor{member}) {
        v[i] = QScalar(1);
        found = true;
      }
    CHECK(found);
    CHECK(in_rowspace(v, ech));
  }

  // F alone is not in the span.
  QRow vf(basis.size(), QScalar(0));
  for (size_t i = 0; i < basis.size(); ++i)
    if (basis[i] == Tensor{w_of(p, {{"F", 1}})}) vf[i] = QScalar(1);
  CHECK(!in_rowspace(vf, ech));
}

TEST_CASE("tagged differentials anticommute and square to zero", "[coextension]") {
  auto h = build_h1();
  auto he = make_coextension(h, {"X", "Y"}, {});
  auto p = build_uq(cartan_datum("A1"));
  auto pe = make_coextension(p, {"E", "F"}, w_of(p, {{"K", 1}}));

  auto check_squares = [](const Coextension& e, const std::vector<Word>& whole,
                          const std::vector<Word>& reduced, unsigned seed) {
    std::mt19937 rng(seed);
    std::uniform_int_distribution<size_t> pw(0, whole.size() - 1);
    std::uniform_int_distribution<size_t> pr(0, reduced.size() - 1);
    std::uniform_int_distribution<int> tag(0, 1);
    std::uniform_int_distribution<long> coeff(-3, 3);
    for (long n = 1; n <= 3; ++n) {
      for (int s = 0; s < 6; ++s) {
        TaggedChain x = tagged_zero(n);
        for (int t = 0; t < 2; ++t) {
          TaggedTensor tt(static_cast<size_t>(n));
          for (auto& slot : tt) {
            bool red = tag(rng) == 1;
            slot = red ? TaggedSlot{true, reduced[pr(rng)]}
                       : TaggedSlot{false, whole[pw(rng)]};
          }
          add_tagged(x, tt, QScalar(coeff(rng)));
        }
        if (x.is_zero()) continue;
        CHECK(z_d0(e, z_d0(e, x)).is_zero());
        CHECK(z_d1(e, z_d1(e, x)).is_zero());
        CHECK((z_d0(e, z_d1(e, x)) + z_d1(e, z_d0(e, x))).is_zero());
        CHECK(z_b(e, z_b(e, x)).is_zero());
      }
    }
  };

  check_squares(he,
                {Word{}, w_of(h, {{"d1", 1}}), w_of(h, {{"X", 1}}), w_of(h, {{"Y", 1}}),
                 w_of(h, {{"d1", 1}, {"Y", 1}})},
                {w_of(h, {{"d1", 1}}), w_of(h, {{"d2", 1}})}, 19);
  check_squares(pe,
                {Word{}, w_of(p, {{"E", 1}}), w_of(p, {{"F", 1}}), w_of(p, {{"K", 1}}),
                 w_of(p, {{"K", 1}, {"F", 1}})},
                {w_of(p, {{"K", 1}}), w_of(p, {{"K", -1}})}, 19);
}

TEST_CASE("tagged pins in low degree", "[coextension]") {
  auto p = build_uq(cartan_datum("A1"));
  auto e = make_coextension(p, {"E", "F"}, w_of(p, {{"K", 1}}));
  Word k = w_of(p, {{"K", 1}});

  auto one = tagged_term(0, {});
  CHECK(z_d0(e, one) == tagged_term(1, {{true, k}}, QScalar(-1)));
  CHECK(z_d1(e, one) ==
        tagged_term(1, {{false, {}}}) - tagged_term(1, {{false, k}}));

  auto h = build_h1();
  auto he = make_coextension(h, {"X", "Y"}, {});
  CHECK(z_d0(he, tagged_term(0, {})).is_zero());
  CHECK(z_d1(he, tagged_term(0, {})).is_zero());

  CHECK(bidegree({{false, k}, {true, k}, {false, {}}}) == std::make_pair(2L, 1L));
  CHECK(tagged_str(p, tagged_term(2, {{false, w_of(p, {{"E", 1}})}, {true, k}})) ==
        "1 · E ⊗ [K]");

  // Tagged slice bases respect pattern, projectability, and grade.
  std::vector<TaggedTensor> tb = tagged_basis(
      he, {false, true}, {{"d1", 1}, {"X", 1}, {"Y", 1}}, std::vector<long>{1});
  CHECK(tb.size() == 2);
  for (const auto& t : tb) {
    CHECK(!t[0].reduced);
    CHECK(t[1].reduced);
    CHECK(t[1].w == w_of(h, {{"d1", 1}}));
  }
}

TEST_CASE("cosemisimple families are twisted arrangements", "[coextension]") {
  auto p = build_uq(cartan_datum("A1"));
  Word k = w_of(p, {{"K", 1}});
  auto e = make_coextension(p, {"E", "F"}, k);

  for (long deg : {1L, 2L, 3L}) {
    auto fam = cosemisimple_cotor(e, {"E"}, {deg}, deg);
    CHECK(fam.dim == 1);
    CHECK(fam.certified);
  }
  auto fam2 = cosemisimple_cotor(e, {"E"}, {2}, 2);
  CHECK(fam2.basis ==
        std::vector<Tensor>{{w_of(p, {{"K", -1}, {"E", 1}}), w_of(p, {{"E", 1}})}});
  CHECK(cosemisimple_cotor(e, {"E"}, {2}, 3).dim == 0);

  // The minus letter picks up the sigma twist itself.
  auto ef = make_coextension(p, {"F"}, k);
  auto famf = cosemisimple_cotor(ef, {"F"}, {1}, 1);
  CHECK(famf.dim == 1);
  CHECK(famf.certified);
  CHECK(famf.basis == std::vector<Tensor>{{w_of(p, {{"F", 1}, {"K", 1}})}});

  // Rank two: multinomial counting with certificates.
  auto a2 = build_uq(cartan_datum("A2"));
  auto e2 = make_coextension(a2, {"E1", "E2", "F1", "F2"}, mpi_of(a2).sigma);
  CHECK(cosemisimple_cotor(e2, {"E1", "E2"}, {1, 0}, 1).dim == 1);
  auto mixed = cosemisimple_cotor(e2, {"E1", "E2"}, {1, 1}, 2);
  CHECK(mixed.dim == 2);
  CHECK(mixed.certified);
  auto heavy = cosemisimple_cotor(e2, {"E1", "E2"}, {2, 1}, 3);
  CHECK(heavy.dim == 3);
  CHECK(heavy.certified);
  CHECK(heavy.weight == std::vector<long>{2, 1});
}
