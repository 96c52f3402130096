#include <catch2/catch_amalgamated.hpp>

#include "cobalt/presets.hpp"
#include "cobalt/tensorspace.hpp"

using namespace cobalt;

namespace {

Word w_of(const HopfPresentation& p, std::initializer_list<std::pair<const char*, long>> fs) {
  Word w;
  for (const auto& [n, e] : fs) w.push_back({p.index_of(n), e});
  return canon_word(w);
}

}  // namespace

TEST_CASE("chain arithmetic cancels and guards degree", "[tensorspace]") {
  auto p = build_uq(cartan_datum("A1"));
  Word e = w_of(p, {{"E", 1}}), f = w_of(p, {{"F", 1}});
  auto c1 = chain_term(2, {e, f});
  auto c2 = chain_term(2, {e, f}, QScalar(-1));
  CHECK((c1 + c2).is_zero());
  CHECK((QScalar(0) * c1).is_zero());
  CHECK((c1 - c1).is_zero());
  auto c3 = chain_term(2, {f, e}, QScalar(2));
  CHECK((c1 + c3).terms.size() == 2);
  CHECK_THROWS_AS(c1 + chain_term(1, {e}), std::logic_error);
  ChainElement bad = chain_zero(2);
  CHECK_THROWS_AS(add_chain(bad, {e}, QScalar(1)), std::logic_error);

  // Degree zero is the scalar line, keyed by the empty tuple.
  auto one = chain_term(0, {});
  CHECK(one.terms.at({}) == QScalar(1));
}

TEST_CASE("slot operations distribute over terms", "[tensorspace]") {
  auto p = build_uq(cartan_datum("A1"));
  Word e = w_of(p, {{"E", 1}}), f = w_of(p, {{"F", 1}}), k = w_of(p, {{"K", 1}});
  auto ef = chain_term(2, {e, f});

  // Splitting slot 0 with the coproduct: Delta(E) = E (x) K + 1 (x) E.
  auto split = split_slot(ef, 0, [&](const Word& w) { return p.coproduct(w); });
  CHECK(split.degree == 3);
  auto expect = chain_term(3, {e, k, f}) + chain_term(3, {{}, e, f});
  CHECK(split == expect);

  // Contracting with the counit kills E and keeps K.
  auto eps = [&](const Word& w) { return p.counit(p.monomial(w)); };
  CHECK(contract_slot(chain_term(2, {k, f}), 0, eps) == chain_term(1, {f}));
  CHECK(contract_slot(ef, 0, eps).is_zero());

  // Mapping a slot through the antipode: S(E) = -E K^-1 = -q^2 K^-1 E.
  auto mapped = map_slot(chain_term(1, {e}), 0,
                         [&](const Word& w) { return p.antipode(w); });
  CHECK(mapped == chain_term(1, {w_of(p, {{"K", -1}, {"E", 1}})}, -QScalar::q_pow(2)));

  // Insertions are positional.
  CHECK(insert_slot(ef, 0, k) == chain_term(3, {k, e, f}));
  CHECK(insert_slot(ef, 2, {}) == chain_term(3, {e, f, {}}));
}

TEST_CASE("window bases enumerate weighted tensors", "[tensorspace]") {
  auto h = build_h1();
  std::map<std::string, long> caps{{"d1", 1}, {"d2", 1}, {"X", 1}, {"Y", 1}};

  Window w1{1, caps, std::vector<long>{1}, false};
  auto b1 = window_basis(h, w1);
  std::vector<std::string> names;
  for (const auto& t : b1) names.push_back(h.word_str(t[0]));
  CHECK(names == std::vector<std::string>{"X", "X Y", "d1", "d1 Y"});

  // Two normalized slots of total weight one: a weight-zero slot must be a
  // pure Y power, so each tensor pairs Y against a weight-one word.
  Window w2{2, caps, std::vector<long>{1}, true};
  auto b2 = window_basis(h, w2);
  CHECK(b2.size() == 8);
  for (const auto& t : b2) {
    CHECK(t.size() == 2);
    CHECK(tensor_grade(h, t) == std::vector<long>{1});
    for (const auto& w : t) CHECK(!w.empty());
  }

  // Degree zero keeps the scalar line only at trivial grade.
  Window w0{0, caps, std::vector<long>{0}, false};
  CHECK(window_basis(h, w0).size() == 1);
  Window w0bad{0, caps, std::vector<long>{1}, false};
  CHECK(window_basis(h, w0bad).empty());

  // Unfiltered enumeration is the full cartesian power.
  auto wv = build_w(1);
  Window wall{2, {{"K", 1}}, std::nullopt, false};
  CHECK(window_basis(wv, wall).size() == 9);
}

TEST_CASE("coordinates split into span and residue", "[tensorspace]") {
  auto p = build_uq(cartan_datum("A1"));
  Word e = w_of(p, {{"E", 1}}), f = w_of(p, {{"F", 1}});
  Window win{1, {{"E", 1}, {"F", 1}, {"K", 1}}, std::nullopt, false};
  auto basis = window_basis(p, win);

  auto inside = chain_term(1, {e}, QScalar(3)) + chain_term(1, {f}, -q_int(2));
  auto co = coordinates(inside, basis);
  CHECK(co.inside());
  QScalar got_e(0), got_f(0);
  for (size_t i = 0; i < basis.size(); ++i) {
    if (basis[i][0] == e) got_e = co.coeffs[i];
    if (basis[i][0] == f) got_f = co.coeffs[i];
  }
  CHECK(got_e == QScalar(3));
  CHECK(got_f == -q_int(2));

  // E^2 exceeds the cap and must land in the residue, not vanish.
  auto outside = inside + chain_term(1, {w_of(p, {{"E", 2}})});
  auto co2 = coordinates(outside, basis);
  CHECK(!co2.inside());
  CHECK(co2.residue == chain_term(1, {w_of(p, {{"E", 2}})}));
}

TEST_CASE("chain strings are deterministic", "[tensorspace]") {
  auto p = build_uq(cartan_datum("A1"));
  Word e = w_of(p, {{"E", 1}}), f = w_of(p, {{"F", 1}});
  CHECK(chain_str(p, chain_zero(2)) == "0");
  CHECK(chain_str(p, chain_term(0, {}, QScalar(2))) == "2");
  CHECK(chain_str(p, chain_term(2, {e, f}, q_int(2))) ==
        "(q + q^-1) · E ⊗ F");
  auto mix = chain_term(2, {e, {}}) + chain_term(2, {{}, f}, QScalar(-2));
  CHECK(chain_str(p, mix) == "-2 · 1 ⊗ F + 1 · E ⊗ 1");
}
