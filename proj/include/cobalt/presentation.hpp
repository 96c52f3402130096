#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "cobalt/scalars.hpp"

namespace cobalt {

// A factor (generator index, nonzero exponent). Indices refer to primary
// generators; an inverse letter such as K^-1 is the factor (K, -1).
using Factor = std::pair<int, long>;
using Word = std::vector<Factor>;
using Element = std::map<Word, QScalar>;
using Word2 = std::pair<Word, Word>;
using Element2 = std::map<Word2, QScalar>;

struct StepBudgetExceeded : std::runtime_error {
  explicit StepBudgetExceeded(const std::string& m) : std::runtime_error(m) {}
};
struct CapOverflow : std::runtime_error {
  explicit CapOverflow(const std::string& m) : std::runtime_error(m) {}
};

struct Generator {
  std::string name;
  std::vector<long> grading;
  std::string inverse_of;  // empty for primary generators
};

// Merge adjacent factors with the same generator, drop zero exponents.
inline Word canon_word(const Word& w) {
  Word out;
  for (const auto& [g, e] : w) {
    if (e == 0) continue;
    if (!out.empty() && out.back().first == g) {
      out.back().second += e;
      if (out.back().second == 0) out.pop_back();
    } else {
      out.push_back({g, e});
    }
  }
  return out;
}

inline void add_term(Element& acc, const Word& w, const QScalar& c) {
  if (c.is_zero()) return;
  auto it = acc.find(w);
  if (it == acc.end()) {
    acc.emplace(w, c);
  } else {
    it->second += c;
    if (it->second.is_zero()) acc.erase(it);
  }
}

inline void add_term2(Element2& acc, const Word2& w, const QScalar& c) {
  if (c.is_zero()) return;
  auto it = acc.find(w);
  if (it == acc.end()) {
    acc.emplace(w, c);
  } else {
    it->second += c;
    if (it->second.is_zero()) acc.erase(it);
  }
}

inline Element operator+(const Element& a, const Element& b) {
  Element r = a;
  for (const auto& [w, c] : b) add_term(r, w, c);
  return r;
}

inline Element operator*(const QScalar& c, const Element& a) {
  Element r;
  if (c.is_zero()) return r;
  for (const auto& [w, x] : a) r.emplace(w, c * x);
  return r;
}

inline Element operator-(const Element& a, const Element& b) {
  return a + (QScalar(-1) * b);
}

enum class Strategy { leftmost, rightmost };

struct HopfReport {
  long words_checked = 0;
  long words_skipped = 0;  // words outside a preset's finite generator window
  struct Failure {
    std::string identity;
    std::string witness;
  };
  std::vector<Failure> failures;
  bool pass() const { return failures.empty(); }
};

class HopfPresentation {
 public:
  std::string name;
  std::vector<Generator> generators;  // external alphabet, inverses included
  // Rules on primary-indexed words; a missing rhs marks a cap overflow
  // sentinel (matching one is an error, never a silent truncation).
  std::vector<std::pair<Word, std::optional<Element>>> rules;
  std::vector<std::vector<std::tuple<QScalar, Word, Word>>> coproduct_gen;
  std::vector<QScalar> counit_gen;
  std::vector<Element> antipode_gen;
  long step_budget = 100000;

  int add_primary(const std::string& gname, std::vector<long> grading,
                  bool invertible = false) {
    int idx = static_cast<int>(primaries_.size());
    generators.push_back({gname, grading, ""});
    if (invertible) {
      std::vector<long> neg(grading);
      for (auto& x : neg) x = -x;
      generators.push_back({gname + "^-1", neg, gname});
    }
    primaries_.push_back({gname, std::move(grading), invertible});
    index_[gname] = idx;
    coproduct_gen.emplace_back();
    counit_gen.emplace_back(0);
    antipode_gen.emplace_back();
    return idx;
  }

  size_t primary_count() const { return primaries_.size(); }
  const std::string& gen_name(int i) const { return primaries_[static_cast<size_t>(i)].name; }
  bool invertible(int i) const { return primaries_[static_cast<size_t>(i)].invertible; }
  const std::vector<long>& gen_grading(int i) const {
    return primaries_[static_cast<size_t>(i)].grading;
  }
  int index_of(const std::string& gname) const {
    auto it = index_.find(gname);
    if (it == index_.end())
      throw std::invalid_argument("unknown generator: " + gname);
    return it->second;
  }
  bool has_generator(const std::string& gname) const { return index_.count(gname) > 0; }

  void add_rule(const Word& lhs, std::optional<Element> rhs) {
    rules.push_back({canon_word(lhs), std::move(rhs)});
  }

  // Resolve an alphabet letter (primary or inverse name) to a one-factor word.
  Word letter(const std::string& lname) const {
    for (const auto& g : generators) {
      if (g.name != lname) continue;
      if (g.inverse_of.empty()) return {{index_of(g.name), 1}};
      return {{index_of(g.inverse_of), -1}};
    }
    throw std::invalid_argument("unknown letter: " + lname);
  }

  std::vector<long> grade(const Word& w) const {
    std::vector<long> tot(grade_dim(), 0);
    for (const auto& [g, e] : w) {
      const auto& gr = gen_grading(g);
      for (size_t k = 0; k < tot.size(); ++k) tot[k] += gr[k] * e;
    }
    return tot;
  }
  size_t grade_dim() const {
    return primaries_.empty() ? 0 : primaries_[0].grading.size();
  }

  // Leftmost (or rightmost) redex: position, rule id, end surpluses.
  std::optional<std::tuple<size_t, size_t, long, long>> find_redex(
      const Word& w, Strategy strat = Strategy::leftmost) const {
    size_t n = w.size();
    for (size_t step = 0; step < n; ++step) {
      size_t i = (strat == Strategy::leftmost) ? step : n - 1 - step;
      for (size_t ri = 0; ri < rules.size(); ++ri) {
        const Word& lhs = rules[ri].first;
        size_t k = lhs.size();
        if (k == 0 || i + k > n) continue;
        bool ok = true;
        long pre = 0, post = 0;
        for (size_t t = 0; t < k && ok; ++t) {
          auto [g, e] = lhs[t];
          auto [G, E] = w[i + t];
          if (G != g || (E > 0) != (e > 0)) {
            ok = false;
            break;
          }
          if (t == 0) {
            // Whole surplus of a single-factor rule stays on the left.
            if (std::abs(E) < std::abs(e)) ok = false;
            else pre = E - e;
          } else if (t == k - 1) {
            if (std::abs(E) < std::abs(e)) ok = false;
            else post = E - e;
          } else if (E != e) {
            ok = false;
          }
        }
        if (ok) return std::make_tuple(i, ri, pre, post);
      }
    }
    return std::nullopt;
  }

  Element reduce(const Element& element, Strategy strat = Strategy::leftmost) const {
    Element work = element;
    Element done;
    long steps = 0;
    while (!work.empty()) {
      auto it = std::prev(work.end());
      Word w = it->first;
      QScalar c = it->second;
      work.erase(it);
      auto m = find_redex(w, strat);
      if (!m) {
        add_term(done, w, c);
        continue;
      }
      if (++steps > step_budget)
        throw StepBudgetExceeded("step budget exceeded while reducing " + word_str(w));
      auto [i, ri, pre, post] = *m;
      const auto& [lhs, rhs] = rules[ri];
      if (!rhs)
        throw CapOverflow("window cap exceeded: rule for " + word_str(lhs) +
                          " matched in " + word_str(w));
      size_t k = lhs.size();
      Word prefix(w.begin(), w.begin() + static_cast<long>(i));
      if (pre != 0) prefix.push_back({w[i].first, pre});
      Word suffix;
      if (post != 0) suffix.push_back({w[i + k - 1].first, post});
      suffix.insert(suffix.end(), w.begin() + static_cast<long>(i + k), w.end());
      for (const auto& [rw, rc] : *rhs) {
        Word nw = prefix;
        nw.insert(nw.end(), rw.begin(), rw.end());
        nw.insert(nw.end(), suffix.begin(), suffix.end());
        nw = canon_word(nw);
        QScalar nc = c * rc;
        auto wit = work.find(nw);
        if (wit != work.end()) {
          wit->second += nc;
          if (wit->second.is_zero()) work.erase(wit);
        } else {
          auto dit = done.find(nw);
          if (dit != done.end()) {
            dit->second += nc;
            if (dit->second.is_zero()) done.erase(dit);
          } else if (!nc.is_zero()) {
            work.emplace(std::move(nw), std::move(nc));
          }
        }
      }
    }
    return done;
  }

  Element reduce(const Word& w, Strategy strat = Strategy::leftmost) const {
    Element e;
    e.emplace(canon_word(w), QScalar(1));
    return reduce(e, strat);
  }

  Element multiply(const Element& a, const Element& b) const {
    Element out;
    for (const auto& [w1, c1] : a)
      for (const auto& [w2, c2] : b) {
        Word w = w1;
        w.insert(w.end(), w2.begin(), w2.end());
        add_term(out, canon_word(w), c1 * c2);
      }
    return reduce(out);
  }

  Element2 multiply2(const Element2& a, const Element2& b) const {
    Element2 out;
    for (const auto& [x, c1] : a)
      for (const auto& [y, c2] : b) {
        Word l = x.first;
        l.insert(l.end(), y.first.begin(), y.first.end());
        Word r = x.second;
        r.insert(r.end(), y.second.begin(), y.second.end());
        for (const auto& [w1, d1] : reduce(canon_word(l)))
          for (const auto& [w2, d2] : reduce(canon_word(r)))
            add_term2(out, {w1, w2}, c1 * c2 * d1 * d2);
      }
    return out;
  }

  // Coproduct of an inverse power of a group-like generator.
  std::vector<std::tuple<QScalar, Word, Word>> coproduct_inv(int g) const {
    const auto& base = coproduct_gen[static_cast<size_t>(g)];
    if (base.size() != 1 || !std::get<0>(base[0]).is_one())
      throw std::logic_error("negative exponent on non-group-like generator " + gen_name(g));
    auto inv = [](const Word& w) {
      Word r;
      for (auto it = w.rbegin(); it != w.rend(); ++it) r.push_back({it->first, -it->second});
      return r;
    };
    return {{QScalar(1), inv(std::get<1>(base[0])), inv(std::get<2>(base[0]))}};
  }

  Element2 coproduct(const Element& element) const {
    Element2 out;
    for (const auto& [w, c] : element) {
      Element2 cur;
      cur.emplace(Word2{{}, {}}, QScalar(1));
      for (const auto& [g, e] : w) {
        auto base = e > 0 ? coproduct_gen[static_cast<size_t>(g)] : coproduct_inv(g);
        Element2 factor;
        for (const auto& [bc, w1, w2] : base) add_term2(factor, {w1, w2}, bc);
        for (long t = 0; t < std::abs(e); ++t) cur = multiply2(cur, factor);
      }
      for (const auto& [k, d] : cur) add_term2(out, k, c * d);
    }
    return out;
  }

  Element2 coproduct(const Word& w) const {
    Element e;
    e.emplace(canon_word(w), QScalar(1));
    return coproduct(e);
  }

  QScalar counit(const Element& element) const {
    QScalar tot(0);
    for (const auto& [w, c] : element) {
      QScalar v(1);
      for (const auto& [g, e] : w) {
        const QScalar& ce = counit_gen[static_cast<size_t>(g)];
        if (ce.is_zero()) {
          v = QScalar(0);
          break;
        }
        v *= ce.pow(e);
      }
      tot += c * v;
    }
    return tot;
  }

  // S(g^-1) for group-like g with single-monomial antipode.
  Element antipode_inv_gen(int g) const {
    const Element& f = antipode_gen[static_cast<size_t>(g)];
    if (f.size() != 1 || !f.begin()->second.is_one())
      throw std::logic_error("negative exponent: antipode of " + gen_name(g) +
                             " is not a single monomial");
    Word r;
    const Word& w = f.begin()->first;
    for (auto it = w.rbegin(); it != w.rend(); ++it) r.push_back({it->first, -it->second});
    Element out;
    out.emplace(canon_word(r), QScalar(1));
    return out;
  }

  Element antipode(const Element& element) const {
    Element out;
    for (const auto& [w, c] : element) {
      Element cur;
      cur.emplace(Word{}, QScalar(1));
      for (auto it = w.rbegin(); it != w.rend(); ++it) {
        auto [g, e] = *it;
        Element f = e >= 0 ? antipode_gen[static_cast<size_t>(g)] : antipode_inv_gen(g);
        Element piece;
        piece.emplace(Word{}, QScalar(1));
        for (long t = 0; t < std::abs(e); ++t) piece = multiply(piece, f);
        cur = multiply(cur, piece);
      }
      for (const auto& [k, d] : cur) add_term(out, k, c * d);
    }
    return out;
  }

  Element antipode(const Word& w) const {
    Element e;
    e.emplace(canon_word(w), QScalar(1));
    return antipode(e);
  }

  Element unit() const {
    Element e;
    e.emplace(Word{}, QScalar(1));
    return e;
  }

  Element monomial(const Word& w, const QScalar& c = QScalar(1)) const {
    Element e;
    if (!c.is_zero()) e.emplace(canon_word(w), c);
    return e;
  }

  // --- display ---

  std::string factor_str(const Factor& f) const {
    std::string s = gen_name(f.first);
    if (f.second != 1) s += "^" + std::to_string(f.second);
    return s;
  }

  std::string word_str(const Word& w) const {
    if (w.empty()) return "1";
    std::string s;
    for (const auto& f : w) {
      if (!s.empty()) s += " ";
      s += factor_str(f);
    }
    return s;
  }

  std::string element_str(const Element& e) const {
    if (e.empty()) return "0";
    std::string s;
    for (const auto& [w, c] : e) {
      if (!s.empty()) s += " + ";
      s += "(" + c.str() + ")";
      if (!w.empty()) s += " " + word_str(w);
    }
    return s;
  }

  // Normal-form monomials whose per-generator total |exponent| stays within
  // caps (absent generators are capped at 0), optionally filtered to one
  // multigrade. Order: lexicographic on the exponent-total vector in block
  // order, ties broken by the factor sequence.
  std::vector<Word> graded_basis(const std::map<std::string, long>& caps,
                                 const std::optional<std::vector<long>>& grade_filter = {}) const {
    std::vector<long> cap(primary_count(), 0);
    for (const auto& [gname, v] : caps) cap[static_cast<size_t>(index_of(gname))] = v;
    std::vector<Word> found;
    std::vector<long> used(primary_count(), 0);
    Word cur;
    enumerate(cap, used, cur, found);
    std::vector<std::pair<std::vector<long>, Word>> keyed;
    for (auto& w : found) {
      if (grade_filter && grade(w) != *grade_filter) continue;
      std::vector<long> totals(primary_count(), 0);
      for (const auto& [g, e] : w) totals[static_cast<size_t>(g)] += e;
      keyed.push_back({std::move(totals), std::move(w)});
    }
    std::sort(keyed.begin(), keyed.end());
    std::vector<Word> out;
    out.reserve(keyed.size());
    for (auto& [k, w] : keyed) out.push_back(std::move(w));
    return out;
  }

  // --- Hopf axiom audit on all products of at most L alphabet letters ---

  HopfReport verify_hopf(long L) const {
    HopfReport rep;
    std::vector<Word> alphabet;
    std::vector<std::string> names;
    for (const auto& g : generators) {
      alphabet.push_back(letter(g.name));
      names.push_back(g.name);
    }
    std::vector<std::vector<size_t>> tuples = {{}};
    for (long len = 1; len <= L; ++len) {
      std::vector<std::vector<size_t>> next;
      for (const auto& t : tuples) {
        if (static_cast<long>(t.size()) != len - 1) continue;
        for (size_t a = 0; a < alphabet.size(); ++a) {
          auto nt = t;
          nt.push_back(a);
          next.push_back(nt);
        }
      }
      for (auto& t : next) check_word(t, alphabet, names, rep);
      tuples.insert(tuples.end(), next.begin(), next.end());
    }
    return rep;
  }

 private:
  struct Primary {
    std::string name;
    std::vector<long> grading;
    bool invertible;
  };

  void check_word(const std::vector<size_t>& t, const std::vector<Word>& alphabet,
                  const std::vector<std::string>& names, HopfReport& rep) const {
    std::string witness;
    for (size_t a : t) witness += (witness.empty() ? "" : " ") + names[a];
    try {
      check_word_inner(t, alphabet, witness, rep);
      ++rep.words_checked;
    } catch (const CapOverflow&) {
      // The word leaves the preset's finite generator window, so its Hopf
      // identities are not representable here.  Skip it rather than fail.
      ++rep.words_skipped;
    }
  }

  void check_word_inner(const std::vector<size_t>& t, const std::vector<Word>& alphabet,
                        const std::string& witness, HopfReport& rep) const {
    Word raw;
    for (size_t a : t) {
      raw.insert(raw.end(), alphabet[a].begin(), alphabet[a].end());
    }
    Element x = reduce(raw);
    auto fail = [&](const std::string& id) { rep.failures.push_back({id, witness}); };

    Element2 dx = coproduct(x);
    // Coassociativity via the triple coproduct computed both ways.
    using Word3 = std::tuple<Word, Word, Word>;
    std::map<Word3, QScalar> lhs3, rhs3;
    for (const auto& [pair, c] : dx) {
      for (const auto& [inner, d] : coproduct(monomial(pair.first))) {
        Word3 k{inner.first, inner.second, pair.second};
        auto it = lhs3.find(k);
        if (it == lhs3.end()) lhs3.emplace(k, c * d);
        else {
          it->second += c * d;
          if (it->second.is_zero()) lhs3.erase(it);
        }
      }
      for (const auto& [inner, d] : coproduct(monomial(pair.second))) {
        Word3 k{pair.first, inner.first, inner.second};
        auto it = rhs3.find(k);
        if (it == rhs3.end()) rhs3.emplace(k, c * d);
        else {
          it->second += c * d;
          if (it->second.is_zero()) rhs3.erase(it);
        }
      }
    }
    if (lhs3 != rhs3) fail("coassociativity");

    // Counit laws (eps (x) id) Delta = id = (id (x) eps) Delta.
    Element left, right;
    for (const auto& [pair, c] : dx) {
      add_term(left, pair.second, c * counit(monomial(pair.first)));
      add_term(right, pair.first, c * counit(monomial(pair.second)));
    }
    if (left != x) fail("counit-left");
    if (right != x) fail("counit-right");

    // Delta multiplicative: Delta(reduce(w)) equals the letterwise product.
    Element2 prod;
    prod.emplace(Word2{{}, {}}, QScalar(1));
    for (size_t a : t) prod = multiply2(prod, coproduct(monomial(alphabet[a])));
    if (prod != dx) fail("coproduct-algebra-map");

    // eps multiplicative.
    QScalar epsprod(1);
    for (size_t a : t) epsprod *= counit(monomial(alphabet[a]));
    if (epsprod != counit(x)) fail("counit-algebra-map");

    // Antipode axiom m(S (x) id)Delta = eta eps = m(id (x) S)Delta.
    Element sx1, sx2;
    for (const auto& [pair, c] : dx) {
      sx1 = sx1 + (c * multiply(antipode(monomial(pair.first)), monomial(pair.second)));
      sx2 = sx2 + (c * multiply(monomial(pair.first), antipode(monomial(pair.second))));
    }
    Element target = counit(x) * unit();
    if (reduce(sx1) != target) fail("antipode-left");
    if (reduce(sx2) != target) fail("antipode-right");
  }

  void enumerate(const std::vector<long>& cap, std::vector<long>& used, Word& cur,
                 std::vector<Word>& out) const {
    out.push_back(cur);
    for (size_t g = 0; g < primary_count(); ++g) {
      int gi = static_cast<int>(g);
      if (!cur.empty() && cur.back().first == gi) continue;
      long room = cap[g] - used[g];
      if (room <= 0) continue;
      for (int sign : {-1, 1}) {
        if (sign < 0 && !invertible(gi)) continue;
        for (long mag = 1; mag <= room; ++mag) {
          cur.push_back({gi, sign * mag});
          bool reducible = find_redex(cur).has_value();
          if (!reducible) {
            used[g] += mag;
            enumerate(cap, used, cur, out);
            used[g] -= mag;
          }
          cur.pop_back();
          // Ends of rule words absorb surplus, so once a magnitude turns
          // reducible every larger one does too.
          if (reducible) break;
        }
      }
    }
  }

  std::vector<Primary> primaries_;
  std::map<std::string, int> index_;
};

// --- structured-text interchange ---
//
// Line-oriented sections: generators, rules, coproduct, counit, antipode,
// order, grading. Scalars appear parenthesized in their textual form, words
// as space-separated factors, tensor legs separated by '|'. parse followed
// by serialize is byte-stable.

namespace interchange {

inline std::string element_text(const HopfPresentation& p, const Element& e) {
  if (e.empty()) return "(0)";
  std::string s;
  for (const auto& [w, c] : e) {
    if (!s.empty()) s += " + ";
    s += "(" + c.str() + ")";
    if (!w.empty()) s += " " + p.word_str(w);
  }
  return s;
}

inline std::string serialize(const HopfPresentation& p) {
  std::ostringstream out;
  out << "preset " << p.name << "\n";
  out << "[generators]\n";
  for (const auto& g : p.generators) {
    out << g.name;
    if (!g.inverse_of.empty()) out << " inverse_of=" << g.inverse_of;
    out << "\n";
  }
  out << "[rules]\n";
  for (const auto& [lhs, rhs] : p.rules) {
    out << p.word_str(lhs) << " -> ";
    out << (rhs ? element_text(p, *rhs) : std::string("!cap")) << "\n";
  }
  out << "[coproduct]\n";
  for (size_t i = 0; i < p.primary_count(); ++i) {
    out << p.gen_name(static_cast<int>(i)) << " -> ";
    std::string s;
    for (const auto& [c, w1, w2] : p.coproduct_gen[i]) {
      if (!s.empty()) s += " + ";
      s += "(" + c.str() + ") " + p.word_str(w1) + " | " + p.word_str(w2);
    }
    out << (s.empty() ? "(0)" : s) << "\n";
  }
  out << "[counit]\n";
  for (size_t i = 0; i < p.primary_count(); ++i)
    out << p.gen_name(static_cast<int>(i)) << " (" << p.counit_gen[i].str() << ")\n";
  out << "[antipode]\n";
  for (size_t i = 0; i < p.primary_count(); ++i)
    out << p.gen_name(static_cast<int>(i)) << " -> "
        << element_text(p, p.antipode_gen[i]) << "\n";
  out << "[order]\n";
  for (size_t i = 0; i < p.primary_count(); ++i)
    out << (i ? " " : "") << p.gen_name(static_cast<int>(i));
  out << "\n[grading]\n";
  for (size_t i = 0; i < p.primary_count(); ++i) {
    out << p.gen_name(static_cast<int>(i));
    for (long v : p.gen_grading(static_cast<int>(i))) out << " " << v;
    out << "\n";
  }
  return out.str();
}

namespace detail {

inline Factor parse_factor(const HopfPresentation& p, const std::string& tok) {
  size_t caret = tok.find('^');
  if (caret == std::string::npos) return {p.index_of(tok), 1};
  return {p.index_of(tok.substr(0, caret)), std::stol(tok.substr(caret + 1))};
}

// Parses "(c) w + (c) w | w + ..." into per-term scalars and tensor legs.
struct Term {
  QScalar coeff;
  std::vector<Word> legs;
};

inline std::vector<Term> parse_terms(const HopfPresentation& p, const std::string& text) {
  std::vector<Term> terms;
  size_t pos = 0;
  auto skip = [&] { while (pos < text.size() && text[pos] == ' ') ++pos; };
  while (true) {
    skip();
    if (pos >= text.size()) break;
    if (text[pos] != '(') throw std::invalid_argument("expected (coefficient) in: " + text);
    size_t depth = 0, end = pos;
    for (size_t i = pos; i < text.size(); ++i) {
      if (text[i] == '(') ++depth;
      if (text[i] == ')' && --depth == 0) {
        end = i;
        break;
      }
    }
    Term t;
    t.coeff = QScalar::parse(text.substr(pos + 1, end - pos - 1));
    t.legs.push_back({});
    pos = end + 1;
    while (true) {
      skip();
      if (pos >= text.size()) break;
      if (text[pos] == '+') {
        ++pos;
        break;
      }
      if (text[pos] == '|') {
        ++pos;
        t.legs.push_back({});
        continue;
      }
      size_t e = text.find(' ', pos);
      if (e == std::string::npos) e = text.size();
      std::string tok = text.substr(pos, e - pos);
      pos = e;
      if (tok != "1") t.legs.back().push_back(parse_factor(p, tok));
    }
    for (auto& leg : t.legs) leg = canon_word(leg);
    terms.push_back(std::move(t));
  }
  return terms;
}

inline Element parse_element(const HopfPresentation& p, const std::string& text) {
  Element e;
  for (const auto& t : parse_terms(p, text)) {
    if (t.legs.size() != 1) throw std::invalid_argument("unexpected tensor leg in: " + text);
    add_term(e, t.legs[0], t.coeff);
  }
  return e;
}

inline Word parse_word(const HopfPresentation& p, const std::string& text) {
  Word w;
  std::istringstream in(text);
  std::string tok;
  while (in >> tok)
    if (tok != "1") w.push_back(parse_factor(p, tok));
  return canon_word(w);
}

}  // namespace detail

inline HopfPresentation parse(const std::string& text) {
  std::istringstream in(text);
  std::string line, section;
  std::map<std::string, std::vector<std::string>> sections;
  std::string preset_name;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line.rfind("preset ", 0) == 0) {
      preset_name = line.substr(7);
      continue;
    }
    if (line.front() == '[' && line.back() == ']') {
      section = line.substr(1, line.size() - 2);
      sections[section];  // a header with no lines is still a present section
      continue;
    }
    sections[section].push_back(line);
  }
  for (const char* req : {"generators", "rules", "coproduct", "counit", "antipode", "order", "grading"})
    if (!sections.count(req)) throw std::invalid_argument("missing section: " + std::string(req));

  // Gradings keyed by name, read before generators are materialized.
  std::map<std::string, std::vector<long>> grading;
  for (const auto& l : sections["grading"]) {
    std::istringstream ls(l);
    std::string gname;
    ls >> gname;
    std::vector<long> v;
    long x;
    while (ls >> x) v.push_back(x);
    grading[gname] = v;
  }
  std::set<std::string> invertible;
  for (const auto& l : sections["generators"]) {
    std::istringstream ls(l);
    std::string gname, attr;
    ls >> gname >> attr;
    if (attr.rfind("inverse_of=", 0) == 0) invertible.insert(attr.substr(11));
  }

  HopfPresentation p;
  p.name = preset_name;
  {
    std::istringstream ls(sections["order"][0]);
    std::string gname;
    while (ls >> gname) {
      auto it = grading.find(gname);
      if (it == grading.end()) throw std::invalid_argument("ungraded generator: " + gname);
      p.add_primary(gname, it->second, invertible.count(gname) > 0);
    }
  }
  for (const auto& l : sections["rules"]) {
    size_t arrow = l.find(" -> ");
    if (arrow == std::string::npos) throw std::invalid_argument("bad rule line: " + l);
    Word lhs = detail::parse_word(p, l.substr(0, arrow));
    std::string rhs = l.substr(arrow + 4);
    if (rhs == "!cap") p.add_rule(lhs, std::nullopt);
    else p.add_rule(lhs, detail::parse_element(p, rhs));
  }
  auto head = [](const std::string& l, size_t& cut) {
    size_t arrow = l.find(" -> ");
    if (arrow == std::string::npos) throw std::invalid_argument("bad map line: " + l);
    cut = arrow;
    return l.substr(0, arrow);
  };
  for (const auto& l : sections["coproduct"]) {
    size_t cut;
    int g = p.index_of(head(l, cut));
    for (const auto& t : detail::parse_terms(p, l.substr(cut + 4))) {
      if (t.coeff.is_zero()) continue;
      if (t.legs.size() != 2) throw std::invalid_argument("coproduct needs two legs: " + l);
      p.coproduct_gen[static_cast<size_t>(g)].push_back({t.coeff, t.legs[0], t.legs[1]});
    }
  }
  for (const auto& l : sections["counit"]) {
    std::istringstream ls(l);
    std::string gname;
    ls >> gname;
    std::string rest;
    std::getline(ls, rest);
    size_t o = rest.find('('), c = rest.rfind(')');
    if (o == std::string::npos || c == std::string::npos)
      throw std::invalid_argument("bad counit line: " + l);
    p.counit_gen[static_cast<size_t>(p.index_of(gname))] =
        QScalar::parse(rest.substr(o + 1, c - o - 1));
  }
  for (const auto& l : sections["antipode"]) {
    size_t cut;
    int g = p.index_of(head(l, cut));
    p.antipode_gen[static_cast<size_t>(g)] = detail::parse_element(p, l.substr(cut + 4));
  }
  return p;
}

}  // namespace interchange

}  // namespace cobalt
