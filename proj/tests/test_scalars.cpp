#include <catch2/catch_amalgamated.hpp>

#include <map>
#include <random>

#include "cobalt/linalg.hpp"
#include "cobalt/scalars.hpp"

using cobalt::Laurent;
using cobalt::QScalar;

namespace {

// Independent oracle: Gaussian recursion [n,r] = q^r [n-1,r] + q^(r-n) [n-1,r-1],
// computed over plain Laurent polynomials without going through the field.
Laurent gauss_binomial(long n, long r) {
  if (r < 0 || r > n) return Laurent(0);
  if (r == 0 || r == n) return Laurent(1);
  return Laurent::monomial(1, r) * gauss_binomial(n - 1, r) +
         Laurent::monomial(1, r - n) * gauss_binomial(n - 1, r - 1);
}

mpz_class choose(long n, long r) {
  mpz_class c;
  mpz_bin_uiui(c.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(r));
  return c;
}

QScalar rand_scalar(std::mt19937& rng) {
  std::uniform_int_distribution<int> coeff(-4, 4);
  std::uniform_int_distribution<int> expo(-3, 3);
  std::uniform_int_distribution<int> terms(1, 3);
  auto poly = [&] {
    Laurent a;
    int t = terms(rng);
    for (int i = 0; i < t; ++i) a = a + Laurent::monomial(coeff(rng), expo(rng));
    return a;
  };
  Laurent num = poly();
  Laurent den = poly();
  while (den.is_zero()) den = poly();
  return QScalar(num, den);
}

}  // namespace

TEST_CASE("laurent arithmetic basics", "[scalars]") {
  Laurent q = Laurent::monomial(1, 1);
  Laurent one(1);
  CHECK((q * q).str() == "q^2");
  CHECK((q + one).str() == "q + 1");
  CHECK((q - q).is_zero());
  CHECK(Laurent::monomial(-3, -2).str() == "-3*q^-2");
  CHECK((q.pow(4) + q.pow(2) + Laurent(2) + Laurent::monomial(1, -2) + Laurent::monomial(1, -4)).str() ==
        "q^4 + q^2 + 2 + q^-2 + q^-4");
  CHECK(Laurent(0).str() == "0");
  CHECK((one - q).str() == "-q + 1");
}

TEST_CASE("laurent gcd and exact division", "[scalars]") {
  Laurent q = Laurent::monomial(1, 1);
  Laurent a = (q.pow(2) - Laurent(1)) * (q + Laurent(2));
  Laurent b = (q.pow(2) - Laurent(1)) * (q - Laurent(3));
  Laurent g = Laurent::gcd(a, b);
  CHECK(g == q.pow(2) - Laurent(1));
  CHECK(Laurent::divexact(a, g) == q + Laurent(2));
  CHECK_THROWS(Laurent::divexact(q + Laurent(1), q - Laurent(1)));

  Laurent c = Laurent(6) * q.pow(2);
  Laurent d = Laurent(4) * q.pow(5);
  CHECK(Laurent::gcd(c, d) == Laurent(2));
}

TEST_CASE("qscalar canonical form", "[scalars]") {
  QScalar q = QScalar::q();
  QScalar r = (q * q - QScalar(1)) / (q - QScalar(1));
  CHECK(r == q + QScalar(1));
  CHECK(r.is_laurent());

  // Denominator normalization: lowest exponent 0, positive leading coefficient.
  QScalar s = QScalar(1) / (QScalar::q_pow(-1) - QScalar::q_pow(1));
  CHECK(s.den().lo() == 0);
  CHECK(s.den().lead() > 0);
  CHECK(s * (QScalar::q_pow(-1) - QScalar::q_pow(1)) == QScalar(1));

  CHECK((QScalar(0) / QScalar(5)).den() == Laurent(1));
  CHECK(QScalar(Laurent(2), Laurent(4)) == QScalar(Laurent(1), Laurent(2)));
}

TEST_CASE("balanced q-integers", "[scalars]") {
  CHECK(cobalt::q_int(0).is_zero());
  CHECK(cobalt::q_int(1) == QScalar(1));
  CHECK(cobalt::q_int(2).str() == "q + q^-1");
  CHECK(cobalt::q_int(3).str() == "q^2 + 1 + q^-2");
  CHECK(cobalt::q_int(-2) == -cobalt::q_int(2));
  // (n)_q * (q - q^-1) == q^n - q^-n
  for (long n = 1; n <= 6; ++n) {
    QScalar lhs = cobalt::q_int(n) * (QScalar::q() - QScalar::q_pow(-1));
    CHECK(lhs == QScalar::q_pow(n) - QScalar::q_pow(-n));
  }
}

TEST_CASE("q-binomial table against recursion oracle", "[scalars]") {
  for (long n = 0; n <= 8; ++n) {
    for (long r = 0; r <= n; ++r) {
      QScalar lib = cobalt::q_binomial(n, r);
      INFO("n=" << n << " r=" << r << " lib=" << lib.str());
      CHECK(lib.is_laurent());
      CHECK(lib.num() == gauss_binomial(n, r));
      CHECK(lib == cobalt::q_binomial(n, n - r));
      CHECK(lib.specialize(1) == mpq_class(choose(n, r)));
    }
  }
  CHECK(cobalt::q_binomial(4, 2).str() == "q^4 + q^2 + 2 + q^-2 + q^-4");
  CHECK(cobalt::q_binomial(3, 1).str() == "q^2 + 1 + q^-2");
  CHECK(cobalt::q_binomial(5, 7).is_zero());
}

TEST_CASE("specialization", "[scalars]") {
  CHECK(cobalt::q_int(2).specialize(2) == mpq_class(5, 2));
  CHECK(cobalt::q_int(7).specialize(1) == 7);
  CHECK(cobalt::q_binomial(4, 2).specialize(1) == 6);
  QScalar pole = QScalar(1) / (QScalar::q() - QScalar(2));
  CHECK_THROWS_AS(pole.specialize(2), cobalt::specialize_pole);
  CHECK_THROWS(pole.specialize(0));
  QScalar neg = QScalar(1) / (QScalar::q() + QScalar::q_pow(-1));
  CHECK(neg.specialize(mpq_class(1, 2)) == mpq_class(2, 5));
}

TEST_CASE("field axioms on random elements", "[scalars]") {
  std::mt19937 rng(20260819);
  for (int i = 0; i < 200; ++i) {
    QScalar a = rand_scalar(rng), b = rand_scalar(rng), c = rand_scalar(rng);
    CHECK(a + b == b + a);
    CHECK(a * b == b * a);
    CHECK((a + b) + c == a + (b + c));
    CHECK((a * b) * c == a * (b * c));
    CHECK(a * (b + c) == a * b + a * c);
    CHECK(a - a == QScalar(0));
    if (!a.is_zero()) {
      CHECK(a * a.inv() == QScalar(1));
      // Reduced-fraction invariant: num and den share no factor.
      CHECK(Laurent::gcd(a.num(), a.den()) == Laurent(1));
      CHECK(a.den().lo() == 0);
      CHECK(a.den().lead() > 0);
    }
    // Spot-check against rational specialization at q = 3.
    mpq_class q0(3);
    try {
      mpq_class lhs = (a * b + c).specialize(q0);
      CHECK(lhs == a.specialize(q0) * b.specialize(q0) + c.specialize(q0));
    } catch (const cobalt::specialize_pole&) {
    }
  }
}

TEST_CASE("parse and print round-trip", "[scalars]") {
  auto rt = [](const QScalar& v) {
    QScalar back = QScalar::parse(v.str());
    CHECK(back == v);
  };
  rt(QScalar(0));
  rt(QScalar(1));
  rt(QScalar(-17));
  rt(cobalt::q_binomial(4, 2));
  rt(QScalar(1) / (QScalar::q() - QScalar::q_pow(-1)));
  rt((QScalar(3) * QScalar::q_pow(-5) + QScalar(2)) / (QScalar::q() + QScalar(7)));
  CHECK(QScalar::parse("q + q^-1") == cobalt::q_int(2));
  CHECK(QScalar::parse("(q^2 - 1)/(q - 1)") == QScalar::q() + QScalar(1));
  CHECK(QScalar::parse("-2*q^3") == QScalar(-2) * QScalar::q_pow(3));
  CHECK_THROWS(QScalar::parse(""));
  CHECK_THROWS(QScalar::parse("q +"));

  std::mt19937 rng(77);
  for (int i = 0; i < 50; ++i) rt(rand_scalar(rng));
}

TEST_CASE("rank with known row structure", "[scalars]") {
  using cobalt::QMatrix;
  using cobalt::QRow;
  QScalar q = QScalar::q();
  std::mt19937 rng(4242);
  std::uniform_int_distribution<int> coeff(-3, 3);

  for (int trial = 0; trial < 20; ++trial) {
    size_t m = 6, r = 1 + static_cast<size_t>(trial % 4);
    // Seed rows with an embedded identity block so they are independent by
    // construction, then pad with random combinations of them.
    QMatrix rows;
    for (size_t i = 0; i < r; ++i) {
      QRow row(m, QScalar(0));
      row[i] = QScalar(1);
      for (size_t j = r; j < m; ++j)
        row[j] = QScalar(coeff(rng)) * q.pow(coeff(rng));
      rows.push_back(row);
    }
    QMatrix mat = rows;
    for (int extra = 0; extra < 4; ++extra) {
      QRow combo(m, QScalar(0));
      for (size_t i = 0; i < r; ++i) {
        QScalar f = QScalar(coeff(rng)) * q.pow(coeff(rng));
        for (size_t j = 0; j < m; ++j) combo[j] += f * rows[i][j];
      }
      mat.push_back(combo);
    }
    CHECK(cobalt::checked_rank(mat, "test") == r);
    QMatrix kernel = cobalt::left_kernel(mat);
    CHECK(kernel.size() == mat.size() - r);
    for (const auto& c : kernel) {
      QRow image(m, QScalar(0));
      for (size_t i = 0; i < mat.size(); ++i)
        for (size_t j = 0; j < m; ++j) image[j] += c[i] * mat[i][j];
      CHECK(cobalt::is_zero_row(image));
    }
  }
}

TEST_CASE("echelon residues and intersections", "[scalars]") {
  using cobalt::QMatrix;
  using cobalt::QRow;
  QScalar q = QScalar::q();
  QMatrix a = {
      {QScalar(1), QScalar(0), q},
      {QScalar(0), QScalar(1), QScalar(1)},
  };
  auto ech = cobalt::echelonize(a);
  CHECK(ech.rows.size() == 2);
  QRow v = {QScalar(2), q, QScalar(3) * q};
  CHECK(cobalt::in_rowspace(v, ech));
  QRow w = {QScalar(0), QScalar(0), QScalar(1)};
  CHECK(!cobalt::in_rowspace(w, ech));

  QMatrix b = {
      {QScalar(1), QScalar(0), q},
      {QScalar(0), QScalar(0), QScalar(1)},
  };
  CHECK(cobalt::intersection_dim(a, b) == 1);
  CHECK(cobalt::intersection_dim(a, a) == 2);
  QMatrix c = {{QScalar(0), QScalar(1), QScalar(0)}};
  QMatrix d = {{QScalar(0), QScalar(0), QScalar(1)}};
  CHECK(cobalt::intersection_dim(c, d) == 0);
}
