#pragma once

#include <cctype>
#include <stdexcept>
#include <string>

#include "cobalt/laurent.hpp"

namespace cobalt {

struct specialize_pole : std::runtime_error {
  explicit specialize_pole(const std::string& m) : std::runtime_error(m) {}
};

// Element of Q(q) as a reduced fraction of integer Laurent polynomials.
// Canonical form: gcd(num, den) is a unit; den has lowest exponent 0,
// positive leading coefficient, and content coprime to the numerator's.
class QScalar {
 public:
  QScalar() : den_(1) {}
  QScalar(long v) : num_(v), den_(1) {}
  QScalar(const mpz_class& v) : num_(v), den_(1) {}
  QScalar(const mpq_class& v)
      : num_(mpz_class(v.get_num())), den_(mpz_class(v.get_den())) {
    reduce();
  }
  QScalar(Laurent n, Laurent d) : num_(std::move(n)), den_(std::move(d)) {
    if (den_.is_zero()) throw std::invalid_argument("QScalar: zero denominator");
    reduce();
  }
  explicit QScalar(Laurent n) : num_(std::move(n)), den_(1) {}

  static QScalar q() { return QScalar(Laurent::monomial(1, 1)); }
  static QScalar q_pow(long k) { return QScalar(Laurent::monomial(1, k)); }

  bool is_zero() const { return num_.is_zero(); }
  bool is_one() const { return num_ == Laurent(1) && den_ == Laurent(1); }
  const Laurent& num() const { return num_; }
  const Laurent& den() const { return den_; }
  bool is_laurent() const { return den_ == Laurent(1); }

  friend QScalar operator+(const QScalar& a, const QScalar& b) {
    return QScalar(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
  }
  friend QScalar operator-(const QScalar& a, const QScalar& b) {
    return QScalar(a.num_ * b.den_ - b.num_ * a.den_, a.den_ * b.den_);
  }
  friend QScalar operator*(const QScalar& a, const QScalar& b) {
    return QScalar(a.num_ * b.num_, a.den_ * b.den_);
  }
  friend QScalar operator/(const QScalar& a, const QScalar& b) {
    if (b.is_zero()) throw std::invalid_argument("QScalar: division by zero");
    return QScalar(a.num_ * b.den_, a.den_ * b.num_);
  }
  QScalar operator-() const {
    QScalar r(*this);
    r.num_ = -r.num_;
    return r;
  }
  QScalar inv() const { return QScalar(1) / *this; }

  QScalar& operator+=(const QScalar& o) { return *this = *this + o; }
  QScalar& operator-=(const QScalar& o) { return *this = *this - o; }
  QScalar& operator*=(const QScalar& o) { return *this = *this * o; }
  QScalar& operator/=(const QScalar& o) { return *this = *this / o; }

  friend bool operator==(const QScalar& a, const QScalar& b) {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }
  friend bool operator!=(const QScalar& a, const QScalar& b) { return !(a == b); }

  QScalar pow(long e) const {
    if (e < 0) return inv().pow(-e);
    QScalar r(1), base(*this);
    while (e > 0) {
      if (e & 1) r = r * base;
      base = base * base;
      e >>= 1;
    }
    return r;
  }

  mpq_class specialize(const mpq_class& q0) const {
    if (q0 == 0) throw std::invalid_argument("specialize: q0 must be nonzero");
    mpq_class d = den_.eval(q0);
    if (d == 0)
      throw specialize_pole("specialize: denominator vanishes at q0 = " + q0.get_str());
    mpq_class r = num_.eval(q0) / d;
    r.canonicalize();
    return r;
  }

  std::string str() const {
    if (is_laurent()) return num_.str();
    return "(" + num_.str() + ")/(" + den_.str() + ")";
  }

  // Parses the textual form emitted by str().
  static QScalar parse(const std::string& s) {
    size_t pos = 0;
    QScalar r = parse_expr(s, pos);
    skip_ws(s, pos);
    if (pos != s.size()) throw std::invalid_argument("QScalar::parse: trailing input in '" + s + "'");
    return r;
  }

 private:
  void reduce() {
    if (num_.is_zero()) {
      den_ = Laurent(1);
      return;
    }
    Laurent g = Laurent::gcd(num_, den_);
    num_ = Laurent::divexact(num_, g);
    den_ = Laurent::divexact(den_, g);
    // Push the denominator's unit part (+-q^k) into the numerator.
    num_ = num_.shifted(-den_.lo());
    den_ = den_.shifted(-den_.lo());
    if (den_.lead() < 0) {
      num_ = -num_;
      den_ = -den_;
    }
  }

  static void skip_ws(const std::string& s, size_t& pos) {
    while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
  }

  static QScalar parse_expr(const std::string& s, size_t& pos) {
    skip_ws(s, pos);
    if (pos < s.size() && s[pos] == '(') {
      size_t open = pos, depth = 0;
      size_t close = open;
      for (size_t i = open; i < s.size(); ++i) {
        if (s[i] == '(') ++depth;
        if (s[i] == ')' && --depth == 0) {
          close = i;
          break;
        }
      }
      if (close == open) throw std::invalid_argument("QScalar::parse: unbalanced parens");
      size_t after = close + 1;
      skip_ws(s, after);
      if (after < s.size() && s[after] == '/') {
        Laurent num = parse_poly(s.substr(open + 1, close - open - 1));
        size_t p2 = after + 1;
        skip_ws(s, p2);
        if (p2 >= s.size() || s[p2] != '(')
          throw std::invalid_argument("QScalar::parse: expected (denominator)");
        size_t d2 = 0;
        size_t close2 = p2;
        for (size_t i = p2; i < s.size(); ++i) {
          if (s[i] == '(') ++d2;
          if (s[i] == ')' && --d2 == 0) {
            close2 = i;
            break;
          }
        }
        if (close2 == p2) throw std::invalid_argument("QScalar::parse: unbalanced parens");
        Laurent den = parse_poly(s.substr(p2 + 1, close2 - p2 - 1));
        pos = close2 + 1;
        return QScalar(num, den);
      }
    }
    size_t start = pos;
    pos = s.size();
    return QScalar(parse_poly(s.substr(start)));
  }

  static Laurent parse_poly(const std::string& s) {
    Laurent acc;
    size_t pos = 0;
    skip_ws(s, pos);
    if (pos == s.size()) throw std::invalid_argument("QScalar::parse: empty polynomial");
    bool first = true;
    while (pos < s.size()) {
      int sign = 1;
      skip_ws(s, pos);
      if (!first || (pos < s.size() && (s[pos] == '+' || s[pos] == '-'))) {
        if (pos >= s.size()) throw std::invalid_argument("QScalar::parse: dangling sign");
        if (s[pos] == '-') sign = -1;
        else if (s[pos] != '+') throw std::invalid_argument("QScalar::parse: expected +/-");
        ++pos;
        skip_ws(s, pos);
      }
      first = false;
      mpz_class c(1);
      bool have_digits = false;
      if (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) {
        size_t start = pos;
        while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
        c = mpz_class(s.substr(start, pos - start));
        have_digits = true;
        if (pos < s.size() && s[pos] == '*') ++pos;
      }
      long k = 0;
      if (pos < s.size() && s[pos] == 'q') {
        ++pos;
        k = 1;
        if (pos < s.size() && s[pos] == '^') {
          ++pos;
          long esign = 1;
          if (pos < s.size() && s[pos] == '-') {
            esign = -1;
            ++pos;
          }
          size_t start = pos;
          while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
          if (start == pos) throw std::invalid_argument("QScalar::parse: bad exponent");
          k = esign * std::stol(s.substr(start, pos - start));
        }
      } else if (!have_digits) {
        throw std::invalid_argument("QScalar::parse: expected coefficient or q in '" + s + "'");
      }
      if (sign < 0) c = -c;
      acc = acc + Laurent::monomial(c, k);
      skip_ws(s, pos);
    }
    return acc;
  }

  Laurent num_, den_;
};

// Balanced q-integer (n)_q = (q^n - q^-n)/(q - q^-1).
inline QScalar q_int(long n) {
  if (n == 0) return QScalar(0);
  if (n < 0) return -q_int(-n);
  Laurent a;
  for (long k = 0; k < n; ++k) a = a + Laurent::monomial(1, n - 1 - 2 * k);
  return QScalar(a);
}

inline QScalar q_factorial(long n) {
  QScalar r(1);
  for (long k = 2; k <= n; ++k) r *= q_int(k);
  return r;
}

// Balanced q-binomial; 0 when r is out of range.
inline QScalar q_binomial(long n, long r) {
  if (n < 0) throw std::invalid_argument("q_binomial: n must be >= 0");
  if (r < 0 || r > n) return QScalar(0);
  return q_factorial(n) / (q_factorial(r) * q_factorial(n - r));
}

}  // namespace cobalt
