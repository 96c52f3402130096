#pragma once

#include <gmpxx.h>

#include <algorithm>
#include <stdexcept>
#include <string>
#include <vector>

namespace cobalt {

// Integer-coefficient Laurent polynomial in one variable q.
// coeff_[i] multiplies q^(lo_ + i). Zero is the empty vector; otherwise the
// first and last entries are nonzero.
class Laurent {
 public:
  Laurent() = default;
  Laurent(long v) {
    if (v != 0) coeff_.emplace_back(v);
  }
  Laurent(const mpz_class& v) {
    if (v != 0) coeff_.push_back(v);
  }

  static Laurent monomial(const mpz_class& c, long k) {
    Laurent r;
    if (c != 0) {
      r.lo_ = k;
      r.coeff_.push_back(c);
    }
    return r;
  }

  bool is_zero() const { return coeff_.empty(); }
  long lo() const { return lo_; }
  long hi() const { return lo_ + static_cast<long>(coeff_.size()) - 1; }

  const mpz_class& coeff(long k) const {
    static const mpz_class zero(0);
    if (is_zero() || k < lo_ || k > hi()) return zero;
    return coeff_[static_cast<size_t>(k - lo_)];
  }

  friend Laurent operator+(const Laurent& a, const Laurent& b) {
    if (a.is_zero()) return b;
    if (b.is_zero()) return a;
    long lo = std::min(a.lo_, b.lo_);
    long hi = std::max(a.hi(), b.hi());
    Laurent r;
    r.lo_ = lo;
    r.coeff_.resize(static_cast<size_t>(hi - lo + 1));
    for (size_t i = 0; i < a.coeff_.size(); ++i)
      r.coeff_[static_cast<size_t>(a.lo_ - lo) + i] += a.coeff_[i];
    for (size_t i = 0; i < b.coeff_.size(); ++i)
      r.coeff_[static_cast<size_t>(b.lo_ - lo) + i] += b.coeff_[i];
    r.trim();
    return r;
  }

  friend Laurent operator-(const Laurent& a, const Laurent& b) { return a + (-b); }

  Laurent operator-() const {
    Laurent r(*this);
    for (auto& c : r.coeff_) c = -c;
    return r;
  }

  friend Laurent operator*(const Laurent& a, const Laurent& b) {
    if (a.is_zero() || b.is_zero()) return Laurent();
    Laurent r;
    r.lo_ = a.lo_ + b.lo_;
    r.coeff_.assign(a.coeff_.size() + b.coeff_.size() - 1, mpz_class(0));
    for (size_t i = 0; i < a.coeff_.size(); ++i)
      for (size_t j = 0; j < b.coeff_.size(); ++j)
        r.coeff_[i + j] += a.coeff_[i] * b.coeff_[j];
    r.trim();
    return r;
  }

  friend bool operator==(const Laurent& a, const Laurent& b) {
    return a.lo_ == b.lo_ && a.coeff_ == b.coeff_;
  }
  friend bool operator!=(const Laurent& a, const Laurent& b) { return !(a == b); }

  Laurent shifted(long k) const {
    Laurent r(*this);
    if (!r.is_zero()) r.lo_ += k;
    return r;
  }

  Laurent pow(long e) const {
    if (e < 0) throw std::invalid_argument("Laurent::pow: negative exponent");
    Laurent r(1), base(*this);
    while (e > 0) {
      if (e & 1) r = r * base;
      base = base * base;
      e >>= 1;
    }
    return r;
  }

  // gcd of all coefficients, non-negative.
  mpz_class content() const {
    mpz_class g(0);
    for (const auto& c : coeff_) {
      mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), c.get_mpz_t());
      if (g == 1) break;
    }
    return g;
  }

  const mpz_class& lead() const {
    if (is_zero()) throw std::logic_error("Laurent::lead of zero");
    return coeff_.back();
  }

  // Normal-form unit multiple: lowest exponent 0, primitive, positive lead.
  Laurent unit_normal() const {
    if (is_zero()) return Laurent();
    Laurent r(*this);
    r.lo_ = 0;
    mpz_class c = r.content();
    if (r.lead() < 0) c = -c;
    for (auto& x : r.coeff_) x /= c;
    return r;
  }

  // Exact division; throws if the division is not exact over the integers.
  static Laurent divexact(const Laurent& a, const Laurent& b) {
    if (b.is_zero()) throw std::invalid_argument("Laurent::divexact by zero");
    if (a.is_zero()) return Laurent();
    std::vector<mpz_class> rem = a.coeff_;
    const std::vector<mpz_class>& d = b.coeff_;
    if (rem.size() < d.size()) throw std::logic_error("Laurent::divexact: not divisible");
    std::vector<mpz_class> q(rem.size() - d.size() + 1);
    for (size_t i = q.size(); i-- > 0;) {
      mpz_class& top = rem[i + d.size() - 1];
      if (top == 0) continue;
      if (!mpz_divisible_p(top.get_mpz_t(), d.back().get_mpz_t()))
        throw std::logic_error("Laurent::divexact: not divisible");
      q[i] = top / d.back();
      for (size_t j = 0; j < d.size(); ++j) rem[i + j] -= q[i] * d[j];
    }
    for (const auto& c : rem)
      if (c != 0) throw std::logic_error("Laurent::divexact: nonzero remainder");
    Laurent r;
    r.lo_ = a.lo_ - b.lo_;
    r.coeff_ = std::move(q);
    r.trim();
    return r;
  }

  // gcd up to units (+-q^k): returned with lowest exponent 0, positive lead,
  // content = gcd of the two contents. Primitive pseudo-remainder sequence.
  static Laurent gcd(const Laurent& a, const Laurent& b) {
    if (a.is_zero()) return b.is_zero() ? Laurent() : content_times_prim(b);
    if (b.is_zero()) return content_times_prim(a);
    mpz_class g;
    mpz_gcd(g.get_mpz_t(), a.content().get_mpz_t(), b.content().get_mpz_t());
    std::vector<mpz_class> A = primitive(a.coeff_);
    std::vector<mpz_class> B = primitive(b.coeff_);
    if (A.size() < B.size()) std::swap(A, B);
    while (!B.empty()) {
      std::vector<mpz_class> R = prem(A, B);
      A = std::move(B);
      B = primitive(R);
    }
    Laurent r;
    r.coeff_ = std::move(A);
    if (r.coeff_.back() < 0)
      for (auto& c : r.coeff_) c = -c;
    for (auto& c : r.coeff_) c *= g;
    return r;
  }

  // Evaluation at a nonzero rational point.
  mpq_class eval(const mpq_class& q0) const {
    if (q0 == 0) throw std::invalid_argument("Laurent::eval at q = 0");
    mpq_class acc(0);
    // Horner over the polynomial part, then multiply by q0^lo.
    for (size_t i = coeff_.size(); i-- > 0;) {
      acc = acc * q0 + mpq_class(coeff_[i]);
    }
    if (lo_ != 0 && !is_zero()) {
      mpq_class p(1);
      mpq_class base = lo_ > 0 ? q0 : mpq_class(1) / q0;
      for (long k = 0; k < std::abs(lo_); ++k) p *= base;
      acc *= p;
    }
    return acc;
  }

  // Signed-monomial text: exponents strictly decreasing, "c*q^k" pieces.
  std::string str() const {
    if (is_zero()) return "0";
    std::string out;
    for (long k = hi(); k >= lo(); --k) {
      const mpz_class& c = coeff(k);
      if (c == 0) continue;
      mpz_class a = abs(c);
      if (out.empty()) {
        out += (c < 0) ? "-" : "";
      } else {
        out += (c < 0) ? " - " : " + ";
      }
      if (k == 0) {
        out += a.get_str();
      } else {
        if (a != 1) out += a.get_str() + "*";
        out += "q";
        if (k != 1) out += "^" + std::to_string(k);
      }
    }
    return out;
  }

 private:
  void trim() {
    size_t b = 0, e = coeff_.size();
    while (b < e && coeff_[b] == 0) ++b;
    while (e > b && coeff_[e - 1] == 0) --e;
    if (b == e) {
      coeff_.clear();
      lo_ = 0;
      return;
    }
    if (b > 0 || e < coeff_.size()) {
      std::vector<mpz_class> t(coeff_.begin() + static_cast<long>(b),
                               coeff_.begin() + static_cast<long>(e));
      coeff_ = std::move(t);
      lo_ += static_cast<long>(b);
    }
  }

  static Laurent content_times_prim(const Laurent& a) {
    Laurent r;
    r.coeff_ = a.coeff_;
    if (r.coeff_.back() < 0)
      for (auto& c : r.coeff_) c = -c;
    return r;
  }

  static std::vector<mpz_class> primitive(const std::vector<mpz_class>& v) {
    size_t b = 0, e = v.size();
    while (b < e && v[b] == 0) ++b;
    while (e > b && v[e - 1] == 0) --e;
    std::vector<mpz_class> r(v.begin() + static_cast<long>(b),
                             v.begin() + static_cast<long>(e));
    if (r.empty()) return r;
    mpz_class g(0);
    for (const auto& c : r) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), c.get_mpz_t());
    for (auto& c : r) c /= g;
    return r;
  }

  // Pseudo-remainder of dense polynomial vectors, deg(A) >= deg(B).
  static std::vector<mpz_class> prem(std::vector<mpz_class> A,
                                     const std::vector<mpz_class>& B) {
    const mpz_class& lb = B.back();
    while (A.size() >= B.size()) {
      mpz_class la = A.back();
      size_t shift = A.size() - B.size();
      for (auto& c : A) c *= lb;
      for (size_t j = 0; j < B.size(); ++j) A[shift + j] -= la * B[j];
      while (!A.empty() && A.back() == 0) A.pop_back();
      if (A.empty()) break;
    }
    return A;
  }

  long lo_ = 0;
  std::vector<mpz_class> coeff_;
};

}  // namespace cobalt
