#pragma once

// Exact scalar arithmetic for the rational mode of the simulator.
//
// `Rat`  — arbitrary-precision rational (GMP mpq_class).
// `Rad`  — a quadratic radical  coef * sqrt(radicand), coef rational and
//          radicand a positive integer.  Rationals embed as radicand 1.
//          The field operations performed by the automaton evaluators stay
//          inside this set (entries of stochastic matrices, square roots of
//          probabilities, renormalisation by sqrt of a rational, products of
//          pairs of Kraus entries).  A sum of incommensurable radicals
//          throws ExactArithmeticError instead of silently approximating.
// `CxRad` — complex numbers with Rad components.

#include <gmpxx.h>

#include <Eigen/Core>
#include <array>
#include <cmath>
#include <cstdint>
#include <ostream>
#include <string>

#include "qfa/errors.hpp"

namespace qfa {

using Rat = mpq_class;

/// Exact rational value of a double (doubles are dyadic rationals).
inline Rat rat_from_double(double x) {
  Rat r(x);
  r.canonicalize();
  return r;
}

inline double rat_to_double(const Rat& r) { return r.get_d(); }

/// Parses "p/q" or "p"; validates q != 0.
inline Rat rat_parse(const std::string& text) {
  Rat r;
  if (r.set_str(text, 10) != 0) throw ParseError("invalid rational literal: '" + text + "'");
  if (r.get_den() == 0) throw ParseError("zero denominator in rational literal: '" + text + "'");
  r.canonicalize();
  return r;
}

inline std::string rat_str(const Rat& r) { return r.get_str(); }

namespace detail {

// Pulls even powers of small primes (and whole perfect squares) out of a
// radicand so that canonically equal radicals compare equal.  Trial division
// is limited to a fixed prime table; radicands at desk scale come from
// probabilities with modest denominators, so this is exhaustive in practice.
inline void extract_square_part(mpz_class& radicand, mpq_class& coef) {
  if (radicand <= 1) return;
  if (mpz_perfect_square_p(radicand.get_mpz_t())) {
    mpz_class root;
    mpz_sqrt(root.get_mpz_t(), radicand.get_mpz_t());
    coef *= root;
    radicand = 1;
    return;
  }
  static constexpr std::array<unsigned, 25> primes = {2,  3,  5,  7,  11, 13, 17, 19, 23,
                                                      29, 31, 37, 41, 43, 47, 53, 59, 61,
                                                      67, 71, 73, 79, 83, 89, 97};
  for (unsigned p : primes) {
    const mpz_class sq = mpz_class(p) * p;
    while (mpz_divisible_p(radicand.get_mpz_t(), sq.get_mpz_t())) {
      radicand /= sq;
      coef *= p;
    }
  }
  if (mpz_perfect_square_p(radicand.get_mpz_t())) {
    mpz_class root;
    mpz_sqrt(root.get_mpz_t(), radicand.get_mpz_t());
    coef *= root;
    radicand = 1;
  }
}

}  // namespace detail

/// A real number of the form coef * sqrt(radicand).
class Rad {
 public:
  Rad() : coef_(0), radicand_(1) {}
  Rad(int v) : coef_(v), radicand_(1) {}            // NOLINT: Eigen needs Scalar(int)
  Rad(long v) : coef_(v), radicand_(1) {}           // NOLINT
  Rad(const Rat& v) : coef_(v), radicand_(1) {}     // NOLINT: rationals embed
  Rad(Rat coef, mpz_class radicand) : coef_(std::move(coef)), radicand_(std::move(radicand)) {
    normalize();
  }

  static Rad sqrt_of(const Rat& value) {
    if (value < 0) throw ExactArithmeticError("sqrt of negative rational");
    if (value == 0) return Rad();
    // sqrt(p/q) = (1/q) * sqrt(p*q)
    mpz_class rad = value.get_num() * value.get_den();
    return Rad(Rat(1, value.get_den()), rad);
  }

  const Rat& coef() const { return coef_; }
  const mpz_class& radicand() const { return radicand_; }

  bool is_zero() const { return coef_ == 0; }
  bool is_rational() const { return radicand_ == 1; }

  /// The rational value; throws when an irrational radical survives.
  Rat as_rat() const {
    if (!is_rational()) throw ExactArithmeticError("radical is not rational: " + str());
    return coef_;
  }

  /// Exact square, always rational.
  Rat square() const { return coef_ * coef_ * Rat(radicand_); }

  int sign() const { return sgn(coef_); }

  double to_double() const {
    if (radicand_ == 1) return coef_.get_d();
    return coef_.get_d() * std::sqrt(mpf_class(radicand_).get_d());
  }

  Rad operator-() const { return Rad(unchecked{}, -coef_, radicand_); }

  Rad& operator+=(const Rad& o) {
    if (o.coef_ == 0) return *this;
    if (coef_ == 0) {
      *this = o;
      return *this;
    }
    if (radicand_ != o.radicand_)
      throw ExactArithmeticError("sum of incommensurable radicals: " + str() + " + " + o.str());
    coef_ += o.coef_;
    if (coef_ == 0) radicand_ = 1;
    return *this;
  }
  Rad& operator-=(const Rad& o) { return *this += (-o); }
  Rad& operator*=(const Rad& o) {
    if (coef_ == 0 || o.coef_ == 0) {
      coef_ = 0;
      radicand_ = 1;
      return *this;
    }
    coef_ *= o.coef_;
    if (radicand_ == o.radicand_) {  // sqrt(r)^2 = r
      coef_ *= Rat(radicand_);
      radicand_ = 1;
    } else {
      mpz_class g;
      mpz_gcd(g.get_mpz_t(), radicand_.get_mpz_t(), o.radicand_.get_mpz_t());
      coef_ *= g;
      radicand_ = (radicand_ / g) * (o.radicand_ / g);
      detail::extract_square_part(radicand_, coef_);
    }
    return *this;
  }
  Rad& operator/=(const Rad& o) {
    if (o.coef_ == 0) throw ExactArithmeticError("division by zero radical");
    // 1 / (c sqrt(r)) = (1/(c r)) sqrt(r)
    return *this *= Rad(unchecked{}, Rat(1) / (o.coef_ * Rat(o.radicand_)), o.radicand_);
  }

  friend Rad operator+(Rad a, const Rad& b) { return a += b; }
  friend Rad operator-(Rad a, const Rad& b) { return a -= b; }
  friend Rad operator*(Rad a, const Rad& b) { return a *= b; }
  friend Rad operator/(Rad a, const Rad& b) { return a /= b; }
  friend bool operator==(const Rad& a, const Rad& b) {
    return a.coef_ == b.coef_ && a.radicand_ == b.radicand_;
  }
  friend bool operator!=(const Rad& a, const Rad& b) { return !(a == b); }

  /// Total order (compares exact real values).
  friend bool operator<(const Rad& a, const Rad& b) {
    if (a == b) return false;
    const int sa = a.sign(), sb = b.sign();
    if (sa != sb) return sa < sb;
    if (sa == 0) return false;
    const Rat qa = a.square(), qb = b.square();
    if (qa == qb) return false;  // equal magnitude, equal sign, but != radicand: impossible
    return sa > 0 ? qa < qb : qb < qa;
  }
  friend bool operator>(const Rad& a, const Rad& b) { return b < a; }
  friend bool operator<=(const Rad& a, const Rad& b) { return !(b < a); }
  friend bool operator>=(const Rad& a, const Rad& b) { return !(a < b); }

  std::string str() const {
    if (radicand_ == 1) return coef_.get_str();
    return coef_.get_str() + "*sqrt(" + radicand_.get_str() + ")";
  }
  friend std::ostream& operator<<(std::ostream& os, const Rad& r) { return os << r.str(); }

 private:
  struct unchecked {};
  Rad(unchecked, Rat coef, mpz_class radicand)
      : coef_(std::move(coef)), radicand_(std::move(radicand)) {}

  void normalize() {
    if (radicand_ <= 0) throw ExactArithmeticError("nonpositive radicand");
    if (coef_ == 0) {
      radicand_ = 1;
      return;
    }
    detail::extract_square_part(radicand_, coef_);
  }

  Rat coef_;
  mpz_class radicand_;
};

inline Rad abs(const Rad& r) { return r.sign() < 0 ? -r : r; }
inline Rad sqrt(const Rad& r) {
  return Rad::sqrt_of(r.as_rat());  // only rational arguments stay in the domain
}
inline double to_double(const Rad& r) { return r.to_double(); }

/// Complex number with radical components.
struct CxRad {
  Rad re, im;

  CxRad() = default;
  CxRad(int v) : re(v), im(0) {}  // NOLINT: Eigen needs Scalar(int)
  CxRad(Rad r) : re(std::move(r)), im(0) {}  // NOLINT
  CxRad(Rad r, Rad i) : re(std::move(r)), im(std::move(i)) {}

  bool is_zero() const { return re.is_zero() && im.is_zero(); }

  CxRad operator-() const { return {-re, -im}; }
  CxRad& operator+=(const CxRad& o) {
    re += o.re;
    im += o.im;
    return *this;
  }
  CxRad& operator-=(const CxRad& o) {
    re -= o.re;
    im -= o.im;
    return *this;
  }
  CxRad& operator*=(const CxRad& o) {
    const Rad nre = re * o.re - im * o.im;
    const Rad nim = re * o.im + im * o.re;
    re = nre;
    im = nim;
    return *this;
  }
  CxRad& operator/=(const CxRad& o) {
    const Rad d = o.re * o.re + o.im * o.im;
    if (d.is_zero()) throw ExactArithmeticError("division by zero");
    const Rad nre = (re * o.re + im * o.im) / d;
    const Rad nim = (im * o.re - re * o.im) / d;
    re = nre;
    im = nim;
    return *this;
  }

  friend CxRad operator+(CxRad a, const CxRad& b) { return a += b; }
  friend CxRad operator-(CxRad a, const CxRad& b) { return a -= b; }
  friend CxRad operator*(CxRad a, const CxRad& b) { return a *= b; }
  friend CxRad operator/(CxRad a, const CxRad& b) { return a /= b; }
  friend bool operator==(const CxRad& a, const CxRad& b) { return a.re == b.re && a.im == b.im; }
  friend bool operator!=(const CxRad& a, const CxRad& b) { return !(a == b); }

  std::string str() const { return "(" + re.str() + ", " + im.str() + ")"; }
  friend std::ostream& operator<<(std::ostream& os, const CxRad& z) { return os << z.str(); }
};

// Free functions Eigen resolves by ADL for IsComplex scalars.
inline CxRad conj(const CxRad& z) { return {z.re, -z.im}; }
inline Rad real(const CxRad& z) { return z.re; }
inline Rad imag(const CxRad& z) { return z.im; }
inline Rad abs2(const CxRad& z) { return z.re * z.re + z.im * z.im; }

}  // namespace qfa

namespace Eigen {

template <>
struct NumTraits<qfa::Rad> : GenericNumTraits<qfa::Rad> {
  typedef qfa::Rad Real;
  typedef qfa::Rad NonInteger;
  typedef qfa::Rad Nested;
  typedef qfa::Rad Literal;
  static inline Real epsilon() { return qfa::Rad(0); }
  static inline Real dummy_precision() { return qfa::Rad(0); }
  static inline int digits10() { return 0; }
  enum {
    IsInteger = 0,
    IsSigned = 1,
    IsComplex = 0,
    RequireInitialization = 1,
    ReadCost = 8,
    AddCost = 200,
    MulCost = 200
  };
};

template <>
struct NumTraits<qfa::CxRad> : GenericNumTraits<qfa::CxRad> {
  typedef qfa::Rad Real;
  typedef qfa::CxRad NonInteger;
  typedef qfa::CxRad Nested;
  typedef qfa::Rad Literal;
  static inline Real epsilon() { return qfa::Rad(0); }
  static inline Real dummy_precision() { return qfa::Rad(0); }
  static inline int digits10() { return 0; }
  enum {
    IsInteger = 0,
    IsSigned = 1,
    IsComplex = 1,
    RequireInitialization = 1,
    ReadCost = 16,
    AddCost = 400,
    MulCost = 800
  };
};

}  // namespace Eigen
