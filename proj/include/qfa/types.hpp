#pragma once

// Scalar modes and dense types.  Every evaluator in the library is a free
// function templated on the matrix scalar; the two instantiations used in
// practice are
//   float mode:  Cplx  = std::complex<double>,  real type double
//   exact mode:  CxRad (see exact.hpp),         real type Rad
// Matrices are dense Eigen types; dimensions stay small at desk scale.

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <string>
#include <vector>

#include "qfa/exact.hpp"

namespace qfa {

using Cplx = std::complex<double>;

template <class S>
using Mat = Eigen::Matrix<S, Eigen::Dynamic, Eigen::Dynamic>;
template <class S>
using Vec = Eigen::Matrix<S, Eigen::Dynamic, 1>;
template <class S>
using RowVec = Eigen::Matrix<S, 1, Eigen::Dynamic>;

using MatC = Mat<Cplx>;
using VecC = Vec<Cplx>;
using MatD = Mat<double>;
using VecD = Vec<double>;

using MatX = Mat<CxRad>;
using VecX = Vec<CxRad>;
using MatR = Mat<Rad>;
using VecR = Vec<Rad>;

/// A word over the input alphabet; end-markers are never part of a word.
using Word = std::string;

/// Bridges the float and exact scalar modes behind one interface.
template <class S>
struct num;

template <>
struct num<Cplx> {
  using real_t = double;
  static constexpr bool exact = false;
  static Cplx conj(const Cplx& z) { return std::conj(z); }
  static double re(const Cplx& z) { return z.real(); }
  static double im(const Cplx& z) { return z.imag(); }
  static double abs2(const Cplx& z) { return std::norm(z); }
  static Cplx make(double r, double i) { return {r, i}; }
  static double sqrt(double x) { return std::sqrt(x); }
  static double to_double(double x) { return x; }
  static double real_from_double(double x) { return x; }
  /// |x| <= tol with tol given as a double.
  static bool abs_leq(double x, double tol) { return std::abs(x) <= tol; }
  /// |z| <= tol, comparing squared magnitudes.
  static bool cabs_leq(const Cplx& z, double tol) { return std::norm(z) <= tol * tol; }
};

template <>
struct num<CxRad> {
  using real_t = Rad;
  static constexpr bool exact = true;
  static CxRad conj(const CxRad& z) { return qfa::conj(z); }
  static Rad re(const CxRad& z) { return z.re; }
  static Rad im(const CxRad& z) { return z.im; }
  static Rad abs2(const CxRad& z) { return qfa::abs2(z); }
  static CxRad make(Rad r, Rad i) { return {std::move(r), std::move(i)}; }
  static Rad sqrt(const Rad& x) { return qfa::sqrt(x); }
  static double to_double(const Rad& x) { return x.to_double(); }
  static Rad real_from_double(double x) { return Rad(rat_from_double(x)); }
  static bool abs_leq(const Rad& x, double tol) {
    return x.square() <= rat_from_double(tol) * rat_from_double(tol);
  }
  static bool cabs_leq(const CxRad& z, double tol) {
    const Rat t = rat_from_double(tol);
    return qfa::abs2(z).as_rat() <= t * t;  // |z|^2 is always rational
  }
};

/// Real-scalar counterpart for stochastic/generalized automata.
template <class R>
struct rnum;

template <>
struct rnum<double> {
  static constexpr bool exact = false;
  static double to_double(double x) { return x; }
  static double from_double(double x) { return x; }
  static bool abs_leq(double x, double tol) { return std::abs(x) <= tol; }
  static bool is_zero(double x, double tol) { return std::abs(x) <= tol; }
  static double sqrt(double x) { return std::sqrt(x); }
};

template <>
struct rnum<Rad> {
  static constexpr bool exact = true;
  static double to_double(const Rad& x) { return x.to_double(); }
  static Rad from_double(double x) { return Rad(rat_from_double(x)); }
  static bool abs_leq(const Rad& x, double tol) {
    const Rat t = rat_from_double(tol);
    return x.square() <= t * t;
  }
  static bool is_zero(const Rad& x, double /*tol*/) { return x.is_zero(); }
  static Rad sqrt(const Rad& x) { return qfa::sqrt(x); }
};

/// Matching complex scalar for a real scalar and vice versa.
template <class R>
struct cx_for;
template <>
struct cx_for<double> {
  using type = Cplx;
};
template <>
struct cx_for<Rad> {
  using type = CxRad;
};

template <class S>
using real_of = typename num<S>::real_t;

template <class S>
Mat<S> identity(Eigen::Index n) {
  return Mat<S>::Identity(n, n);
}

/// max_ij |A[i,j]| <= tol, valid in both scalar modes.
template <class S>
bool max_abs_leq(const Mat<S>& a, double tol) {
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      if (!num<S>::cabs_leq(a(i, j), tol)) return false;
  return true;
}

/// sum_i |v[i]|^2 as the mode's real type.
template <class S>
real_of<S> squared_norm(const Vec<S>& v) {
  real_of<S> acc = num<S>::abs2(S(0));
  for (Eigen::Index i = 0; i < v.size(); ++i) acc = acc + num<S>::abs2(v(i));
  return acc;
}

}  // namespace qfa
