#pragma once

// Classical one-way machines: probabilistic and generalized finite automata,
// plus the acceptance-mode classification rules shared by every model.
//
// Transition matrices act on column vectors from the left and are
// column-stochastic for PFAs: A[j,i] is the weight of moving q_i -> q_j.
// Every evaluator reads the padded word  cent w dollar.

#include <algorithm>
#include <string>
#include <vector>

#include "qfa/errors.hpp"
#include "qfa/types.hpp"
#include "qfa/quantum.hpp"

namespace qfa {

/// Input alphabet of single-character symbols.
struct Alphabet {
  std::vector<char> symbols;

  int index_of(char c) const {
    auto it = std::find(symbols.begin(), symbols.end(), c);
    if (it == symbols.end())
      throw AlphabetError(std::string("symbol '") + c + "' is not in the machine alphabet");
    return static_cast<int>(it - symbols.begin());
  }
  bool contains(char c) const {
    return std::find(symbols.begin(), symbols.end(), c) != symbols.end();
  }
  size_t size() const { return symbols.size(); }
};

/// 1-way probabilistic finite automaton; initial state is q_1 (index 0).
template <class R>
struct PfaT {
  int n = 0;
  Alphabet alphabet;
  std::vector<Mat<R>> by_symbol;  // aligned with alphabet.symbols
  Mat<R> left_end, right_end;     // transitions on cent / dollar
  std::vector<int> accepting;

  const Mat<R>& matrix_for(char c) const { return by_symbol[alphabet.index_of(c)]; }
};

using Pfa = PfaT<double>;
using PfaX = PfaT<Rad>;

/// Generalized finite automaton: arbitrary real matrices, explicit initial
/// vector and final functional.
template <class R>
struct GfaT {
  int n = 0;
  Alphabet alphabet;
  std::vector<Mat<R>> by_symbol;
  Mat<R> left_end, right_end;
  Vec<R> initial;
  RowVec<R> final_functional;

  const Mat<R>& matrix_for(char c) const { return by_symbol[alphabet.index_of(c)]; }
};

using Gfa = GfaT<double>;
using GfaX = GfaT<Rad>;

template <class R>
void validate_pfa(const PfaT<R>& p, double tol = kValidationTol) {
  auto check = [&](const Mat<R>& a, const std::string& name) {
    if (a.rows() != p.n || a.cols() != p.n)
      throw ValidationError("pfa matrix '" + name + "' has wrong dimensions");
    for (Eigen::Index i = 0; i < a.cols(); ++i) {
      R colsum(0);
      for (Eigen::Index j = 0; j < a.rows(); ++j) {
        if (rnum<R>::to_double(a(j, i)) < -tol)
          throw ValidationError("pfa matrix '" + name + "' has a negative entry at (" +
                                std::to_string(j + 1) + "," + std::to_string(i + 1) + ")");
        colsum = colsum + a(j, i);
      }
      if (!rnum<R>::abs_leq(colsum - R(1), tol))
        throw ValidationError("pfa matrix '" + name + "' column " + std::to_string(i + 1) +
                              " sums to " + std::to_string(rnum<R>::to_double(colsum)) +
                              ", expected 1");
    }
  };
  if (p.by_symbol.size() != p.alphabet.size())
    throw ValidationError("pfa transition count does not match alphabet");
  for (size_t s = 0; s < p.by_symbol.size(); ++s)
    check(p.by_symbol[s], std::string(1, p.alphabet.symbols[s]));
  check(p.left_end, "lend");
  check(p.right_end, "rend");
  for (int q : p.accepting)
    if (q < 0 || q >= p.n) throw ValidationError("accepting state index out of range");
}

template <class R>
void validate_gfa(const GfaT<R>& g) {
  auto check = [&](const Mat<R>& a, const std::string& name) {
    if (a.rows() != g.n || a.cols() != g.n)
      throw ValidationError("gfa matrix '" + name + "' has wrong dimensions");
  };
  if (g.by_symbol.size() != g.alphabet.size())
    throw ValidationError("gfa transition count does not match alphabet");
  for (size_t s = 0; s < g.by_symbol.size(); ++s)
    check(g.by_symbol[s], std::string(1, g.alphabet.symbols[s]));
  check(g.left_end, "lend");
  check(g.right_end, "rend");
  if (g.initial.size() != g.n || g.final_functional.size() != g.n)
    throw ValidationError("gfa initial/final vector has wrong dimension");
}

/// Acceptance probability sum_{q in Q_a} v[q] after processing cent w dollar.
template <class R>
R pfa_accept_prob(const PfaT<R>& p, const Word& w) {
  Vec<R> v = Vec<R>::Zero(p.n);
  v(0) = R(1);
  v = p.left_end * v;
  for (char c : w) v = p.matrix_for(c) * v;
  v = p.right_end * v;
  R acc(0);
  for (int q : p.accepting) acc = acc + v(q);
  return acc;
}

/// Accepting value f . M_dollar M_{w_n} ... M_{w_1} M_cent v_0.
template <class R>
R gfa_value(const GfaT<R>& g, const Word& w) {
  Vec<R> v = g.left_end * g.initial;
  for (char c : w) v = g.matrix_for(c) * v;
  v = g.right_end * v;
  R out(0);
  for (Eigen::Index i = 0; i < g.n; ++i) out = out + g.final_functional(i) * v(i);
  return out;
}

/// Embeds a PFA as a GFA with the same value on every word.
template <class R>
GfaT<R> lift(const PfaT<R>& p) {
  GfaT<R> g;
  g.n = p.n;
  g.alphabet = p.alphabet;
  g.by_symbol = p.by_symbol;
  g.left_end = p.left_end;
  g.right_end = p.right_end;
  g.initial = Vec<R>::Zero(p.n);
  g.initial(0) = R(1);
  g.final_functional = RowVec<R>::Zero(p.n);
  for (int q : p.accepting) g.final_functional(q) = R(1);
  return g;
}

// ---------------------------------------------------------------------------
// Language-recognition modes
// ---------------------------------------------------------------------------

enum class AcceptKind {
  kCutpointStrict,     // member iff f(w) >  lambda
  kCutpointNonstrict,  // member iff f(w) >= lambda
  kBoundedError,       // member iff f(w) >= 1-eps, nonmember iff f(w) <= eps
  kPositiveOneSided,   // member iff f(w) > 0
  kNegativeOneSided,   // member iff f(w) = 1 (within tolerance)
};

struct AcceptanceMode {
  AcceptKind kind = AcceptKind::kCutpointStrict;
  double lambda = 0.5;  // cutpoint modes
  double eps = 0.0;     // bounded-error mode, 0 <= eps < 1/2

  static AcceptanceMode cutpoint_strict(double l) { return {AcceptKind::kCutpointStrict, l, 0}; }
  static AcceptanceMode cutpoint_nonstrict(double l) {
    return {AcceptKind::kCutpointNonstrict, l, 0};
  }
  static AcceptanceMode bounded_error(double e) {
    if (e < 0 || e >= 0.5)
      throw ValidationError("bounded-error bound must satisfy 0 <= eps < 1/2");
    return {AcceptKind::kBoundedError, 0, e};
  }
  static AcceptanceMode positive_one_sided() { return {AcceptKind::kPositiveOneSided, 0, 0}; }
  static AcceptanceMode negative_one_sided() { return {AcceptKind::kNegativeOneSided, 0, 0}; }
};

enum class Decision { kMember, kNonmember, kUndetermined };

inline std::string to_string(Decision d) {
  switch (d) {
    case Decision::kMember: return "member";
    case Decision::kNonmember: return "nonmember";
    default: return "undetermined";
  }
}

inline Decision classify_word(double value, const AcceptanceMode& mode,
                              double tol = kValidationTol) {
  switch (mode.kind) {
    case AcceptKind::kCutpointStrict:
      return value > mode.lambda ? Decision::kMember : Decision::kNonmember;
    case AcceptKind::kCutpointNonstrict:
      return value >= mode.lambda ? Decision::kMember : Decision::kNonmember;
    case AcceptKind::kBoundedError:
      if (mode.eps < 0 || mode.eps >= 0.5)
        throw ValidationError("bounded-error bound must satisfy 0 <= eps < 1/2");
      if (value >= 1 - mode.eps) return Decision::kMember;
      if (value <= mode.eps) return Decision::kNonmember;
      return Decision::kUndetermined;
    case AcceptKind::kPositiveOneSided:
      // "> 0" up to the working tolerance, so float-mode rounding noise on a
      // genuinely zero acceptance probability does not flip the decision.
      return value > tol ? Decision::kMember : Decision::kNonmember;
    case AcceptKind::kNegativeOneSided:
      return std::abs(value - 1.0) <= tol ? Decision::kMember : Decision::kNonmember;
  }
  return Decision::kUndetermined;
}

}  // namespace qfa
