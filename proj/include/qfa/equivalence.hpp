#pragma once

// Linearization of general QFAs into generalized automata and exact decision
// of functional equivalence with shortest-witness extraction.
//
// The density matrix of an n-state QFA is encoded as n^2 real coordinates
// (the n diagonal entries followed by real/imaginary parts of the strictly
// upper triangle); each superoperator then acts as a real n^2 x n^2 matrix.
// Equivalence of two GFAs is decided by growing a basis of the reachable
// vectors of the difference machine breadth-first, in
// length-then-lexicographic word order, which also makes the returned
// witness a shortest distinguishing word.

#include <deque>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qfa/classical.hpp"
#include "qfa/oneway.hpp"

namespace qfa {

namespace detail {

/// Hermitian basis matrix for real coordinate `c` of an n-dim density matrix.
template <class S>
Mat<S> hermitian_basis(int n, int c) {
  Mat<S> b = Mat<S>::Zero(n, n);
  if (c < n) {
    b(c, c) = S(1);
    return b;
  }
  int t = c - n;
  const bool imag_part = t % 2;
  t /= 2;
  // t-th strictly-upper pair (j,k) in row-major order
  int j = 0;
  int row_len = n - 1;
  while (t >= row_len) {
    t -= row_len;
    ++j;
    --row_len;
  }
  const int k = j + 1 + t;
  if (!imag_part) {
    b(j, k) = S(1);
    b(k, j) = S(1);
  } else {
    b(j, k) = num<S>::make(num<S>::re(S(0)), num<S>::re(S(1)));
    b(k, j) = num<S>::make(num<S>::re(S(0)), num<S>::re(S(0)) - num<S>::re(S(1)));
  }
  return b;
}

/// Coordinates of a Hermitian matrix in the basis above.
template <class S>
Vec<real_of<S>> hermitian_coords(const Mat<S>& rho) {
  const int n = static_cast<int>(rho.rows());
  Vec<real_of<S>> x(n * n);
  int c = 0;
  for (int j = 0; j < n; ++j) x(c++) = num<S>::re(rho(j, j));
  for (int j = 0; j < n; ++j)
    for (int k = j + 1; k < n; ++k) {
      x(c++) = num<S>::re(rho(j, k));
      x(c++) = num<S>::im(rho(j, k));
    }
  return x;
}

/// The real matrix of a channel in the coordinates above.
template <class S>
Mat<real_of<S>> channel_matrix(const Superoperator<S>& e) {
  using R = real_of<S>;
  const int n = e.dim();
  const int m = n * n;
  Mat<R> out(m, m);
  for (int c = 0; c < m; ++c) {
    const Mat<S> image = apply_superoperator(e, hermitian_basis<S>(n, c));
    out.col(c) = hermitian_coords<S>(image);
  }
  return out;
}

}  // namespace detail

/// Vectorizes a general QFA into an n^2-state GFA with identical acceptance
/// values on every word.
template <class S>
GfaT<real_of<S>> qfa_to_gfa(const GeneralQfaT<S>& m) {
  using R = real_of<S>;
  GfaT<R> g;
  g.n = m.n * m.n;
  g.alphabet = m.alphabet;
  for (const auto& e : m.by_symbol) g.by_symbol.push_back(detail::channel_matrix(e));
  g.left_end = detail::channel_matrix(m.left_end);
  g.right_end = detail::channel_matrix(m.right_end);
  g.initial = Vec<R>::Zero(g.n);
  g.initial(0) = R(1);  // rho_0 = |q_1><q_1|
  g.final_functional = RowVec<R>::Zero(g.n);
  for (int q : m.accepting) g.final_functional(q) = R(1);
  return g;
}

struct EquivalenceVerdict {
  bool equal = false;
  bool exact = false;  // arithmetic mode of the decision
  std::optional<Word> witness;
  double lhs_value = 0, rhs_value = 0;
  std::string lhs_repr, rhs_repr;  // exact value strings in rational mode
  int basis_extensions = 0;        // spanning-set growth, at most dim(G1)+dim(G2)
};

/// Decides whether two GFAs take equal values on every word.  In exact mode
/// all rank decisions are exact; in float mode they use `tol` and the
/// verdict is flagged numeric.
template <class R>
EquivalenceVerdict gfa_equiv(const GfaT<R>& g1, const GfaT<R>& g2,
                             double tol = kValidationTol) {
  auto sorted = [](Alphabet a) {
    std::sort(a.symbols.begin(), a.symbols.end());
    return a.symbols;
  };
  if (sorted(g1.alphabet) != sorted(g2.alphabet))
    throw AlphabetError("equivalence requires machines over the same alphabet");

  const int m = g1.n + g2.n;
  // Difference machine: block direct sum with negated second functional.
  std::vector<Mat<R>> step;
  Alphabet sigma = g1.alphabet;
  std::sort(sigma.symbols.begin(), sigma.symbols.end());  // lexicographic child order
  for (char c : sigma.symbols) {
    Mat<R> d = Mat<R>::Zero(m, m);
    d.topLeftCorner(g1.n, g1.n) = g1.matrix_for(c);
    d.bottomRightCorner(g2.n, g2.n) = g2.matrix_for(c);
    step.push_back(std::move(d));
  }
  Vec<R> v0(m);
  v0.head(g1.n) = g1.left_end * g1.initial;    // fold cent into the start vector
  v0.tail(g2.n) = g2.left_end * g2.initial;
  RowVec<R> f(m);
  f.head(g1.n) = g1.final_functional * g1.right_end;  // fold dollar into the functional
  f.tail(g2.n) = RowVec<R>(g2.final_functional * g2.right_end) * R(-1);

  auto value_of = [&](const Vec<R>& v) {
    R out(0);
    for (int i = 0; i < m; ++i) out = out + f(i) * v(i);
    return out;
  };

  struct BasisEntry {
    Vec<R> reduced;
    int pivot;
  };
  std::vector<BasisEntry> basis;
  auto reduce = [&](Vec<R> v) {
    for (const auto& b : basis) {
      const R c = v(b.pivot);
      if (rnum<R>::is_zero(c, tol)) continue;
      v -= c * b.reduced;  // basis vectors are pivot-normalized
    }
    return v;
  };
  auto pivot_of = [&](const Vec<R>& v) {
    for (int i = 0; i < m; ++i)
      if (!rnum<R>::is_zero(v(i), tol)) return i;
    return -1;
  };

  EquivalenceVerdict verdict;
  verdict.exact = rnum<R>::exact;

  std::deque<std::pair<Word, Vec<R>>> queue;
  queue.emplace_back(Word{}, v0);
  while (!queue.empty()) {
    auto [word, v] = std::move(queue.front());
    queue.pop_front();
    const R val = value_of(v);
    if (!rnum<R>::is_zero(val, tol)) {
      verdict.equal = false;
      verdict.witness = word;
      const R lhs = gfa_value(g1, word), rhs = gfa_value(g2, word);
      verdict.lhs_value = rnum<R>::to_double(lhs);
      verdict.rhs_value = rnum<R>::to_double(rhs);
      if constexpr (rnum<R>::exact) {
        verdict.lhs_repr = lhs.str();
        verdict.rhs_repr = rhs.str();
      }
      return verdict;
    }
    Vec<R> r = reduce(v);
    const int p = pivot_of(r);
    if (p < 0) continue;  // dependent: value already covered by the basis
    r /= r(p);
    basis.push_back({std::move(r), p});
    ++verdict.basis_extensions;
    for (size_t s = 0; s < sigma.symbols.size(); ++s)
      queue.emplace_back(word + sigma.symbols[s], Vec<R>(step[s] * v));
  }
  verdict.equal = true;
  return verdict;
}

/// Equivalence of two general QFAs via their n^2-state linearizations; a
/// distinguishing word, when one exists, has length at most n1^2 + n2^2 - 1.
template <class S>
EquivalenceVerdict qfa_equiv(const GeneralQfaT<S>& m1, const GeneralQfaT<S>& m2,
                             double tol = kValidationTol) {
  return gfa_equiv(qfa_to_gfa(m1), qfa_to_gfa(m2), tol);
}

}  // namespace qfa
