#pragma once

// Test-only oracles and random instance generators.  Everything here is
// independent of the implementation paths it checks: brute-force word
// enumeration for equivalence, integer-matrix arithmetic for the PAL phase,
// closed forms for the rotation machines.

#include <algorithm>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "qfa/classical.hpp"
#include "qfa/oneway.hpp"

namespace qfa::testing {

inline std::vector<Word> words_up_to(const std::vector<char>& sigma, int maxlen) {
  std::vector<Word> out{Word{}};
  std::vector<Word> layer{Word{}};
  for (int len = 1; len <= maxlen; ++len) {
    std::vector<Word> next;
    for (const auto& w : layer)
      for (char c : sigma) next.push_back(w + c);
    out.insert(out.end(), next.begin(), next.end());
    layer = std::move(next);
  }
  return out;
}

inline Word repeat(const Word& block, int times) {
  Word w;
  for (int i = 0; i < times; ++i) w += block;
  return w;
}

/// Haar-ish random unitary from the QR factorization of a Gaussian matrix.
inline MatC random_unitary(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  MatC a(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) a(i, j) = Cplx(gauss(rng), gauss(rng));
  Eigen::HouseholderQR<MatC> qr(a);
  MatC q = qr.householderQ();
  return q;
}

inline VecC random_state(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  VecC v(n);
  for (int i = 0; i < n; ++i) v(i) = Cplx(gauss(rng), gauss(rng));
  v /= std::sqrt(v.squaredNorm());
  return v;
}

/// Random channel with `k` Kraus operators, built from column blocks of a
/// random (nk x nk) unitary so completeness holds by construction.
inline SuperC random_channel(int n, int k, std::mt19937_64& rng) {
  const MatC big = random_unitary(n * k, rng);
  SuperC e;
  for (int i = 0; i < k; ++i) e.kraus.push_back(big.block(i * n, 0, n, n));
  return e;
}

/// Random column-stochastic matrix with denominator `den` rational entries.
inline MatD random_stochastic(int n, int den, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> cut(0, den);
  MatD a(n, n);
  for (int col = 0; col < n; ++col) {
    std::vector<int> cuts{0, den};
    for (int i = 0; i < n - 1; ++i) cuts.push_back(cut(rng));
    std::sort(cuts.begin(), cuts.end());
    for (int row = 0; row < n; ++row)
      a(row, col) = static_cast<double>(cuts[row + 1] - cuts[row]) / den;
  }
  return a;
}

inline Pfa random_pfa(int n, const std::vector<char>& sigma, int den, std::mt19937_64& rng,
                      bool random_ends = false) {
  Pfa p;
  p.n = n;
  p.alphabet = Alphabet{sigma};
  for (size_t i = 0; i < sigma.size(); ++i) p.by_symbol.push_back(random_stochastic(n, den, rng));
  p.left_end = random_ends ? random_stochastic(n, den, rng) : MatD::Identity(n, n);
  p.right_end = random_ends ? random_stochastic(n, den, rng) : MatD::Identity(n, n);
  std::uniform_int_distribution<int> coin(0, 1);
  for (int q = 0; q < n; ++q)
    if (coin(rng)) p.accepting.push_back(q);
  if (p.accepting.empty()) p.accepting.push_back(n - 1);
  return p;
}

/// The same PFA with exact rational entries (entries of random_pfa are
/// dyadic-exact multiples of 1/den, so the conversion is value-preserving).
inline PfaX exact_pfa(const Pfa& p) {
  PfaX x;
  x.n = p.n;
  x.alphabet = p.alphabet;
  auto conv = [](const MatD& a) {
    MatR out(a.rows(), a.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
      for (Eigen::Index j = 0; j < a.cols(); ++j) out(i, j) = Rad(rat_from_double(a(i, j)));
    return out;
  };
  for (const auto& a : p.by_symbol) x.by_symbol.push_back(conv(a));
  x.left_end = conv(p.left_end);
  x.right_end = conv(p.right_end);
  x.accepting = p.accepting;
  return x;
}

/// Random GFA with small rational entries m/den, |m| <= mag.
inline Gfa random_gfa(int n, const std::vector<char>& sigma, int den, int mag,
                      std::mt19937_64& rng) {
  std::uniform_int_distribution<int> num(-mag, mag);
  auto mat = [&] {
    MatD a(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) a(i, j) = static_cast<double>(num(rng)) / den;
    return a;
  };
  Gfa g;
  g.n = n;
  g.alphabet = Alphabet{sigma};
  for (size_t i = 0; i < sigma.size(); ++i) g.by_symbol.push_back(mat());
  g.left_end = MatD::Identity(n, n);
  g.right_end = MatD::Identity(n, n);
  g.initial = VecD::Zero(n);
  g.initial(0) = 1;
  g.final_functional = RowVec<double>::Zero(n);
  for (int i = 0; i < n; ++i) g.final_functional(i) = static_cast<double>(num(rng)) / den;
  return g;
}

inline GfaX exact_gfa(const Gfa& g) {
  GfaX x;
  x.n = g.n;
  x.alphabet = g.alphabet;
  auto conv = [](const MatD& a) {
    MatR out(a.rows(), a.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
      for (Eigen::Index j = 0; j < a.cols(); ++j) out(i, j) = Rad(rat_from_double(a(i, j)));
    return out;
  };
  for (const auto& a : g.by_symbol) x.by_symbol.push_back(conv(a));
  x.left_end = conv(g.left_end);
  x.right_end = conv(g.right_end);
  x.initial = VecR(g.n);
  x.final_functional = RowVec<Rad>(g.n);
  for (int i = 0; i < g.n; ++i) {
    x.initial(i) = Rad(rat_from_double(g.initial(i)));
    x.final_functional(i) = Rad(rat_from_double(g.final_functional(i)));
  }
  return x;
}

/// Exact copy of a float MCQFA (entries become their exact dyadic values).
inline McqfaX exact_mcqfa(const Mcqfa& m) {
  McqfaX x;
  x.n = m.n;
  x.alphabet = m.alphabet;
  auto conv = [](const MatC& a) {
    MatX out(a.rows(), a.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
      for (Eigen::Index j = 0; j < a.cols(); ++j)
        out(i, j) = CxRad(Rad(rat_from_double(a(i, j).real())),
                          Rad(rat_from_double(a(i, j).imag())));
    return out;
  };
  for (const auto& a : m.by_symbol) x.by_symbol.push_back(conv(a));
  x.left_end = conv(m.left_end);
  x.right_end = conv(m.right_end);
  x.accepting = m.accepting;
  return x;
}

/// Shortest distinguishing word by brute-force enumeration in
/// length-then-lexicographic order, or nullopt when none exists up to
/// `maxlen`.
template <class R>
std::optional<Word> brute_force_witness(const GfaT<R>& g1, const GfaT<R>& g2, int maxlen,
                                        double tol) {
  std::vector<char> sigma = g1.alphabet.symbols;
  std::sort(sigma.begin(), sigma.end());
  for (const Word& w : words_up_to(sigma, maxlen)) {
    const R diff = gfa_value(g1, w) - gfa_value(g2, w);
    if (!rnum<R>::is_zero(diff, tol)) return w;
  }
  return std::nullopt;
}

/// Exact PAL quantum-phase rejection via integer matrices: the entries of
/// 5 U_a and 5 U_b are integers, so the final amplitude is m / 5^(2|w|)
/// with integer m.  Valid for |w| <= 11 in 64-bit arithmetic.
inline double pal_reject_exact(const Word& w) {
  using I = __int128;
  I va[3] = {1, 0, 0};
  auto apply = [&](char c, bool transpose) {
    static const long A[3][3] = {{4, 3, 0}, {-3, 4, 0}, {0, 0, 5}};
    static const long B[3][3] = {{4, 0, 3}, {0, 5, 0}, {-3, 0, 4}};
    const auto& M = (c == 'a') ? A : B;
    I out[3] = {0, 0, 0};
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) out[i] += static_cast<I>(transpose ? M[j][i] : M[i][j]) * va[j];
    for (int i = 0; i < 3; ++i) va[i] = out[i];
  };
  for (char c : w) apply(c, false);
  for (char c : w) apply(c, true);
  long double denom = 1;
  for (size_t i = 0; i < 2 * w.size(); ++i) denom *= 5;
  const long double amp = static_cast<long double>(va[0]) / denom;
  return static_cast<double>(1 - amp * amp);
}

/// Unitary whose first column is the given unit vector (Householder).
inline MatC unitary_with_first_column(const VecC& target) {
  const int n = static_cast<int>(target.size());
  VecC u = target;
  u(0) -= Cplx(1);
  MatC h = MatC::Identity(n, n);
  const double uu = u.squaredNorm();
  if (uu > 1e-30) h -= (2.0 / uu) * (u * u.adjoint());
  return h;
}

}  // namespace qfa::testing
