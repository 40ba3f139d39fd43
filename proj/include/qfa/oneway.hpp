#pragma once

// One-way QFA models: measure-once (MCQFA), measure-many (KWQFA) and the
// general superoperator model, together with the model conversions and the
// named constructions (MOD_p machines, NEQ machine).

#include <cmath>
#include <numbers>
#include <random>
#include <utility>
#include <vector>

#include "qfa/classical.hpp"
#include "qfa/quantum.hpp"

namespace qfa {

/// Measure-once QFA: one unitary per symbol, single final measurement.
template <class S>
struct McqfaT {
  int n = 0;
  Alphabet alphabet;
  std::vector<Mat<S>> by_symbol;
  Mat<S> left_end, right_end;
  std::vector<int> accepting;

  const Mat<S>& matrix_for(char c) const { return by_symbol[alphabet.index_of(c)]; }
};

/// Measure-many QFA: partial accept/reject/non-halting measurement after
/// every symbol.
template <class S>
struct KwqfaT {
  int n = 0;
  Alphabet alphabet;
  std::vector<Mat<S>> by_symbol;
  Mat<S> left_end, right_end;
  std::vector<int> accepting, rejecting, nonhalting;

  const Mat<S>& matrix_for(char c) const { return by_symbol[alphabet.index_of(c)]; }
};

/// General 1QFA: one superoperator per symbol acting on a density matrix,
/// acceptance read off the final diagonal.
template <class S>
struct GeneralQfaT {
  int n = 0;
  Alphabet alphabet;
  std::vector<Superoperator<S>> by_symbol;
  Superoperator<S> left_end, right_end;
  std::vector<int> accepting;

  const Superoperator<S>& channel_for(char c) const {
    return by_symbol[alphabet.index_of(c)];
  }
};

using Mcqfa = McqfaT<Cplx>;
using Kwqfa = KwqfaT<Cplx>;
using GeneralQfa = GeneralQfaT<Cplx>;
using McqfaX = McqfaT<CxRad>;
using KwqfaX = KwqfaT<CxRad>;
using GeneralQfaX = GeneralQfaT<CxRad>;

template <class S>
void validate_mcqfa(const McqfaT<S>& m, double tol = kValidationTol) {
  if (m.by_symbol.size() != m.alphabet.size())
    throw ValidationError("mcqfa transition count does not match alphabet");
  for (size_t s = 0; s < m.by_symbol.size(); ++s)
    if (!validate_unitary(m.by_symbol[s], tol))
      throw ValidationError(std::string("mcqfa matrix '") + m.alphabet.symbols[s] +
                            "' is not unitary");
  if (!validate_unitary(m.left_end, tol)) throw ValidationError("mcqfa matrix 'lend' is not unitary");
  if (!validate_unitary(m.right_end, tol)) throw ValidationError("mcqfa matrix 'rend' is not unitary");
  for (int q : m.accepting)
    if (q < 0 || q >= m.n) throw ValidationError("accepting state index out of range");
}

template <class S>
void validate_kwqfa(const KwqfaT<S>& m, double tol = kValidationTol) {
  if (m.by_symbol.size() != m.alphabet.size())
    throw ValidationError("kwqfa transition count does not match alphabet");
  for (size_t s = 0; s < m.by_symbol.size(); ++s)
    if (!validate_unitary(m.by_symbol[s], tol))
      throw ValidationError(std::string("kwqfa matrix '") + m.alphabet.symbols[s] +
                            "' is not unitary");
  if (!validate_unitary(m.left_end, tol)) throw ValidationError("kwqfa matrix 'lend' is not unitary");
  if (!validate_unitary(m.right_end, tol)) throw ValidationError("kwqfa matrix 'rend' is not unitary");
  BasisPartition p{{"accept", "reject", "nonhalt"}, {m.accepting, m.rejecting, m.nonhalting}};
  p.validate(m.n);  // disjoint cover of the state set
}

template <class S>
void validate_general_qfa(const GeneralQfaT<S>& m, double tol = kValidationTol) {
  if (m.by_symbol.size() != m.alphabet.size())
    throw ValidationError("qfa transition count does not match alphabet");
  auto check = [&](const Superoperator<S>& e, const std::string& name) {
    if (e.dim() != m.n) throw ValidationError("qfa channel '" + name + "' has wrong dimension");
    if (!validate_kraus(e, tol))
      throw ValidationError("qfa channel '" + name + "' violates Kraus completeness");
  };
  for (size_t s = 0; s < m.by_symbol.size(); ++s)
    check(m.by_symbol[s], std::string(1, m.alphabet.symbols[s]));
  check(m.left_end, "lend");
  check(m.right_end, "rend");
  for (int q : m.accepting)
    if (q < 0 || q >= m.n) throw ValidationError("accepting state index out of range");
}

// ---------------------------------------------------------------------------
// Evaluators
// ---------------------------------------------------------------------------

template <class S>
real_of<S> mcqfa_accept(const McqfaT<S>& m, const Word& w) {
  Vec<S> v = Vec<S>::Zero(m.n);
  v(0) = S(1);
  v = m.left_end * v;
  for (char c : w) v = m.matrix_for(c) * v;
  v = m.right_end * v;
  real_of<S> acc = num<S>::abs2(S(0));
  for (int q : m.accepting) acc = acc + num<S>::abs2(v(q));
  return acc;
}

/// Accept/reject mass accumulated by the measure-many semantics, plus the
/// live (unnormalized) non-halting component.
template <class S>
struct HaltingLedger {
  real_of<S> acc;
  real_of<S> rej;
  Vec<S> live;
};

template <class S>
struct KwAccept {
  real_of<S> acc;
  real_of<S> rej;
};

namespace detail {

/// One measure-many pass over cent w dollar.  Returns the ledger after the
/// dollar measurement with the residual non-halting component still live;
/// the caller decides whether that residual rejects (standard KWQFA) or
/// restarts the machine.  `trace`, when given, receives a snapshot after
/// every processed symbol.
template <class S>
HaltingLedger<S> kwqfa_pass(const KwqfaT<S>& m, const Word& w,
                            std::vector<HaltingLedger<S>>* trace = nullptr) {
  HaltingLedger<S> ledger{num<S>::abs2(S(0)), num<S>::abs2(S(0)), Vec<S>::Zero(m.n)};
  ledger.live(0) = S(1);
  auto step = [&](const Mat<S>& u) {
    Vec<S> v = u * ledger.live;
    for (int q : m.accepting) {
      ledger.acc = ledger.acc + num<S>::abs2(v(q));
      v(q) = S(0);
    }
    for (int q : m.rejecting) {
      ledger.rej = ledger.rej + num<S>::abs2(v(q));
      v(q) = S(0);
    }
    ledger.live = std::move(v);
    if (trace) trace->push_back(ledger);
  };
  step(m.left_end);
  for (char c : w) step(m.matrix_for(c));
  step(m.right_end);
  return ledger;
}

}  // namespace detail

/// Measure-many acceptance: residual non-halting mass after the right
/// end-marker counts as rejection.
template <class S>
KwAccept<S> kwqfa_accept(const KwqfaT<S>& m, const Word& w,
                         std::vector<HaltingLedger<S>>* trace = nullptr) {
  HaltingLedger<S> ledger = detail::kwqfa_pass(m, w, trace);
  return {ledger.acc, ledger.rej + squared_norm<S>(ledger.live)};
}

/// 1QFA-with-restart semantics: the end-of-tape residual becomes restart
/// mass; overall acceptance is the geometric-series limit A / (A + R).
template <class S>
real_of<S> restart_accept_prob(const KwqfaT<S>& m, const Word& w, double tol = kConservationTol) {
  HaltingLedger<S> ledger = detail::kwqfa_pass(m, w);
  const real_of<S> halting = ledger.acc + ledger.rej;
  if (num<S>::abs_leq(halting, tol))
    throw NonterminationError("restart machine never halts: per-pass halting mass is zero");
  return ledger.acc / halting;
}

template <class S>
real_of<S> general_qfa_accept(const GeneralQfaT<S>& m, const Word& w) {
  Mat<S> rho = Mat<S>::Zero(m.n, m.n);
  rho(0, 0) = S(1);
  rho = apply_superoperator(m.left_end, rho);
  for (char c : w) rho = apply_superoperator(m.channel_for(c), rho);
  rho = apply_superoperator(m.right_end, rho);
  real_of<S> acc = num<S>::abs2(S(0));
  for (int q : m.accepting) acc = acc + num<S>::re(rho(q, q));
  return acc;
}

// ---------------------------------------------------------------------------
// Model conversions
// ---------------------------------------------------------------------------

/// Stochastic matrices are a special case of superoperators: each positive
/// entry A[j,i] contributes the Kraus operator sqrt(A[j,i]) |q_j><q_i|.
/// The image machine has the same state count and the same acceptance
/// values as the source PFA on every word.
template <class R>
GeneralQfaT<typename cx_for<R>::type> pfa_to_qfa(const PfaT<R>& p) {
  using S = typename cx_for<R>::type;
  auto channel_of = [&](const Mat<R>& a) {
    Superoperator<S> e;
    for (Eigen::Index i = 0; i < a.cols(); ++i)
      for (Eigen::Index j = 0; j < a.rows(); ++j) {
        if (rnum<R>::is_zero(a(j, i), 0.0) || rnum<R>::to_double(a(j, i)) <= 0) continue;
        Mat<S> k = Mat<S>::Zero(a.rows(), a.cols());
        k(j, i) = S(rnum<R>::sqrt(a(j, i)));
        e.kraus.push_back(std::move(k));
      }
    if (e.kraus.empty()) e.kraus.push_back(Mat<S>::Zero(a.rows(), a.cols()));
    return e;
  };
  GeneralQfaT<S> q;
  q.n = p.n;
  q.alphabet = p.alphabet;
  for (const auto& a : p.by_symbol) q.by_symbol.push_back(channel_of(a));
  q.left_end = channel_of(p.left_end);
  q.right_end = channel_of(p.right_end);
  q.accepting = p.accepting;
  return q;
}

/// MCQFA as a general QFA (unitary channels, same acceptance rule).
template <class S>
GeneralQfaT<S> general_from_mcqfa(const McqfaT<S>& m) {
  GeneralQfaT<S> q;
  q.n = m.n;
  q.alphabet = m.alphabet;
  for (const auto& u : m.by_symbol) q.by_symbol.push_back(Superoperator<S>::unitary(u));
  q.left_end = Superoperator<S>::unitary(m.left_end);
  q.right_end = Superoperator<S>::unitary(m.right_end);
  q.accepting = m.accepting;
  return q;
}

/// MCQFA as a KWQFA on 2n states: originals stay non-halting for the whole
/// word and the dollar transition routes all mass into fresh accept/reject
/// sinks, so the only measurement that fires is the final one.
template <class S>
KwqfaT<S> kwqfa_from_mcqfa(const McqfaT<S>& m) {
  const int n = m.n;
  auto extend = [&](const Mat<S>& u) {
    Mat<S> big = Mat<S>::Zero(2 * n, 2 * n);
    big.topLeftCorner(n, n) = u;
    big.bottomRightCorner(n, n) = identity<S>(n);
    return big;
  };
  KwqfaT<S> k;
  k.n = 2 * n;
  k.alphabet = m.alphabet;
  for (const auto& u : m.by_symbol) k.by_symbol.push_back(extend(u));
  k.left_end = extend(m.left_end);
  // swap q <-> sink(q) after applying U_dollar
  Mat<S> swap = Mat<S>::Zero(2 * n, 2 * n);
  for (int q = 0; q < n; ++q) {
    swap(n + q, q) = S(1);
    swap(q, n + q) = S(1);
  }
  k.right_end = swap * extend(m.right_end);
  std::vector<char> is_acc(n, 0);
  for (int q : m.accepting) is_acc[q] = 1;
  for (int q = 0; q < n; ++q) {
    k.nonhalting.push_back(q);
    (is_acc[q] ? k.accepting : k.rejecting).push_back(n + q);
  }
  return k;
}

/// KWQFA as a general QFA on n+2 states: the per-symbol channel applies the
/// unitary, diverts accept/reject mass into two absorbing sink states via
/// one Kraus operator per halting state, and keeps the non-halting block
/// live.  Acceptance reads the accept sink; the end-of-tape residual stays
/// outside it, which matches the reject-on-exhaustion rule.
template <class S>
GeneralQfaT<S> general_from_kwqfa(const KwqfaT<S>& m) {
  const int n = m.n;
  const int sink_a = n, sink_r = n + 1;
  auto channel_of = [&](const Mat<S>& u) {
    Mat<S> big_u = Mat<S>::Zero(n + 2, n + 2);
    big_u.topLeftCorner(n, n) = u;
    big_u(sink_a, sink_a) = S(1);
    big_u(sink_r, sink_r) = S(1);
    Superoperator<S> e;
    Mat<S> live = Mat<S>::Zero(n + 2, n + 2);
    for (int q : m.nonhalting) live.row(q) = big_u.row(q);
    e.kraus.push_back(std::move(live));
    auto divert = [&](int q, int sink) {
      Mat<S> k = Mat<S>::Zero(n + 2, n + 2);
      k.row(sink) = big_u.row(q);
      e.kraus.push_back(std::move(k));
    };
    for (int q : m.accepting) divert(q, sink_a);
    for (int q : m.rejecting) divert(q, sink_r);
    Mat<S> keep_a = Mat<S>::Zero(n + 2, n + 2);
    keep_a(sink_a, sink_a) = S(1);
    e.kraus.push_back(std::move(keep_a));
    Mat<S> keep_r = Mat<S>::Zero(n + 2, n + 2);
    keep_r(sink_r, sink_r) = S(1);
    e.kraus.push_back(std::move(keep_r));
    return e;
  };
  GeneralQfaT<S> q;
  q.n = n + 2;
  q.alphabet = m.alphabet;
  for (const auto& u : m.by_symbol) q.by_symbol.push_back(channel_of(u));
  q.left_end = channel_of(m.left_end);
  q.right_end = channel_of(m.right_end);
  q.accepting = {sink_a};
  return q;
}

// ---------------------------------------------------------------------------
// Named constructions
// ---------------------------------------------------------------------------

/// 2x2 rotation by `angle` in the q1-q2 plane.
inline MatC rotation2(double angle) {
  MatC u(2, 2);
  u << Cplx(std::cos(angle), 0), Cplx(-std::sin(angle), 0),  //
      Cplx(std::sin(angle), 0), Cplx(std::cos(angle), 0);
  return u;
}

/// Two-state MCQFA for MOD_p: reading a rotates by 2*pi*k/p, end-markers are
/// identities, accepting state q1.  Accepts a^j with probability
/// cos^2(2*pi*j*k/p).
inline Mcqfa build_modp_2state(int p, int k) {
  if (p <= 2 || p % 2 == 0) throw ValidationError("modp machine needs an odd p > 2");
  if (k < 1 || k >= p) throw ValidationError("rotation multiplier k must lie in 1..p-1");
  // k and p-k generate mirror-image rotations with identical acceptance;
  // derive both from the same reduced angle so the pair is an exact matrix
  // transpose even after rounding.
  const int reduced = std::min(k, p - k);
  const double angle = 2.0 * std::numbers::pi * reduced / p;
  const double sign = (k <= p - k) ? 1.0 : -1.0;
  Mcqfa m;
  m.n = 2;
  m.alphabet = Alphabet{{'a'}};
  m.by_symbol = {rotation2(sign * angle)};
  m.left_end = identity<Cplx>(2);
  m.right_end = identity<Cplx>(2);
  m.accepting = {0};
  return m;
}

inline bool is_prime(int p) {
  if (p < 2) return false;
  for (int d = 2; d * d <= p; ++d)
    if (p % d == 0) return false;
  return true;
}

struct LogstateMachine {
  Mcqfa machine;
  int d = 0;                // number of 2-state rotation blocks
  std::vector<int> ks;      // drawn rotation multipliers
  int redraws = 0;          // verification failures before the final draw
  double max_nonmember = 0; // max accept probability over j = 1..p-1
};

/// Closed form of the log-state machine's acceptance of a^j:
/// ((1/d) sum_i cos(2 pi j k_i / p))^2.
inline double modp_logstate_accept(const std::vector<int>& ks, int p, long j) {
  double s = 0;
  for (int k : ks) s += std::cos(2.0 * std::numbers::pi * static_cast<double>(j) * k / p);
  s /= static_cast<double>(ks.size());
  return s * s;
}

/// The log-state machine for a given multiplier sequence: one 2-state
/// rotation block per k_i, a cent transition spreading q_{1,1} into the
/// uniform block superposition and a dollar transition folding it back.
/// Both end-marker transitions are the same Householder reflection
/// exchanging |q_{1,1}> and psi_0 (real symmetric, exactly unitary).
inline Mcqfa build_modp_logstate_from_ks(int p, const std::vector<int>& ks) {
  const int d = static_cast<int>(ks.size());
  if (d < 1) throw ValidationError("log-state construction needs at least one block");
  const int n = 2 * d;
  MatC ua = MatC::Zero(n, n);
  for (int i = 0; i < d; ++i) {
    const double angle = 2.0 * std::numbers::pi * ks[i] / p;
    ua.block(2 * i, 2 * i, 2, 2) = rotation2(angle);
  }
  VecD psi0 = VecD::Zero(n);
  for (int i = 0; i < d; ++i) psi0(2 * i) = 1.0 / std::sqrt(static_cast<double>(d));
  VecD u = psi0;
  u(0) -= 1.0;
  MatD h = MatD::Identity(n, n);
  const double uu = u.squaredNorm();
  if (uu > 1e-30) h -= (2.0 / uu) * (u * u.transpose());
  MatC hc = h.cast<Cplx>();

  Mcqfa m;
  m.n = n;
  m.alphabet = Alphabet{{'a'}};
  m.by_symbol = {std::move(ua)};
  m.left_end = hc;
  m.right_end = std::move(hc);
  m.accepting = {0};
  return m;
}

/// The O(log p)-state MCQFA for MOD_p: d = ceil(2 log2(2p/eps)) rotation
/// blocks with randomly drawn multipliers k_1..k_d.  Draws that fail the
/// eps bound on some nonmember residue (verified exhaustively over
/// j = 1..p-1) are rejected and redrawn with the next seed; the redraw
/// count is reported.
inline LogstateMachine build_modp_logstate(int p, double eps, unsigned long seed) {
  if (!is_prime(p)) throw ValidationError("log-state construction needs a prime p");
  if (!(eps > 0 && eps < 1)) throw ValidationError("eps must lie in (0,1)");
  const int d = static_cast<int>(std::ceil(2.0 * std::log2(2.0 * p / eps)));

  LogstateMachine out;
  out.d = d;
  for (unsigned long attempt = 0;; ++attempt) {
    std::mt19937_64 rng(seed + attempt);
    std::uniform_int_distribution<int> pick(1, p - 1);
    std::vector<int> ks(d);
    for (int& k : ks) k = pick(rng);
    double worst = 0;
    for (int j = 1; j < p; ++j) worst = std::max(worst, modp_logstate_accept(ks, p, j));
    if (worst <= eps) {
      out.ks = std::move(ks);
      out.redraws = static_cast<int>(attempt);
      out.max_nonmember = worst;
      break;
    }
  }
  out.machine = build_modp_logstate_from_ks(p, out.ks);
  return out;
}

/// Nondeterministic (positive one-sided) MCQFA for NEQ: rotate by +theta on
/// a and -theta on b with q2 accepting, so the acceptance probability is
/// sin^2(theta (|w|_a - |w|_b)) -- nonzero exactly on unbalanced words when
/// theta is an irrational multiple of pi.
inline Mcqfa build_neq_nqfa(double theta = std::numbers::pi * std::numbers::sqrt2) {
  Mcqfa m;
  m.n = 2;
  m.alphabet = Alphabet{{'a', 'b'}};
  m.by_symbol = {rotation2(theta), rotation2(-theta)};
  m.left_end = identity<Cplx>(2);
  m.right_end = identity<Cplx>(2);
  m.accepting = {1};
  return m;
}

}  // namespace qfa
