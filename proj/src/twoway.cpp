#include "qfa/twoway.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <numbers>
#include <random>

namespace qfa {

// ---------------------------------------------------------------------------
// Loop analysis and quantum phases
// ---------------------------------------------------------------------------

LoopProfile loop_semantics(double r, double a) {
  if (r < 0 || r > 1 || a < 0 || a > 1)
    throw ValidationError("loop probabilities must lie in [0,1]");
  const double halt_per_iteration = r + (1 - r) * a;
  if (halt_per_iteration <= 0)
    throw NonterminationError("loop with r = a = 0 never halts");
  LoopProfile p;
  p.reject_per_iteration = r;
  p.accept_per_iteration = a;
  p.accept_overall = (1 - r) * a / halt_per_iteration;
  p.expected_iterations = 1 / halt_per_iteration;
  return p;
}

double eq_quantum_phase_reject(const Word& w) {
  long balance = 0;
  for (char c : w) {
    if (c == 'a') ++balance;
    else if (c == 'b') --balance;
    else throw AlphabetError(std::string("EQ machine expects words over {a,b}, got '") + c + "'");
  }
  const double angle = std::numbers::sqrt2 * std::numbers::pi * static_cast<double>(balance);
  const double s = std::sin(angle);
  return s * s;
}

namespace {

MatC pal_unitary(char c) {
  MatC u(3, 3);
  if (c == 'a')
    u << Cplx(0.8), Cplx(0.6), Cplx(0),  //
        Cplx(-0.6), Cplx(0.8), Cplx(0),  //
        Cplx(0), Cplx(0), Cplx(1);
  else if (c == 'b')
    u << Cplx(0.8), Cplx(0), Cplx(0.6),  //
        Cplx(0), Cplx(1), Cplx(0),       //
        Cplx(-0.6), Cplx(0), Cplx(0.8);
  else
    throw AlphabetError(std::string("PAL machine expects words over {a,b}, got '") + c + "'");
  return u;
}

}  // namespace

double pal_quantum_phase_reject(const Word& w) {
  VecC psi = VecC::Zero(3);
  psi(0) = Cplx(1);
  for (char c : w) psi = pal_unitary(c) * psi;
  for (char c : w) psi = pal_unitary(c).transpose() * psi;  // real orthogonal: inverse = transpose
  const double keep = std::norm(psi(0));
  return std::max(0.0, 1.0 - keep);
}

// ---------------------------------------------------------------------------
// Tqcfa plumbing
// ---------------------------------------------------------------------------

void Tqcfa::ensure_rule_storage() {
  rules.assign(classical_states.size(),
               std::vector<std::optional<Rule>>(2 + alphabet.size(), std::nullopt));
}

Tqcfa::Rule& Tqcfa::rule(int state, char c) {
  auto& slot = rules.at(state).at(symbol_id(c));
  if (!slot) slot.emplace();
  return *slot;
}

const Tqcfa::Rule* Tqcfa::find_rule(int state, char c) const {
  const auto& slot = rules.at(state).at(symbol_id(c));
  return slot ? &*slot : nullptr;
}

void validate_tqcfa(const Tqcfa& m, double tol) {
  const int ns = static_cast<int>(m.classical_states.size());
  const int nq = static_cast<int>(m.quantum_states.size());
  if (m.accept_state < 0 || m.accept_state >= ns || m.reject_state < 0 || m.reject_state >= ns)
    throw ValidationError("2qcfa accept/reject states out of range");
  if (m.accept_state == m.reject_state)
    throw ValidationError("2qcfa accept and reject states must differ");
  if (m.rules.size() != static_cast<size_t>(ns))
    throw ValidationError("2qcfa rule table does not match the classical state count");
  auto check_move = [&](const Tqcfa::CMove& mv, int sym, const std::string& where) {
    if (mv.next_state < 0 || mv.next_state >= ns)
      throw ValidationError("2qcfa transition targets unknown state in " + where);
    if (mv.head_move < -1 || mv.head_move > 1)
      throw ValidationError("2qcfa head move must be -1, 0 or +1 in " + where);
    if (sym == 0 && mv.head_move < 0)
      throw ValidationError("2qcfa head would leave the tape over the left end-marker in " + where);
    if (sym == 1 && mv.head_move > 0)
      throw ValidationError("2qcfa head would leave the tape over the right end-marker in " + where);
  };
  for (int s = 0; s < ns; ++s) {
    for (size_t sym = 0; sym < m.rules[s].size(); ++sym) {
      if (!m.rules[s][sym]) continue;
      const auto& rule = *m.rules[s][sym];
      const std::string where = "(" + m.classical_states[s] + ", symbol " + std::to_string(sym) + ")";
      if (rule.action.kind == Tqcfa::QAction::Kind::kUnitary) {
        if (rule.action.unitary.rows() != nq)
          throw ValidationError("2qcfa unitary has wrong dimension at " + where);
        if (!validate_unitary(rule.action.unitary, tol))
          throw ValidationError("2qcfa quantum action is not unitary at " + where);
        check_move(rule.next, static_cast<int>(sym), where);
      } else {
        rule.action.partition.validate(nq);
        if (rule.branches.empty())
          throw ValidationError("2qcfa measurement rule has no outcome branches at " + where);
        for (const auto& [label, mv] : rule.branches) check_move(mv, static_cast<int>(sym), where);
      }
    }
  }
}

namespace {

MatC rot2_embedded(int dim, double angle) {
  MatC u = MatC::Identity(dim, dim);
  u(0, 0) = Cplx(std::cos(angle));
  u(0, 1) = Cplx(-std::sin(angle));
  u(1, 0) = Cplx(std::sin(angle));
  u(1, 1) = Cplx(std::cos(angle));
  return u;
}

MatC swap01(int dim) {
  MatC u = MatC::Identity(dim, dim);
  u(0, 0) = Cplx(0);
  u(1, 1) = Cplx(0);
  u(0, 1) = Cplx(1);
  u(1, 0) = Cplx(1);
  return u;
}

Tqcfa::QAction unitary_action(MatC u) {
  Tqcfa::QAction a;
  a.kind = Tqcfa::QAction::Kind::kUnitary;
  a.unitary = std::move(u);
  return a;
}

Tqcfa::QAction measure_action(int dim) {
  Tqcfa::QAction a;
  a.kind = Tqcfa::QAction::Kind::kMeasure;
  for (int i = 0; i < dim; ++i) {
    a.partition.labels.push_back("q" + std::to_string(i + 1));
    a.partition.blocks.push_back({i});
  }
  return a;
}

}  // namespace

Tqcfa build_eq_tqcfa(int k) {
  if (k <= 1) throw ValidationError("EQ 2qcfa needs k > 1");
  Tqcfa m;
  m.quantum_states = {"q1", "q2"};
  m.alphabet = Alphabet{{'a', 'b'}};

  auto add = [&m](const std::string& name) {
    m.classical_states.push_back(name);
    return static_cast<int>(m.classical_states.size()) - 1;
  };
  const int qsweep = add("qsweep");
  const int rewind = add("rewind");
  // two random-walk stages, each with ok/failed variants
  struct WalkIds {
    int walk, flip, reset, fwalk, fflip, freset;
  };
  auto add_walk = [&](const std::string& base) {
    WalkIds w;
    w.walk = add(base);
    w.flip = add(base + "_flip");
    w.reset = add(base + "_reset");
    w.fwalk = add(base + "_failed");
    w.fflip = add(base + "_failed_flip");
    w.freset = add(base + "_failed_reset");
    return w;
  };
  const WalkIds w1 = add_walk("walk1");
  const int rew2_ok = add("rewind2");
  const int rew2_f = add("rewind2_failed");
  const WalkIds w2 = add_walk("walk2");
  std::vector<int> coin(k), coin_m(k);
  for (int i = 0; i < k; ++i) {
    coin[i] = add("coin" + std::to_string(i + 1));
    coin_m[i] = add("coin" + std::to_string(i + 1) + "_read");
  }
  const int coin_reset = add("coin_reset");
  const int qrewind = add("qrewind");
  m.accept_state = add("accept");
  m.reject_state = add("reject");
  m.ensure_rule_storage();

  const double theta = std::numbers::sqrt2 * std::numbers::pi;
  const MatC identity2 = MatC::Identity(2, 2);
  const MatC coin_rot = rot2_embedded(2, std::numbers::pi / 4);
  const MatC reset_swap = swap01(2);

  auto set_unitary = [&](int s, char c, MatC u, int next, int move) {
    auto& r = m.rule(s, c);
    r.action = unitary_action(std::move(u));
    r.next = {next, move};
  };
  auto set_measure = [&](int s, char c, Tqcfa::CMove on_q1, Tqcfa::CMove on_q2) {
    auto& r = m.rule(s, c);
    r.action = measure_action(2);
    r.branches = {{"q1", on_q1}, {"q2", on_q2}};
  };

  // Quantum sweep: rotate per letter, measure at the right end-marker.
  set_unitary(qsweep, kLend, identity2, qsweep, +1);
  set_unitary(qsweep, 'a', rot2_embedded(2, theta), qsweep, +1);
  set_unitary(qsweep, 'b', rot2_embedded(2, -theta), qsweep, +1);
  set_measure(qsweep, kRend, {rewind, -1}, {m.reject_state, 0});

  // Head back to cent, then launch walk 1.
  for (char c : {'a', 'b'}) set_unitary(rewind, c, identity2, rewind, -1);
  set_unitary(rewind, kLend, identity2, w1.walk, +1);

  // A walk stage: coin-driven +-1 moves; reaching cent marks failure (the
  // walk keeps going to the right end-marker so every attempt costs the
  // same expected time), reaching dollar completes the stage.
  auto wire_walk = [&](const WalkIds& ids, int done_ok, int done_ok_move, int done_f,
                       int done_f_move) {
    for (char c : {'a', 'b'}) {
      set_unitary(ids.walk, c, coin_rot, ids.flip, 0);
      set_measure(ids.flip, c, {ids.walk, +1}, {ids.reset, 0});
      set_unitary(ids.reset, c, reset_swap, ids.walk, -1);
      set_unitary(ids.fwalk, c, coin_rot, ids.fflip, 0);
      set_measure(ids.fflip, c, {ids.fwalk, +1}, {ids.freset, 0});
      set_unitary(ids.freset, c, reset_swap, ids.fwalk, -1);
    }
    set_unitary(ids.walk, kLend, identity2, ids.fwalk, +1);   // touched cent: failed
    set_unitary(ids.fwalk, kLend, identity2, ids.fwalk, +1);
    set_unitary(ids.walk, kRend, identity2, done_ok, done_ok_move);
    set_unitary(ids.fwalk, kRend, identity2, done_f, done_f_move);
  };
  wire_walk(w1, rew2_ok, -1, rew2_f, -1);
  for (char c : {'a', 'b'}) {
    set_unitary(rew2_ok, c, identity2, rew2_ok, -1);
    set_unitary(rew2_f, c, identity2, rew2_f, -1);
  }
  set_unitary(rew2_ok, kLend, identity2, w2.walk, +1);
  set_unitary(rew2_f, kLend, identity2, w2.fwalk, +1);
  wire_walk(w2, coin[0], 0, qrewind, -1);

  // k coin flips with the head parked on the right end-marker.
  for (int i = 0; i < k; ++i) {
    set_unitary(coin[i], kRend, coin_rot, coin_m[i], 0);
    const Tqcfa::CMove heads =
        (i + 1 < k) ? Tqcfa::CMove{coin[i + 1], 0} : Tqcfa::CMove{m.accept_state, 0};
    set_measure(coin_m[i], kRend, heads, {coin_reset, 0});
  }
  set_unitary(coin_reset, kRend, reset_swap, qrewind, -1);

  // Failed iteration: rewind and start the next quantum sweep.
  for (char c : {'a', 'b'}) set_unitary(qrewind, c, identity2, qrewind, -1);
  set_unitary(qrewind, kLend, identity2, qsweep, 0);

  validate_tqcfa(m);
  return m;
}

Tqcfa build_pal_tqcfa(int k) {
  if (k <= 1) throw ValidationError("PAL 2qcfa needs k > 1");
  Tqcfa m;
  m.quantum_states = {"q1", "q2", "q3"};
  m.alphabet = Alphabet{{'a', 'b'}};

  auto add = [&m](const std::string& name) {
    m.classical_states.push_back(name);
    return static_cast<int>(m.classical_states.size()) - 1;
  };
  const int fwd1 = add("pass1");
  const int rw = add("rewind");
  const int fwd2 = add("pass2");
  const int sweeps = 4 * k;
  std::vector<int> flip(sweeps), flip_m(sweeps);
  for (int i = 0; i < sweeps; ++i) {
    flip[i] = add("flip_sweep" + std::to_string(i + 1));
    flip_m[i] = add("flip_sweep" + std::to_string(i + 1) + "_read");
  }
  const int flip_reset = add("flip_reset");
  const int restart = add("restart");
  m.accept_state = add("accept");
  m.reject_state = add("reject");
  m.ensure_rule_storage();

  const MatC identity3 = MatC::Identity(3, 3);
  const MatC coin_rot = rot2_embedded(3, std::numbers::pi / 4);
  const MatC reset_swap = swap01(3);

  auto set_unitary = [&](int s, char c, MatC u, int next, int move) {
    auto& r = m.rule(s, c);
    r.action = unitary_action(std::move(u));
    r.next = {next, move};
  };
  auto set_measure3 = [&](int s, char c, Tqcfa::CMove on_q1, Tqcfa::CMove on_q2,
                          Tqcfa::CMove on_q3) {
    auto& r = m.rule(s, c);
    r.action = measure_action(3);
    r.branches = {{"q1", on_q1}, {"q2", on_q2}, {"q3", on_q3}};
  };

  // First pass applies U_sigma left to right.
  set_unitary(fwd1, kLend, identity3, fwd1, +1);
  set_unitary(fwd1, 'a', pal_unitary('a'), fwd1, +1);
  set_unitary(fwd1, 'b', pal_unitary('b'), fwd1, +1);
  set_unitary(fwd1, kRend, identity3, rw, -1);
  // Rewind without touching the register, then the inverse pass.
  for (char c : {'a', 'b'}) set_unitary(rw, c, identity3, rw, -1);
  set_unitary(rw, kLend, identity3, fwd2, +1);
  set_unitary(fwd2, 'a', MatC(pal_unitary('a').transpose()), fwd2, +1);
  set_unitary(fwd2, 'b', MatC(pal_unitary('b').transpose()), fwd2, +1);
  set_measure3(fwd2, kRend, {flip[0], 0}, {m.reject_state, 0}, {m.reject_state, 0});

  // 4k coin-flip sweeps across the word, alternating direction; any tails
  // restarts the loop, completing sweep 4k accepts.
  for (int i = 0; i < sweeps; ++i) {
    const bool leftward = (i % 2 == 0);  // sweep 1 starts at the right end-marker
    const int dir = leftward ? -1 : +1;
    const Tqcfa::CMove done =
        (i + 1 < sweeps) ? Tqcfa::CMove{flip[i + 1], 0} : Tqcfa::CMove{m.accept_state, 0};
    for (char c : {'a', 'b'}) {
      set_unitary(flip[i], c, coin_rot, flip_m[i], 0);
      set_measure3(flip_m[i], c, {flip[i], dir}, {flip_reset, 0}, {m.reject_state, 0});
    }
    if (leftward) {
      set_unitary(flip[i], kRend, identity3, flip[i], -1);  // pass through the start marker
      set_unitary(flip[i], kLend, identity3, done.next_state, done.head_move);
    } else {
      set_unitary(flip[i], kLend, identity3, flip[i], +1);
      set_unitary(flip[i], kRend, identity3, done.next_state, done.head_move);
    }
  }
  set_unitary(flip_reset, 'a', reset_swap, restart, 0);
  set_unitary(flip_reset, 'b', reset_swap, restart, 0);
  for (char c : {'a', 'b'}) set_unitary(restart, c, identity3, restart, -1);
  set_unitary(restart, kRend, identity3, restart, -1);
  set_unitary(restart, kLend, identity3, fwd1, 0);

  validate_tqcfa(m);
  return m;
}

LoopProfile tqcfa_exact_accept(TqcfaFamily family, const Word& w, int k) {
  if (k <= 1) throw ValidationError("2qcfa constructions need k > 1");
  switch (family) {
    case TqcfaFamily::kEq: {
      const double r = eq_quantum_phase_reject(w);
      const double len = static_cast<double>(w.size());
      const double a = std::exp2(-k) / ((len + 1) * (len + 1));
      return loop_semantics(r, a);
    }
    case TqcfaFamily::kPal: {
      const double r = pal_quantum_phase_reject(w);
      const double a = std::exp2(-4.0 * k * static_cast<double>(w.size()));
      return loop_semantics(r, a);
    }
  }
  throw ValidationError("unknown 2qcfa family");
}

// ---------------------------------------------------------------------------
// Monte Carlo execution
// ---------------------------------------------------------------------------

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

struct TrialResult {
  bool accepted = false;
  bool capped = false;
  long steps = 0;
};

TrialResult run_trial(const Tqcfa& m, const std::string& tape, std::mt19937_64& rng,
                      long step_cap) {
  const int nq = static_cast<int>(m.quantum_states.size());
  VecC psi = VecC::Zero(nq);
  psi(0) = Cplx(1);
  VecC scratch(nq);
  int state = 0;
  int pos = 0;
  std::uniform_real_distribution<double> uniform(0.0, 1.0);

  TrialResult out;
  while (state != m.accept_state && state != m.reject_state) {
    if (out.steps >= step_cap) {
      out.capped = true;
      return out;
    }
    const char sym = tape[pos];
    const Tqcfa::Rule* rule = m.find_rule(state, sym);
    if (!rule)
      throw ValidationError("2qcfa has no rule for (" + m.classical_states[state] +
                            ", tape cell " + std::to_string(pos + 1) + ")");
    Tqcfa::CMove mv;
    if (rule->action.kind == Tqcfa::QAction::Kind::kUnitary) {
      scratch.noalias() = rule->action.unitary * psi;
      psi.swap(scratch);
      mv = rule->next;
    } else {
      const auto& part = rule->action.partition;
      double total = 0;
      std::vector<double> probs(part.blocks.size(), 0.0);
      for (size_t b = 0; b < part.blocks.size(); ++b) {
        for (int idx : part.blocks[b]) probs[b] += std::norm(psi(idx));
        total += probs[b];
      }
      double draw = uniform(rng) * total;
      size_t picked = part.blocks.size() - 1;
      for (size_t b = 0; b < part.blocks.size(); ++b) {
        if (draw < probs[b]) {
          picked = b;
          break;
        }
        draw -= probs[b];
      }
      while (probs[picked] <= 0) --picked;  // guard against rounding at block edges
      const double scale = 1.0 / std::sqrt(probs[picked]);
      scratch.setZero();
      for (int idx : part.blocks[picked]) scratch(idx) = psi(idx) * scale;
      psi.swap(scratch);
      auto branch = rule->branches.find(part.labels[picked]);
      if (branch == rule->branches.end())
        throw ValidationError("2qcfa measurement outcome '" + part.labels[picked] +
                              "' has no classical branch in state " + m.classical_states[state]);
      mv = branch->second;
    }
    state = mv.next_state;
    pos += mv.head_move;
    if (pos < 0 || pos >= static_cast<int>(tape.size()))
      throw ValidationError("2qcfa head left the tape");
    ++out.steps;
  }
  out.accepted = (state == m.accept_state);
  return out;
}

}  // namespace

TqcfaStats tqcfa_monte_carlo(const Tqcfa& m, const Word& w, long trials, std::uint64_t seed,
                             long step_cap) {
  if (trials < 1) throw ValidationError("monte carlo needs at least one trial");
  const std::string tape = padded_tape(w);
  TqcfaStats stats;
  stats.trials = trials;
  double sum = 0, sum_sq = 0;
  long completed = 0;
  for (long t = 0; t < trials; ++t) {
    std::mt19937_64 rng(splitmix64(seed ^ splitmix64(static_cast<std::uint64_t>(t))));
    const TrialResult r = run_trial(m, tape, rng, step_cap);
    if (r.capped) {
      ++stats.capped;
      continue;
    }
    ++completed;
    (r.accepted ? stats.accepts : stats.rejects)++;
    sum += static_cast<double>(r.steps);
    sum_sq += static_cast<double>(r.steps) * static_cast<double>(r.steps);
  }
  stats.accept_frequency = static_cast<double>(stats.accepts) / static_cast<double>(trials);
  if (completed > 0) {
    stats.mean_steps = sum / static_cast<double>(completed);
    const double var = sum_sq / static_cast<double>(completed) - stats.mean_steps * stats.mean_steps;
    stats.stddev_steps = std::sqrt(std::max(0.0, var));
  }
  return stats;
}

// ---------------------------------------------------------------------------
// Quantum-head machines
// ---------------------------------------------------------------------------

const std::array<MatC, 3>& TwoWayKwqfa::local_for(char tape_symbol) const {
  auto it = delta.find(tape_symbol);
  if (it == delta.end()) {
    if (tape_symbol == kLend || tape_symbol == kRend)
      throw ValidationError("two-way machine misses an end-marker transition");
    throw AlphabetError(std::string("symbol '") + tape_symbol + "' is not in the machine alphabet");
  }
  return it->second;
}

void validate_twoway_kwqfa(const TwoWayKwqfa& m, double /*tol*/) {
  const int n = m.n();
  BasisPartition p{{"accept", "reject", "nonhalt"}, {m.accepting, m.rejecting, m.nonhalting}};
  p.validate(n);
  if (m.delta.find(kLend) == m.delta.end() || m.delta.find(kRend) == m.delta.end())
    throw ValidationError("two-way machine needs lend/rend transitions");
  for (char c : m.alphabet.symbols)
    if (m.delta.find(c) == m.delta.end())
      throw ValidationError(std::string("two-way machine misses transitions for '") + c + "'");
  for (const auto& [sym, mats] : m.delta) {
    for (const auto& a : mats)
      if (a.rows() != n || a.cols() != n)
        throw ValidationError("two-way local transition matrix has wrong dimension");
    if (m.one_five && !mats[0].isZero(0))
      throw ValidationError("1.5-way machine must not move its head left");
  }
}

namespace {

// Applies the induced global operator once: configs are (state, position),
// indexed q + n*pos.  Amplitude moving off the tape is a validation error.
VecC global_step(const TwoWayKwqfa& m, const std::string& tape, const VecC& live) {
  const int n = m.n();
  const int len = static_cast<int>(tape.size());
  VecC out = VecC::Zero(n * len);
  for (int pos = 0; pos < len; ++pos) {
    bool occupied = false;
    for (int q = 0; q < n; ++q) occupied |= (live(q + n * pos) != Cplx(0));
    if (!occupied) continue;
    const auto& local = m.local_for(tape[pos]);
    for (int c = -1; c <= 1; ++c) {
      const MatC& a = local[c + 1];
      const int target = pos + c;
      for (int q = 0; q < n; ++q) {
        const Cplx amp = live(q + n * pos);
        if (amp == Cplx(0)) continue;
        for (int qp = 0; qp < n; ++qp) {
          const Cplx coeff = a(qp, q);
          if (coeff == Cplx(0)) continue;
          if (target < 0 || target >= len)
            throw ValidationError("two-way machine moved amplitude off the tape from " +
                                  m.states[q] + "@" + std::to_string(pos + 1));
          out(qp + n * target) += coeff * amp;
        }
      }
    }
  }
  return out;
}

}  // namespace

RunOutcome twoway_kwqfa_run(const TwoWayKwqfa& m, const Word& w, long max_steps,
                            double residual_tol, double conservation_tol) {
  validate_twoway_kwqfa(m);
  const std::string tape = padded_tape(w);
  const int n = m.n();
  const int len = static_cast<int>(tape.size());
  if (max_steps < 0) max_steps = 10L * len * n;

  VecC live = VecC::Zero(n * len);
  live(0) = Cplx(1);  // state q1 on the left end-marker
  RunOutcome out;

  auto measure = [&]() {
    for (int pos = 0; pos < len; ++pos) {
      for (int q : m.accepting) {
        out.accept += std::norm(live(q + n * pos));
        live(q + n * pos) = Cplx(0);
      }
      for (int q : m.rejecting) {
        out.reject += std::norm(live(q + n * pos));
        live(q + n * pos) = Cplx(0);
      }
    }
  };

  measure();  // an initial halting state halts immediately
  out.residual = live.squaredNorm();
  while (out.residual > residual_tol && out.steps < max_steps) {
    live = global_step(m, tape, live);
    measure();
    out.residual = live.squaredNorm();
    ++out.steps;
    const double total = out.accept + out.reject + out.residual;
    if (std::abs(total - 1.0) > conservation_tol)
      throw ValidationError("well-formedness failure: configuration norm drifted to " +
                            std::to_string(total) + " after step " + std::to_string(out.steps));
  }
  return out;
}

TwoWayKwqfa build_eq_15kwqfa() {
  TwoWayKwqfa m;
  m.states = {"q1", "q2", "qw", "qa", "qr"};
  m.alphabet = Alphabet{{'a', 'b'}};
  m.accepting = {3};
  m.rejecting = {4};
  m.nonhalting = {0, 1, 2};
  m.one_five = true;
  const int n = 5;
  const double is = 1.0 / std::numbers::sqrt2;
  auto zeros = [&] { return std::array<MatC, 3>{MatC::Zero(n, n), MatC::Zero(n, n), MatC::Zero(n, n)}; };

  // cent: every state moves right; q1 splits into (q1+q2)/sqrt(2).  The
  // unreachable columns are completed to keep the local move block unitary.
  auto cent = zeros();
  cent[2](0, 0) = is;
  cent[2](1, 0) = is;
  cent[2](0, 1) = is;
  cent[2](1, 1) = -is;
  cent[2](2, 2) = 1;
  cent[2](3, 3) = 1;
  cent[2](4, 4) = 1;
  m.delta[kLend] = cent;

  // a: q1 -> qw (stay), qw -> q1 (right), q2 -> q2 (right); halting states
  // idle in place.
  auto on_a = zeros();
  on_a[1](2, 0) = 1;
  on_a[2](0, 2) = 1;
  on_a[2](1, 1) = 1;
  on_a[1](3, 3) = 1;
  on_a[1](4, 4) = 1;
  m.delta['a'] = on_a;

  // b: mirror image of a.
  auto on_b = zeros();
  on_b[1](2, 1) = 1;
  on_b[2](1, 2) = 1;
  on_b[2](0, 0) = 1;
  on_b[1](3, 3) = 1;
  on_b[1](4, 4) = 1;
  m.delta['b'] = on_b;

  // dollar: interfere the two branches into accept/reject halves; the stay
  // block is completed to a 5x5 unitary.
  auto dollar = zeros();
  dollar[1](3, 0) = is;
  dollar[1](4, 0) = is;
  dollar[1](3, 1) = is;
  dollar[1](4, 1) = -is;
  dollar[1](2, 2) = 1;
  dollar[1](0, 3) = 1;
  dollar[1](1, 4) = 1;
  m.delta[kRend] = dollar;

  validate_twoway_kwqfa(m);
  return m;
}

WellformedReport check_wellformed(const TwoWayKwqfa& m, const std::vector<int>& lengths,
                                  double tol) {
  validate_twoway_kwqfa(m);
  WellformedReport report;
  report.lengths_checked = lengths;
  const int n = m.n();
  std::vector<char> halting(n, 0);
  for (int q : m.accepting) halting[q] = 1;
  for (int q : m.rejecting) halting[q] = 1;

  auto config_name = [&](int id, int /*len*/) {
    return m.states[id % n] + "@" + std::to_string(id / n + 1);
  };

  auto check_word = [&](const Word& w) -> bool {
    const std::string tape = padded_tape(w);
    const int len = static_cast<int>(tape.size());
    // Live reachable configurations: halting targets are measured out, so
    // they never feed a column of the evolution operator.
    std::vector<VecC> columns;
    std::vector<int> column_ids;
    std::vector<char> visited(n * len, 0);
    std::deque<int> frontier;
    if (!halting[0]) {
      frontier.push_back(0);
      visited[0] = 1;
    }
    while (!frontier.empty()) {
      const int id = frontier.front();
      frontier.pop_front();
      VecC source = VecC::Zero(n * len);
      source(id) = Cplx(1);
      VecC col = global_step(m, tape, source);
      for (int t = 0; t < n * len; ++t) {
        if (col(t) == Cplx(0) || visited[t] || halting[t % n]) continue;
        visited[t] = 1;
        frontier.push_back(t);
      }
      columns.push_back(std::move(col));
      column_ids.push_back(id);
    }
    for (size_t i = 0; i < columns.size(); ++i) {
      for (size_t j = i; j < columns.size(); ++j) {
        const Cplx inner = columns[i].dot(columns[j]);  // conjugates the left factor
        const Cplx expected = (i == j) ? Cplx(1) : Cplx(0);
        const double defect = std::abs(inner - expected);
        if (defect > tol) {
          report.ok = false;
          report.violation = WellformedViolation{w, config_name(column_ids[i], len),
                                                 config_name(column_ids[j], len), defect};
          return false;
        }
      }
    }
    return true;
  };

  for (int len : lengths) {
    std::vector<Word> words;
    words.emplace_back();
    for (int i = 0; i < len; ++i) {
      std::vector<Word> next;
      for (const auto& w : words)
        for (char c : m.alphabet.symbols) next.push_back(w + c);
      words = std::move(next);
    }
    for (const auto& w : words) {
      ++report.words_checked;
      if (!check_word(w)) return report;
    }
  }
  return report;
}

}  // namespace qfa
