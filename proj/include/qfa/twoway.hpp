#pragma once

// Two-way machines.
//
// Tqcfa: a two-way automaton with classical states and head plus a
// constant-size quantum register; each step performs a quantum action
// (unitary or projective measurement) selected by (classical state, symbol)
// and then a classical transition that may branch on the measurement
// outcome.  Executable by Monte Carlo trials; the EQ and PAL machines also
// have exact loop analyses.
//
// TwoWayKwqfa: a quantum-head machine evolving a superposition over
// configurations (state, head position), with an accept/reject/non-halting
// partial measurement after every global step.  1.5-way machines restrict
// head moves to {stay, right}.

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "qfa/classical.hpp"
#include "qfa/quantum.hpp"

namespace qfa {

// Internal tape markers; input alphabets must not use them.
inline constexpr char kLend = '\x01';
inline constexpr char kRend = '\x02';

inline std::string padded_tape(const Word& w) { return kLend + w + kRend; }

/// Outcome mass of an exact two-way run.
struct RunOutcome {
  double accept = 0;
  double reject = 0;
  double residual = 0;  // live non-halting mass when the run stopped
  long steps = 0;
};

// ---------------------------------------------------------------------------
// Loop analysis shared by the 2QCFA constructions
// ---------------------------------------------------------------------------

/// Stationary analysis of the quantum-then-classical loop: each iteration
/// rejects with probability r in the quantum phase and otherwise accepts
/// with probability a in the classical phase.
struct LoopProfile {
  double reject_per_iteration = 0;
  double accept_per_iteration = 0;
  double accept_overall = 0;
  double expected_iterations = 0;
};

LoopProfile loop_semantics(double r, double a);

/// sin^2(sqrt(2) pi (|w|_a - |w|_b)): probability that the EQ machine's
/// end-of-sweep measurement rejects; zero exactly on balanced words.
double eq_quantum_phase_reject(const Word& w);

/// 1 - |<q1| U^-1-pass U-pass |q1>|^2 for the PAL machine's two-pass phase;
/// zero exactly on palindromes.
double pal_quantum_phase_reject(const Word& w);

// ---------------------------------------------------------------------------
// 2QCFA
// ---------------------------------------------------------------------------

struct Tqcfa {
  struct QAction {
    enum class Kind { kUnitary, kMeasure };
    Kind kind = Kind::kUnitary;
    MatC unitary;              // when kind == kUnitary
    BasisPartition partition;  // when kind == kMeasure
  };
  struct CMove {
    int next_state = 0;
    int head_move = 0;  // -1, 0, +1
  };
  struct Rule {
    QAction action;
    CMove next;                            // unitary rules
    std::map<std::string, CMove> branches; // measurement rules, keyed by outcome label
  };

  std::vector<std::string> classical_states;  // index 0 is the start state
  int accept_state = -1, reject_state = -1;
  std::vector<std::string> quantum_states;    // index 0 is q1
  Alphabet alphabet;
  // rules indexed [classical state][symbol id]; symbol ids: 0 lend, 1 rend, 2+i alphabet
  std::vector<std::vector<std::optional<Rule>>> rules;

  int symbol_id(char c) const {
    if (c == kLend) return 0;
    if (c == kRend) return 1;
    return 2 + alphabet.index_of(c);
  }
  Rule& rule(int state, char c);
  const Rule* find_rule(int state, char c) const;
  void ensure_rule_storage();
};

void validate_tqcfa(const Tqcfa& m, double tol = kValidationTol);

enum class TqcfaFamily { kEq, kPal };

/// 2QCFA for EQ: rotation sweeps by sqrt(2) pi with an
/// end-of-sweep measurement, then two consecutive head random walks from the
/// left end-marker followed by k coin flips (per-iteration acceptance
/// 2^-k / (|w|+1)^2).
Tqcfa build_eq_tqcfa(int k);

/// 2QCFA for PAL: two left-to-right passes applying U_sigma then
/// their inverses, a full measurement, and 4k|w| coin flips metered by head
/// sweeps (per-iteration acceptance 2^-4k|w|).
Tqcfa build_pal_tqcfa(int k);

/// Closed-form loop profile of the named machine families.
LoopProfile tqcfa_exact_accept(TqcfaFamily family, const Word& w, int k);

struct TqcfaStats {
  long trials = 0;
  long accepts = 0;
  long rejects = 0;
  long capped = 0;  // trials that hit the step cap (flagged, never dropped)
  double accept_frequency = 0;  // accepts / trials
  double mean_steps = 0;        // over completed trials
  double stddev_steps = 0;
};

/// Independent trials with per-trial generators derived from (seed, trial
/// index) through a counter-based hash, so results do not depend on
/// execution order.
TqcfaStats tqcfa_monte_carlo(const Tqcfa& m, const Word& w, long trials, std::uint64_t seed,
                             long step_cap = 50'000'000);

// ---------------------------------------------------------------------------
// Two-way / 1.5-way KWQFA (quantum head)
// ---------------------------------------------------------------------------

struct TwoWayKwqfa {
  std::vector<std::string> states;  // index 0 is q1
  Alphabet alphabet;
  std::vector<int> accepting, rejecting, nonhalting;
  // Local transition amplitudes per symbol: delta[c+1](q', q) is the
  // amplitude of |q, d> -> |q', d+c|, c in {-1, 0, +1}.
  std::map<char, std::array<MatC, 3>> delta;
  bool one_five = false;  // head moves restricted to {0, +1}

  int n() const { return static_cast<int>(states.size()); }
  const std::array<MatC, 3>& local_for(char tape_symbol) const;
};

void validate_twoway_kwqfa(const TwoWayKwqfa& m, double tol = kValidationTol);

/// Evolves the configuration superposition, measuring accept/reject mass
/// after every global step.  Stops when the live mass drops below
/// `residual_tol` or after `max_steps` (default 10 |w~| |Q|) steps.  Throws
/// ValidationError when the step leaks norm beyond `conservation_tol`
/// (a well-formedness failure on this input).
RunOutcome twoway_kwqfa_run(const TwoWayKwqfa& m, const Word& w, long max_steps = -1,
                            double residual_tol = kConservationTol,
                            double conservation_tol = 1e-10);

/// The 5-state 1.5-way KWQFA for EQ: cent splits q1 into (q1+q2)/sqrt(2),
/// the q1 branch crosses an `a` in two steps and a `b` in one (the q2
/// branch mirrored), and the dollar transition interferes the branches into
/// accept/reject halves.
TwoWayKwqfa build_eq_15kwqfa();

struct WellformedViolation {
  Word word;
  std::string config_a, config_b;  // "state@position" pair whose columns fail
  double defect = 0;               // |<col_a, col_b> - delta_ab|
};

struct WellformedReport {
  bool ok = true;
  std::vector<int> lengths_checked;
  long words_checked = 0;
  std::optional<WellformedViolation> violation;  // first failure found
};

/// For every word of each given length, restricts the induced global
/// operator to the configurations reachable with nonzero amplitude (halting
/// configurations are measured out and contribute no columns) and verifies
/// it is an isometry within `tol`.
WellformedReport check_wellformed(const TwoWayKwqfa& m, const std::vector<int>& lengths,
                                  double tol = kValidationTol);

}  // namespace qfa
