#include <catch2/catch_amalgamated.hpp>

#include <numbers>

#include "oracles.hpp"
#include "qfa/twoway.hpp"

using namespace qfa;
using namespace qfa::testing;

namespace {

bool balanced(const Word& w) {
  long d = 0;
  for (char c : w) d += (c == 'a') ? 1 : -1;
  return d == 0;
}

bool palindrome(const Word& w) {
  return std::equal(w.begin(), w.begin() + w.size() / 2, w.rbegin());
}

}  // namespace

TEST_CASE("loop_semantics closed form") {
  CHECK(loop_semantics(0.0, 0.25).accept_overall == 1.0);
  const LoopProfile all_reject = loop_semantics(1.0, 0.5);
  CHECK(all_reject.accept_overall == 0.0);
  CHECK(all_reject.expected_iterations == 1.0);
  for (double r : {0.1, 0.4, 0.9}) {
    const LoopProfile p = loop_semantics(r, r);
    CHECK(std::abs(p.accept_overall - (1 - r) / (2 - r)) <= 1e-15);
    CHECK(p.accept_overall < 0.5);
  }
  CHECK_THROWS_AS(loop_semantics(0.0, 0.0), NonterminationError);
  CHECK_THROWS_AS(loop_semantics(-0.1, 0.5), ValidationError);

  // monotone: accept grows with a, falls with r
  double prev = -1;
  for (double a = 0.05; a < 1.0; a += 0.05) {
    const double acc = loop_semantics(0.3, a).accept_overall;
    CHECK(acc > prev);
    prev = acc;
  }
  prev = 2;
  for (double r = 0.05; r < 1.0; r += 0.05) {
    const double acc = loop_semantics(r, 0.3).accept_overall;
    CHECK(acc < prev);
    prev = acc;
  }
}

TEST_CASE("EQ quantum phase") {
  CHECK(eq_quantum_phase_reject("ab") == 0.0);
  CHECK(eq_quantum_phase_reject("") == 0.0);
  CHECK(std::abs(eq_quantum_phase_reject("a") - 0.9291080928344088) <= 1e-12);
  CHECK_THROWS_AS(eq_quantum_phase_reject("abc"), AlphabetError);
  for (const Word& w : words_up_to({'a', 'b'}, 10))
    if (balanced(w)) CHECK(eq_quantum_phase_reject(w) == 0.0);
  for (const Word& w : words_up_to({'a', 'b'}, 8))
    if (!balanced(w))
      CHECK(eq_quantum_phase_reject(w) >=
            1.0 / (2.0 * static_cast<double>(w.size()) * static_cast<double>(w.size())));
}

TEST_CASE("PAL quantum phase") {
  CHECK(pal_quantum_phase_reject("") == 0.0);
  CHECK(pal_quantum_phase_reject("aba") <= 1e-15);
  CHECK(pal_quantum_phase_reject("ab") >= std::pow(25.0, -2));
  for (const Word& w : words_up_to({'a', 'b'}, 10))
    if (palindrome(w)) CHECK(pal_quantum_phase_reject(w) <= 1e-10);
  for (const Word& w : words_up_to({'a', 'b'}, 8)) {
    if (!palindrome(w))
      CHECK(pal_quantum_phase_reject(w) >= std::pow(25.0, -static_cast<double>(w.size())));
    // the double evaluation matches exact integer arithmetic
    CHECK(std::abs(pal_quantum_phase_reject(w) - pal_reject_exact(w)) <= 1e-12);
  }
}

TEST_CASE("2QCFA exact loop profiles") {
  CHECK(tqcfa_exact_accept(TqcfaFamily::kEq, "ab", 2).accept_overall == 1.0);
  CHECK(tqcfa_exact_accept(TqcfaFamily::kEq, "", 2).accept_overall == 1.0);
  CHECK(tqcfa_exact_accept(TqcfaFamily::kPal, "aba", 2).accept_overall == 1.0);
  // nonmember rejection lower bounds, k = 2
  const double eq_bound = std::exp2(2) / (std::exp2(2) + 2);
  for (const Word& w : words_up_to({'a', 'b'}, 6)) {
    if (!balanced(w))
      CHECK(1 - tqcfa_exact_accept(TqcfaFamily::kEq, w, 2).accept_overall >= eq_bound);
    if (!palindrome(w))
      CHECK(1 - tqcfa_exact_accept(TqcfaFamily::kPal, w, 2).accept_overall >=
            16.0 * 2 / (16.0 * 2 + 25));
  }
  CHECK_THROWS_AS(tqcfa_exact_accept(TqcfaFamily::kEq, "a", 1), ValidationError);
}

TEST_CASE("EQ 2QCFA Monte Carlo matches the exact analysis") {
  const Tqcfa machine = build_eq_tqcfa(2);
  const long trials = 20000;
  for (const Word& w : {Word(""), Word("ab"), Word("a"), Word("aab")}) {
    const LoopProfile lp = tqcfa_exact_accept(TqcfaFamily::kEq, w, 2);
    const TqcfaStats stats = tqcfa_monte_carlo(machine, w, trials, 42);
    CHECK(stats.capped == 0);
    const double sigma =
        std::sqrt(std::max(lp.accept_overall * (1 - lp.accept_overall), 1e-12) / trials);
    CHECK(std::abs(stats.accept_frequency - lp.accept_overall) <= 5 * sigma + 1e-9);
    if (balanced(w)) CHECK(stats.accepts == trials);  // members can never be rejected
  }
}

TEST_CASE("PAL 2QCFA Monte Carlo matches the exact analysis") {
  const Tqcfa machine = build_pal_tqcfa(2);
  struct Case {
    Word w;
    long trials;
  };
  for (const Case& c : {Case{"a", 2000}, Case{"ab", 4000}, Case{"abab", 4000}}) {
    const LoopProfile lp = tqcfa_exact_accept(TqcfaFamily::kPal, c.w, 2);
    const TqcfaStats stats = tqcfa_monte_carlo(machine, c.w, c.trials, 7);
    CHECK(stats.capped == 0);
    const double sigma =
        std::sqrt(std::max(lp.accept_overall * (1 - lp.accept_overall), 1e-12) / c.trials);
    CHECK(std::abs(stats.accept_frequency - lp.accept_overall) <= 5 * sigma + 1e-6);
  }
}

TEST_CASE("monte carlo on a deterministic rejector") {
  Tqcfa m;
  m.classical_states = {"start", "accept", "reject"};
  m.quantum_states = {"q1"};
  m.alphabet = Alphabet{{'a'}};
  m.accept_state = 1;
  m.reject_state = 2;
  m.ensure_rule_storage();
  auto& rule = m.rule(0, kLend);
  rule.action.kind = Tqcfa::QAction::Kind::kUnitary;
  rule.action.unitary = MatC::Identity(1, 1);
  rule.next = {2, 0};
  validate_tqcfa(m);
  const TqcfaStats stats = tqcfa_monte_carlo(m, "aa", 500, 3);
  CHECK(stats.accepts == 0);
  CHECK(stats.rejects == 500);
  CHECK(stats.mean_steps == 1.0);
}

TEST_CASE("2QCFA validation rejects off-tape moves") {
  Tqcfa m;
  m.classical_states = {"start", "accept", "reject"};
  m.quantum_states = {"q1"};
  m.alphabet = Alphabet{{'a'}};
  m.accept_state = 1;
  m.reject_state = 2;
  m.ensure_rule_storage();
  auto& rule = m.rule(0, kLend);
  rule.action.kind = Tqcfa::QAction::Kind::kUnitary;
  rule.action.unitary = MatC::Identity(1, 1);
  rule.next = {0, -1};  // off the left end-marker
  CHECK_THROWS_AS(validate_tqcfa(m), ValidationError);
  rule.next = {0, +1};
  validate_tqcfa(m);
  m.reject_state = 1;
  CHECK_THROWS_AS(validate_tqcfa(m), ValidationError);
}

TEST_CASE("EQ member expected time grows polynomially") {
  const Tqcfa machine = build_eq_tqcfa(2);
  double prev = 0;
  for (int m = 1; m <= 3; ++m) {
    const TqcfaStats stats = tqcfa_monte_carlo(machine, repeat("ab", m), 1200, 9);
    CHECK(stats.capped == 0);
    CHECK(stats.mean_steps > prev * 1.8);  // strictly superlinear growth
    prev = stats.mean_steps;
  }
}

TEST_CASE("1.5-way KWQFA for EQ") {
  const TwoWayKwqfa m = build_eq_15kwqfa();

  const RunOutcome ab = twoway_kwqfa_run(m, "ab");
  CHECK(std::abs(ab.accept - 1.0) <= 1e-10);
  CHECK(ab.residual <= 1e-12);

  const RunOutcome aab = twoway_kwqfa_run(m, "aab");
  CHECK(std::abs(aab.accept - 0.5) <= 1e-10);
  CHECK(std::abs(aab.reject - 0.5) <= 1e-10);

  const RunOutcome ba = twoway_kwqfa_run(m, "ba");
  CHECK(std::abs(ba.accept - 1.0) <= 1e-10);

  for (const Word& w : words_up_to({'a', 'b'}, 7)) {
    const RunOutcome r = twoway_kwqfa_run(m, w);
    const double expected = balanced(w) ? 1.0 : 0.5;
    CHECK(std::abs(r.accept - expected) <= 1e-10);
    CHECK(r.residual <= 1e-12);
    CHECK(r.steps <= 2 * static_cast<long>(w.size() + 2));
    CHECK(std::abs(r.accept + r.reject + r.residual - 1.0) <= 1e-10);
  }
}

TEST_CASE("two-way machine rejecting at the left end-marker") {
  TwoWayKwqfa m;
  m.states = {"q1", "qr"};
  m.alphabet = Alphabet{{'a'}};
  m.accepting = {};
  m.rejecting = {1};
  m.nonhalting = {0};
  auto zeros = [] { return std::array<MatC, 3>{MatC::Zero(2, 2), MatC::Zero(2, 2), MatC::Zero(2, 2)}; };
  auto cent = zeros();
  cent[1](1, 0) = Cplx(1);  // q1 -> qr, stay
  cent[1](0, 1) = Cplx(1);
  m.delta[kLend] = cent;
  auto ident = zeros();
  ident[1](0, 0) = Cplx(1);
  ident[1](1, 1) = Cplx(1);
  m.delta['a'] = ident;
  m.delta[kRend] = ident;
  const RunOutcome r = twoway_kwqfa_run(m, "aaa");
  CHECK(r.reject == 1.0);
  CHECK(r.accept == 0.0);
  CHECK(r.steps == 1);
}

TEST_CASE("stationary machine reaches the step cap with full residual") {
  TwoWayKwqfa m;
  m.states = {"q1"};
  m.alphabet = Alphabet{{'a'}};
  m.accepting = {};
  m.rejecting = {};
  m.nonhalting = {0};
  auto self = std::array<MatC, 3>{MatC::Zero(1, 1), MatC::Identity(1, 1), MatC::Zero(1, 1)};
  m.delta[kLend] = self;
  m.delta['a'] = self;
  m.delta[kRend] = self;
  const RunOutcome r = twoway_kwqfa_run(m, "aa", 25);
  CHECK(r.steps == 25);
  CHECK(std::abs(r.residual - 1.0) <= 1e-12);
  const WellformedReport rep = check_wellformed(m, {1, 2, 3});
  CHECK(rep.ok);
}

TEST_CASE("well-formedness checking") {
  const TwoWayKwqfa eq = build_eq_15kwqfa();
  const WellformedReport good = check_wellformed(eq, {1, 2, 3, 4, 5, 6});
  CHECK(good.ok);
  CHECK(good.words_checked == 2 + 4 + 8 + 16 + 32 + 64);

  // shrinking one amplitude breaks the isometry and the report names the
  // offending configuration
  TwoWayKwqfa bad = eq;
  bad.delta['a'][1](2, 0) = Cplx(0.5);
  const WellformedReport rep = check_wellformed(bad, {2});
  REQUIRE_FALSE(rep.ok);
  REQUIRE(rep.violation.has_value());
  CHECK(rep.violation->config_a == rep.violation->config_b);
  CHECK(rep.violation->config_a.find("q1@") == 0);

  // runtime catches the same defect as norm drift
  CHECK_THROWS_AS(twoway_kwqfa_run(bad, "aa"), ValidationError);
}
