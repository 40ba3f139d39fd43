#include <catch2/catch_amalgamated.hpp>

#include <numbers>
#include <random>

#include "oracles.hpp"
#include "qfa/oneway.hpp"

using namespace qfa;
using namespace qfa::testing;

TEST_CASE("MOD_p two-state machine follows the rotation closed form") {
  for (int p : {3, 5}) {
    for (int k = 1; k < p; ++k) {
      const Mcqfa m = build_modp_2state(p, k);
      validate_mcqfa(m);
      for (int j = 0; j <= 4 * p; ++j) {
        const double expected = std::pow(std::cos(2.0 * std::numbers::pi * j * k / p), 2);
        CHECK(std::abs(mcqfa_accept(m, Word(j, 'a')) - expected) <= 1e-12);
      }
    }
  }
  // flagship values for p = 5
  const Mcqfa m5 = build_modp_2state(5, 1);
  CHECK(std::abs(mcqfa_accept(m5, "aaaaa") - 1.0) <= 1e-12);
  CHECK(std::abs(mcqfa_accept(m5, "a") - 0.0954915028125263) <= 1e-12);
  const Mcqfa m52 = build_modp_2state(5, 2);
  CHECK(std::abs(mcqfa_accept(m52, "a") - 0.6545084971874736) <= 1e-12);
  CHECK(std::abs(mcqfa_accept(build_modp_2state(3, 1), "") - 1.0) <= 1e-15);

  CHECK_THROWS_AS(build_modp_2state(4, 1), ValidationError);
  CHECK_THROWS_AS(build_modp_2state(5, 0), ValidationError);
  CHECK_THROWS_AS(build_modp_2state(5, 5), ValidationError);
}

TEST_CASE("MOD_5 membership table under negative one-sided classification") {
  const Mcqfa m = build_modp_2state(5, 1);
  for (int j = 0; j <= 10; ++j) {
    const Decision d =
        classify_word(mcqfa_accept(m, Word(j, 'a')), AcceptanceMode::negative_one_sided());
    CHECK((d == Decision::kMember) == (j % 5 == 0));
  }
}

TEST_CASE("mcqfa keeps unit norm along every prefix") {
  std::mt19937_64 rng(31);
  Mcqfa m;
  m.n = 3;
  m.alphabet = Alphabet{{'a', 'b'}};
  m.by_symbol = {random_unitary(3, rng), random_unitary(3, rng)};
  m.left_end = random_unitary(3, rng);
  m.right_end = random_unitary(3, rng);
  m.accepting = {1};
  validate_mcqfa(m);
  VecC v = VecC::Zero(3);
  v(0) = Cplx(1);
  v = m.left_end * v;
  CHECK(std::abs(v.squaredNorm() - 1) <= 1e-12);
  for (char c : Word("abba")) {
    v = m.matrix_for(c) * v;
    CHECK(std::abs(v.squaredNorm() - 1) <= 1e-12);
  }
}

TEST_CASE("kwqfa semantics") {
  // cent sends q1 straight into an accepting state
  Kwqfa direct;
  direct.n = 2;
  direct.alphabet = Alphabet{{'a'}};
  MatC swap(2, 2);
  swap << Cplx(0), Cplx(1), Cplx(1), Cplx(0);
  direct.by_symbol = {MatC::Identity(2, 2)};
  direct.left_end = swap;
  direct.right_end = MatC::Identity(2, 2);
  direct.accepting = {1};
  direct.rejecting = {};
  direct.nonhalting = {0};
  validate_kwqfa(direct);
  const auto res = kwqfa_accept(direct, "aaa");
  CHECK(res.acc == 1.0);
  CHECK(res.rej == 0.0);

  // no accepting states: everything is eventually rejected
  Kwqfa hopeless = direct;
  hopeless.accepting = {};
  hopeless.rejecting = {1};
  validate_kwqfa(hopeless);
  for (const Word& w : {Word(""), Word("a"), Word("aa")}) {
    const auto r = kwqfa_accept(hopeless, w);
    CHECK(r.acc == 0.0);
    CHECK(std::abs(r.rej - 1.0) <= 1e-12);
  }
}

TEST_CASE("kwqfa embedding reproduces mcqfa and keeps its ledger conserved") {
  const Mcqfa m = build_modp_2state(5, 1);
  const Kwqfa k = kwqfa_from_mcqfa(m);
  validate_kwqfa(k);
  for (int j = 0; j <= 12; ++j) {
    std::vector<HaltingLedger<Cplx>> trace;
    const auto res = kwqfa_accept(k, Word(j, 'a'), &trace);
    CHECK(std::abs(res.acc - mcqfa_accept(m, Word(j, 'a'))) <= 1e-12);
    CHECK(std::abs(res.acc + res.rej - 1.0) <= 1e-10);
    for (const auto& snap : trace)
      CHECK(std::abs(snap.acc + snap.rej + squared_norm<Cplx>(snap.live) - 1.0) <= 1e-10);
  }
}

TEST_CASE("general qfa evaluator") {
  GeneralQfa idle;
  idle.n = 2;
  idle.alphabet = Alphabet{{'a'}};
  idle.by_symbol = {SuperC{{MatC::Identity(2, 2)}}};
  idle.left_end = SuperC{{MatC::Identity(2, 2)}};
  idle.right_end = SuperC{{MatC::Identity(2, 2)}};
  idle.accepting = {0};
  validate_general_qfa(idle);
  CHECK(general_qfa_accept(idle, "aa") == 1.0);
  idle.accepting = {1};
  CHECK(general_qfa_accept(idle, "aa") == 0.0);

  // unitary-only channels equal the mcqfa evaluator
  std::mt19937_64 rng(13);
  for (int iter = 0; iter < 10; ++iter) {
    Mcqfa m;
    m.n = 3;
    m.alphabet = Alphabet{{'a', 'b'}};
    m.by_symbol = {random_unitary(3, rng), random_unitary(3, rng)};
    m.left_end = random_unitary(3, rng);
    m.right_end = random_unitary(3, rng);
    m.accepting = {0, 2};
    const GeneralQfa g = general_from_mcqfa(m);
    validate_general_qfa(g);
    for (const Word& w : words_up_to({'a', 'b'}, 4))
      CHECK(std::abs(general_qfa_accept(g, w) - mcqfa_accept(m, w)) <= 1e-12);
  }
}

TEST_CASE("model embedding chain agrees across MCQFA, KWQFA and general QFA") {
  std::mt19937_64 rng(47);
  for (int iter = 0; iter < 5; ++iter) {
    Mcqfa m;
    m.n = 2;
    m.alphabet = Alphabet{{'a', 'b'}};
    m.by_symbol = {random_unitary(2, rng), random_unitary(2, rng)};
    m.left_end = random_unitary(2, rng);
    m.right_end = random_unitary(2, rng);
    m.accepting = {0};
    const Kwqfa k = kwqfa_from_mcqfa(m);
    const GeneralQfa g = general_from_mcqfa(m);
    const GeneralQfa gk = general_from_kwqfa(k);
    validate_general_qfa(gk);
    for (const Word& w : words_up_to({'a', 'b'}, 6)) {
      const double base = mcqfa_accept(m, w);
      CHECK(std::abs(kwqfa_accept(k, w).acc - base) <= 1e-12);
      CHECK(std::abs(general_qfa_accept(g, w) - base) <= 1e-12);
      CHECK(std::abs(general_qfa_accept(gk, w) - base) <= 1e-12);
    }
  }
}

TEST_CASE("pfa_to_qfa reproduces the source automaton") {
  std::mt19937_64 rng(101);

  // deterministic permutation automaton, exhaustively
  Pfa perm;
  perm.n = 3;
  perm.alphabet = Alphabet{{'a', 'b'}};
  MatD rot(3, 3), flip(3, 3);
  rot << 0, 0, 1, 1, 0, 0, 0, 1, 0;
  flip << 0, 1, 0, 1, 0, 0, 0, 0, 1;
  perm.by_symbol = {rot, flip};
  perm.left_end = MatD::Identity(3, 3);
  perm.right_end = MatD::Identity(3, 3);
  perm.accepting = {0};
  const GeneralQfa qperm = pfa_to_qfa(perm);
  validate_general_qfa(qperm);
  for (const Word& w : words_up_to({'a', 'b'}, 6))
    CHECK(std::abs(general_qfa_accept(qperm, w) - pfa_accept_prob(perm, w)) <= 1e-12);

  // identity PFA maps to the identity channel
  Pfa idp;
  idp.n = 2;
  idp.alphabet = Alphabet{{'a'}};
  idp.by_symbol = {MatD::Identity(2, 2)};
  idp.left_end = MatD::Identity(2, 2);
  idp.right_end = MatD::Identity(2, 2);
  idp.accepting = {0};
  const GeneralQfa qid = pfa_to_qfa(idp);
  REQUIRE(qid.by_symbol[0].kraus.size() == 2);  // one Kraus per unit entry
  CHECK(general_qfa_accept(qid, "aaa") == 1.0);

  // random rational machines on random words
  std::uniform_int_distribution<int> len_pick(0, 8), sym_pick(0, 1);
  for (int iter = 0; iter < 20; ++iter) {
    const Pfa p = random_pfa(3, {'a', 'b'}, 8, rng, true);
    const GeneralQfa q = pfa_to_qfa(p);
    validate_general_qfa(q);
    for (int t = 0; t < 25; ++t) {
      Word w;
      const int len = len_pick(rng);
      for (int i = 0; i < len; ++i) w += (sym_pick(rng) ? 'b' : 'a');
      CHECK(std::abs(general_qfa_accept(q, w) - pfa_accept_prob(p, w)) <= 1e-12);
    }
  }

  // the exact-mode image agrees exactly
  const Pfa p = random_pfa(3, {'a', 'b'}, 4, rng);
  const PfaX px = exact_pfa(p);
  const GeneralQfaX qx = pfa_to_qfa(px);
  for (const Word& w : words_up_to({'a', 'b'}, 3)) {
    const Rad lhs = pfa_accept_prob(px, w);
    const Rad rhs = general_qfa_accept(qx, w);
    CHECK(lhs == rhs);
  }
}

TEST_CASE("log-state MOD_p construction") {
  const LogstateMachine built = build_modp_logstate(31, 0.25, 0);
  CHECK(built.d == 16);
  CHECK(built.machine.n == 32);
  validate_mcqfa(built.machine);
  CHECK(built.max_nonmember <= 0.25);

  // members are accepted with probability 1; the simulator matches the
  // closed form everywhere
  for (int j : {0, 31, 62})
    CHECK(std::abs(mcqfa_accept(built.machine, Word(j, 'a')) - 1.0) <= 1e-12);
  for (int j = 0; j <= 31; ++j)
    CHECK(std::abs(mcqfa_accept(built.machine, Word(j, 'a')) -
                   modp_logstate_accept(built.ks, 31, j)) <= 1e-12);

  // all blocks equal collapses to the 2-state machine's probability
  const Mcqfa uniform = build_modp_logstate_from_ks(5, {2, 2, 2});
  const Mcqfa two_state = build_modp_2state(5, 2);
  for (int j = 0; j <= 10; ++j)
    CHECK(std::abs(mcqfa_accept(uniform, Word(j, 'a')) - mcqfa_accept(two_state, Word(j, 'a'))) <=
          1e-12);

  CHECK_THROWS_AS(build_modp_logstate(9, 0.25, 0), ValidationError);   // not prime
  CHECK_THROWS_AS(build_modp_logstate(31, 1.5, 0), ValidationError);   // bad eps
}

TEST_CASE("NEQ machine is a positive one-sided recognizer") {
  const Mcqfa m = build_neq_nqfa();
  validate_mcqfa(m);
  CHECK(mcqfa_accept(m, "ab") <= 1e-12);
  CHECK(mcqfa_accept(m, "aabb") <= 1e-12);
  CHECK(std::abs(mcqfa_accept(m, "a") - 0.9291080928344088) <= 1e-12);
  const double theta = std::numbers::pi * std::numbers::sqrt2;
  for (const Word& w : words_up_to({'a', 'b'}, 5)) {
    long d = 0;
    for (char c : w) d += (c == 'a') ? 1 : -1;
    const double expected = std::pow(std::sin(theta * static_cast<double>(d)), 2);
    CHECK(std::abs(mcqfa_accept(m, w) - expected) <= 1e-12);
    const Decision dec = classify_word(mcqfa_accept(m, w), AcceptanceMode::positive_one_sided());
    CHECK((dec == Decision::kMember) == (d != 0));
  }
}

TEST_CASE("restart semantics") {
  // one pass: accept 0.01, reject 0.03, restart 0.96
  VecC col(4);
  col << Cplx(0), Cplx(0.1), Cplx(std::sqrt(0.03)), Cplx(std::sqrt(0.96));
  Kwqfa m;
  m.n = 4;
  m.alphabet = Alphabet{{'a'}};
  m.by_symbol = {MatC::Identity(4, 4)};
  m.left_end = MatC::Identity(4, 4);
  m.right_end = unitary_with_first_column(col);
  m.accepting = {1};
  m.rejecting = {2};
  m.nonhalting = {0, 3};
  validate_kwqfa(m);
  CHECK(std::abs(restart_accept_prob(m, "a") - 0.25) <= 1e-12);
  // while plain kwqfa semantics reject the residual mass
  const auto once = kwqfa_accept(m, "a");
  CHECK(std::abs(once.acc - 0.01) <= 1e-12);
  CHECK(std::abs(once.rej - 0.99) <= 1e-12);

  // halting immediately with probability 1
  Kwqfa sure = m;
  VecC acc_col = VecC::Zero(4);
  acc_col(1) = Cplx(1);
  sure.left_end = unitary_with_first_column(acc_col);
  CHECK(restart_accept_prob(sure, "a") == 1.0);

  // equal per-pass accept and reject mass gives 1/2
  VecC split(4);
  split << Cplx(0), Cplx(0.5), Cplx(0.5), Cplx(1.0 / std::numbers::sqrt2);
  Kwqfa sym = m;
  sym.right_end = unitary_with_first_column(split);
  CHECK(std::abs(restart_accept_prob(sym, "a") - 0.5) <= 1e-12);

  // a machine that never halts is a diagnostic error
  Kwqfa stuck = m;
  stuck.right_end = MatC::Identity(4, 4);
  CHECK_THROWS_AS(restart_accept_prob(stuck, "a"), NonterminationError);
}
