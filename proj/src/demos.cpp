#include "qfa/demos.hpp"

#include <cmath>
#include <numbers>

#include "qfa/io.hpp"
#include "qfa/oneway.hpp"
#include "qfa/twoway.hpp"

namespace qfa {

namespace {

bool balanced(const Word& w) {
  long d = 0;
  for (char c : w) d += (c == 'a') ? 1 : -1;
  return d == 0;
}

bool palindrome(const Word& w) {
  return std::equal(w.begin(), w.begin() + w.size() / 2, w.rbegin());
}

/// Rough per-trial step budget check: PAL members need ~2^(4k|w|)
/// iterations (exponential expected time), which Monte Carlo cannot cover.
bool mc_feasible(const LoopProfile& lp, const Word& w, long trials, int k) {
  const double steps_per_iter = 8.0 * (k + 1) * (static_cast<double>(w.size()) + 2) *
                                (static_cast<double>(w.size()) + 2);
  return lp.expected_iterations * steps_per_iter * static_cast<double>(trials) < 5e8;
}

std::vector<Word> default_ab_grid() {
  return {"", "a", "b", "ab", "ba", "aa", "aab", "abb", "abab", "aabb", "abba"};
}

DemoResult demo_modp_2state(const DemoParams& params) {
  const int p = params.p, k = params.k;
  Mcqfa machine = build_modp_2state(p, k);
  const int jmax = params.jmax >= 0 ? params.jmax : 4 * p;
  DemoResult out;
  out.machine = serialize_mcqfa(machine);
  out.report.title = "2-state MCQFA for MOD_" + std::to_string(p) + " (k = " + std::to_string(k) + ")";
  out.report.columns = {"j", "accept", "cos^2(2 pi j k / p)", "decision"};
  for (int j = 0; j <= jmax; ++j) {
    const double measured = mcqfa_accept(machine, Word(static_cast<size_t>(j), 'a'));
    const double closed = std::pow(std::cos(2.0 * std::numbers::pi * j * k / p), 2);
    const Decision d = classify_word(measured, AcceptanceMode::negative_one_sided());
    out.report.add_row({format_count(j), format_value(measured), format_value(closed),
                        to_string(d)});
  }
  out.report.add_note("one-sided error bound (claimed)",
                      format_value(std::pow(std::cos(std::numbers::pi / p), 2)));
  return out;
}

DemoResult demo_modp_log(const DemoParams& params) {
  const LogstateMachine built = build_modp_logstate(params.p, params.eps, params.seed);
  DemoResult out;
  out.machine = serialize_mcqfa(built.machine);
  out.report.title = "O(log p)-state MCQFA for MOD_" + std::to_string(params.p) +
                     " (eps = " + format_value(params.eps) + ")";
  out.report.columns = {"j", "accept", "closed form", "member"};
  for (int j = 0; j <= params.p; ++j) {
    const double measured = mcqfa_accept(built.machine, Word(static_cast<size_t>(j), 'a'));
    const double closed = modp_logstate_accept(built.ks, params.p, j);
    out.report.add_row({format_count(j), format_value(measured), format_value(closed),
                        j % params.p == 0 ? "yes" : "no"});
  }
  out.report.add_note("rotation blocks d", format_count(built.d));
  out.report.add_note("states", format_count(2 * built.d));
  out.report.add_note("redraws", format_count(built.redraws));
  out.report.add_note("max nonmember accept", format_value(built.max_nonmember));
  out.report.add_note("bound eps", format_value(params.eps));
  std::string ks;
  for (size_t i = 0; i < built.ks.size(); ++i)
    ks += (i ? "," : "") + std::to_string(built.ks[i]);
  out.report.add_note("drawn k_i", ks);
  return out;
}

DemoResult demo_neq(const DemoParams& params) {
  const double theta = params.theta != 0 ? params.theta
                                         : std::numbers::pi * std::numbers::sqrt2;
  Mcqfa machine = build_neq_nqfa(theta);
  DemoResult out;
  out.machine = serialize_mcqfa(machine);
  out.report.title = "Nondeterministic MCQFA for NEQ (theta = " + format_value(theta) + ")";
  out.report.columns = {"word", "accept", "sin^2(theta (na - nb))", "decision"};
  const auto words = params.words.empty() ? default_ab_grid() : params.words;
  for (const Word& w : words) {
    long d = 0;
    for (char c : w) d += (c == 'a') ? 1 : -1;
    const double measured = mcqfa_accept(machine, w);
    const double closed = std::pow(std::sin(theta * static_cast<double>(d)), 2);
    const Decision dec = classify_word(measured, AcceptanceMode::positive_one_sided());
    out.report.add_row({display_word(w), format_value(measured), format_value(closed),
                        to_string(dec)});
  }
  out.report.add_note("acceptance mode", "positive one-sided (member iff accept > 0)");
  return out;
}

DemoResult demo_eq_2qcfa(const DemoParams& params) {
  const int k = params.gadget_k;
  Tqcfa machine = build_eq_tqcfa(k);
  DemoResult out;
  out.machine = serialize_tqcfa(machine);
  out.report.title = "2QCFA for EQ (k = " + std::to_string(k) + ")";
  out.report.columns = {"word", "member", "quantum reject r", "accept (exact)",
                        "reject bound 2^k/(2^k+2)"};
  const bool mc = params.trials > 0;
  if (mc) {
    out.report.columns.push_back("mc accept freq");
    out.report.columns.push_back("mc mean steps");
  }
  const auto words = params.words.empty() ? default_ab_grid() : params.words;
  const double bound = std::exp2(k) / (std::exp2(k) + 2);
  for (const Word& w : words) {
    const LoopProfile lp = tqcfa_exact_accept(TqcfaFamily::kEq, w, k);
    std::vector<std::string> row = {display_word(w), balanced(w) ? "yes" : "no",
                                    format_value(lp.reject_per_iteration),
                                    format_value(lp.accept_overall),
                                    balanced(w) ? "-" : format_value(bound)};
    if (mc) {
      if (mc_feasible(lp, w, params.trials, k)) {
        const TqcfaStats stats = tqcfa_monte_carlo(machine, w, params.trials, params.seed);
        row.push_back(format_value(stats.accept_frequency));
        row.push_back(format_value(stats.mean_steps));
      } else {
        row.push_back("-");
        row.push_back("- (expected time too large)");
      }
    }
    out.report.add_row(std::move(row));
  }
  out.report.add_note("per-iteration classical accept", "2^-k / (|w|+1)^2");
  return out;
}

DemoResult demo_pal_2qcfa(const DemoParams& params) {
  const int k = params.gadget_k;
  Tqcfa machine = build_pal_tqcfa(k);
  DemoResult out;
  out.machine = serialize_tqcfa(machine);
  out.report.title = "2QCFA for PAL (k = " + std::to_string(k) + ")";
  out.report.columns = {"word", "palindrome", "quantum reject r", "bound 25^-|w|",
                        "reject (exact)"};
  const bool mc = params.trials > 0;
  if (mc) {
    out.report.columns.push_back("mc accept freq");
    out.report.columns.push_back("mc mean steps");
  }
  const auto words = params.words.empty() ? default_ab_grid() : params.words;
  for (const Word& w : words) {
    const LoopProfile lp = tqcfa_exact_accept(TqcfaFamily::kPal, w, k);
    std::vector<std::string> row = {
        display_word(w), palindrome(w) ? "yes" : "no", format_value(lp.reject_per_iteration),
        palindrome(w) ? "-" : format_value(std::pow(25.0, -static_cast<double>(w.size()))),
        format_value(1 - lp.accept_overall)};
    if (mc) {
      if (mc_feasible(lp, w, params.trials, k)) {
        const TqcfaStats stats = tqcfa_monte_carlo(machine, w, params.trials, params.seed);
        row.push_back(format_value(stats.accept_frequency));
        row.push_back(format_value(stats.mean_steps));
      } else {
        row.push_back("-");
        row.push_back("- (expected time too large)");
      }
    }
    out.report.add_row(std::move(row));
  }
  out.report.add_note("per-iteration classical accept", "2^-4k|w|");
  return out;
}

DemoResult demo_eq_15kwqfa(const DemoParams& params) {
  TwoWayKwqfa machine = build_eq_15kwqfa();
  DemoResult out;
  out.machine = serialize_twoway_kwqfa(machine);
  out.report.title = "1.5-way KWQFA for EQ";
  out.report.columns = {"word", "balanced", "accept", "reject", "residual", "steps", "claimed"};
  const auto words = params.words.empty() ? default_ab_grid() : params.words;
  for (const Word& w : words) {
    const RunOutcome r = twoway_kwqfa_run(machine, w, params.max_steps);
    out.report.add_row({display_word(w), balanced(w) ? "yes" : "no", format_value(r.accept),
                        format_value(r.reject), format_value(r.residual), format_count(r.steps),
                        balanced(w) ? "1" : "1/2"});
  }
  return out;
}

}  // namespace

std::vector<std::string> demo_names() {
  return {"modp-2state", "modp-log", "neq", "eq-2qcfa", "pal-2qcfa", "eq-15kwqfa"};
}

DemoResult run_demo(const std::string& name, const DemoParams& params) {
  if (name == "modp-2state") return demo_modp_2state(params);
  if (name == "modp-log") return demo_modp_log(params);
  if (name == "neq") return demo_neq(params);
  if (name == "eq-2qcfa") return demo_eq_2qcfa(params);
  if (name == "pal-2qcfa") return demo_pal_2qcfa(params);
  if (name == "eq-15kwqfa") return demo_eq_15kwqfa(params);
  throw ValidationError("unknown demo '" + name + "'");
}

}  // namespace qfa
