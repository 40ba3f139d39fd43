// qfa — exact simulator and decision toolkit for quantum finite automata and
// their classical counterparts.
//
// Subcommands: run, classify, equiv, demo, bench.  See README.md.

#include <CLI11.hpp>

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "qfa/demos.hpp"
#include "qfa/equivalence.hpp"
#include "qfa/io.hpp"
#include "qfa/report.hpp"

namespace {

using namespace qfa;

struct GlobalOpts {
  std::string format = "table";
  double tol = kValidationTol;
  bool exact = false;
  std::uint64_t seed = 0;
  long trials = 10000;
  long max_steps = -1;
};

AcceptanceMode mode_from_flags(const std::string& mode, double lambda, double eps) {
  if (mode == "cutpoint-strict") return AcceptanceMode::cutpoint_strict(lambda);
  if (mode == "cutpoint-nonstrict") return AcceptanceMode::cutpoint_nonstrict(lambda);
  if (mode == "bounded-error") return AcceptanceMode::bounded_error(eps);
  if (mode == "positive-one-sided") return AcceptanceMode::positive_one_sided();
  if (mode == "negative-one-sided") return AcceptanceMode::negative_one_sided();
  throw ValidationError("unknown acceptance mode '" + mode + "'");
}

std::vector<Word> collect_words(const std::vector<std::string>& words,
                                const std::string& words_file) {
  std::vector<Word> out = words;
  if (!words_file.empty()) {
    std::ifstream in(words_file);
    if (!in) throw ParseError("cannot open words file: " + words_file);
    std::string line;
    while (std::getline(in, line)) {
      if (line == "(empty)") line.clear();
      out.push_back(line);
    }
  }
  return out;
}

/// One row of values per word; layout depends on the machine model.
ExperimentReport run_machine(const ParsedAutomaton& parsed, const std::vector<Word>& words,
                             const GlobalOpts& g, const std::optional<AcceptanceMode>& mode,
                             bool restart) {
  ExperimentReport report;
  report.title = "run (" + parsed.model + ")";
  const bool twoway_k = std::holds_alternative<TwoWayKwqfa>(parsed.machine);
  const bool tqcfa = std::holds_alternative<Tqcfa>(parsed.machine);
  const bool kw = std::holds_alternative<Kwqfa>(parsed.machine);
  if (twoway_k) report.columns = {"word", "accept", "reject", "residual", "steps"};
  else if (tqcfa) report.columns = {"word", "accept freq", "mean steps", "stddev steps", "capped"};
  else if (kw && !restart) report.columns = {"word", "accept", "reject"};
  else report.columns = {"word", "value"};
  if (mode) report.columns.push_back("decision");

  for (const Word& w : words) {
    std::vector<std::string> row{display_word(w)};
    double primary = 0;
    std::visit(
        [&](const auto& m) {
          using T = std::decay_t<decltype(m)>;
          if constexpr (std::is_same_v<T, Pfa>) {
            primary = pfa_accept_prob(m, w);
            row.push_back(format_value(primary));
          } else if constexpr (std::is_same_v<T, Gfa>) {
            primary = gfa_value(m, w);
            row.push_back(format_value(primary));
          } else if constexpr (std::is_same_v<T, Mcqfa>) {
            primary = mcqfa_accept(m, w);
            row.push_back(format_value(primary));
          } else if constexpr (std::is_same_v<T, Kwqfa>) {
            if (restart) {
              primary = restart_accept_prob(m, w);
              row.push_back(format_value(primary));
            } else {
              const auto res = kwqfa_accept(m, w);
              primary = res.acc;
              row.push_back(format_value(res.acc));
              row.push_back(format_value(res.rej));
            }
          } else if constexpr (std::is_same_v<T, GeneralQfa>) {
            primary = general_qfa_accept(m, w);
            row.push_back(format_value(primary));
          } else if constexpr (std::is_same_v<T, TwoWayKwqfa>) {
            const RunOutcome r = twoway_kwqfa_run(m, w, g.max_steps);
            primary = r.accept;
            row.push_back(format_value(r.accept));
            row.push_back(format_value(r.reject));
            row.push_back(format_value(r.residual));
            row.push_back(format_count(r.steps));
          } else {  // Tqcfa
            const TqcfaStats s = tqcfa_monte_carlo(m, w, g.trials, g.seed);
            primary = s.accept_frequency;
            row.push_back(format_value(s.accept_frequency));
            row.push_back(format_value(s.mean_steps));
            row.push_back(format_value(s.stddev_steps));
            row.push_back(format_count(s.capped));
          }
        },
        parsed.machine);
    if (mode) row.push_back(to_string(classify_word(primary, *mode, g.tol)));
    report.add_row(std::move(row));
  }
  if (tqcfa) {
    report.add_note("trials", format_count(g.trials));
    report.add_note("seed", format_count(static_cast<long>(g.seed)));
  }
  return report;
}

/// Exact-arithmetic run for the one-way models: values are exact scalars,
/// shown both as 12-digit decimals and in exact notation.
ExperimentReport run_machine_exact(const std::string& model, const ExactOneWay& machine,
                                   const std::vector<Word>& words,
                                   const std::optional<AcceptanceMode>& mode, double tol) {
  ExperimentReport report;
  report.title = "run (" + model + ", exact arithmetic)";
  report.columns = {"word", "value", "value (exact)"};
  if (mode) report.columns.push_back("decision");
  for (const Word& w : words) {
    Rad value(0);
    std::visit(
        [&](const auto& m) {
          using T = std::decay_t<decltype(m)>;
          if constexpr (std::is_same_v<T, PfaX>) value = pfa_accept_prob(m, w);
          else if constexpr (std::is_same_v<T, GfaX>) value = gfa_value(m, w);
          else if constexpr (std::is_same_v<T, McqfaX>) value = mcqfa_accept(m, w);
          else if constexpr (std::is_same_v<T, KwqfaX>) value = kwqfa_accept(m, w).acc;
          else value = general_qfa_accept(m, w);
        },
        machine);
    std::vector<std::string> row{display_word(w), format_value(value.to_double()), value.str()};
    if (mode) row.push_back(to_string(classify_word(value.to_double(), *mode, tol)));
    report.add_row(std::move(row));
  }
  return report;
}

Gfa to_gfa_float(const ParsedAutomaton& parsed) {
  return std::visit(
      [&](const auto& m) -> Gfa {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, Pfa>) return lift(m);
        else if constexpr (std::is_same_v<T, Gfa>) return m;
        else if constexpr (std::is_same_v<T, Mcqfa>) return qfa_to_gfa(general_from_mcqfa(m));
        else if constexpr (std::is_same_v<T, Kwqfa>) return qfa_to_gfa(general_from_kwqfa(m));
        else if constexpr (std::is_same_v<T, GeneralQfa>) return qfa_to_gfa(m);
        else throw ValidationError("equivalence is defined for one-way machines only");
      },
      parsed.machine);
}

GfaX to_gfa_exact(const ExactOneWay& machine) {
  return std::visit(
      [&](const auto& m) -> GfaX {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, PfaX>) return lift(m);
        else if constexpr (std::is_same_v<T, GfaX>) return m;
        else if constexpr (std::is_same_v<T, McqfaX>) return qfa_to_gfa(general_from_mcqfa(m));
        else if constexpr (std::is_same_v<T, KwqfaX>) return qfa_to_gfa(general_from_kwqfa(m));
        else return qfa_to_gfa(m);
      },
      machine);
}

int cmd_equiv(const std::string& file_a, const std::string& file_b, const GlobalOpts& g) {
  EquivalenceVerdict verdict;
  if (g.exact) {
    const auto a = parse_automaton_exact(file_a, g.tol);
    const auto b = parse_automaton_exact(file_b, g.tol);
    verdict = gfa_equiv(to_gfa_exact(a.second), to_gfa_exact(b.second), g.tol);
  } else {
    verdict = gfa_equiv(to_gfa_float(parse_automaton(file_a, g.tol)),
                        to_gfa_float(parse_automaton(file_b, g.tol)), g.tol);
  }
  std::cout << "verdict: " << (verdict.equal ? "equal" : "inequal") << "\n";
  std::cout << "arithmetic: " << (verdict.exact ? "exact" : "numeric") << "\n";
  if (!verdict.equal && verdict.witness) {
    std::cout << "witness: " << display_word(*verdict.witness) << "\n";
    std::cout << "lhs value: " << format_value(verdict.lhs_value);
    if (!verdict.lhs_repr.empty()) std::cout << " (" << verdict.lhs_repr << ")";
    std::cout << "\nrhs value: " << format_value(verdict.rhs_value);
    if (!verdict.rhs_repr.empty()) std::cout << " (" << verdict.rhs_repr << ")";
    std::cout << "\n";
  }
  return verdict.equal ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"qfa: simulator and decision toolkit for quantum finite automata"};
  app.require_subcommand(1);

  GlobalOpts g;
  app.add_option("--format", g.format, "output format: table, csv, json-like")
      ->check(CLI::IsMember({"table", "csv", "json-like"}));
  app.add_option("--tol", g.tol, "working tolerance for validation and classification");
  app.add_flag("--exact", g.exact, "exact rational arithmetic where supported");
  app.add_option("--seed", g.seed, "seed for randomized commands (default 0)");
  app.add_option("--trials", g.trials, "Monte Carlo trial count");
  app.add_option("--max-steps", g.max_steps, "step cap for two-way runs");

  std::string machine_path, file_a, file_b, words_file, mode_name, demo_name, export_path;
  std::vector<std::string> words;
  double lambda = 0.5, eps = 0.25;
  bool restart = false;

  auto add_word_opts = [&](CLI::App* cmd) {
    cmd->add_option("--word,--words", words, "input words (repeatable)")
        ->take_all()
        ->allow_extra_args();
    cmd->add_option("--words-file", words_file, "file with one word per line");
  };
  auto add_mode_opts = [&](CLI::App* cmd, bool required) {
    auto* opt = cmd->add_option("--mode", mode_name,
                                "acceptance mode: cutpoint-strict, cutpoint-nonstrict, "
                                "bounded-error, positive-one-sided, negative-one-sided");
    if (required) opt->required();
    cmd->add_option("--lambda", lambda, "cutpoint");
    cmd->add_option("--eps", eps, "bounded-error bound (0 <= eps < 1/2)");
  };

  CLI::App* run = app.add_subcommand("run", "evaluate a machine on words");
  run->fallthrough();
  run->add_option("machine", machine_path, "automaton file")->required();
  add_word_opts(run);
  add_mode_opts(run, false);
  run->add_flag("--restart", restart, "kwqfa only: 1QFA-with-restart semantics");

  CLI::App* classify = app.add_subcommand("classify", "evaluate and classify words");
  classify->fallthrough();
  classify->add_option("machine", machine_path, "automaton file")->required();
  add_word_opts(classify);
  add_mode_opts(classify, true);

  CLI::App* equiv = app.add_subcommand("equiv", "decide equivalence of two machines");
  equiv->fallthrough();
  equiv->add_option("fileA", file_a, "first automaton file")->required();
  equiv->add_option("fileB", file_b, "second automaton file")->required();

  CLI::App* demo = app.add_subcommand("demo", "run a named construction");
  demo->fallthrough();
  DemoParams dp;
  demo->add_option("name", demo_name, "one of: modp-2state, modp-log, neq, eq-2qcfa, "
                                      "pal-2qcfa, eq-15kwqfa")
      ->required();
  demo->add_option("--p", dp.p, "modulus p");
  demo->add_option("--k", dp.k, "rotation multiplier (modp-2state)");
  demo->add_option("--gadget-k", dp.gadget_k, "classical gadget parameter k (2QCFA demos)");
  demo->add_option("--eps", dp.eps, "error bound (modp-log)");
  demo->add_option("--theta", dp.theta, "rotation angle (neq); default sqrt(2) pi");
  demo->add_option("--jmax", dp.jmax, "largest unary exponent in the table");
  demo->add_option("--export", export_path, "write the demo machine to an automaton file");
  add_word_opts(demo);

  CLI::App* bench = app.add_subcommand("bench", "Monte Carlo runtime scaling of a 2QCFA family");
  bench->fallthrough();
  std::string bench_family;
  int bench_max_m = 4;
  bench->add_option("family", bench_family, "eq-2qcfa or pal-2qcfa")
      ->required()
      ->check(CLI::IsMember({"eq-2qcfa", "pal-2qcfa"}));
  bench->add_option("--max-m", bench_max_m, "run words (ab)^m for m = 1..max-m");
  bench->add_option("--gadget-k", dp.gadget_k, "classical gadget parameter k");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run || *classify) {
      const auto word_list = collect_words(words, words_file);
      std::optional<AcceptanceMode> mode;
      if (!mode_name.empty()) mode = mode_from_flags(mode_name, lambda, eps);
      ExperimentReport report;
      if (g.exact) {
        const auto parsed = parse_automaton_exact(machine_path, g.tol);
        report = run_machine_exact(parsed.first, parsed.second, word_list, mode, g.tol);
      } else {
        report = run_machine(parse_automaton(machine_path, g.tol), word_list, g, mode, restart);
      }
      std::cout << render_report(report, g.format);
      return 0;
    }
    if (*equiv) return cmd_equiv(file_a, file_b, g);
    if (*demo) {
      dp.seed = g.seed;
      dp.trials = demo_name == "eq-2qcfa" || demo_name == "pal-2qcfa" ? g.trials : 0;
      dp.max_steps = g.max_steps;
      dp.words = collect_words(words, words_file);
      const DemoResult result = run_demo(demo_name, dp);
      std::cout << render_report(result.report, g.format);
      if (!export_path.empty()) {
        write_json_file(result.machine, export_path);
        std::cout << "machine written to " << export_path << "\n";
      }
      return 0;
    }
    if (*bench) {
      const Tqcfa machine = bench_family == "eq-2qcfa" ? build_eq_tqcfa(dp.gadget_k)
                                                       : build_pal_tqcfa(dp.gadget_k);
      const TqcfaFamily family =
          bench_family == "eq-2qcfa" ? TqcfaFamily::kEq : TqcfaFamily::kPal;
      ExperimentReport report;
      report.title = "bench " + bench_family + " on (ab)^m";
      report.columns = {"m",       "|w|",        "exact accept", "mc accept freq",
                        "mean steps", "stddev steps", "capped"};
      for (int m = 1; m <= bench_max_m; ++m) {
        Word w;
        for (int i = 0; i < m; ++i) w += "ab";
        const LoopProfile lp = tqcfa_exact_accept(family, w, dp.gadget_k);
        const TqcfaStats s = tqcfa_monte_carlo(machine, w, g.trials, g.seed);
        report.add_row({format_count(m), format_count(static_cast<long>(w.size())),
                        format_value(lp.accept_overall), format_value(s.accept_frequency),
                        format_value(s.mean_steps), format_value(s.stddev_steps),
                        format_count(s.capped)});
      }
      report.add_note("trials", format_count(g.trials));
      report.add_note("seed", format_count(static_cast<long>(g.seed)));
      std::cout << render_report(report, g.format);
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
