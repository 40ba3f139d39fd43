#pragma once

// Named constructions from the CLI: each demo builds its machine, runs the
// canonical word grid, and tabulates the measured values next to the claimed
// bounds.  Every demo's machine is exportable to an automaton file, so the
// run is reproducible from the file alone.

#include <json.hpp>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qfa/report.hpp"
#include "qfa/types.hpp"

namespace qfa {

struct DemoParams {
  int p = 5;                  // modulus for the MOD_p demos
  int k = 1;                  // rotation multiplier (modp-2state)
  int gadget_k = 2;           // classical-gadget parameter of the 2QCFA demos
  double eps = 0.25;          // error bound for modp-log
  double theta = 0;           // NEQ rotation angle; 0 selects sqrt(2) pi
  std::uint64_t seed = 0;
  long trials = 0;            // Monte Carlo trials for the 2QCFA demos (0 = exact only)
  int jmax = -1;              // unary demos: largest exponent; -1 selects a default
  long max_steps = -1;
  std::vector<Word> words;    // empty selects the demo's canonical grid
};

struct DemoResult {
  ExperimentReport report;
  nlohmann::json machine;
};

/// Demo names: modp-2state, modp-log, neq, eq-2qcfa, pal-2qcfa, eq-15kwqfa.
DemoResult run_demo(const std::string& name, const DemoParams& params);

std::vector<std::string> demo_names();

}  // namespace qfa
