#pragma once

// Automaton file format: one machine per JSON file, model selected by a
// "model" tag.  Numeric entries are plain numbers, [re, im] pairs, or exact
// rational strings "p/q"; transition maps reserve the keys "lend"/"rend"
// for the end-markers (identity when omitted).  Unknown fields are
// rejected.  Machines pass their model's validator on load, so a defective
// file fails with a message naming the offending matrix or column.

#include <string>
#include <utility>
#include <variant>

#include <json.hpp>

#include "qfa/classical.hpp"
#include "qfa/oneway.hpp"
#include "qfa/twoway.hpp"

namespace qfa {

using MachineVariant =
    std::variant<Pfa, Gfa, Mcqfa, Kwqfa, GeneralQfa, TwoWayKwqfa, Tqcfa>;

struct ParsedAutomaton {
  std::string model;  // dfa | pfa | gfa | mcqfa | kwqfa | qfa | twoway-kwqfa | tqcfa
  MachineVariant machine;
};

/// Exact-arithmetic parse of the one-way models.
using ExactOneWay = std::variant<PfaX, GfaX, McqfaX, KwqfaX, GeneralQfaX>;

ParsedAutomaton parse_automaton(const std::string& path, double tol = kValidationTol);
ParsedAutomaton parse_automaton_json(const nlohmann::json& j, double tol = kValidationTol);

std::pair<std::string, ExactOneWay> parse_automaton_exact(const std::string& path,
                                                          double tol = kValidationTol);
std::pair<std::string, ExactOneWay> parse_automaton_exact_json(const nlohmann::json& j,
                                                               double tol = kValidationTol);

nlohmann::json serialize_machine(const ParsedAutomaton& a);
nlohmann::json serialize_pfa(const Pfa& m, const std::string& model = "pfa");
nlohmann::json serialize_gfa(const Gfa& m);
nlohmann::json serialize_mcqfa(const Mcqfa& m);
nlohmann::json serialize_kwqfa(const Kwqfa& m);
nlohmann::json serialize_general_qfa(const GeneralQfa& m);
nlohmann::json serialize_twoway_kwqfa(const TwoWayKwqfa& m);
nlohmann::json serialize_tqcfa(const Tqcfa& m);

void write_json_file(const nlohmann::json& j, const std::string& path);

}  // namespace qfa
