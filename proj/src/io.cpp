#include "qfa/io.hpp"

#include <fstream>
#include <set>
#include <sstream>

namespace qfa {

using nlohmann::json;

namespace {

void require_keys(const json& j, const std::set<std::string>& allowed,
                  const std::set<std::string>& required, const std::string& where) {
  if (!j.is_object()) throw ParseError(where + " must be a JSON object");
  for (const auto& [key, _] : j.items())
    if (!allowed.count(key)) throw ParseError("unknown field '" + key + "' in " + where);
  for (const auto& key : required)
    if (!j.contains(key)) throw ParseError("missing field '" + key + "' in " + where);
}

double scalar_to_double(const json& j, const std::string& where) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    const Rat r = rat_parse(j.get<std::string>());
    return rat_to_double(r);
  }
  throw ParseError("expected a number or \"p/q\" string in " + where);
}

template <class R>
R real_from_json(const json& j, const std::string& where);

template <>
double real_from_json<double>(const json& j, const std::string& where) {
  return scalar_to_double(j, where);
}

template <>
Rad real_from_json<Rad>(const json& j, const std::string& where) {
  if (j.is_number()) return Rad(rat_from_double(j.get<double>()));
  if (j.is_string()) return Rad(rat_parse(j.get<std::string>()));
  throw ParseError("expected a number or \"p/q\" string in " + where);
}

template <class S>
S cx_from_json(const json& j, const std::string& where) {
  using R = real_of<S>;
  if (j.is_array()) {
    if (j.size() != 2) throw ParseError("complex entries are [re, im] pairs in " + where);
    return num<S>::make(real_from_json<R>(j[0], where), real_from_json<R>(j[1], where));
  }
  return num<S>::make(real_from_json<R>(j, where), num<S>::re(S(0)));
}

template <class S>
Mat<S> matrix_from_json(const json& j, int n, const std::string& where) {
  if (!j.is_array() || j.size() != static_cast<size_t>(n))
    throw ParseError("matrix '" + where + "' must have " + std::to_string(n) + " rows");
  Mat<S> m(n, n);
  for (int r = 0; r < n; ++r) {
    const json& row = j[r];
    if (!row.is_array() || row.size() != static_cast<size_t>(n))
      throw ParseError("matrix '" + where + "' row " + std::to_string(r + 1) + " must have " +
                       std::to_string(n) + " entries");
    for (int c = 0; c < n; ++c)
      m(r, c) = cx_from_json<S>(row[c], where + "[" + std::to_string(r + 1) + "," +
                                             std::to_string(c + 1) + "]");
  }
  return m;
}

Alphabet alphabet_from_json(const json& j) {
  if (!j.is_array() || j.empty()) throw ParseError("'alphabet' must be a nonempty array");
  Alphabet a;
  for (const auto& s : j) {
    if (!s.is_string() || s.get<std::string>().size() != 1)
      throw ParseError("alphabet symbols must be single-character strings");
    const char c = s.get<std::string>()[0];
    if (c <= 0x20 || c >= 0x7f)
      throw ParseError("alphabet symbols must be printable ASCII characters");
    if (a.contains(c)) throw ParseError(std::string("duplicate alphabet symbol '") + c + "'");
    a.symbols.push_back(c);
  }
  return a;
}

std::vector<std::string> states_from_json(const json& j) {
  if (!j.is_array() || j.empty()) throw ParseError("'states' must be a nonempty array");
  std::vector<std::string> names;
  std::set<std::string> seen;
  for (const auto& s : j) {
    if (!s.is_string()) throw ParseError("state names must be strings");
    if (!seen.insert(s.get<std::string>()).second)
      throw ParseError("duplicate state name '" + s.get<std::string>() + "'");
    names.push_back(s.get<std::string>());
  }
  return names;
}

int state_index(const std::vector<std::string>& names, const std::string& name,
                const std::string& where) {
  for (size_t i = 0; i < names.size(); ++i)
    if (names[i] == name) return static_cast<int>(i);
  throw ParseError("unknown state '" + name + "' in " + where);
}

std::vector<int> state_set_from_json(const json& j, const std::vector<std::string>& names,
                                     const std::string& where) {
  if (!j.is_array()) throw ParseError("'" + where + "' must be an array of state names");
  std::vector<int> out;
  for (const auto& s : j) out.push_back(state_index(names, s.get<std::string>(), where));
  return out;
}

void check_initial(const json& j, const std::vector<std::string>& names) {
  if (!j.contains("initial")) return;
  const std::string init = j.at("initial").get<std::string>();
  state_index(names, init, "initial");
  if (init != names.front())
    throw ParseError("the initial state must be the first listed state (got '" + init + "')");
}

/// Per-symbol matrices with identity defaults on the end-markers.
template <class S>
void transitions_from_json(const json& j, const Alphabet& a, int n,
                           std::vector<Mat<S>>& by_symbol, Mat<S>& lend, Mat<S>& rend) {
  if (!j.is_object()) throw ParseError("'transitions' must be an object keyed by symbol");
  for (const auto& [key, _] : j.items()) {
    if (key == "lend" || key == "rend") continue;
    if (key.size() != 1 || !a.contains(key[0]))
      throw ParseError("transition key '" + key + "' is not an alphabet symbol");
  }
  by_symbol.clear();
  for (char c : a.symbols) {
    const std::string key(1, c);
    if (!j.contains(key)) throw ParseError("missing transitions for symbol '" + key + "'");
    by_symbol.push_back(matrix_from_json<S>(j.at(key), n, key));
  }
  lend = j.contains("lend") ? matrix_from_json<S>(j.at("lend"), n, "lend") : identity<S>(n);
  rend = j.contains("rend") ? matrix_from_json<S>(j.at("rend"), n, "rend") : identity<S>(n);
}

template <class R>
PfaT<R> pfa_from_json(const json& j, bool dfa, double tol) {
  require_keys(j, {"model", "alphabet", "states", "initial", "accepting", "transitions"},
               {"model", "alphabet", "states", "accepting", "transitions"}, "pfa file");
  PfaT<R> m;
  const auto names = states_from_json(j.at("states"));
  check_initial(j, names);
  m.n = static_cast<int>(names.size());
  m.alphabet = alphabet_from_json(j.at("alphabet"));
  using S = typename cx_for<R>::type;
  std::vector<Mat<S>> cx;
  Mat<S> l, r;
  transitions_from_json<S>(j.at("transitions"), m.alphabet, m.n, cx, l, r);
  auto realize = [&](const Mat<S>& src, const std::string& where) {
    Mat<R> out(m.n, m.n);
    for (int a = 0; a < m.n; ++a)
      for (int b = 0; b < m.n; ++b) {
        if (!num<S>::abs_leq(num<S>::im(src(a, b)), 0.0))
          throw ParseError("matrix '" + where + "' must be real");
        out(a, b) = num<S>::re(src(a, b));
      }
    return out;
  };
  for (size_t s = 0; s < cx.size(); ++s)
    m.by_symbol.push_back(realize(cx[s], std::string(1, m.alphabet.symbols[s])));
  m.left_end = realize(l, "lend");
  m.right_end = realize(r, "rend");
  m.accepting = state_set_from_json(j.at("accepting"), names, "accepting");
  validate_pfa(m, tol);
  if (dfa) {
    for (size_t s = 0; s < m.by_symbol.size() + 2; ++s) {
      const Mat<R>& a = s < m.by_symbol.size() ? m.by_symbol[s]
                        : s == m.by_symbol.size() ? m.left_end
                                                  : m.right_end;
      for (int col = 0; col < m.n; ++col)
        for (int row = 0; row < m.n; ++row) {
          const double v = rnum<R>::to_double(a(row, col));
          if (v != 0.0 && v != 1.0)
            throw ParseError("dfa transitions must be 0/1 matrices");
        }
    }
  }
  return m;
}

template <class R>
GfaT<R> gfa_from_json(const json& j) {
  require_keys(j,
               {"model", "alphabet", "states", "initial", "accepting", "transitions",
                "initial_vector", "final_vector"},
               {"model", "alphabet", "states", "transitions"}, "gfa file");
  GfaT<R> m;
  const auto names = states_from_json(j.at("states"));
  check_initial(j, names);
  m.n = static_cast<int>(names.size());
  m.alphabet = alphabet_from_json(j.at("alphabet"));
  using S = typename cx_for<R>::type;
  std::vector<Mat<S>> cx;
  Mat<S> l, r;
  transitions_from_json<S>(j.at("transitions"), m.alphabet, m.n, cx, l, r);
  auto realize = [&](const Mat<S>& src, const std::string& where) {
    Mat<R> out(m.n, m.n);
    for (int a = 0; a < m.n; ++a)
      for (int b = 0; b < m.n; ++b) {
        if (!num<S>::abs_leq(num<S>::im(src(a, b)), 0.0))
          throw ParseError("matrix '" + where + "' must be real");
        out(a, b) = num<S>::re(src(a, b));
      }
    return out;
  };
  for (size_t s = 0; s < cx.size(); ++s)
    m.by_symbol.push_back(realize(cx[s], std::string(1, m.alphabet.symbols[s])));
  m.left_end = realize(l, "lend");
  m.right_end = realize(r, "rend");
  m.initial = Vec<R>::Zero(m.n);
  if (j.contains("initial_vector")) {
    const json& v = j.at("initial_vector");
    if (!v.is_array() || v.size() != static_cast<size_t>(m.n))
      throw ParseError("'initial_vector' must have one entry per state");
    for (int i = 0; i < m.n; ++i) m.initial(i) = real_from_json<R>(v[i], "initial_vector");
  } else {
    m.initial(0) = R(1);
  }
  m.final_functional = RowVec<R>::Zero(m.n);
  if (j.contains("final_vector") && j.contains("accepting"))
    throw ParseError("gfa file must not set both 'accepting' and 'final_vector'");
  if (j.contains("final_vector")) {
    const json& v = j.at("final_vector");
    if (!v.is_array() || v.size() != static_cast<size_t>(m.n))
      throw ParseError("'final_vector' must have one entry per state");
    for (int i = 0; i < m.n; ++i) m.final_functional(i) = real_from_json<R>(v[i], "final_vector");
  } else if (j.contains("accepting")) {
    for (int q : state_set_from_json(j.at("accepting"), names, "accepting"))
      m.final_functional(q) = R(1);
  } else {
    throw ParseError("gfa file needs 'accepting' or 'final_vector'");
  }
  validate_gfa(m);
  return m;
}

template <class S>
McqfaT<S> mcqfa_from_json(const json& j, double tol) {
  require_keys(j, {"model", "alphabet", "states", "initial", "accepting", "transitions"},
               {"model", "alphabet", "states", "accepting", "transitions"}, "mcqfa file");
  McqfaT<S> m;
  const auto names = states_from_json(j.at("states"));
  check_initial(j, names);
  m.n = static_cast<int>(names.size());
  m.alphabet = alphabet_from_json(j.at("alphabet"));
  transitions_from_json<S>(j.at("transitions"), m.alphabet, m.n, m.by_symbol, m.left_end,
                           m.right_end);
  m.accepting = state_set_from_json(j.at("accepting"), names, "accepting");
  validate_mcqfa(m, tol);
  return m;
}

template <class S>
KwqfaT<S> kwqfa_from_json(const json& j, double tol) {
  require_keys(j,
               {"model", "alphabet", "states", "initial", "accepting", "rejecting",
                "nonhalting", "transitions"},
               {"model", "alphabet", "states", "accepting", "rejecting", "nonhalting",
                "transitions"},
               "kwqfa file");
  KwqfaT<S> m;
  const auto names = states_from_json(j.at("states"));
  check_initial(j, names);
  m.n = static_cast<int>(names.size());
  m.alphabet = alphabet_from_json(j.at("alphabet"));
  transitions_from_json<S>(j.at("transitions"), m.alphabet, m.n, m.by_symbol, m.left_end,
                           m.right_end);
  m.accepting = state_set_from_json(j.at("accepting"), names, "accepting");
  m.rejecting = state_set_from_json(j.at("rejecting"), names, "rejecting");
  m.nonhalting = state_set_from_json(j.at("nonhalting"), names, "nonhalting");
  validate_kwqfa(m, tol);
  return m;
}

template <class S>
GeneralQfaT<S> qfa_from_json(const json& j, double tol) {
  require_keys(j, {"model", "alphabet", "states", "initial", "accepting", "transitions"},
               {"model", "alphabet", "states", "accepting", "transitions"}, "qfa file");
  GeneralQfaT<S> m;
  const auto names = states_from_json(j.at("states"));
  check_initial(j, names);
  m.n = static_cast<int>(names.size());
  m.alphabet = alphabet_from_json(j.at("alphabet"));
  const json& t = j.at("transitions");
  if (!t.is_object()) throw ParseError("'transitions' must be an object keyed by symbol");
  auto channel = [&](const json& arr, const std::string& where) {
    if (!arr.is_array() || arr.empty())
      throw ParseError("channel '" + where + "' must be a nonempty array of Kraus matrices");
    Superoperator<S> e;
    for (size_t i = 0; i < arr.size(); ++i)
      e.kraus.push_back(matrix_from_json<S>(arr[i], m.n, where + "/E" + std::to_string(i + 1)));
    return e;
  };
  for (const auto& [key, _] : t.items()) {
    if (key == "lend" || key == "rend") continue;
    if (key.size() != 1 || !m.alphabet.contains(key[0]))
      throw ParseError("transition key '" + key + "' is not an alphabet symbol");
  }
  for (char c : m.alphabet.symbols) {
    const std::string key(1, c);
    if (!t.contains(key)) throw ParseError("missing transitions for symbol '" + key + "'");
    m.by_symbol.push_back(channel(t.at(key), key));
  }
  auto identity_channel = [&] { return Superoperator<S>::unitary(identity<S>(m.n)); };
  m.left_end = t.contains("lend") ? channel(t.at("lend"), "lend") : identity_channel();
  m.right_end = t.contains("rend") ? channel(t.at("rend"), "rend") : identity_channel();
  m.accepting = state_set_from_json(j.at("accepting"), names, "accepting");
  validate_general_qfa(m, tol);
  return m;
}

TwoWayKwqfa twoway_from_json(const json& j, double tol) {
  require_keys(j,
               {"model", "alphabet", "states", "initial", "accepting", "rejecting",
                "nonhalting", "transitions", "one_five"},
               {"model", "alphabet", "states", "accepting", "rejecting", "nonhalting",
                "transitions"},
               "twoway-kwqfa file");
  TwoWayKwqfa m;
  m.states = states_from_json(j.at("states"));
  check_initial(j, m.states);
  m.alphabet = alphabet_from_json(j.at("alphabet"));
  m.accepting = state_set_from_json(j.at("accepting"), m.states, "accepting");
  m.rejecting = state_set_from_json(j.at("rejecting"), m.states, "rejecting");
  m.nonhalting = state_set_from_json(j.at("nonhalting"), m.states, "nonhalting");
  m.one_five = j.value("one_five", false);
  const int n = m.n();
  const json& t = j.at("transitions");
  if (!t.is_object()) throw ParseError("'transitions' must be an object keyed by symbol");
  auto parse_symbol = [&](const json& arr, char sym, const std::string& where) {
    std::array<MatC, 3> mats{MatC::Zero(n, n), MatC::Zero(n, n), MatC::Zero(n, n)};
    if (!arr.is_array())
      throw ParseError("transitions for '" + where + "' must be an array of amplitude triples");
    for (const auto& e : arr) {
      require_keys(e, {"from", "to", "move", "amp"}, {"from", "to", "move", "amp"},
                   "transition entry for '" + where + "'");
      const int from = state_index(m.states, e.at("from").get<std::string>(), where);
      const int to = state_index(m.states, e.at("to").get<std::string>(), where);
      const int move = e.at("move").get<int>();
      if (move < -1 || move > 1) throw ParseError("head move must be -1, 0 or +1 in " + where);
      mats[move + 1](to, from) = cx_from_json<Cplx>(e.at("amp"), where + "/amp");
    }
    m.delta[sym] = std::move(mats);
  };
  for (const auto& [key, val] : t.items()) {
    if (key == "lend") parse_symbol(val, kLend, "lend");
    else if (key == "rend") parse_symbol(val, kRend, "rend");
    else if (key.size() == 1 && m.alphabet.contains(key[0])) parse_symbol(val, key[0], key);
    else throw ParseError("transition key '" + key + "' is not an alphabet symbol");
  }
  validate_twoway_kwqfa(m, tol);
  return m;
}

Tqcfa tqcfa_from_json(const json& j, double tol) {
  require_keys(j,
               {"model", "alphabet", "classical_states", "quantum_states", "initial", "accept",
                "reject", "rules"},
               {"model", "alphabet", "classical_states", "quantum_states", "accept", "reject",
                "rules"},
               "tqcfa file");
  Tqcfa m;
  m.classical_states = states_from_json(j.at("classical_states"));
  m.quantum_states = states_from_json(j.at("quantum_states"));
  check_initial(j, m.classical_states);
  m.alphabet = alphabet_from_json(j.at("alphabet"));
  m.accept_state = state_index(m.classical_states, j.at("accept").get<std::string>(), "accept");
  m.reject_state = state_index(m.classical_states, j.at("reject").get<std::string>(), "reject");
  m.ensure_rule_storage();
  const int nq = static_cast<int>(m.quantum_states.size());
  if (!j.at("rules").is_array()) throw ParseError("'rules' must be an array");
  auto move_from = [&](const json& mv, const std::string& where) {
    require_keys(mv, {"state", "move"}, {"state", "move"}, where);
    Tqcfa::CMove out;
    out.next_state = state_index(m.classical_states, mv.at("state").get<std::string>(), where);
    out.head_move = mv.at("move").get<int>();
    return out;
  };
  for (const auto& rj : j.at("rules")) {
    require_keys(rj, {"state", "symbol", "action", "next", "branches"},
                 {"state", "symbol", "action"}, "tqcfa rule");
    const int s = state_index(m.classical_states, rj.at("state").get<std::string>(), "rule");
    const std::string symstr = rj.at("symbol").get<std::string>();
    char sym;
    if (symstr == "lend") sym = kLend;
    else if (symstr == "rend") sym = kRend;
    else if (symstr.size() == 1 && m.alphabet.contains(symstr[0])) sym = symstr[0];
    else throw ParseError("rule symbol '" + symstr + "' is not an alphabet symbol");
    const std::string where = "rule (" + rj.at("state").get<std::string>() + ", " + symstr + ")";
    if (m.find_rule(s, sym)) throw ParseError("duplicate " + where);
    Tqcfa::Rule& rule = m.rule(s, sym);
    const json& act = rj.at("action");
    require_keys(act, {"type", "matrix", "blocks"}, {"type"}, where + " action");
    const std::string type = act.at("type").get<std::string>();
    if (type == "unitary") {
      rule.action.kind = Tqcfa::QAction::Kind::kUnitary;
      rule.action.unitary = matrix_from_json<Cplx>(act.at("matrix"), nq, where + " matrix");
      if (!rj.contains("next")) throw ParseError(where + " needs a 'next' move");
      rule.next = move_from(rj.at("next"), where + " next");
    } else if (type == "measure") {
      rule.action.kind = Tqcfa::QAction::Kind::kMeasure;
      const json& blocks = act.at("blocks");
      if (!blocks.is_object()) throw ParseError(where + " blocks must map labels to state lists");
      for (const auto& [label, states] : blocks.items()) {
        rule.action.partition.labels.push_back(label);
        std::vector<int> idx;
        for (const auto& qn : states)
          idx.push_back(state_index(m.quantum_states, qn.get<std::string>(), where));
        rule.action.partition.blocks.push_back(std::move(idx));
      }
      if (!rj.contains("branches")) throw ParseError(where + " needs measurement 'branches'");
      for (const auto& [label, mv] : rj.at("branches").items())
        rule.branches[label] = move_from(mv, where + " branch " + label);
    } else {
      throw ParseError(where + " has unknown action type '" + type + "'");
    }
  }
  validate_tqcfa(m, tol);
  return m;
}

json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open automaton file: " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ParseError("JSON parse failure in " + path + ": " + e.what());
  }
  return j;
}

}  // namespace

ParsedAutomaton parse_automaton_json(const json& j, double tol) {
  if (!j.is_object() || !j.contains("model"))
    throw ParseError("automaton file needs a 'model' tag");
  const std::string model = j.at("model").get<std::string>();
  if (model == "dfa") return {model, pfa_from_json<double>(j, /*dfa=*/true, tol)};
  if (model == "pfa") return {model, pfa_from_json<double>(j, /*dfa=*/false, tol)};
  if (model == "gfa") return {model, gfa_from_json<double>(j)};
  if (model == "mcqfa") return {model, mcqfa_from_json<Cplx>(j, tol)};
  if (model == "kwqfa") return {model, kwqfa_from_json<Cplx>(j, tol)};
  if (model == "qfa") return {model, qfa_from_json<Cplx>(j, tol)};
  if (model == "twoway-kwqfa") return {model, twoway_from_json(j, tol)};
  if (model == "tqcfa") return {model, tqcfa_from_json(j, tol)};
  throw ParseError("unknown model tag '" + model + "'");
}

ParsedAutomaton parse_automaton(const std::string& path, double tol) {
  return parse_automaton_json(load_json(path), tol);
}

std::pair<std::string, ExactOneWay> parse_automaton_exact_json(const json& j, double tol) {
  if (!j.is_object() || !j.contains("model"))
    throw ParseError("automaton file needs a 'model' tag");
  const std::string model = j.at("model").get<std::string>();
  if (model == "dfa") return {model, pfa_from_json<Rad>(j, /*dfa=*/true, tol)};
  if (model == "pfa") return {model, pfa_from_json<Rad>(j, /*dfa=*/false, tol)};
  if (model == "gfa") return {model, gfa_from_json<Rad>(j)};
  if (model == "mcqfa") return {model, mcqfa_from_json<CxRad>(j, tol)};
  if (model == "kwqfa") return {model, kwqfa_from_json<CxRad>(j, tol)};
  if (model == "qfa") return {model, qfa_from_json<CxRad>(j, tol)};
  throw ParseError("exact arithmetic supports the one-way models only (got '" + model + "')");
}

std::pair<std::string, ExactOneWay> parse_automaton_exact(const std::string& path, double tol) {
  return parse_automaton_exact_json(load_json(path), tol);
}

// ---------------------------------------------------------------------------
// Serialization
// ---------------------------------------------------------------------------

namespace {

json cx_to_json(const Cplx& z) { return json::array({z.real(), z.imag()}); }

json matrix_to_json(const MatC& m) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(cx_to_json(m(r, c)));
    rows.push_back(std::move(row));
  }
  return rows;
}

json real_matrix_to_json(const MatD& m) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<std::string> default_state_names(int n) {
  std::vector<std::string> names;
  for (int i = 0; i < n; ++i) names.push_back("q" + std::to_string(i + 1));
  return names;
}

json alphabet_to_json(const Alphabet& a) {
  json out = json::array();
  for (char c : a.symbols) out.push_back(std::string(1, c));
  return out;
}

json name_set(const std::vector<int>& idx, const std::vector<std::string>& names) {
  json out = json::array();
  for (int q : idx) out.push_back(names[q]);
  return out;
}

}  // namespace

json serialize_pfa(const Pfa& m, const std::string& model) {
  const auto names = default_state_names(m.n);
  json t;
  for (size_t s = 0; s < m.by_symbol.size(); ++s)
    t[std::string(1, m.alphabet.symbols[s])] = real_matrix_to_json(m.by_symbol[s]);
  t["lend"] = real_matrix_to_json(m.left_end);
  t["rend"] = real_matrix_to_json(m.right_end);
  return json{{"model", model},
              {"alphabet", alphabet_to_json(m.alphabet)},
              {"states", names},
              {"initial", names.front()},
              {"accepting", name_set(m.accepting, names)},
              {"transitions", std::move(t)}};
}

json serialize_gfa(const Gfa& m) {
  const auto names = default_state_names(m.n);
  json t;
  for (size_t s = 0; s < m.by_symbol.size(); ++s)
    t[std::string(1, m.alphabet.symbols[s])] = real_matrix_to_json(m.by_symbol[s]);
  t["lend"] = real_matrix_to_json(m.left_end);
  t["rend"] = real_matrix_to_json(m.right_end);
  json init = json::array(), fin = json::array();
  for (int i = 0; i < m.n; ++i) {
    init.push_back(m.initial(i));
    fin.push_back(m.final_functional(i));
  }
  return json{{"model", "gfa"},
              {"alphabet", alphabet_to_json(m.alphabet)},
              {"states", names},
              {"initial_vector", std::move(init)},
              {"final_vector", std::move(fin)},
              {"transitions", std::move(t)}};
}

json serialize_mcqfa(const Mcqfa& m) {
  const auto names = default_state_names(m.n);
  json t;
  for (size_t s = 0; s < m.by_symbol.size(); ++s)
    t[std::string(1, m.alphabet.symbols[s])] = matrix_to_json(m.by_symbol[s]);
  t["lend"] = matrix_to_json(m.left_end);
  t["rend"] = matrix_to_json(m.right_end);
  return json{{"model", "mcqfa"},
              {"alphabet", alphabet_to_json(m.alphabet)},
              {"states", names},
              {"initial", names.front()},
              {"accepting", name_set(m.accepting, names)},
              {"transitions", std::move(t)}};
}

json serialize_kwqfa(const Kwqfa& m) {
  const auto names = default_state_names(m.n);
  json t;
  for (size_t s = 0; s < m.by_symbol.size(); ++s)
    t[std::string(1, m.alphabet.symbols[s])] = matrix_to_json(m.by_symbol[s]);
  t["lend"] = matrix_to_json(m.left_end);
  t["rend"] = matrix_to_json(m.right_end);
  return json{{"model", "kwqfa"},
              {"alphabet", alphabet_to_json(m.alphabet)},
              {"states", names},
              {"initial", names.front()},
              {"accepting", name_set(m.accepting, names)},
              {"rejecting", name_set(m.rejecting, names)},
              {"nonhalting", name_set(m.nonhalting, names)},
              {"transitions", std::move(t)}};
}

json serialize_general_qfa(const GeneralQfa& m) {
  const auto names = default_state_names(m.n);
  auto channel = [&](const SuperC& e) {
    json out = json::array();
    for (const auto& k : e.kraus) out.push_back(matrix_to_json(k));
    return out;
  };
  json t;
  for (size_t s = 0; s < m.by_symbol.size(); ++s)
    t[std::string(1, m.alphabet.symbols[s])] = channel(m.by_symbol[s]);
  t["lend"] = channel(m.left_end);
  t["rend"] = channel(m.right_end);
  return json{{"model", "qfa"},
              {"alphabet", alphabet_to_json(m.alphabet)},
              {"states", names},
              {"initial", names.front()},
              {"accepting", name_set(m.accepting, names)},
              {"transitions", std::move(t)}};
}

json serialize_twoway_kwqfa(const TwoWayKwqfa& m) {
  json t;
  auto symbol_entries = [&](const std::array<MatC, 3>& mats) {
    json out = json::array();
    for (int c = -1; c <= 1; ++c) {
      const MatC& a = mats[c + 1];
      for (int from = 0; from < m.n(); ++from)
        for (int to = 0; to < m.n(); ++to)
          if (a(to, from) != Cplx(0))
            out.push_back(json{{"from", m.states[from]},
                               {"to", m.states[to]},
                               {"move", c},
                               {"amp", cx_to_json(a(to, from))}});
    }
    return out;
  };
  for (const auto& [sym, mats] : m.delta) {
    std::string key = sym == kLend ? "lend" : sym == kRend ? "rend" : std::string(1, sym);
    t[key] = symbol_entries(mats);
  }
  return json{{"model", "twoway-kwqfa"},
              {"alphabet", alphabet_to_json(m.alphabet)},
              {"states", m.states},
              {"initial", m.states.front()},
              {"accepting", name_set(m.accepting, m.states)},
              {"rejecting", name_set(m.rejecting, m.states)},
              {"nonhalting", name_set(m.nonhalting, m.states)},
              {"one_five", m.one_five},
              {"transitions", std::move(t)}};
}

json serialize_tqcfa(const Tqcfa& m) {
  json rules = json::array();
  auto move_json = [&](const Tqcfa::CMove& mv) {
    return json{{"state", m.classical_states[mv.next_state]}, {"move", mv.head_move}};
  };
  for (size_t s = 0; s < m.rules.size(); ++s) {
    for (size_t sym = 0; sym < m.rules[s].size(); ++sym) {
      if (!m.rules[s][sym]) continue;
      const auto& rule = *m.rules[s][sym];
      std::string symstr = sym == 0 ? "lend"
                           : sym == 1 ? "rend"
                                      : std::string(1, m.alphabet.symbols[sym - 2]);
      json rj{{"state", m.classical_states[s]}, {"symbol", symstr}};
      if (rule.action.kind == Tqcfa::QAction::Kind::kUnitary) {
        rj["action"] = json{{"type", "unitary"}, {"matrix", matrix_to_json(rule.action.unitary)}};
        rj["next"] = move_json(rule.next);
      } else {
        json blocks;
        for (size_t b = 0; b < rule.action.partition.blocks.size(); ++b) {
          json states = json::array();
          for (int q : rule.action.partition.blocks[b]) states.push_back(m.quantum_states[q]);
          blocks[rule.action.partition.labels[b]] = std::move(states);
        }
        rj["action"] = json{{"type", "measure"}, {"blocks", std::move(blocks)}};
        json branches;
        for (const auto& [label, mv] : rule.branches) branches[label] = move_json(mv);
        rj["branches"] = std::move(branches);
      }
      rules.push_back(std::move(rj));
    }
  }
  return json{{"model", "tqcfa"},
              {"alphabet", alphabet_to_json(m.alphabet)},
              {"classical_states", m.classical_states},
              {"quantum_states", m.quantum_states},
              {"initial", m.classical_states.front()},
              {"accept", m.classical_states[m.accept_state]},
              {"reject", m.classical_states[m.reject_state]},
              {"rules", std::move(rules)}};
}

json serialize_machine(const ParsedAutomaton& a) {
  return std::visit(
      [&](const auto& m) -> json {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, Pfa>) return serialize_pfa(m, a.model);
        else if constexpr (std::is_same_v<T, Gfa>) return serialize_gfa(m);
        else if constexpr (std::is_same_v<T, Mcqfa>) return serialize_mcqfa(m);
        else if constexpr (std::is_same_v<T, Kwqfa>) return serialize_kwqfa(m);
        else if constexpr (std::is_same_v<T, GeneralQfa>) return serialize_general_qfa(m);
        else if constexpr (std::is_same_v<T, TwoWayKwqfa>) return serialize_twoway_kwqfa(m);
        else return serialize_tqcfa(m);
      },
      a.machine);
}

void write_json_file(const json& j, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot write file: " + path);
  out << j.dump(2) << "\n";
}

}  // namespace qfa
