#include "nudfa/io.hpp"

#include <fstream>
#include <sstream>

#include "nudfa/fixtures.hpp"

namespace nudfa {

namespace {

void require(bool ok, const std::string& what) {
  if (!ok) throw std::invalid_argument(what);
}

const Json& field(const Json& j, const char* key, const char* where) {
  auto it = j.find(key);
  require(it != j.end(), std::string(where) + ": missing field \"" + key + "\"");
  return *it;
}

Json matrix_json(const ZpMatrix& m) {
  Json rows = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    rows.push_back(std::move(row));
  }
  return rows;
}

ZpMatrix matrix_from(const Json& j, int nu) {
  require(j.is_array() && static_cast<int>(j.size()) == nu, "ccircuit: coefficient matrix must be nu x nu");
  ZpMatrix m(nu, nu);
  for (int r = 0; r < nu; ++r) {
    require(j[r].is_array() && static_cast<int>(j[r].size()) == nu, "ccircuit: coefficient matrix must be nu x nu");
    for (int c = 0; c < nu; ++c) m(r, c) = j[r][c].get<long long>();
  }
  return m;
}

Json vector_json(const ZpVector& v) {
  Json a = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v(i));
  return a;
}

ZpVector vector_from(const Json& j, int nu) {
  require(j.is_array() && static_cast<int>(j.size()) == nu, "ccircuit: vector must have nu entries");
  ZpVector v(nu);
  for (int i = 0; i < nu; ++i) v(i) = j[i].get<long long>();
  return v;
}

GateKind kind_from(const std::string& s) {
  if (s == "AND") return GateKind::And;
  if (s == "OR") return GateKind::Or;
  if (s == "MOD") return GateKind::Mod;
  if (s == "SUMP") return GateKind::Sump;
  if (s == "SUMPC") return GateKind::Sumpc;
  throw std::invalid_argument("ccircuit: unknown gate kind '" + s + "'");
}

std::vector<int> gate_layers(const CCircuit& c) {
  std::vector<int> layer(c.num_gates(), 0);
  for (int i = 0; i < c.num_gates(); ++i) {
    int l = 0;
    for (const Wire& w : c.gates[i].inputs)
      if (w.source >= c.n) l = std::max(l, layer[w.source - c.n]);
    layer[i] = l + 1;
  }
  return layer;
}

}  // namespace

Json algebra_to_json(const FiniteAlgebra& a, const std::optional<AlgCircuit>& malcev) {
  Json j;
  j["name"] = a.name();
  j["size"] = a.size();
  Json ops = Json::array();
  for (const auto& op : a.ops()) ops.push_back({{"name", op.name}, {"arity", op.arity}, {"table", op.table}});
  j["ops"] = std::move(ops);
  if (malcev) j["malcev"] = circuit_to_json(*malcev, a);
  return j;
}

LoadedAlgebra algebra_from_json(const Json& j) {
  require(j.is_object(), "algebra: expected an object");
  std::string name = j.value("name", std::string("A"));
  int n = field(j, "size", "algebra").get<int>();
  require(n >= 1, "algebra: size must be positive");
  std::vector<Operation> ops;
  for (const auto& o : field(j, "ops", "algebra")) {
    Operation op;
    op.name = field(o, "name", "algebra op").get<std::string>();
    op.arity = field(o, "arity", "algebra op").get<int>();
    op.table = field(o, "table", "algebra op").get<std::vector<Element>>();
    ops.push_back(std::move(op));
  }
  LoadedAlgebra out{FiniteAlgebra(name, n, std::move(ops)), std::nullopt, name};
  if (auto it = j.find("malcev"); it != j.end()) {
    out.malcev = circuit_from_json(*it, out.algebra);
    require(out.malcev->num_vars == 3, "algebra: Malcev circuit must be ternary");
    if (!is_malcev(*out.malcev, out.algebra)) throw HypothesisError("algebra: given circuit is not a Malcev term");
  }
  return out;
}

LoadedAlgebra load_algebra(const std::string& ref) {
  const std::string scheme = "fixtures:";
  if (ref.rfind(scheme, 0) == 0) {
    Fixture fx = fixture(ref.substr(scheme.size()));
    return {fx.algebra, fx.malcev, ref};
  }
  LoadedAlgebra a = algebra_from_json(read_json_file(ref));
  a.ref = ref;
  return a;
}

Json circuit_to_json(const AlgCircuit& c, const FiniteAlgebra& a) {
  Json nodes = Json::array();
  for (const auto& n : c.nodes) {
    switch (n.kind) {
      case CircuitNode::Kind::Var: nodes.push_back({{"var", n.value}}); break;
      case CircuitNode::Kind::Const: nodes.push_back({{"const", n.value}}); break;
      case CircuitNode::Kind::Gate: nodes.push_back({{"op", a.op(n.value).name}, {"args", n.children}}); break;
    }
  }
  return {{"k", c.num_vars}, {"nodes", std::move(nodes)}, {"output", c.output}};
}

AlgCircuit circuit_from_json(const Json& j, const FiniteAlgebra& a) {
  require(j.is_object(), "circuit: expected an object");
  AlgCircuit c;
  c.num_vars = field(j, "k", "circuit").get<int>();
  for (const auto& n : field(j, "nodes", "circuit")) {
    CircuitNode node;
    if (n.contains("var")) {
      node.kind = CircuitNode::Kind::Var;
      node.value = n["var"].get<int>();
    } else if (n.contains("const")) {
      node.kind = CircuitNode::Kind::Const;
      node.value = n["const"].get<int>();
    } else {
      const Json& op = field(n, "op", "circuit node");
      node.kind = CircuitNode::Kind::Gate;
      node.value = op.is_number() ? op.get<int>() : a.op_index(op.get<std::string>());
      node.children = field(n, "args", "circuit node").get<std::vector<int>>();
    }
    c.nodes.push_back(std::move(node));
  }
  c.output = field(j, "output", "circuit").get<int>();
  validate_circuit(c, a);
  return c;
}

Json program_to_json(const AlgProgram& p, const LoadedAlgebra& a) {
  Json j;
  if (a.ref.rfind("fixtures:", 0) == 0)
    j["algebra"] = a.ref;
  else
    j["algebra"] = algebra_to_json(a.algebra, a.malcev);
  j["circuit"] = circuit_to_json(p.circuit, a.algebra);
  j["n"] = p.n;
  Json ins = Json::array();
  for (const auto& i : p.instructions) ins.push_back({{"var", i.var}, {"bit", i.bit}, {"a0", i.a0}, {"a1", i.a1}});
  j["instructions"] = std::move(ins);
  j["accepting"] = p.accepting;
  return j;
}

LoadedProgram program_from_json(const Json& j, const std::filesystem::path& base_dir) {
  require(j.is_object(), "program: expected an object");
  const Json& alg = field(j, "algebra", "program");
  LoadedProgram out;
  if (alg.is_string()) {
    std::string ref = alg.get<std::string>();
    if (ref.rfind("fixtures:", 0) != 0 && !base_dir.empty() && std::filesystem::path(ref).is_relative())
      ref = (base_dir / ref).string();
    else if (ref.find(':') == std::string::npos && !std::filesystem::exists(ref))
      ref = "fixtures:" + ref;  // bare fixture name
    out.algebra = load_algebra(ref);
  } else {
    out.algebra = algebra_from_json(alg);
  }
  AlgProgram& p = out.program;
  p.circuit = circuit_from_json(field(j, "circuit", "program"), out.algebra.algebra);
  p.n = field(j, "n", "program").get<int>();
  for (const auto& i : field(j, "instructions", "program"))
    p.instructions.push_back({field(i, "var", "instruction").get<int>(), field(i, "bit", "instruction").get<int>(),
                              field(i, "a0", "instruction").get<Element>(),
                              field(i, "a1", "instruction").get<Element>()});
  p.accepting = field(j, "accepting", "program").get<std::vector<Element>>();
  std::sort(p.accepting.begin(), p.accepting.end());
  p.accepting.erase(std::unique(p.accepting.begin(), p.accepting.end()), p.accepting.end());
  validate_program(p, out.algebra.algebra);
  return out;
}

LoadedProgram load_program(const std::string& path) {
  return program_from_json(read_json_file(path), std::filesystem::path(path).parent_path());
}

Json ccircuit_to_json(const CCircuit& c) {
  auto layers = gate_layers(c);
  Json gates = Json::array();
  for (int i = 0; i < c.num_gates(); ++i) {
    const CGate& g = c.gates[i];
    Json jg;
    jg["id"] = c.n + i;
    jg["layer"] = layers[i];
    jg["kind"] = gate_kind_name(g.kind);
    Json ins = Json::array();
    for (const Wire& w : g.inputs) ins.push_back({w.source, w.mult});
    switch (g.kind) {
      case GateKind::And:
      case GateKind::Or: break;
      case GateKind::Mod:
        jg["modulus"] = g.modulus;
        jg["accepting"] = g.accepting;
        break;
      case GateKind::Sump:
      case GateKind::Sumpc: {
        jg["p"] = g.modulus;
        jg["nu"] = g.nu;
        Json coeffs = Json::array();
        for (const auto& m : g.coeffs) coeffs.push_back(matrix_json(m));
        jg["coeffs"] = std::move(coeffs);
        jg["offset"] = vector_json(g.offset);
        if (g.kind == GateKind::Sumpc) jg["target"] = vector_json(g.target);
        break;
      }
    }
    jg["inputs"] = std::move(ins);
    gates.push_back(std::move(jg));
  }
  return {{"n", c.n}, {"output", c.output}, {"shape", c.declared_shape}, {"gates", std::move(gates)}};
}

CCircuit ccircuit_from_json(const Json& j) {
  require(j.is_object(), "ccircuit: expected an object");
  CCircuit c;
  c.n = field(j, "n", "ccircuit").get<int>();
  c.output = field(j, "output", "ccircuit").get<int>();
  c.declared_shape = j.value("shape", std::string());
  std::vector<std::optional<int>> declared;
  for (const auto& jg : field(j, "gates", "ccircuit")) {
    CGate g;
    g.kind = kind_from(field(jg, "kind", "gate").get<std::string>());
    if (auto id = jg.find("id"); id != jg.end())
      require(id->get<int>() == c.n + c.num_gates(), "ccircuit: gate ids must be n, n+1, ... in order");
    for (const auto& w : field(jg, "inputs", "gate")) {
      if (w.is_number()) {
        g.inputs.push_back({w.get<int>(), 1});
      } else {
        require(w.is_array() && w.size() == 2, "ccircuit: wire must be [source, multiplicity]");
        g.inputs.push_back({w[0].get<int>(), w[1].get<long long>()});
      }
    }
    if (g.kind == GateKind::Mod) {
      g.modulus = field(jg, "modulus", "MOD gate").get<long long>();
      g.accepting = field(jg, "accepting", "MOD gate").get<std::vector<long long>>();
    } else if (g.kind == GateKind::Sump || g.kind == GateKind::Sumpc) {
      g.modulus = field(jg, "p", "SUMP gate").get<long long>();
      g.nu = field(jg, "nu", "SUMP gate").get<int>();
      require(g.nu >= 1, "ccircuit: nu must be positive");
      for (const auto& m : field(jg, "coeffs", "SUMP gate")) g.coeffs.push_back(matrix_from(m, g.nu));
      g.offset = vector_from(field(jg, "offset", "SUMP gate"), g.nu);
      if (g.kind == GateKind::Sumpc) g.target = vector_from(field(jg, "target", "SUMPC gate"), g.nu);
    }
    declared.push_back(jg.contains("layer") ? std::optional<int>(jg["layer"].get<int>()) : std::nullopt);
    c.gates.push_back(std::move(g));
  }
  validate_ccircuit(c);
  auto layers = gate_layers(c);
  for (int i = 0; i < c.num_gates(); ++i)
    require(!declared[i] || *declared[i] == layers[i],
            "ccircuit: gate " + std::to_string(c.n + i) + " declares layer " + std::to_string(*declared[i]) +
                " but sits on layer " + std::to_string(layers[i]));
  return c;
}

Json equation_to_json(const Equation& eq, const FiniteAlgebra& a) {
  return {{"lhs", circuit_to_json(eq.lhs, a)}, {"rhs", circuit_to_json(eq.rhs, a)}};
}

Equation equation_from_json(const Json& j, const FiniteAlgebra& a) {
  require(j.is_object(), "equation: expected an object");
  AlgCircuit lhs = circuit_from_json(field(j, "lhs", "equation"), a);
  if (auto it = j.find("constant"); it != j.end()) {
    Element e = it->get<Element>();
    require(e >= 0 && e < a.size(), "equation: constant out of range");
    return equation_to_constant(lhs, e);
  }
  AlgCircuit rhs = circuit_from_json(field(j, "rhs", "equation"), a);
  require(lhs.num_vars == rhs.num_vars, "equation: both sides need the same variables");
  return {lhs, rhs};
}

Json congruence_to_json(const Congruence& c) { return c.classes(); }

Congruence congruence_from_json(const Json& j) {
  auto classes = j.get<std::vector<std::vector<int>>>();
  int n = 0;
  for (const auto& cls : classes)
    for (int x : cls) n = std::max(n, x + 1);
  std::vector<int> labels(n, -1);
  for (std::size_t k = 0; k < classes.size(); ++k)
    for (int x : classes[k]) {
      require(x >= 0 && labels[x] < 0, "congruence: classes must partition 0..n-1");
      labels[x] = static_cast<int>(k);
    }
  for (int l : labels) require(l >= 0, "congruence: classes must partition 0..n-1");
  return Congruence::from_labels(labels);
}

Json lattice_to_json(const CongruenceLattice& lat, CongruenceAnalysis* an) {
  Json j;
  Json elems = Json::array();
  for (const auto& c : lat.elements()) elems.push_back(congruence_to_json(c));
  j["elements"] = std::move(elems);
  Json covers = Json::array();
  for (auto [lo, hi] : lat.cover_pairs()) {
    Json cv = {{"lower", lo}, {"upper", hi}};
    if (an) {
      CharInfo ci = an->characteristic(lo, hi);
      cv["characteristic"] = ci.characteristic;
      cv["coset_size"] = ci.coset_size;
    }
    covers.push_back(std::move(cv));
  }
  j["covers"] = std::move(covers);
  j["atoms"] = lat.atoms();
  j["meet_irreducibles"] = lat.meet_irreducibles();
  j["join_irreducibles"] = lat.join_irreducibles();
  j["modular"] = lat.is_modular();
  return j;
}

std::string lattice_to_dot(const CongruenceLattice& lat, CongruenceAnalysis* an) {
  std::ostringstream os;
  os << "digraph lattice {\n  rankdir=BT;\n";
  for (int i = 0; i < lat.size(); ++i) os << "  c" << i << " [label=\"" << to_string(lat.element(i)) << "\"];\n";
  for (auto [lo, hi] : lat.cover_pairs()) {
    os << "  c" << lo << " -> c" << hi;
    if (an) os << " [label=\"" << an->characteristic(lo, hi).characteristic << "\"]";
    os << ";\n";
  }
  os << "}\n";
  return os.str();
}

std::string ccircuit_to_dot(const CCircuit& c) {
  std::ostringstream os;
  os << "digraph cc {\n  rankdir=BT;\n";
  for (int i = 0; i < c.n; ++i) os << "  n" << i << " [label=\"b" << i << "\", shape=box];\n";
  for (int i = 0; i < c.num_gates(); ++i) {
    const CGate& g = c.gates[i];
    os << "  n" << c.n + i << " [label=\"" << gate_kind_name(g.kind);
    if (g.kind != GateKind::And && g.kind != GateKind::Or) os << "(" << g.modulus << ")";
    os << "\"" << (c.n + i == c.output ? ", peripheries=2" : "") << "];\n";
    for (const Wire& w : g.inputs) {
      os << "  n" << w.source << " -> n" << c.n + i;
      if (w.mult != 1) os << " [label=\"" << w.mult << "\"]";
      os << ";\n";
    }
  }
  os << "}\n";
  return os.str();
}

Json minimal_set_to_json(const MinimalSet& m, const FiniteAlgebra& a) {
  Json j = {{"elements", m.elements}, {"witness", m.witness}, {"witness_circuit", circuit_to_json(m.witness_circuit, a)}};
  if (m.idempotent) j["idempotent"] = *m.idempotent;
  return j;
}

Json pass_report_to_json(const PassReport& r) {
  return {{"pass", r.pass},
          {"input_shape", r.input_shape},
          {"output_shape", r.output_shape},
          {"input_size", r.input_size},
          {"output_size", r.output_size},
          {"checked", r.checked},
          {"verified", r.verified},
          {"max_terms", r.max_terms}};
}

Json solve_result_to_json(const SolveResult& r, bool timing) {
  Json j = {{"status", status_name(r.status)}, {"probabilistic", r.probabilistic}};
  if (!r.word.empty() || r.status == SolveResult::Status::Sat) j["word"] = r.word;
  if (!r.assignment.empty()) j["assignment"] = r.assignment;
  j["tried"] = r.tried;
  if (timing) j["seconds"] = r.seconds;
  if (r.seed) j["seed"] = *r.seed;
  if (!r.note.empty()) j["note"] = r.note;
  return j;
}

Json poly_to_json(const MultilinearPoly& f) {
  Json terms = Json::array();
  for (const auto& [mask, c] : f.terms) {
    std::vector<int> vars;
    for (int i = 0; i < 64; ++i)
      if ((mask >> i) & 1U) vars.push_back(i);
    terms.push_back({{"vars", vars}, {"coef", c}});
  }
  return {{"p", f.p}, {"n", f.n}, {"degree", f.degree()}, {"text", to_string(f)}, {"terms", std::move(terms)}};
}

VerifyReport verify_program_circuit(const AlgProgram& p, const FiniteAlgebra& a, const CCircuit& c, int n_bound) {
  if (n_bound > 20) throw std::invalid_argument("verify: bound above 20");
  if (p.n > n_bound) throw BudgetError("verify: n = " + std::to_string(p.n) + " exceeds bound " + std::to_string(n_bound));
  if (c.n != p.n) throw std::invalid_argument("verify: program and circuit read different numbers of bits");
  VerifyReport r;
  for (std::uint64_t idx = 0; idx < (std::uint64_t{1} << p.n); ++idx) {
    ++r.rows;
    bool want = eval_program(p, a, bits_of(idx, p.n)).accepted;
    bool got = eval_cc_bool(c, idx);
    if (want != got) {
      r.match = false;
      r.mismatch = bits_of(idx, p.n);
      r.expected = want;
      r.got = got;
      break;
    }
  }
  return r;
}

Json verify_report_to_json(const VerifyReport& r) {
  Json j = {{"match", r.match}, {"rows", r.rows}};
  if (!r.match) {
    j["mismatch"] = r.mismatch;
    j["expected"] = r.expected;
    j["got"] = r.got;
  }
  return j;
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open " + path);
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw std::invalid_argument(path + ": " + e.what());
  }
}

Cnf load_dimacs(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open " + path);
  return read_dimacs(in);
}

}  // namespace nudfa
