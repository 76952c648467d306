#include "nudfa/modcircuit.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>
#include <stdexcept>

namespace nudfa {

namespace {

const std::string kCompose = "\xE2\x88\x98";  // U+2218

struct KindName {
  GateKind kind;
  const char* name;
};
const KindName kKinds[] = {{GateKind::Sumpc, "SUMPC"}, {GateKind::Sump, "SUMP"}, {GateKind::And, "AND"},
                           {GateKind::Or, "OR"},       {GateKind::Mod, "MOD"}};

bool is_boolean(GateKind k) { return k != GateKind::Sump; }

std::vector<Wire> merge_wires(std::vector<Wire> in, long long modulus) {
  std::sort(in.begin(), in.end(), [](const Wire& a, const Wire& b) { return a.source < b.source; });
  std::vector<Wire> out;
  for (const Wire& w : in) {
    if (w.mult < 0 && modulus == 0) throw std::invalid_argument("wire: negative multiplicity");
    if (!out.empty() && out.back().source == w.source)
      out.back().mult += w.mult;
    else
      out.push_back(w);
  }
  if (modulus > 0) {
    for (auto& w : out) w.mult = mod(w.mult, modulus);
    out.erase(std::remove_if(out.begin(), out.end(), [](const Wire& w) { return w.mult == 0; }), out.end());
  }
  return out;
}

std::string key_of(const CGate& g) {
  std::ostringstream os;
  os << static_cast<int>(g.kind) << '|' << g.modulus << '|';
  for (long long a : g.accepting) os << a << ',';
  os << '|';
  for (const Wire& w : g.inputs) os << w.source << ':' << w.mult << ',';
  return os.str();
}

}  // namespace

std::string gate_kind_name(GateKind k) {
  for (const auto& kn : kKinds)
    if (kn.kind == k) return kn.name;
  return "?";
}

LayerShape parse_shape(const std::string& s) {
  std::vector<std::string> parts;
  std::string cur;
  for (std::size_t i = 0; i < s.size();) {
    if (s.compare(i, kCompose.size(), kCompose) == 0) {
      parts.push_back(cur);
      cur.clear();
      i += kCompose.size();
    } else if (s[i] == '.') {
      parts.push_back(cur);
      cur.clear();
      ++i;
    } else {
      if (!std::isspace(static_cast<unsigned char>(s[i]))) cur += s[i];
      ++i;
    }
  }
  parts.push_back(cur);
  LayerShape out;
  for (const auto& part : parts) {
    if (part.empty()) throw std::invalid_argument("shape: empty layer in '" + s + "'");
    std::size_t paren = part.find('(');
    std::string name = part.substr(0, paren);
    LayerSpec spec;
    bool found = false;
    for (const auto& kn : kKinds)
      if (name == kn.name) {
        spec.kind = kn.kind;
        found = true;
      }
    if (!found) throw std::invalid_argument("shape: unknown layer '" + part + "'");
    if (paren != std::string::npos) {
      if (part.back() != ')') throw std::invalid_argument("shape: missing ')' in '" + part + "'");
      std::string inner = part.substr(paren + 1, part.size() - paren - 2);
      std::stringstream ss(inner);
      std::string tok;
      while (std::getline(ss, tok, ',')) {
        if (tok == "*")
          spec.params.push_back(std::nullopt);
        else {
          std::size_t used = 0;
          long long v = std::stoll(tok, &used);
          if (used != tok.size() || v < 0) throw std::invalid_argument("shape: bad parameter '" + tok + "'");
          spec.params.push_back(v);
        }
      }
    }
    std::size_t max_params = (spec.kind == GateKind::Sump || spec.kind == GateKind::Sumpc) ? 2 : 1;
    if (spec.params.size() > max_params) throw std::invalid_argument("shape: too many parameters in '" + part + "'");
    out.push_back(spec);
  }
  return out;
}

std::string shape_to_string(const LayerShape& s) {
  std::string out;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (i) out += kCompose;
    out += gate_kind_name(s[i].kind);
    out += '(';
    if (s[i].params.empty()) out += '*';
    for (std::size_t j = 0; j < s[i].params.size(); ++j) {
      if (j) out += ',';
      out += s[i].params[j] ? std::to_string(*s[i].params[j]) : "*";
    }
    out += ')';
  }
  return out;
}

void validate_ccircuit(const CCircuit& c) {
  if (c.n < 0) throw std::invalid_argument("ccircuit: negative input count");
  for (int i = 0; i < c.num_gates(); ++i) {
    const CGate& g = c.gates[i];
    int id = c.n + i;
    for (const Wire& w : g.inputs) {
      if (w.source < 0 || w.source >= id) throw std::invalid_argument("ccircuit: gate " + std::to_string(id) + " has a bad wire");
      if (w.mult < 1) throw std::invalid_argument("ccircuit: multiplicity must be >= 1");
      if (w.source >= c.n && !is_boolean(c.gate(w.source).kind))
        throw std::invalid_argument("ccircuit: vector-valued gate used as an input");
    }
    switch (g.kind) {
      case GateKind::And:
      case GateKind::Or: break;
      case GateKind::Mod:
        if (g.modulus < 1) throw std::invalid_argument("ccircuit: MOD modulus must be >= 1");
        for (long long a : g.accepting)
          if (a < 0 || a >= g.modulus) throw std::invalid_argument("ccircuit: MOD accepting value out of range");
        break;
      case GateKind::Sump:
      case GateKind::Sumpc:
        if (!is_prime(g.modulus)) throw std::invalid_argument("ccircuit: SUMP modulus must be prime");
        if (g.nu < 1) throw std::invalid_argument("ccircuit: SUMP dimension must be >= 1");
        if (g.coeffs.size() != g.inputs.size()) throw std::invalid_argument("ccircuit: SUMP needs one matrix per wire");
        for (const auto& m : g.coeffs)
          if (m.rows() != g.nu || m.cols() != g.nu) throw std::invalid_argument("ccircuit: SUMP matrix size");
        if (g.offset.size() != g.nu) throw std::invalid_argument("ccircuit: SUMP offset size");
        if (g.kind == GateKind::Sumpc && g.target.size() != g.nu)
          throw std::invalid_argument("ccircuit: SUMPC target size");
        break;
    }
  }
  if (c.output < c.n || c.output >= c.n + c.num_gates()) throw std::invalid_argument("ccircuit: output must be a gate");
}

ShapeCheck validate_shape(const CCircuit& c, const LayerShape& shape) {
  auto fail = [](std::string m) { return ShapeCheck{false, std::move(m)}; };
  try {
    validate_ccircuit(c);
  } catch (const std::invalid_argument& e) {
    return fail(e.what());
  }
  int depth = static_cast<int>(shape.size());
  if (depth == 0) return fail("empty shape");
  std::vector<int> layer(c.num_gates(), -1);
  layer[c.output - c.n] = depth;
  for (int i = c.num_gates() - 1; i >= 0; --i) {
    int id = c.n + i;
    const CGate& g = c.gates[i];
    int l = layer[i];
    if (l < 0) return fail("gate " + std::to_string(id) + " is not connected to the output");
    if (l == 0) return fail("gate " + std::to_string(id) + " would sit on the input layer");
    const LayerSpec& spec = shape[l - 1];
    std::string where = "gate " + std::to_string(id) + " in layer " + std::to_string(l);
    if (g.kind != spec.kind)
      return fail(where + " is " + gate_kind_name(g.kind) + ", shape wants " + gate_kind_name(spec.kind));
    if (g.kind == GateKind::Sump && id != c.output) return fail(where + ": SUMP output feeds another gate");
    auto param = [&](std::size_t k) -> std::optional<long long> {
      return k < spec.params.size() ? spec.params[k] : std::nullopt;
    };
    switch (g.kind) {
      case GateKind::And:
      case GateKind::Or:
        if (auto d = param(0); d && static_cast<long long>(g.inputs.size()) > *d)
          return fail(where + ": fan-in " + std::to_string(g.inputs.size()) + " exceeds " + std::to_string(*d));
        break;
      case GateKind::Mod:
        if (auto m = param(0); m && g.modulus != *m)
          return fail(where + ": modulus " + std::to_string(g.modulus) + " != " + std::to_string(*m));
        break;
      case GateKind::Sump:
      case GateKind::Sumpc:
        if (auto p = param(0); p && g.modulus != *p) return fail(where + ": prime mismatch");
        if (auto nu = param(1); nu && g.nu != *nu) return fail(where + ": dimension mismatch");
        break;
    }
    for (const Wire& w : g.inputs) {
      if (w.source < c.n) {
        if (l != 1)
          return fail("wire from input " + std::to_string(w.source) + " into " + where + " skips layers");
        continue;
      }
      int& ls = layer[w.source - c.n];
      if (ls < 0)
        ls = l - 1;
      else if (ls != l - 1)
        return fail("wire from gate " + std::to_string(w.source) + " into " + where + " crosses layers");
    }
  }
  return {};
}

long long cc_size(const CCircuit& c) {
  long long s = c.num_gates();
  for (const auto& g : c.gates)
    for (const auto& w : g.inputs) s += w.mult;
  return s;
}

namespace {

// Boolean value of every node for one input word; SUMP gates are skipped.
void eval_bool(const CCircuit& c, std::uint64_t index, std::vector<unsigned char>& val) {
  val.assign(c.n + c.num_gates(), 0);
  for (int i = 0; i < c.n; ++i) val[i] = static_cast<unsigned char>((index >> i) & 1U);
  for (int i = 0; i < c.num_gates(); ++i) {
    const CGate& g = c.gates[i];
    unsigned char r = 0;
    switch (g.kind) {
      case GateKind::And:
        r = 1;
        for (const Wire& w : g.inputs)
          if (!val[w.source]) {
            r = 0;
            break;
          }
        break;
      case GateKind::Or:
        for (const Wire& w : g.inputs)
          if (val[w.source]) {
            r = 1;
            break;
          }
        break;
      case GateKind::Mod: {
        long long s = 0;
        for (const Wire& w : g.inputs)
          if (val[w.source]) s += w.mult;
        s %= g.modulus;
        r = std::binary_search(g.accepting.begin(), g.accepting.end(), s) ? 1 : 0;
        break;
      }
      case GateKind::Sump: break;
      case GateKind::Sumpc: {
        ZpVector v = g.offset;
        for (std::size_t k = 0; k < g.inputs.size(); ++k)
          if (val[g.inputs[k].source]) v += g.inputs[k].mult * g.coeffs[k].rowwise().sum();
        r = reduce_vec(v, g.modulus) == reduce_vec(g.target, g.modulus) ? 1 : 0;
        break;
      }
    }
    val[c.n + i] = r;
  }
}

ZpVector sump_value(const CGate& g, const std::vector<unsigned char>& val) {
  ZpVector v = g.offset;
  for (std::size_t k = 0; k < g.inputs.size(); ++k)
    if (val[g.inputs[k].source]) v += g.inputs[k].mult * g.coeffs[k].rowwise().sum();
  return reduce_vec(v, g.modulus);
}

}  // namespace

std::vector<long long> eval_cc(const CCircuit& c, const std::vector<int>& bits) {
  if (static_cast<int>(bits.size()) != c.n) throw std::invalid_argument("eval_cc: wrong input length");
  std::uint64_t index = 0;
  for (int i = 0; i < c.n; ++i)
    if (bits[i]) index |= std::uint64_t{1} << i;
  std::vector<unsigned char> val;
  eval_bool(c, index, val);
  const CGate& out = c.gate(c.output);
  if (out.kind == GateKind::Sump) {
    ZpVector v = sump_value(out, val);
    return std::vector<long long>(v.data(), v.data() + v.size());
  }
  return {val[c.output]};
}

bool eval_cc_bool(const CCircuit& c, std::uint64_t index) {
  if (c.gate(c.output).kind == GateKind::Sump) throw std::invalid_argument("eval_cc: output is vector-valued");
  std::vector<unsigned char> val;
  eval_bool(c, index, val);
  return val[c.output];
}

TruthTable cc_truth_table(const CCircuit& c) {
  check_truth_table_bound(c.n);
  if (c.gate(c.output).kind == GateKind::Sump) throw std::invalid_argument("cc_truth_table: output is vector-valued");
  std::uint64_t total = std::uint64_t{1} << c.n;
  TruthTable t(total);
  std::vector<unsigned char> val;
  for (std::uint64_t i = 0; i < total; ++i) {
    eval_bool(c, i, val);
    t[i] = val[c.output];
  }
  return t;
}

std::vector<ZpVector> cc_vector_table(const CCircuit& c) {
  check_truth_table_bound(c.n);
  const CGate& out = c.gate(c.output);
  if (out.kind != GateKind::Sump) throw std::invalid_argument("cc_vector_table: output is not a SUMP gate");
  std::uint64_t total = std::uint64_t{1} << c.n;
  std::vector<ZpVector> t;
  t.reserve(total);
  std::vector<unsigned char> val;
  for (std::uint64_t i = 0; i < total; ++i) {
    eval_bool(c, i, val);
    t.push_back(sump_value(out, val));
  }
  return t;
}

CCircuit expand_multiplicities(const CCircuit& c) {
  CCircuit out = c;
  for (auto& g : out.gates) {
    std::vector<Wire> w;
    std::vector<ZpMatrix> m;
    for (std::size_t k = 0; k < g.inputs.size(); ++k)
      for (long long r = 0; r < g.inputs[k].mult; ++r) {
        w.push_back({g.inputs[k].source, 1});
        if (!g.coeffs.empty()) m.push_back(g.coeffs[k]);
      }
    g.inputs = std::move(w);
    if (!g.coeffs.empty()) g.coeffs = std::move(m);
  }
  return out;
}

int CCBuilder::push(CGate g) {
  bool shareable = g.kind == GateKind::And || g.kind == GateKind::Or || g.kind == GateKind::Mod;
  std::string key;
  if (shareable) {
    key = key_of(g);
    if (auto it = index_.find(key); it != index_.end()) return it->second;
  }
  int id = n_ + static_cast<int>(gates_.size());
  for (const Wire& w : g.inputs)
    if (w.source < 0 || w.source >= id) throw std::invalid_argument("CCBuilder: wire to unknown node");
  gates_.push_back(std::move(g));
  if (shareable) index_.emplace(std::move(key), id);
  return id;
}

int CCBuilder::add_and(std::vector<int> sources) {
  std::sort(sources.begin(), sources.end());
  sources.erase(std::unique(sources.begin(), sources.end()), sources.end());
  CGate g;
  g.kind = GateKind::And;
  for (int s : sources) g.inputs.push_back({s, 1});
  return push(std::move(g));
}

int CCBuilder::add_or(std::vector<int> sources) {
  std::sort(sources.begin(), sources.end());
  sources.erase(std::unique(sources.begin(), sources.end()), sources.end());
  CGate g;
  g.kind = GateKind::Or;
  for (int s : sources) g.inputs.push_back({s, 1});
  return push(std::move(g));
}

int CCBuilder::add_mod(long long m, std::vector<long long> accepting, std::vector<Wire> inputs) {
  if (m < 1) throw std::invalid_argument("CCBuilder: MOD modulus must be >= 1");
  for (auto& a : accepting) a = mod(a, m);
  std::sort(accepting.begin(), accepting.end());
  accepting.erase(std::unique(accepting.begin(), accepting.end()), accepting.end());
  CGate g;
  g.kind = GateKind::Mod;
  g.modulus = m;
  g.accepting = std::move(accepting);
  g.inputs = merge_wires(std::move(inputs), m);
  return push(std::move(g));
}

int CCBuilder::add_sump(long long p, int nu, std::vector<Wire> inputs, std::vector<ZpMatrix> coeffs, ZpVector offset) {
  if (inputs.size() != coeffs.size()) throw std::invalid_argument("CCBuilder: SUMP needs one matrix per wire");
  // fold multiplicities into the matrices and merge parallel wires
  std::map<int, ZpMatrix> acc;
  for (std::size_t k = 0; k < inputs.size(); ++k) {
    ZpMatrix m = reduce(coeffs[k] * inputs[k].mult, p);
    auto [it, fresh] = acc.emplace(inputs[k].source, m);
    if (!fresh) it->second = reduce(it->second + m, p);
  }
  CGate g;
  g.kind = GateKind::Sump;
  g.modulus = p;
  g.nu = nu;
  for (auto& [src, m] : acc) {
    if (m.isZero()) continue;
    g.inputs.push_back({src, 1});
    g.coeffs.push_back(m);
  }
  g.offset = reduce_vec(offset, p);
  return push(std::move(g));
}

int CCBuilder::add_sumpc(long long p, int nu, std::vector<Wire> inputs, std::vector<ZpMatrix> coeffs, ZpVector offset,
                         ZpVector target) {
  int id = add_sump(p, nu, std::move(inputs), std::move(coeffs), std::move(offset));
  CGate& g = gates_[id - n_];
  g.kind = GateKind::Sumpc;
  g.target = reduce_vec(target, p);
  return id;
}

int CCBuilder::inline_circuit(const CCircuit& c) {
  if (c.n != n_) throw std::invalid_argument("CCBuilder: input count mismatch");
  std::vector<int> id(c.n + c.num_gates());
  for (int i = 0; i < c.n; ++i) id[i] = i;
  for (int i = 0; i < c.num_gates(); ++i) {
    CGate g = c.gates[i];
    for (auto& w : g.inputs) w.source = id[w.source];
    id[c.n + i] = push(std::move(g));
  }
  return id[c.output];
}

CCircuit CCBuilder::build(int output, std::string shape) const {
  if (output < n_ || output >= n_ + static_cast<int>(gates_.size()))
    throw std::invalid_argument("CCBuilder: output must be a gate");
  std::vector<char> live(gates_.size(), 0);
  live[output - n_] = 1;
  for (int i = static_cast<int>(gates_.size()) - 1; i >= 0; --i) {
    if (!live[i]) continue;
    for (const Wire& w : gates_[i].inputs)
      if (w.source >= n_) live[w.source - n_] = 1;
  }
  CCircuit c;
  c.n = n_;
  c.declared_shape = std::move(shape);
  std::vector<int> remap(n_ + gates_.size(), -1);
  for (int i = 0; i < n_; ++i) remap[i] = i;
  for (std::size_t i = 0; i < gates_.size(); ++i) {
    if (!live[i]) continue;
    CGate g = gates_[i];
    for (auto& w : g.inputs) w.source = remap[w.source];
    remap[n_ + i] = n_ + c.num_gates();
    c.gates.push_back(std::move(g));
  }
  c.output = remap[output];
  return c;
}

int constant_gate(CCBuilder& b, const LayerSpec& layer, bool value) {
  switch (layer.kind) {
    case GateKind::And:
      if (!value) throw std::invalid_argument("constant_gate: AND layer cannot produce constant 0 without inputs");
      return b.add_and({});
    case GateKind::Or:
      if (value) throw std::invalid_argument("constant_gate: OR layer cannot produce constant 1 without inputs");
      return b.add_or({});
    case GateKind::Mod: {
      long long m = layer.params.empty() || !layer.params[0] ? 2 : *layer.params[0];
      return b.add_mod(m, value ? std::vector<long long>{0} : std::vector<long long>{}, {});
    }
    case GateKind::Sump:
    case GateKind::Sumpc: break;
  }
  throw std::invalid_argument("constant_gate: unsupported layer");
}

}  // namespace nudfa
