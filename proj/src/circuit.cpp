#include "nudfa/circuit.hpp"

#include <stdexcept>

#include "nudfa/algebra.hpp"

namespace nudfa {

int AlgCircuit::size() const {
  int k = 0;
  for (const auto& n : nodes) k += n.kind == CircuitNode::Kind::Gate;
  return k;
}

int CircuitBuilder::intern(CircuitNode n) {
  std::vector<int> key;
  key.reserve(n.children.size() + 2);
  key.push_back(static_cast<int>(n.kind));
  key.push_back(n.value);
  key.insert(key.end(), n.children.begin(), n.children.end());
  auto it = index_.find(key);
  if (it != index_.end()) return it->second;
  int id = static_cast<int>(nodes_.size());
  nodes_.push_back(std::move(n));
  index_.emplace(std::move(key), id);
  return id;
}

int CircuitBuilder::var(int i) {
  if (i < 0 || i >= num_vars_) throw std::invalid_argument("CircuitBuilder: variable index out of range");
  return intern({CircuitNode::Kind::Var, i, {}});
}

int CircuitBuilder::constant(Element e) { return intern({CircuitNode::Kind::Const, e, {}}); }

int CircuitBuilder::gate(int op, std::vector<int> children) {
  for (int c : children)
    if (c < 0 || c >= static_cast<int>(nodes_.size())) throw std::invalid_argument("CircuitBuilder: bad child id");
  return intern({CircuitNode::Kind::Gate, op, std::move(children)});
}

int CircuitBuilder::inline_circuit(const AlgCircuit& c, const std::vector<int>& args) {
  if (static_cast<int>(args.size()) != c.num_vars) throw std::invalid_argument("inline_circuit: argument count mismatch");
  std::vector<int> id(c.nodes.size());
  for (std::size_t i = 0; i < c.nodes.size(); ++i) {
    const CircuitNode& n = c.nodes[i];
    switch (n.kind) {
      case CircuitNode::Kind::Var: id[i] = args[n.value]; break;
      case CircuitNode::Kind::Const: id[i] = constant(n.value); break;
      case CircuitNode::Kind::Gate: {
        std::vector<int> ch;
        ch.reserve(n.children.size());
        for (int x : n.children) ch.push_back(id[x]);
        id[i] = gate(n.value, std::move(ch));
        break;
      }
    }
  }
  return id[c.output];
}

AlgCircuit CircuitBuilder::build(int output) const {
  std::vector<char> live(nodes_.size(), 0);
  live[output] = 1;
  for (int i = output; i >= 0; --i)
    if (live[i])
      for (int c : nodes_[i].children) live[c] = 1;
  AlgCircuit out;
  out.num_vars = num_vars_;
  std::vector<int> remap(nodes_.size(), -1);
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    if (!live[i]) continue;
    CircuitNode n = nodes_[i];
    for (int& c : n.children) c = remap[c];
    remap[i] = static_cast<int>(out.nodes.size());
    out.nodes.push_back(std::move(n));
  }
  out.output = remap[output];
  return out;
}

void validate_circuit(const AlgCircuit& c, const FiniteAlgebra& a) {
  if (c.output < 0 || c.output >= static_cast<int>(c.nodes.size()))
    throw std::invalid_argument("circuit: output index out of range");
  for (std::size_t i = 0; i < c.nodes.size(); ++i) {
    const CircuitNode& n = c.nodes[i];
    switch (n.kind) {
      case CircuitNode::Kind::Var:
        if (n.value < 0 || n.value >= c.num_vars) throw std::invalid_argument("circuit: variable index out of range");
        break;
      case CircuitNode::Kind::Const:
        if (n.value < 0 || n.value >= a.size()) throw std::invalid_argument("circuit: constant out of range");
        break;
      case CircuitNode::Kind::Gate:
        if (n.value < 0 || n.value >= a.num_ops()) throw std::invalid_argument("circuit: unknown operation");
        if (static_cast<int>(n.children.size()) != a.op(n.value).arity)
          throw std::invalid_argument("circuit: arity mismatch at node " + std::to_string(i));
        for (int ch : n.children)
          if (ch < 0 || ch >= static_cast<int>(i)) throw std::invalid_argument("circuit: child does not precede parent");
        break;
    }
  }
}

std::vector<Element> eval_nodes(const AlgCircuit& c, const FiniteAlgebra& a, std::span<const Element> args) {
  if (static_cast<int>(args.size()) != c.num_vars) throw std::invalid_argument("eval_circuit: arity mismatch");
  std::vector<Element> val(c.nodes.size());
  std::vector<Element> buf;
  for (std::size_t i = 0; i < c.nodes.size(); ++i) {
    const CircuitNode& n = c.nodes[i];
    switch (n.kind) {
      case CircuitNode::Kind::Var: val[i] = args[n.value]; break;
      case CircuitNode::Kind::Const: val[i] = n.value; break;
      case CircuitNode::Kind::Gate:
        buf.clear();
        for (int ch : n.children) buf.push_back(val[ch]);
        val[i] = a.apply(n.value, buf);
        break;
    }
  }
  return val;
}

Element eval_circuit(const AlgCircuit& c, const FiniteAlgebra& a, std::span<const Element> args) {
  return eval_nodes(c, a, args)[c.output];
}

AlgCircuit subcircuit(const AlgCircuit& c, int node) {
  CircuitBuilder b(c.num_vars);
  std::vector<int> args;
  for (int i = 0; i < c.num_vars; ++i) args.push_back(b.var(i));
  AlgCircuit copy = c;
  copy.output = node;
  return b.build(b.inline_circuit(copy, args));
}

AlgCircuit map_constants(const AlgCircuit& c, const std::vector<Element>& map) {
  AlgCircuit out = c;
  for (auto& n : out.nodes)
    if (n.kind == CircuitNode::Kind::Const) n.value = map.at(n.value);
  return out;
}

AlgCircuit compose(const AlgCircuit& c, const std::vector<AlgCircuit>& args, int num_vars) {
  CircuitBuilder b(num_vars);
  std::vector<int> vars;
  for (int i = 0; i < num_vars; ++i) vars.push_back(b.var(i));
  std::vector<int> ids;
  for (const auto& a : args) ids.push_back(b.inline_circuit(a, vars));
  return b.build(b.inline_circuit(c, ids));
}

}  // namespace nudfa
