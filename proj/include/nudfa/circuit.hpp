#pragma once

#include <map>
#include <span>
#include <vector>

#include "nudfa/partition.hpp"

namespace nudfa {

class FiniteAlgebra;

struct CircuitNode {
  enum class Kind { Var, Const, Gate };
  Kind kind = Kind::Var;
  int value = 0;  // variable index, constant element, or operation index
  std::vector<int> children;

  bool operator==(const CircuitNode& o) const {
    return kind == o.kind && value == o.value && children == o.children;
  }
};

// DAG over an algebra's signature. Operations are referenced by index, so a
// circuit stays valid for every quotient of its algebra (same operation order).
struct AlgCircuit {
  int num_vars = 0;
  std::vector<CircuitNode> nodes;  // children precede parents
  int output = -1;

  int size() const;  // number of gate nodes
  bool operator==(const AlgCircuit& o) const {
    return num_vars == o.num_vars && nodes == o.nodes && output == o.output;
  }
};

// Hash-consing builder: structurally equal nodes are created once.
class CircuitBuilder {
 public:
  explicit CircuitBuilder(int num_vars) : num_vars_(num_vars) {}

  int var(int i);
  int constant(Element e);
  int gate(int op, std::vector<int> children);
  // Copies `c` with its variables replaced by the given node ids; returns the
  // id of the copied output.
  int inline_circuit(const AlgCircuit& c, const std::vector<int>& args);
  // Circuit restricted to the nodes reachable from `output`.
  AlgCircuit build(int output) const;
  int num_vars() const { return num_vars_; }

 private:
  int intern(CircuitNode n);
  int num_vars_;
  std::vector<CircuitNode> nodes_;
  std::map<std::vector<int>, int> index_;
};

void validate_circuit(const AlgCircuit& c, const FiniteAlgebra& a);
Element eval_circuit(const AlgCircuit& c, const FiniteAlgebra& a, std::span<const Element> args);
// Values of every node (same indexing as c.nodes).
std::vector<Element> eval_nodes(const AlgCircuit& c, const FiniteAlgebra& a, std::span<const Element> args);

// Subcircuit rooted at `node` (same variables).
AlgCircuit subcircuit(const AlgCircuit& c, int node);
// Constants replaced through `map` (used for quotients and lifts).
AlgCircuit map_constants(const AlgCircuit& c, const std::vector<Element>& map);
// Composition c(args[0], ..., args[k-1]) where every arg shares `num_vars` variables.
AlgCircuit compose(const AlgCircuit& c, const std::vector<AlgCircuit>& args, int num_vars);

}  // namespace nudfa
