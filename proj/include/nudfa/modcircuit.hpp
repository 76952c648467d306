#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "nudfa/common.hpp"
#include "nudfa/program.hpp"

namespace nudfa {

enum class GateKind { And, Or, Mod, Sump, Sumpc };

struct Wire {
  int source = 0;  // input bit (< n) or n + gate index
  long long mult = 1;
  bool operator==(const Wire&) const = default;
};

struct CGate {
  GateKind kind = GateKind::And;
  long long modulus = 0;             // MOD: m, SUMP/SUMPC: p
  int nu = 1;                        // SUMP/SUMPC dimension
  std::vector<long long> accepting;  // MOD, ascending
  std::vector<Wire> inputs;
  std::vector<ZpMatrix> coeffs;  // SUMP/SUMPC, one per input wire
  ZpVector offset, target;       // target only for SUMPC
};

struct CCircuit {
  int n = 0;
  std::vector<CGate> gates;  // topological: inputs of gate i are < n + i
  int output = -1;           // id (>= n)
  std::string declared_shape;

  const CGate& gate(int id) const { return gates[id - n]; }
  int num_gates() const { return static_cast<int>(gates.size()); }
};

// Layer descriptor such as "AND(*)∘MOD(2)∘MOD(3)"; first layer is nearest the inputs.
struct LayerSpec {
  GateKind kind = GateKind::And;
  std::vector<std::optional<long long>> params;  // nullopt = wildcard
  bool operator==(const LayerSpec&) const = default;
};
using LayerShape = std::vector<LayerSpec>;

LayerShape parse_shape(const std::string& s);
std::string shape_to_string(const LayerShape& s);
std::string gate_kind_name(GateKind k);

struct ShapeCheck {
  bool ok = true;
  std::string message;  // first violation
};
ShapeCheck validate_shape(const CCircuit& c, const LayerShape& shape);
inline ShapeCheck validate_shape(const CCircuit& c, const std::string& shape) {
  return validate_shape(c, parse_shape(shape));
}

// Structural checks (ids, parameters, matrix sizes). Throws std::invalid_argument.
void validate_ccircuit(const CCircuit& c);

long long cc_size(const CCircuit& c);

// Output value: one 0/1 entry for boolean gates, nu entries for SUMP.
std::vector<long long> eval_cc(const CCircuit& c, const std::vector<int>& bits);
bool eval_cc_bool(const CCircuit& c, std::uint64_t index);
TruthTable cc_truth_table(const CCircuit& c);
// Per-input values of an open SUMP output.
std::vector<ZpVector> cc_vector_table(const CCircuit& c);

// Replace every wire of multiplicity w by w unit wires (for property tests).
CCircuit expand_multiplicities(const CCircuit& c);

// Builder with wire normalisation and structural sharing of AND/OR/MOD gates.
class CCBuilder {
 public:
  explicit CCBuilder(int n) : n_(n) {}
  int n() const { return n_; }
  int input(int i) const { return i; }
  int add_and(std::vector<int> sources);
  int add_or(std::vector<int> sources);
  int add_mod(long long m, std::vector<long long> accepting, std::vector<Wire> inputs);
  int add_sump(long long p, int nu, std::vector<Wire> inputs, std::vector<ZpMatrix> coeffs, ZpVector offset);
  int add_sumpc(long long p, int nu, std::vector<Wire> inputs, std::vector<ZpMatrix> coeffs, ZpVector offset,
                ZpVector target);
  // Copy gates of `c` (same n); returns the id of its output inside this builder.
  int inline_circuit(const CCircuit& c);
  // Keeps only gates reachable from `output`.
  CCircuit build(int output, std::string shape) const;
  const CGate& gate(int id) const { return gates_[id - n_]; }

 private:
  int push(CGate g);
  int n_;
  std::vector<CGate> gates_;
  std::map<std::string, int> index_;
};

// Constant gates in a chosen layer kind.
int constant_gate(CCBuilder& b, const LayerSpec& layer, bool value);

}  // namespace nudfa
