#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "nudfa/circuit.hpp"
#include "nudfa/partition.hpp"

namespace nudfa {

struct Operation {
  std::string name;
  int arity = 0;
  std::vector<Element> table;  // row-major, index = sum args[i] * n^(arity-1-i)
};

class FiniteAlgebra {
 public:
  FiniteAlgebra() = default;
  FiniteAlgebra(std::string name, int size, std::vector<Operation> ops);

  const std::string& name() const { return name_; }
  int size() const { return size_; }
  const std::vector<Operation>& ops() const { return ops_; }
  const Operation& op(int i) const { return ops_[i]; }
  int num_ops() const { return static_cast<int>(ops_.size()); }
  int op_index(std::string_view name) const;  // throws on unknown name
  int max_arity() const;

  // Unchecked table lookup.
  Element apply(int op, std::span<const Element> args) const {
    const Operation& o = ops_[op];
    std::size_t idx = 0;
    for (Element a : args) idx = idx * size_ + a;
    return o.table[idx];
  }

 private:
  std::string name_;
  int size_ = 0;
  std::vector<Operation> ops_;
};

// Checked evaluation by operation name.
Element eval_op(const FiniteAlgebra& a, std::string_view op_name, std::span<const Element> args);

// Unary polynomial clone with a derivation per function.
class UnaryClone {
 public:
  int size() const { return static_cast<int>(tables_.size()); }
  int universe() const { return n_; }
  const std::vector<Element>& table(int i) const { return tables_[i]; }
  std::optional<int> find(const std::vector<Element>& table) const;
  AlgCircuit witness(int i) const;
  int identity() const { return 0; }

 private:
  friend UnaryClone unary_polynomial_clone(const FiniteAlgebra& a);
  struct Derivation {
    int op = -1;  // -1: identity, -2: constant (value in args[0])
    std::vector<int> args;
  };
  void build(int i, CircuitBuilder& b, std::vector<int>& memo) const;

  int n_ = 0;
  std::vector<std::vector<Element>> tables_;
  std::vector<Derivation> derivations_;
  std::unordered_map<std::string, int> index_;
};

// Throws BudgetError when the closure exceeds budget().clone_functions.
UnaryClone unary_polynomial_clone(const FiniteAlgebra& a);

std::optional<AlgCircuit> find_malcev_polynomial(const FiniteAlgebra& a, int depth_bound = 4);
bool is_malcev(const AlgCircuit& d, const FiniteAlgebra& a);

struct Quotient {
  FiniteAlgebra algebra;
  std::vector<int> projection;           // element -> class index
  std::vector<Element> representatives;  // class index -> least member
};

Quotient quotient_algebra(const FiniteAlgebra& a, const Congruence& theta);
bool is_compatible(const FiniteAlgebra& a, const Congruence& theta);

class CongruenceLattice;

struct Decomposition {
  std::vector<Congruence> factors;
  std::vector<int> factor_sizes;
};

std::optional<Decomposition> prime_power_decomposition(const FiniteAlgebra& a, const CongruenceLattice& lat);
bool is_valid_decomposition(const FiniteAlgebra& a, const Decomposition& d);

}  // namespace nudfa
