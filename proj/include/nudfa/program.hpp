#pragma once

#include <cstdint>
#include <vector>

#include "nudfa/algebra.hpp"

namespace nudfa {

// Variable `var` reads input bit `bit` and becomes a0 (bit 0) or a1 (bit 1).
struct Instruction {
  int var = 0;
  int bit = 0;
  Element a0 = 0, a1 = 0;
  bool operator==(const Instruction&) const = default;
};

struct AlgProgram {
  AlgCircuit circuit;
  int n = 0;
  std::vector<Instruction> instructions;  // one per circuit variable
  std::vector<Element> accepting;         // ascending

  int size() const { return circuit.size() + static_cast<int>(instructions.size()); }
};

using TruthTable = std::vector<bool>;  // index: b[0] is the least significant bit

void validate_program(const AlgProgram& p, const FiniteAlgebra& a);

struct ProgramValue {
  Element inner = 0;
  bool accepted = false;
};
ProgramValue eval_program(const AlgProgram& p, const FiniteAlgebra& a, const std::vector<int>& bits);
// Inner value on the input word encoded by `index`.
Element program_inner(const AlgProgram& p, const FiniteAlgebra& a, std::uint64_t index);
TruthTable truth_table(const AlgProgram& p, const FiniteAlgebra& a);
// Inner value for every input word.
std::vector<Element> inner_table(const AlgProgram& p, const FiniteAlgebra& a);

struct ProgramOver {
  Quotient quotient;  // algebra the program runs over, plus the projection from the original
  AlgProgram program;
};

ProgramOver quotient_program(const AlgProgram& p, const FiniteAlgebra& a, const Congruence& theta);
std::vector<ProgramOver> decompose_program(const AlgProgram& p, const FiniteAlgebra& a, const Decomposition& d);

// Word of length n for a truth-table index.
std::vector<int> bits_of(std::uint64_t index, int n);
void check_truth_table_bound(int n);

}  // namespace nudfa
