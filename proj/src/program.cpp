#include "nudfa/program.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

#include "nudfa/common.hpp"

namespace nudfa {

void validate_program(const AlgProgram& p, const FiniteAlgebra& a) {
  validate_circuit(p.circuit, a);
  if (p.n < 0) throw std::invalid_argument("program: negative input length");
  if (static_cast<int>(p.instructions.size()) != p.circuit.num_vars)
    throw std::invalid_argument("program: need exactly one instruction per variable");
  std::vector<char> seen(p.circuit.num_vars, 0);
  for (const auto& ins : p.instructions) {
    if (ins.var < 0 || ins.var >= p.circuit.num_vars || seen[ins.var])
      throw std::invalid_argument("program: bad or repeated instruction variable");
    seen[ins.var] = 1;
    if (ins.bit < 0 || ins.bit >= p.n) throw std::invalid_argument("program: instruction bit out of range");
    if (ins.a0 < 0 || ins.a0 >= a.size() || ins.a1 < 0 || ins.a1 >= a.size())
      throw std::invalid_argument("program: instruction element out of range");
  }
  for (Element s : p.accepting)
    if (s < 0 || s >= a.size()) throw std::invalid_argument("program: accepting element out of range");
  if (!std::is_sorted(p.accepting.begin(), p.accepting.end()) ||
      std::adjacent_find(p.accepting.begin(), p.accepting.end()) != p.accepting.end())
    throw std::invalid_argument("program: accepting set must be ascending without repeats");
}

std::vector<int> bits_of(std::uint64_t index, int n) {
  std::vector<int> b(n);
  for (int i = 0; i < n; ++i) b[i] = static_cast<int>((index >> i) & 1U);
  return b;
}

void check_truth_table_bound(int n) {
  if (n > budget().max_truth_table_inputs || n > 62)
    throw BudgetError("truth table: n = " + std::to_string(n) + " exceeds the bound " +
                      std::to_string(budget().max_truth_table_inputs));
}

ProgramValue eval_program(const AlgProgram& p, const FiniteAlgebra& a, const std::vector<int>& bits) {
  if (static_cast<int>(bits.size()) != p.n) throw std::invalid_argument("eval_program: wrong input length");
  std::vector<Element> args(p.circuit.num_vars);
  for (const auto& ins : p.instructions) args[ins.var] = bits[ins.bit] ? ins.a1 : ins.a0;
  ProgramValue v;
  v.inner = eval_circuit(p.circuit, a, args);
  v.accepted = std::binary_search(p.accepting.begin(), p.accepting.end(), v.inner);
  return v;
}

Element program_inner(const AlgProgram& p, const FiniteAlgebra& a, std::uint64_t index) {
  std::vector<Element> args(p.circuit.num_vars);
  for (const auto& ins : p.instructions) args[ins.var] = ((index >> ins.bit) & 1U) ? ins.a1 : ins.a0;
  return eval_circuit(p.circuit, a, args);
}

std::vector<Element> inner_table(const AlgProgram& p, const FiniteAlgebra& a) {
  check_truth_table_bound(p.n);
  std::uint64_t total = std::uint64_t{1} << p.n;
  std::vector<Element> out(total);
  for (std::uint64_t i = 0; i < total; ++i) out[i] = program_inner(p, a, i);
  return out;
}

TruthTable truth_table(const AlgProgram& p, const FiniteAlgebra& a) {
  std::vector<Element> inner = inner_table(p, a);
  std::vector<char> acc(a.size(), 0);
  for (Element s : p.accepting) acc[s] = 1;
  TruthTable t(inner.size());
  for (std::size_t i = 0; i < inner.size(); ++i) t[i] = acc[inner[i]];
  return t;
}

ProgramOver quotient_program(const AlgProgram& p, const FiniteAlgebra& a, const Congruence& theta) {
  ProgramOver out{quotient_algebra(a, theta), p};
  const auto& proj = out.quotient.projection;
  out.program.circuit = map_constants(p.circuit, proj);
  for (auto& ins : out.program.instructions) {
    ins.a0 = proj[ins.a0];
    ins.a1 = proj[ins.a1];
  }
  std::vector<Element> acc;
  for (Element s : p.accepting) acc.push_back(proj[s]);
  std::sort(acc.begin(), acc.end());
  acc.erase(std::unique(acc.begin(), acc.end()), acc.end());
  out.program.accepting = acc;
  return out;
}

std::vector<ProgramOver> decompose_program(const AlgProgram& p, const FiniteAlgebra& a, const Decomposition& d) {
  if (p.accepting.size() != 1) throw std::invalid_argument("decompose_program: accepting set must be a singleton");
  if (!is_valid_decomposition(a, d)) throw std::invalid_argument("decompose_program: invalid decomposition");
  std::vector<ProgramOver> out;
  for (const auto& eta : d.factors) out.push_back(quotient_program(p, a, eta));
  return out;
}

}  // namespace nudfa
