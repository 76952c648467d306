#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "nudfa/algebra.hpp"
#include "nudfa/congruence.hpp"
#include "nudfa/program.hpp"

namespace nudfa {

// lhs(x) = rhs(x); both circuits have the same variables.
struct Equation {
  AlgCircuit lhs, rhs;
  int num_vars() const { return lhs.num_vars; }
};
Equation equation_to_constant(const AlgCircuit& t, Element e);

struct SolveResult {
  enum class Status { Sat, Unsat, Holds, Fails };
  Status status = Status::Unsat;
  bool probabilistic = false;      // negative answer from sampling
  std::vector<int> word;           // ProgCSat witness
  std::vector<Element> assignment;  // CSat witness or CEqv counterexample
  std::uint64_t tried = 0;
  double seconds = 0;
  std::optional<std::uint64_t> seed;
  std::string note;
};
std::string status_name(SolveResult::Status s);

SolveResult progcsat_exhaustive(const AlgProgram& p, const FiniteAlgebra& a);
// Uniform random words; trials = 0 selects 4 * size(P)^2.
SolveResult progcsat_sample(const AlgProgram& p, const FiniteAlgebra& a, std::uint64_t trials, std::uint64_t seed);
std::uint64_t default_trials(const AlgProgram& p);

SolveResult csat_exhaustive(const FiniteAlgebra& a, const Equation& eq);
SolveResult ceqv_exhaustive(const FiniteAlgebra& a, const Equation& eq);

// d(lhs, rhs, e) = e, equivalent to lhs = rhs over a nilpotent Malcev algebra.
Equation normalize_equation(const FiniteAlgebra& a, const AlgCircuit& malcev, const Equation& eq, Element e = 0);

// f(x_1..x_k) = d(..d(d(x_1, a0, x_2), a0, x_3).., a0, x_k) with a0 = 0, k = |A| - 1.
AlgCircuit covering_chain(const FiniteAlgebra& a, const AlgCircuit& malcev);
// Program over k bits per equation variable. CSat: accepting {e}; CEqv: accepting A - {e}.
AlgProgram csat_to_progcsat(const FiniteAlgebra& a, const AlgCircuit& malcev, const Equation& eq);
AlgProgram ceqv_to_progcsat(const FiniteAlgebra& a, const AlgCircuit& malcev, const Equation& eq);
// Equation variable values for a word of the reduced program.
std::vector<Element> decode_reduction_word(const FiniteAlgebra& a, const AlgCircuit& malcev, int num_vars,
                                           const std::vector<int>& word);

SolveResult ceqv_via_meet_irreducibles(const FiniteAlgebra& a, const CongruenceLattice& lat, const Equation& eq);

// Program over A computing the same function as a program over A/theta.
AlgProgram quotient_reduce_progcsat(const AlgProgram& p, const Quotient& q);

}  // namespace nudfa
