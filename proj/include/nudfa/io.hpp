#pragma once

#include <filesystem>
#include <optional>
#include <string>

#include "json.hpp"
#include "nudfa/algebra.hpp"
#include "nudfa/congruence.hpp"
#include "nudfa/fieldpoly.hpp"
#include "nudfa/hardness.hpp"
#include "nudfa/lowering.hpp"
#include "nudfa/modcircuit.hpp"
#include "nudfa/program.hpp"
#include "nudfa/solvers.hpp"

namespace nudfa {

using Json = nlohmann::ordered_json;

struct LoadedAlgebra {
  FiniteAlgebra algebra;
  std::optional<AlgCircuit> malcev;
  std::string ref;  // "fixtures:NAME" or the file path it came from
};

// {"name", "size", "ops": [{"name", "arity", "table"}], "malcev"?: circuit}
Json algebra_to_json(const FiniteAlgebra& a, const std::optional<AlgCircuit>& malcev = std::nullopt);
LoadedAlgebra algebra_from_json(const Json& j);
// "fixtures:NAME" or a path to an algebra file.
LoadedAlgebra load_algebra(const std::string& ref);

// {"k", "nodes": [{"var": i} | {"const": e} | {"op": name, "args": [...]}], "output"}
Json circuit_to_json(const AlgCircuit& c, const FiniteAlgebra& a);
AlgCircuit circuit_from_json(const Json& j, const FiniteAlgebra& a);

// {"algebra": ref or inline algebra, "circuit", "n", "instructions", "accepting"}.
// A relative algebra path is resolved against `base_dir`.
Json program_to_json(const AlgProgram& p, const LoadedAlgebra& a);
struct LoadedProgram {
  LoadedAlgebra algebra;
  AlgProgram program;
};
LoadedProgram program_from_json(const Json& j, const std::filesystem::path& base_dir = {});
LoadedProgram load_program(const std::string& path);

// {"n", "output", "shape", "gates": [{"id", "layer", "kind", ...}]}; the layer is
// the longest path from the inputs and is recomputed (and checked) on reading.
Json ccircuit_to_json(const CCircuit& c);
CCircuit ccircuit_from_json(const Json& j);

// {"lhs": circuit, "rhs": circuit}, or {"lhs": circuit, "constant": e}.
Json equation_to_json(const Equation& eq, const FiniteAlgebra& a);
Equation equation_from_json(const Json& j, const FiniteAlgebra& a);

Json congruence_to_json(const Congruence& c);
Congruence congruence_from_json(const Json& j);
Json lattice_to_json(const CongruenceLattice& lat, CongruenceAnalysis* an = nullptr);
std::string lattice_to_dot(const CongruenceLattice& lat, CongruenceAnalysis* an = nullptr);
std::string ccircuit_to_dot(const CCircuit& c);

Json minimal_set_to_json(const MinimalSet& m, const FiniteAlgebra& a);
Json pass_report_to_json(const PassReport& r);
// Wall-clock time only with `timing`, so identical runs print identical JSON.
Json solve_result_to_json(const SolveResult& r, bool timing = false);
Json poly_to_json(const MultilinearPoly& f);

// Exhaustive comparison of a program with a circuit claimed to compute it.
struct VerifyReport {
  bool match = true;
  std::uint64_t rows = 0;
  std::vector<int> mismatch;  // first differing word, b[0] first
  bool expected = false, got = false;
};
VerifyReport verify_program_circuit(const AlgProgram& p, const FiniteAlgebra& a, const CCircuit& c, int n_bound = 20);
Json verify_report_to_json(const VerifyReport& r);

Json read_json_file(const std::string& path);
Cnf load_dimacs(const std::string& path);

}  // namespace nudfa
