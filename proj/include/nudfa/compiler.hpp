#pragma once

#include <functional>
#include <map>
#include <optional>
#include <tuple>
#include <vector>

#include "nudfa/algebra.hpp"
#include "nudfa/lowering.hpp"
#include "nudfa/modcircuit.hpp"
#include "nudfa/program.hpp"

namespace nudfa {

// D = M x D/beta for an abelian atom beta, with M the beta-class of the anchor
// as a Z_p-module under x + y = d(x, e, y).
struct CentralRep {
  FiniteAlgebra base;
  Congruence beta;
  Element anchor = 0;
  AlgCircuit malcev;
  long long p = 0;
  int nu = 0;
  std::vector<Element> basis;
  Quotient quotient;                 // D' = D/beta
  std::vector<Element> transversal;  // class -> representative; the anchor represents its own class
  // alpha[f][i]: nu x nu matrix; hat[f][tuple of classes, row-major]: M-part
  std::vector<std::vector<ZpMatrix>> alpha;
  std::vector<std::vector<ZpVector>> hat;

  int num_classes() const { return static_cast<int>(transversal.size()); }
  int class_of(Element x) const { return quotient.projection[x]; }
  ZpVector m_part(Element x) const;                  // coordinates of d(x, r([x]), e)
  Element decode(const ZpVector& m, int cls) const;  // d(m, e, r(cls))
  Element module_element(const ZpVector& m) const;
  Element add(Element x, Element y) const;  // module addition on e/beta

  std::vector<ZpVector> coords;   // element of e/beta -> coordinates; empty for other elements
  std::vector<Element> by_coord;  // sum v_i p^i -> element
};

// Builds and verifies the representation on every tuple of every operation.
// Throws HypothesisError naming the failing check.
CentralRep central_representation(const FiniteAlgebra& d, const Congruence& beta, Element e,
                                  const AlgCircuit& malcev);

struct PathCoefficients {
  std::vector<ZpMatrix> node;      // indexed by circuit node; zero for nodes off every path
  std::vector<ZpMatrix> variable;  // indexed by variable
};
// Sum over paths from `root` of the products of alpha matrices.
PathCoefficients path_coefficients(const AlgCircuit& c, const CentralRep& rep, int root = -1);

// AND(*)∘MOD(pdiv A)∘OR(|S|). Throws HypothesisError unless A decomposes into
// prime-power factors.
CCircuit compile_supernilpotent(const AlgProgram& prog, const FiniteAlgebra& a);

// Indicator of one circuit node hitting one class of D/beta, shape AND∘MOD(m)∘MOD(p).
using QuotientIndicator = std::function<CCircuit(int node, int cls)>;

struct Descent {
  CCircuit five_layer;  // AND∘MOD(m)∘MOD(p)∘AND∘SUMPC(p,nu): M-part equals the target's
  CCircuit m_part;      // after collapse_5to3
  CCircuit result;      // m_part AND quotient indicator
};
// Indicator of `node` of `prog` (a program over rep.base) hitting `target`.
Descent descend_mod_beta(const AlgProgram& prog, int node, Element target, const CentralRep& rep,
                         const QuotientIndicator& quotient, long long m, LoweringContext& ctx);

struct CompileOptions {
  std::optional<long long> p;  // required only to override the automatic choice when kappa = 0
  int verify_n = 0;            // check every intermediate circuit exhaustively when n <= verify_n
  bool trace = false;          // collect per-step reports
};

struct CompileResult {
  CCircuit circuit;
  long long m = 0, p = 0;
  std::vector<Congruence> chain;  // gamma_0 = 0 up to gamma_h = sigma_p
  std::vector<PassReport> reports;
  std::size_t cache_entries = 0;
};

// AND(*)∘MOD(m)∘MOD(p) circuit for a program over a nilpotent Malcev algebra
// whose interval [0, kappa] has a single characteristic p.
CompileResult compile_nilpotent(const AlgProgram& prog, const FiniteAlgebra& a, const AlgCircuit& malcev,
                                const CompileOptions& opts = {});

// Leaf circuits in shape AND∘MOD(m)∘MOD(p).
CCircuit literal_circuit(int n, int bit, bool positive, long long m, long long p);
CCircuit constant_circuit(int n, bool value, long long m, long long p);

}  // namespace nudfa
