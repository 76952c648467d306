#pragma once

#include <optional>
#include <vector>

#include "nudfa/algebra.hpp"

namespace nudfa {

struct MinimalSet {
  std::vector<Element> elements;  // ascending
  std::vector<Element> witness;   // unary polynomial with range `elements`
  AlgCircuit witness_circuit;
  std::optional<std::vector<Element>> idempotent;
  std::optional<AlgCircuit> idempotent_circuit;
};

// True when f maps some beta-pair outside alpha.
bool separates(const std::vector<Element>& f, const Congruence& alpha, const Congruence& beta);

// Inclusion-minimal ranges f(A) over unary polynomials with f(beta) not inside
// alpha, ordered by size then lexicographically.
std::vector<MinimalSet> minimal_sets(const FiniteAlgebra& a, const UnaryClone& clone, const Congruence& alpha,
                                     const Congruence& beta);

// beta|U classes that are not alpha|U classes.
std::vector<std::vector<Element>> traces(const MinimalSet& u, const Congruence& alpha, const Congruence& beta);

// Minimal set containing e, built by moving a fixed minimal set with a unary
// polynomial. Throws HypothesisError naming the failed step.
MinimalSet minimal_set_through(const FiniteAlgebra& a, const UnaryClone& clone, const Congruence& delta,
                               const Congruence& theta, Element e);

}  // namespace nudfa
