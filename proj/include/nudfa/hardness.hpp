#pragma once

#include <optional>
#include <string>
#include <vector>

#include "nudfa/algebra.hpp"
#include "nudfa/congruence.hpp"
#include "nudfa/fieldpoly.hpp"
#include "nudfa/localizer.hpp"
#include "nudfa/program.hpp"

namespace nudfa {

// Monotone program over ({0,1}; and, or) with 2n variables: x_i reads (b_i, 0, 1),
// x'_i = x_{n+i} reads (b_i, 1, 0). Accepts exactly the satisfying assignments.
AlgProgram cnf_to_lattice_program(const Cnf& phi, const FiniteAlgebra& lattice);

// A discovered unary polynomial: table plus a circuit that computes it.
struct UnaryPoly {
  std::vector<Element> table;
  AlgCircuit circuit;
};

// Data for interpolating {c,d}^s -> {e,a} functions modulo beta, where
// beta < alpha_minus < alpha, alpha join-irreducible with unique subcover
// alpha_minus, p = char(beta, alpha_minus) != q = char(alpha_minus, alpha).
struct BetaIntConfig {
  FiniteAlgebra algebra;
  AlgCircuit malcev;
  Congruence alpha, alpha_minus, beta;
  Element c = 0, d = 0, e = 0, a = 0;
  long long p = 0, q = 0;

  UnaryPoly g;                // moves (c,d) into U, pair stays in alpha - alpha_minus
  MinimalSet u;               // (alpha_minus, alpha)-minimal
  UnaryPoly e_u;              // idempotent onto U
  std::vector<Element> cyc;   // c_0 = g(c), c_1 = g(d), c_j = j * c_1 under x (+) y = e_U(d(x, c_0, y))
  MinimalSet v;               // (beta, alpha_minus)-minimal, contains e
  UnaryPoly e_v;              // idempotent onto V
  UnaryPoly h;
  bool h_adjusted = false;    // replaced by h(x (+) c_1) - h(c_1)
  Element a_prime = 0;        // sum of h(c_j) under x + y = e_V(d(x, e, y))
  UnaryPoly b;                // b(x) = a' - sum_j h(j * x)
  UnaryPoly g_prime;          // g'(a') beta a, g'(e) beta e
};

// Checks every hypothesis and runs the searches. Throws HypothesisError naming
// the first condition or search that fails. `h_table` replaces the search for h
// by the given unary polynomial (it must still meet every condition).
BetaIntConfig make_beta_int_config(const FiniteAlgebra& a, const AlgCircuit& malcev, const Congruence& alpha,
                                   const Congruence& alpha_minus, const Congruence& beta, Element c, Element d,
                                   Element e, Element target,
                                   const std::optional<std::vector<Element>>& h_table = std::nullopt);

// First valid configuration in canonical lattice order (alpha, beta, then the
// element pairs ascending), or nullopt.
std::optional<BetaIntConfig> find_beta_int_config(const FiniteAlgebra& a, const AlgCircuit& malcev);

// f has 2^s entries; bit i of the index set means x_i = d, true means a.
// Returns an s-ary circuit p with p(x) beta f(x) on {c,d}^s, checked exhaustively.
AlgCircuit beta_interpolate(const BetaIntConfig& cfg, const std::vector<bool>& f);

// n-ary circuit whose value on {c,d}^n is beta-equivalent to w(x) * a' summed in
// the p-group generated by a' (w over GF(cfg.p)), composed with g' so that the
// value 1 lands on a. Every monomial is interpolated separately, wrapped by e_V
// and summed with x + y = d(x, e, y).
AlgCircuit field_poly_circuit(const BetaIntConfig& cfg, const MultilinearPoly& w);

struct TwoPrimeWitness {
  int kappa = 0;
  int gamma[2]{}, phi[2]{}, phi_plus[2]{}, psi[2]{}, alpha[2]{}, alpha_minus[2]{};  // lattice indices
  long long q[2]{}, p[2]{};  // q_i = char(gamma_i, kappa), p_i = char(phi_i^+, psi_i)
  Element e = 0;
  Element c[2]{}, d[2]{}, a[2]{};
  MinimalSet v[2];
  std::vector<BetaIntConfig> configs;  // one per prime, beta_i = phi_i meet alpha_i^-
  std::vector<std::string> checked;    // facts verified, in order
};

struct TwoPrimeSearch {
  std::optional<TwoPrimeWitness> witness;
  std::string failure;               // first fact that could not be matched
  std::vector<std::string> checked;  // facts verified before the failure
};

TwoPrimeSearch find_two_prime_witness(const FiniteAlgebra& a, const CongruenceLattice& lat, const AlgCircuit& malcev);

// Program over A: p(x^0, x^1) = d(p_0(x^0), p_1(x^1), e) with p_i interpolating
// the pseudo-AND polynomial of phi over GF(q_i); x^i_j reads (b_j, c_i, d_i);
// accepting {e}.
AlgProgram build_two_prime_program(const FiniteAlgebra& a, const TwoPrimeWitness& w, const Cnf& phi);

}  // namespace nudfa
