#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "nudfa/algebra.hpp"
#include "nudfa/partition.hpp"

namespace nudfa {

Congruence principal_congruence(const FiniteAlgebra& a, Element x, Element y);
// Least congruence containing all given pairs (and the relation `base`, if any).
Congruence generate_congruence(const FiniteAlgebra& a, const std::vector<std::pair<Element, Element>>& pairs,
                               const Congruence* base = nullptr);

class CongruenceLattice {
 public:
  CongruenceLattice() = default;
  explicit CongruenceLattice(std::vector<Congruence> elements);  // sorts canonically

  int size() const { return static_cast<int>(elements_.size()); }
  const Congruence& element(int i) const { return elements_[i]; }
  const std::vector<Congruence>& elements() const { return elements_; }
  int index_of(const Congruence& c) const;  // throws if absent
  std::optional<int> find(const Congruence& c) const;
  int bottom() const { return 0; }
  int top() const { return size() - 1; }

  bool leq(int a, int b) const { return leq_[a][b]; }
  bool covers(int lower, int upper) const;
  int meet(int a, int b) const { return meet_[a][b]; }
  int join(int a, int b) const { return join_[a][b]; }

  const std::vector<std::pair<int, int>>& cover_pairs() const { return covers_; }
  const std::vector<int>& atoms() const { return atoms_; }
  const std::vector<int>& meet_irreducibles() const { return meet_irr_; }
  const std::vector<int>& join_irreducibles() const { return join_irr_; }
  std::optional<int> unique_cover(int a) const;     // alpha^+
  std::optional<int> unique_subcover(int a) const;  // alpha^-
  std::vector<int> upper_covers(int a) const;
  std::vector<int> lower_covers(int a) const;
  // Elements of the interval [a, b], in canonical order.
  std::vector<int> interval(int a, int b) const;
  bool is_modular() const { return modular_; }

 private:
  std::vector<Congruence> elements_;
  std::map<std::vector<int>, int> index_;
  std::vector<std::vector<char>> leq_;
  std::vector<std::vector<int>> meet_, join_;
  std::vector<std::pair<int, int>> covers_;
  std::vector<int> atoms_, meet_irr_, join_irr_;
  bool modular_ = true;
};

// Canonical order: more classes first, then lexicographic on the partition vector.
bool canonical_less(const Congruence& a, const Congruence& b);

CongruenceLattice all_congruences(const FiniteAlgebra& a);
// Reference oracle: every partition of the universe filtered by compatibility.
std::vector<Congruence> brute_force_congruences(const FiniteAlgebra& a);
// Pentagon search on the lattice order.
bool has_pentagon(const CongruenceLattice& lat);

Congruence commutator(const FiniteAlgebra& a, const Congruence& alpha, const Congruence& beta);

struct Solvability {
  enum class Kind { Abelian, Nilpotent, Solvable, NonSolvable };
  Kind kind = Kind::NonSolvable;
  int k = 0;  // class for nilpotent / solvable
  std::string to_string() const;
};

Solvability solvability_class(const FiniteAlgebra& a, const Congruence& alpha);
bool is_nilpotent(const FiniteAlgebra& a);

struct CharInfo {
  int lower = 0, upper = 0;  // lattice indices of the cover
  long long characteristic = 0;
  long long coset_size = 0;
};

// Context for the lattice-level computations; commutators are memoised.
class CongruenceAnalysis {
 public:
  CongruenceAnalysis(const FiniteAlgebra& a, const CongruenceLattice& lat) : a_(a), lat_(lat) {}

  const FiniteAlgebra& algebra() const { return a_; }
  const CongruenceLattice& lattice() const { return lat_; }

  int commutator(int alpha, int beta);
  CharInfo characteristic(int lower, int upper);
  std::vector<long long> charr_set(int alpha, int beta);
  // Witness family {alpha_i} when [alpha, beta] is a PUPI.
  std::optional<std::vector<int>> pupi_witness(int alpha, int beta);
  bool is_pupi(int alpha, int beta) { return pupi_witness(alpha, beta).has_value(); }
  bool is_supernilpotent_quotient(int beta);  // A/beta supernilpotent
  int supernilpotent_rank();

 private:
  const FiniteAlgebra& a_;
  const CongruenceLattice& lat_;
  std::map<std::pair<int, int>, int> comm_;
  std::map<std::pair<int, int>, CharInfo> chars_;
  std::map<std::pair<int, int>, std::optional<std::vector<int>>> pupi_;
};

struct Distinguished {
  int sigma = 0;
  int kappa = 0;
  std::map<long long, int> sigma_p;  // prime -> lattice index, for every prime dividing |A|
};

Distinguished distinguished_congruences(CongruenceAnalysis& an);
// sigma_p for an arbitrary prime (0 when p does not divide |A|).
int sigma_p(CongruenceAnalysis& an, long long p);

// Invariant checkers.
bool check_atom_classes_simple(const FiniteAlgebra& a, const UnaryClone& clone, const Congruence& atom);
bool check_atom_module(const FiniteAlgebra& a, const AlgCircuit& malcev, const Congruence& atom);
bool check_join_irreducible_chars(CongruenceAnalysis& an);
bool check_equal_coset_sizes(const CongruenceLattice& lat);

}  // namespace nudfa
