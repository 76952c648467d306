#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace nudfa {

// Raised when an input violates the hypotheses an operation needs
// (non-nilpotent algebra, non-abelian cover, ...). The CLI maps it to exit 1.
struct HypothesisError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Raised when an enumeration would exceed its configured cap.
struct BudgetError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Budget {
  std::size_t clone_functions = 100000;
  std::size_t malcev_functions = 200000;
  std::size_t monomials = 1000000;
  int max_lattice_size = 10;
  int max_truth_table_inputs = 20;
};

// Process-wide caps; NUDFA_BUDGET=N raises the enumeration caps to N.
const Budget& budget();
void set_budget(const Budget& b);

using ZpMatrix = Eigen::Matrix<long long, Eigen::Dynamic, Eigen::Dynamic>;
using ZpVector = Eigen::Matrix<long long, Eigen::Dynamic, 1>;

inline long long mod(long long x, long long m) {
  long long r = x % m;
  return r < 0 ? r + m : r;
}

long long inv_mod(long long a, long long m);  // throws if not invertible
long long pow_mod(long long a, long long e, long long m);
bool is_prime(long long n);
std::vector<long long> prime_factors(long long n);  // distinct, ascending
long long pdiv(long long n);                       // largest square-free divisor
bool is_square_free(long long n);
// Returns (p, k) with n = p^k, or (0, 0) when n is not a prime power. n = 1 gives (1, 0).
std::pair<long long, int> prime_power(long long n);

template <class Derived>
ZpMatrix reduce(const Eigen::MatrixBase<Derived>& m, long long p) {
  return m.unaryExpr([p](long long x) { return mod(x, p); }).eval();
}

inline ZpVector reduce_vec(const ZpVector& v, long long p) {
  return v.unaryExpr([p](long long x) { return mod(x, p); }).eval();
}

// Multiplication matrix of a GF(p^nu) element in a basis where the all-ones
// vector is the field unit. `element` holds the coordinates of g in that basis.
ZpMatrix field_scalar_matrix(long long p, int nu, const ZpVector& element);

}  // namespace nudfa
