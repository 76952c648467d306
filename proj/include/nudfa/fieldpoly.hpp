#pragma once

#include <cstdint>
#include <istream>
#include <map>
#include <string>
#include <vector>

namespace nudfa {

// Sparse multilinear polynomial over Z_p; a term's key is its variable set as a bitmask.
struct MultilinearPoly {
  long long p = 2;
  int n = 0;
  std::map<std::uint64_t, long long> terms;  // no zero coefficients

  int degree() const;
  bool operator==(const MultilinearPoly&) const = default;
};

MultilinearPoly multilinear_interpolate(const std::vector<long long>& table, int n, long long p);
long long eval_poly(const MultilinearPoly& f, const std::vector<long long>& point);
long long eval_poly_bits(const MultilinearPoly& f, std::uint64_t index);
std::vector<long long> poly_table(const MultilinearPoly& f);
// Product with x^2 = x reduction. Throws BudgetError past the monomial cap.
MultilinearPoly poly_mul(const MultilinearPoly& a, const MultilinearPoly& b);
MultilinearPoly poly_add(const MultilinearPoly& a, const MultilinearPoly& b);
MultilinearPoly poly_scale(const MultilinearPoly& a, long long c);
MultilinearPoly poly_const(long long p, int n, long long c);
MultilinearPoly poly_var(long long p, int n, int i);
std::string to_string(const MultilinearPoly& f);

// Sum of mu * b(beta . x + u) over Z_m, where b(y) = 1 iff y = 0 mod m.
struct ZpqeTerm {
  std::vector<long long> beta;
  long long u = 0;
  long long mu = 0;
  bool operator==(const ZpqeTerm&) const = default;
};

struct ZpqeForm {
  long long m = 2, p = 3;
  int s = 0;
  std::vector<ZpqeTerm> terms;  // sorted by (beta, u), distinct
};

long long eval_zpqe(const ZpqeForm& f, const std::vector<long long>& x);
// Indicator of the zero vector in Z_q^k built by the halving recursion.
ZpqeForm zero_indicator_prime(int k, long long q, long long p);
// Indicator of the zero vector in Z_m^k, m square-free, via the CRT product collapse.
ZpqeForm zero_indicator(int k, long long m, long long p);
// f given as a table over Z_m^s, index = sum x_i m^(s-1-i).
ZpqeForm zpqe_normal_form(const std::vector<long long>& table, int s, long long m, long long p);
std::vector<long long> decode_point(std::size_t index, int s, long long m);

// w(c) = 0 iff the number of zero entries of c is divisible by p^nu, else 1.
MultilinearPoly divisibility_poly(int l, long long p, int nu);
// Same function by plain staged interpolation over all supports (reference).
MultilinearPoly divisibility_poly_staged(int l, long long p, int nu);

struct Cnf {
  int n = 0;
  std::vector<std::vector<int>> clauses;  // DIMACS literals: +-(var + 1)
};

Cnf read_dimacs(std::istream& in);
std::string write_dimacs(const Cnf& f);
// Pads clauses to width 3 by repeating literals; refuses wider or empty clauses.
Cnf to_cnf3(const Cnf& f);
bool is_cnf3(const Cnf& f);
bool eval_cnf(const Cnf& f, std::uint64_t index);
int unsat_count(const Cnf& f, std::uint64_t index);

MultilinearPoly pseudo_and(const Cnf& phi, long long p, int nu);
// Least nu >= 1 with p^(2 nu) > l.
int choose_nu(long long p, int l);

}  // namespace nudfa
