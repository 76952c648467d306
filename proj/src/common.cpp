#include "nudfa/common.hpp"

#include <cstdlib>
#include <numeric>

namespace nudfa {

namespace {

Budget initial_budget() {
  Budget b;
  if (const char* env = std::getenv("NUDFA_BUDGET")) {
    char* end = nullptr;
    unsigned long long v = std::strtoull(env, &end, 10);
    if (end != env && v > 0) {
      b.clone_functions = v;
      b.malcev_functions = v;
      b.monomials = v;
    }
  }
  return b;
}

Budget& budget_ref() {
  static Budget b = initial_budget();
  return b;
}

}  // namespace

const Budget& budget() { return budget_ref(); }
void set_budget(const Budget& b) { budget_ref() = b; }

long long inv_mod(long long a, long long m) {
  long long old_r = mod(a, m), r = m, old_s = 1, s = 0;
  while (r != 0) {
    long long q = old_r / r;
    long long t = old_r - q * r;
    old_r = r;
    r = t;
    t = old_s - q * s;
    old_s = s;
    s = t;
  }
  if (old_r != 1) throw std::invalid_argument("inv_mod: " + std::to_string(a) + " not invertible mod " + std::to_string(m));
  return mod(old_s, m);
}

long long pow_mod(long long a, long long e, long long m) {
  long long r = 1 % m, b = mod(a, m);
  while (e > 0) {
    if (e & 1) r = r * b % m;
    b = b * b % m;
    e >>= 1;
  }
  return r;
}

bool is_prime(long long n) {
  if (n < 2) return false;
  for (long long d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

std::vector<long long> prime_factors(long long n) {
  std::vector<long long> out;
  for (long long d = 2; d * d <= n; ++d) {
    if (n % d == 0) {
      out.push_back(d);
      while (n % d == 0) n /= d;
    }
  }
  if (n > 1) out.push_back(n);
  return out;
}

long long pdiv(long long n) {
  long long r = 1;
  for (long long p : prime_factors(n)) r *= p;
  return r;
}

bool is_square_free(long long n) { return n >= 1 && pdiv(n) == n; }

std::pair<long long, int> prime_power(long long n) {
  if (n == 1) return {1, 0};
  auto ps = prime_factors(n);
  if (ps.size() != 1) return {0, 0};
  int k = 0;
  while (n > 1) {
    n /= ps[0];
    ++k;
  }
  return {ps[0], k};
}

namespace {

// Polynomials over Z_p as coefficient vectors, lowest degree first.
using Poly = std::vector<long long>;

Poly poly_mulmod(const Poly& a, const Poly& b, const Poly& modulus, long long p) {
  Poly r(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) r[i + j] = (r[i + j] + a[i] * b[j]) % p;
  int deg = static_cast<int>(modulus.size()) - 1;
  for (int i = static_cast<int>(r.size()) - 1; i >= deg; --i) {
    long long c = r[i];
    if (c == 0) continue;
    for (int j = 0; j <= deg; ++j) r[i - deg + j] = mod(r[i - deg + j] - c * modulus[j], p);
  }
  r.resize(deg);
  return r;
}

bool has_root_factor(const Poly& f, long long p, int nu) {
  // irreducible iff no monic factor of degree 1..nu/2; brute force over monic polys
  for (int d = 1; d <= nu / 2; ++d) {
    long long count = 1;
    for (int i = 0; i < d; ++i) count *= p;
    for (long long code = 0; code < count; ++code) {
      Poly g(d + 1, 0);
      long long c = code;
      for (int i = 0; i < d; ++i) {
        g[i] = c % p;
        c /= p;
      }
      g[d] = 1;
      // remainder of f by g
      Poly r = f;
      for (int i = static_cast<int>(r.size()) - 1; i >= d; --i) {
        long long lead = r[i];
        if (lead == 0) continue;
        for (int j = 0; j <= d; ++j) r[i - d + j] = mod(r[i - d + j] - lead * g[j], p);
      }
      bool zero = true;
      for (int i = 0; i < d; ++i) zero = zero && r[i] == 0;
      if (zero) return true;
    }
  }
  return false;
}

Poly irreducible_poly(long long p, int nu) {
  long long count = 1;
  for (int i = 0; i < nu; ++i) count *= p;
  for (long long code = 0; code < count; ++code) {
    Poly f(nu + 1, 0);
    long long c = code;
    for (int i = 0; i < nu; ++i) {
      f[i] = c % p;
      c /= p;
    }
    f[nu] = 1;
    if (nu > 1 && f[0] == 0) continue;
    if (!has_root_factor(f, p, nu)) return f;
  }
  throw std::logic_error("no irreducible polynomial found");
}

}  // namespace

ZpMatrix field_scalar_matrix(long long p, int nu, const ZpVector& element) {
  if (!is_prime(p) || nu < 1) throw std::invalid_argument("field_scalar_matrix: need prime p and nu >= 1");
  if (element.size() != nu) throw std::invalid_argument("field_scalar_matrix: element dimension mismatch");
  Poly modulus = irreducible_poly(p, nu);
  // New basis (in polynomial coordinates): v_0 = 1 - x - ... - x^{nu-1}, v_i = x^i.
  // The v_i sum to 1, so the all-ones coordinate vector is the unit.
  ZpMatrix T = ZpMatrix::Identity(nu, nu);
  for (int i = 1; i < nu; ++i) T(i, 0) = mod(-1, p);
  // multiplication by g in poly coordinates
  Poly g(nu, 0);
  ZpVector gp = reduce_vec(T * element, p);
  for (int i = 0; i < nu; ++i) g[i] = gp(i);
  ZpMatrix Mg(nu, nu);
  for (int j = 0; j < nu; ++j) {
    Poly xj(nu, 0);
    xj[j] = 1;
    Poly prod = poly_mulmod(g, xj, modulus, p);
    for (int i = 0; i < nu; ++i) Mg(i, j) = prod[i];
  }
  ZpMatrix Tinv = ZpMatrix::Identity(nu, nu);
  for (int i = 1; i < nu; ++i) Tinv(i, 0) = 1;
  return reduce(Tinv * Mg * T, p);
}

}  // namespace nudfa
