#include "doctest.h"

#include <bit>
#include <random>
#include <sstream>

#include "nudfa/common.hpp"
#include "nudfa/fieldpoly.hpp"

using namespace nudfa;

namespace {

std::map<std::uint64_t, long long> terms(std::initializer_list<std::pair<const std::uint64_t, long long>> t) { return t; }

Cnf random_cnf3(int n, int l, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> var(1, n), sign(0, 1);
  Cnf f{n, {}};
  for (int i = 0; i < l; ++i) {
    std::vector<int> c;
    for (int j = 0; j < 3; ++j) c.push_back(sign(rng) ? var(rng) : -var(rng));
    f.clauses.push_back(c);
  }
  return f;
}

}  // namespace

TEST_CASE("multilinear interpolation examples") {
  CHECK(multilinear_interpolate({0, 0, 0, 1}, 2, 3).terms == terms({{3, 1}}));
  CHECK(multilinear_interpolate({0, 1, 1, 0}, 2, 3).terms == terms({{1, 1}, {2, 1}, {3, 1}}));
  CHECK(multilinear_interpolate({1, 1, 1, 1}, 2, 5).terms == terms({{0, 1}}));
  auto x = multilinear_interpolate({0, 1, 1, 0}, 2, 3);
  CHECK(eval_poly(x, {1, 1}) == 0);
  CHECK(eval_poly(MultilinearPoly{3, 2, {}}, {1, 2}) == 0);
  CHECK(to_string(x) == "x1 + x2 + x1*x2");
}

TEST_CASE("interpolation agrees with the table and is unique") {
  std::mt19937_64 rng(1);
  for (long long p : {2, 3, 5, 7})
    for (int n = 0; n <= 6; ++n) {
      std::uniform_int_distribution<long long> d(0, p - 1);
      std::vector<long long> t(std::size_t{1} << n);
      for (auto& v : t) v = d(rng);
      auto f = multilinear_interpolate(t, n, p);
      CHECK(poly_table(f) == t);
      for (std::size_t i = 0; i < t.size(); ++i) CHECK(eval_poly_bits(f, i) == t[i]);
      CHECK(multilinear_interpolate(poly_table(f), n, p) == f);
    }
}

TEST_CASE("polynomial arithmetic on the cube") {
  std::mt19937_64 rng(2);
  std::uniform_int_distribution<long long> d(0, 4);
  std::vector<long long> ta(16), tb(16);
  for (auto& v : ta) v = d(rng);
  for (auto& v : tb) v = d(rng);
  auto a = multilinear_interpolate(ta, 4, 5), b = multilinear_interpolate(tb, 4, 5);
  auto prod = poly_table(poly_mul(a, b)), sum = poly_table(poly_add(a, b));
  for (int i = 0; i < 16; ++i) {
    CHECK(prod[i] == ta[i] * tb[i] % 5);
    CHECK(sum[i] == (ta[i] + tb[i]) % 5);
  }
}

TEST_CASE("zero indicators over prime moduli") {
  for (long long q : {2, 3})
    for (long long p : {2, 3, 5, 7}) {
      if (p == q) continue;
      for (int k = 1; k <= 4; ++k) {
        auto b = zero_indicator_prime(k, q, p);
        std::size_t total = 1;
        for (int i = 0; i < k; ++i) total *= q;
        for (std::size_t idx = 0; idx < total; ++idx) {
          auto x = decode_point(idx, k, q);
          REQUIRE(eval_zpqe(b, x) == (idx == 0 ? 1 : 0));
        }
      }
    }
}

TEST_CASE("zero indicators over square-free moduli") {
  for (auto [m, p] : std::vector<std::pair<long long, long long>>{{6, 5}, {6, 7}, {10, 3}, {15, 2}})
    for (int k = 1; k <= 2; ++k) {
      auto b = zero_indicator(k, m, p);
      std::size_t total = k == 1 ? m : m * m;
      for (std::size_t idx = 0; idx < total; ++idx) CHECK(eval_zpqe(b, decode_point(idx, k, m)) == (idx == 0));
    }
}

TEST_CASE("normal form examples") {
  auto f = zpqe_normal_form({0, 1}, 1, 2, 3);
  REQUIRE(f.terms.size() == 1);
  CHECK(f.terms[0] == ZpqeTerm{{1}, 1, 1});
  CHECK(eval_zpqe(f, {0}) == 0);
  auto c = zpqe_normal_form({2, 2}, 1, 2, 3);
  REQUIRE(c.terms.size() == 1);
  CHECK(c.terms[0] == ZpqeTerm{{0}, 0, 2});
  CHECK_THROWS(zpqe_normal_form({0, 1, 0}, 1, 3, 3));
  CHECK_THROWS(zpqe_normal_form({0, 1, 0, 1}, 1, 4, 3));
}

TEST_CASE("normal form matches random functions pointwise") {
  std::mt19937_64 rng(3);
  for (auto [m, p] : std::vector<std::pair<long long, long long>>{{2, 3}, {2, 5}, {3, 2}, {6, 5}})
    for (int s = 1; s <= 2; ++s)
      for (int t = 0; t < 20; ++t) {
        std::size_t total = s == 1 ? m : m * m;
        std::uniform_int_distribution<long long> d(0, p - 1);
        std::vector<long long> table(total);
        for (auto& v : table) v = d(rng);
        auto f = zpqe_normal_form(table, s, m, p);
        for (std::size_t idx = 0; idx < total; ++idx) REQUIRE(eval_zpqe(f, decode_point(idx, s, m)) == table[idx]);
        for (const auto& term : f.terms) {
          CHECK(term.mu != 0);
          CHECK(term.u < m);
        }
      }
}

TEST_CASE("divisibility polynomial") {
  auto w = divisibility_poly(2, 2, 1);
  CHECK(w.terms == terms({{1, 1}, {2, 1}}));
  CHECK(divisibility_poly(1, 2, 1).terms == terms({{0, 1}, {1, 1}}));
  for (int l = 0; l <= 10; ++l)
    for (auto [p, nu] : std::vector<std::pair<long long, int>>{{2, 1}, {2, 2}, {3, 1}, {2, 3}, {5, 1}}) {
      auto sym = divisibility_poly(l, p, nu);
      CHECK(sym == divisibility_poly_staged(l, p, nu));
      long long pnu = 1;
      for (int i = 0; i < nu; ++i) pnu *= p;
      CHECK(sym.degree() <= pnu - 1);
      auto t = poly_table(sym);
      for (std::size_t i = 0; i < t.size(); ++i) {
        int zeros = l - std::popcount(i);
        REQUIRE(t[i] == (zeros % pnu ? 1 : 0));
      }
      if (pnu > l) CHECK(t.back() == 0);
    }
}

TEST_CASE("pseudo-AND") {
  Cnf one{2, {{1, 2, 2}}};
  auto w = pseudo_and(one, 2, 1);
  CHECK(w.terms == terms({{0, 1}, {1, 1}, {2, 1}, {3, 1}}));
  CHECK(eval_poly_bits(w, 0) == 1);
  CHECK(eval_poly_bits(w, 1) == 0);
  CHECK(pseudo_and(Cnf{3, {}}, 3, 1).terms.empty());

  std::mt19937_64 rng(4);
  for (int t = 0; t < 30; ++t) {
    Cnf phi = random_cnf3(5, 6, rng);
    for (auto [p, nu] : std::vector<std::pair<long long, int>>{{2, 1}, {2, 2}, {3, 1}}) {
      auto poly = pseudo_and(phi, p, nu);
      long long pnu = nu == 2 ? 4 : p;
      CHECK(poly.degree() <= 3 * (pnu - 1));
      for (std::uint64_t b = 0; b < 32; ++b) REQUIRE(eval_poly_bits(poly, b) == (unsat_count(phi, b) % pnu ? 1 : 0));
    }
  }
  CHECK_THROWS(pseudo_and(Cnf{2, {{1, 2}}}, 2, 1));
}

TEST_CASE("two-prime satisfiability test") {
  std::mt19937_64 rng(5);
  for (int t = 0; t < 20; ++t) {
    int l = 1 + t % 8;
    Cnf phi = random_cnf3(4, l, rng);
    int nu2 = choose_nu(2, l), nu3 = choose_nu(3, l);
    long long q2 = 1 << nu2, q3 = 1;
    for (int i = 0; i < nu3; ++i) q3 *= 3;
    CHECK(q2 * q2 > l);
    CHECK((q2 / 2) * (q2 / 2) <= l);
    auto w2 = pseudo_and(phi, 2, nu2), w3 = pseudo_and(phi, 3, nu3);
    for (std::uint64_t b = 0; b < 16; ++b)
      CHECK(eval_cnf(phi, b) == (eval_poly_bits(w2, b) == 0 && eval_poly_bits(w3, b) == 0));
  }
}

TEST_CASE("DIMACS") {
  std::istringstream in("c example\np cnf 3 2\n1 -2 0\n3 2 -1 0\n");
  Cnf f = read_dimacs(in);
  CHECK(f.n == 3);
  CHECK(f.clauses == std::vector<std::vector<int>>{{1, -2}, {3, 2, -1}});
  std::istringstream again(write_dimacs(f));
  CHECK(read_dimacs(again).clauses == f.clauses);
  CHECK(to_cnf3(f).clauses[0] == std::vector<int>{1, -2, -2});
  std::istringstream bad("p cnf 2 1\n1 5 0\n");
  CHECK_THROWS(read_dimacs(bad));
  std::istringstream wide("p cnf 4 1\n1 2 3 4 0\n");
  CHECK_THROWS(to_cnf3(read_dimacs(wide)));
}
