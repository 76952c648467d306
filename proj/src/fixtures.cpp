#include "nudfa/fixtures.hpp"

#include <array>
#include <stdexcept>

namespace nudfa {

namespace {

Operation binary(const std::string& name, int n, Element (*f)(int, int, int)) {
  Operation o{name, 2, std::vector<Element>(n * n)};
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y) o.table[x * n + y] = f(x, y, n);
  return o;
}

Operation add_op(int n) {
  return binary("+", n, [](int x, int y, int m) { return (x + y) % m; });
}

Operation unary(const std::string& name, int n, Element (*f)(int, int)) {
  Operation o{name, 1, std::vector<Element>(n)};
  for (int x = 0; x < n; ++x) o.table[x] = f(x, n);
  return o;
}

// Permutations of {0,1,2} in lexicographic order.
const std::array<std::array<int, 3>, 6> kPerms = {{{0, 1, 2}, {0, 2, 1}, {1, 0, 2}, {1, 2, 0}, {2, 0, 1}, {2, 1, 0}}};

int perm_index(const std::array<int, 3>& p) {
  for (int i = 0; i < 6; ++i)
    if (kPerms[i] == p) return i;
  return -1;
}

FiniteAlgebra s3() {
  Operation mul{"mul", 2, std::vector<Element>(36)};
  Operation inv{"inv", 1, std::vector<Element>(6)};
  for (int a = 0; a < 6; ++a) {
    std::array<int, 3> r{};
    for (int x = 0; x < 3; ++x) r[kPerms[a][x]] = x;
    inv.table[a] = perm_index(r);
    for (int b = 0; b < 6; ++b) {
      std::array<int, 3> c{};
      for (int x = 0; x < 3; ++x) c[x] = kPerms[a][kPerms[b][x]];
      mul.table[a * 6 + b] = perm_index(c);
    }
  }
  return FiniteAlgebra("S3", 6, {mul, inv});
}

}  // namespace

FiniteAlgebra cyclic_group(int n) { return FiniteAlgebra("Z" + std::to_string(n), n, {add_op(n)}); }

AlgCircuit group_malcev(int n, int plus) {
  CircuitBuilder b(3);
  int x = b.var(0), y = b.var(1), z = b.var(2);
  // (n-1) y by repeated doubling
  int acc = -1, pw = y;
  for (int k = n - 1; k > 0; k >>= 1) {
    if (k & 1) acc = acc < 0 ? pw : b.gate(plus, {acc, pw});
    if (k > 1) pw = b.gate(plus, {pw, pw});
  }
  int xz = b.gate(plus, {x, z});
  return b.build(acc < 0 ? xz : b.gate(plus, {xz, acc}));
}

std::vector<std::string> fixture_names() {
  return {"Z2", "Z3", "Z4", "Z6", "Z6sub", "Z6mod2", "Z6mod3", "LAT2", "S3"};
}

Fixture fixture(std::string_view name) {
  if (name == "Z2" || name == "Z3" || name == "Z4" || name == "Z6") {
    int n = name[1] - '0';
    return {cyclic_group(n), group_malcev(n, 0)};
  }
  if (name == "Z6sub") {
    FiniteAlgebra a("Z6sub", 6, {add_op(6), binary("-", 6, [](int x, int y, int m) { return ((x - y) % m + m) % m; })});
    CircuitBuilder b(3);
    return {a, b.build(b.gate(0, {b.gate(1, {b.var(0), b.var(1)}), b.var(2)}))};
  }
  if (name == "Z6mod2") {
    FiniteAlgebra a("Z6mod2", 6, {add_op(6), unary("%2", 6, [](int x, int) { return x % 2; })});
    return {a, group_malcev(6, 0)};
  }
  if (name == "Z6mod3") {
    FiniteAlgebra a("Z6mod3", 6, {add_op(6), unary("%3", 6, [](int x, int) { return x % 3; })});
    return {a, group_malcev(6, 0)};
  }
  if (name == "LAT2") {
    FiniteAlgebra a("LAT2", 2,
                    {binary("and", 2, [](int x, int y, int) { return x & y; }),
                     binary("or", 2, [](int x, int y, int) { return x | y; })});
    return {a, std::nullopt};
  }
  if (name == "S3") {
    CircuitBuilder b(3);
    int xy = b.gate(0, {b.var(0), b.gate(1, {b.var(1)})});
    return {s3(), b.build(b.gate(0, {xy, b.var(2)}))};
  }
  throw std::invalid_argument("unknown fixture: " + std::string(name));
}

}  // namespace nudfa
