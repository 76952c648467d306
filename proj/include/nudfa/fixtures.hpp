#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "nudfa/algebra.hpp"

namespace nudfa {

struct Fixture {
  FiniteAlgebra algebra;
  std::optional<AlgCircuit> malcev;
};

// Built-in algebras: Z2, Z3, Z4, Z6, Z6sub, Z6mod2, Z6mod3, LAT2, S3.
std::vector<std::string> fixture_names();
Fixture fixture(std::string_view name);

// (Z_n; +) and friends, exposed for random test generation.
FiniteAlgebra cyclic_group(int n);
// x + (n-1) y + z over a group whose "+" is operation `plus`.
AlgCircuit group_malcev(int n, int plus);

}  // namespace nudfa
