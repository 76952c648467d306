#pragma once

#include <memory>
#include <string>
#include <vector>

#include "nudfa/modcircuit.hpp"
#include "nudfa/modsum.hpp"

namespace nudfa {

struct PassReport {
  std::string pass;
  std::string input_shape, output_shape;
  long long input_size = 0, output_size = 0;
  bool checked = false;   // exhaustive comparison was run
  bool verified = false;  // and the truth tables matched
  std::size_t max_terms = 0;
};

// Reads a boolean circuit (AND / OR / MOD / SUMPC gates) as a ModSum. MOD gates
// over input bits or input-bit AND gates become indicators of linear forms; all
// other gates are combined arithmetically. Output gates recorded by
// `LoweringContext::emit_bool` are recognised and not re-expanded.
class LoweringContext {
 public:
  LoweringContext(long long m, long long p, int n) : engine_(m, p, n) {}
  ModSumEngine& engine() { return engine_; }
  ModSum read(const CCircuit& c);
  // Boolean ModSum -> MOD_p output gate (recorded for later reads).
  int emit_bool(CCBuilder& b, const ModSum& s, bool and_layer);

 private:
  ModSumEngine engine_;
  std::unordered_map<std::vector<long long>, ModSum, VectorHash> known_;
};

// f: {0,1}^n -> Z_p^k as a table of k-vectors. Shape AND(n)∘SUMP(p,k).
CCircuit and_sum_lower(const std::vector<ZpVector>& table, int n, long long p, int k);
// MOD(m)∘AND(d) -> MOD(m)∘SUMP(p,1) through the normal form of the AND of indicators.
CCircuit modm_andd_to_sum(const CCircuit& c, long long m, long long p);
// MOD(m)∘MOD(p) -> MOD(m)∘SUMP(p,1).
CCircuit unmod(const CCircuit& c, long long m, long long p);
// g(f_1, ..., f_k); g is a truth table over k bits (bit i = argument i). Inputs are
// MOD(m)∘MOD(p) or AND∘MOD(m)∘MOD(p); the output has an AND layer iff some input does.
CCircuit apply_func(const TruthTable& g, const std::vector<CCircuit>& fs, long long m, long long p,
                    LoweringContext* ctx = nullptr);
// AND∘MOD(m)∘MOD(p)∘AND∘SUMPC(p,nu) -> AND∘MOD(m)∘MOD(p).
CCircuit collapse_5to3(const CCircuit& c, long long m, long long p, LoweringContext* ctx = nullptr);

// x -> a2 (a1 x + b1) + b2 over Z_p.
std::pair<ZpMatrix, ZpVector> compose_affine(const ZpMatrix& a1, const ZpVector& b1, const ZpMatrix& a2,
                                             const ZpVector& b2, long long p);

std::string shape_modm_modp(long long m, long long p);
std::string shape_and_modm_modp(long long m, long long p);
std::string shape_modm_sump(long long m, long long p);

// Exhaustive equivalence of two circuits with boolean or 1-dimensional SUMP outputs.
bool equivalent(const CCircuit& a, const CCircuit& b);
PassReport make_report(const std::string& pass, const CCircuit& in, const CCircuit& out, int verify_n,
                       std::size_t max_terms = 0);
PassReport make_report(const std::string& pass, const std::vector<const CCircuit*>& in, const CCircuit& out,
                       const TruthTable* expected, int verify_n, std::size_t max_terms = 0);

}  // namespace nudfa
