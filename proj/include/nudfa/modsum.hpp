#pragma once

#include <cstdint>
#include <unordered_map>
#include <vector>

#include "nudfa/fieldpoly.hpp"
#include "nudfa/modcircuit.hpp"

namespace nudfa {

// Affine form over Z_m in the feature variables (AND-layer monomials).
struct LinearForm {
  std::vector<std::pair<int, long long>> coef;  // (feature id, coefficient), ascending ids, nonzero
  long long constant = 0;
};

// GF(p)-valued function c0 + sum mu_i * [L_i = 0 mod m]. Terms are sorted by atom id.
struct ModSum {
  long long c0 = 0;
  std::vector<std::pair<int, long long>> terms;
  std::size_t size() const { return terms.size(); }
};

struct VectorHash {
  std::size_t operator()(const std::vector<long long>& v) const noexcept;
};

// Arithmetic on ModSums. Products of indicators are rewritten immediately
// through the zero indicator of Z_m^2, so every ModSum stays a flat sum.
class ModSumEngine {
 public:
  ModSumEngine(long long m, long long p, int n);

  long long m() const { return m_; }
  long long p() const { return p_; }
  int n() const { return n_; }

  int feature(std::uint64_t monomial);  // interned; the empty monomial is not a feature
  std::uint64_t feature_monomial(int id) const { return features_[id]; }
  int num_atoms() const { return static_cast<int>(atoms_.size()); }
  const LinearForm& atom(int id) const { return atoms_[id]; }

  ModSum constant(long long c) const;
  // [L = 0 mod m]
  ModSum indicator(const LinearForm& l);
  // [L mod m in S]
  ModSum indicator_in(const LinearForm& l, const std::vector<long long>& accepting);
  ModSum add(const ModSum& a, const ModSum& b) const;
  ModSum scale(const ModSum& a, long long c) const;
  ModSum mul(const ModSum& a, const ModSum& b);
  ModSum pow(const ModSum& a, long long k);
  // sum over t in T of 1 - (y - t)^(p-1): the indicator of y in T
  ModSum chi(const ModSum& y, const std::vector<long long>& accepting);
  // Multilinear polynomial evaluated on ModSum arguments.
  ModSum eval_poly(const MultilinearPoly& g, const std::vector<ModSum>& args);

  long long eval(const ModSum& s, std::uint64_t index) const;
  std::size_t max_terms_seen() const { return max_terms_; }

  // Emission. With `and_layer` every feature becomes an AND gate; otherwise
  // features must be single input bits wired straight into the MOD_m gates.
  std::vector<Wire> emit_atoms(CCBuilder& b, const ModSum& s, bool and_layer);
  int emit_mod_p(CCBuilder& b, const ModSum& s, bool and_layer);  // s must be 0/1 valued
  int emit_sump(CCBuilder& b, const ModSum& s, bool and_layer);

 private:
  ModSum atom_product(int a, int b);
  ModSum canonical(LinearForm l);  // intern with unit scaling and, for m = 2, constant flipping
  void note(std::size_t terms);

  long long m_, p_;
  int n_;
  std::vector<std::uint64_t> features_;
  std::unordered_map<std::uint64_t, int> feature_index_;
  std::vector<LinearForm> atoms_;
  std::unordered_map<std::vector<long long>, int, VectorHash> atom_index_;
  std::unordered_map<std::uint64_t, ModSum> products_;
  ZpqeForm pair_indicator_;
  std::size_t max_terms_ = 0;
  // scratch accumulator indexed by atom id
  std::vector<long long> acc_;
  std::vector<int> touched_;
};

}  // namespace nudfa
