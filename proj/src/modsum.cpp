#include "nudfa/modsum.hpp"

#include <algorithm>
#include <bit>
#include <functional>
#include <numeric>
#include <stdexcept>

#include "nudfa/common.hpp"

namespace nudfa {

std::size_t VectorHash::operator()(const std::vector<long long>& v) const noexcept {
  std::uint64_t h = 1469598103934665603ULL;
  for (long long x : v) {
    h ^= static_cast<std::uint64_t>(x) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    h *= 1099511628211ULL;
  }
  return static_cast<std::size_t>(h);
}

ModSumEngine::ModSumEngine(long long m, long long p, int n) : m_(m), p_(p), n_(n) {
  if (!is_prime(p)) throw std::invalid_argument("ModSumEngine: p must be prime");
  if (m < 2 || !is_square_free(m) || m % p == 0)
    throw std::invalid_argument("ModSumEngine: m must be square-free and coprime to p");
  if (n < 0 || n > 63) throw std::invalid_argument("ModSumEngine: input count must be in 0..63");
  pair_indicator_ = zero_indicator(2, m, p);
}

int ModSumEngine::feature(std::uint64_t monomial) {
  if (monomial == 0) throw std::invalid_argument("ModSumEngine: the empty monomial is a constant");
  if (n_ < 64 && (monomial >> n_) != 0) throw std::invalid_argument("ModSumEngine: monomial uses unknown inputs");
  auto [it, fresh] = feature_index_.emplace(monomial, static_cast<int>(features_.size()));
  if (fresh) features_.push_back(monomial);
  return it->second;
}

ModSum ModSumEngine::constant(long long c) const { return ModSum{mod(c, p_), {}}; }

void ModSumEngine::note(std::size_t terms) {
  max_terms_ = std::max(max_terms_, terms);
  if (terms > budget().monomials) throw BudgetError("lowering: intermediate term count exceeds the monomial cap");
}

ModSum ModSumEngine::canonical(LinearForm l) {
  for (auto& [f, a] : l.coef) a = mod(a, m_);
  std::sort(l.coef.begin(), l.coef.end());
  std::vector<std::pair<int, long long>> merged;
  for (const auto& [f, a] : l.coef) {
    if (!merged.empty() && merged.back().first == f)
      merged.back().second = (merged.back().second + a) % m_;
    else
      merged.push_back({f, a});
  }
  std::erase_if(merged, [](const auto& t) { return t.second == 0; });
  l.coef = std::move(merged);
  l.constant = mod(l.constant, m_);
  if (l.coef.empty()) return constant(l.constant == 0 ? 1 : 0);
  long long lead = l.coef.front().second;
  if (lead != 1 && std::gcd(lead, m_) == 1) {
    long long inv = inv_mod(lead, m_);
    for (auto& t : l.coef) t.second = t.second * inv % m_;
    l.constant = l.constant * inv % m_;
  }
  bool flip = m_ == 2 && l.constant == 1;
  if (flip) l.constant = 0;
  std::vector<long long> key;
  key.reserve(2 * l.coef.size() + 1);
  key.push_back(l.constant);
  for (const auto& [f, a] : l.coef) {
    key.push_back(f);
    key.push_back(a);
  }
  auto [it, fresh] = atom_index_.emplace(std::move(key), static_cast<int>(atoms_.size()));
  if (fresh) atoms_.push_back(std::move(l));
  int id = it->second;
  if (flip) return ModSum{1, {{id, p_ - 1}}};
  return ModSum{0, {{id, 1}}};
}

ModSum ModSumEngine::indicator(const LinearForm& l) { return canonical(l); }

ModSum ModSumEngine::indicator_in(const LinearForm& l, const std::vector<long long>& accepting) {
  std::vector<long long> s;
  for (long long a : accepting) s.push_back(mod(a, m_));
  std::sort(s.begin(), s.end());
  s.erase(std::unique(s.begin(), s.end()), s.end());
  if (static_cast<long long>(s.size()) == m_) return constant(1);
  ModSum out = constant(0);
  for (long long a : s) {
    LinearForm shifted = l;
    shifted.constant -= a;
    out = add(out, canonical(shifted));
  }
  return out;
}

ModSum ModSumEngine::add(const ModSum& a, const ModSum& b) const {
  ModSum r;
  r.c0 = (a.c0 + b.c0) % p_;
  r.terms.reserve(a.terms.size() + b.terms.size());
  std::size_t i = 0, j = 0;
  while (i < a.terms.size() || j < b.terms.size()) {
    if (j == b.terms.size() || (i < a.terms.size() && a.terms[i].first < b.terms[j].first)) {
      r.terms.push_back(a.terms[i++]);
    } else if (i == a.terms.size() || b.terms[j].first < a.terms[i].first) {
      r.terms.push_back(b.terms[j++]);
    } else {
      long long c = (a.terms[i].second + b.terms[j].second) % p_;
      if (c) r.terms.push_back({a.terms[i].first, c});
      ++i;
      ++j;
    }
  }
  return r;
}

ModSum ModSumEngine::scale(const ModSum& a, long long c) const {
  c = mod(c, p_);
  if (c == 0) return constant(0);
  ModSum r{a.c0 * c % p_, a.terms};
  for (auto& t : r.terms) t.second = t.second * c % p_;
  return r;
}

ModSum ModSumEngine::atom_product(int a, int b) {
  if (a == b) return ModSum{0, {{a, 1}}};
  if (a > b) std::swap(a, b);
  std::uint64_t key = (static_cast<std::uint64_t>(a) << 32) | static_cast<std::uint32_t>(b);
  if (auto it = products_.find(key); it != products_.end()) return it->second;
  const LinearForm la = atoms_[a], lb = atoms_[b];
  ModSum out = constant(0);
  if (la.coef == lb.coef) {
    // same linear part, different constants: never simultaneously zero
  } else {
    for (const auto& t : pair_indicator_.terms) {
      LinearForm f;
      for (const auto& [id, c] : la.coef) f.coef.push_back({id, c * t.beta[0]});
      for (const auto& [id, c] : lb.coef) f.coef.push_back({id, c * t.beta[1]});
      f.constant = la.constant * t.beta[0] + lb.constant * t.beta[1] + t.u;
      out = add(out, scale(canonical(std::move(f)), t.mu));
    }
  }
  products_.emplace(key, out);
  return out;
}

ModSum ModSumEngine::mul(const ModSum& a, const ModSum& b) {
  ModSum r;
  long long c0 = a.c0 * b.c0 % p_;
  auto bump = [&](int id, long long v) {
    if (id >= static_cast<int>(acc_.size())) acc_.resize(std::max<std::size_t>(id + 1, 2 * acc_.size()), 0);
    if (acc_[id] == 0) touched_.push_back(id);
    acc_[id] += v;
    if (acc_[id] == 0) acc_[id] = p_;  // keep "touched" marker non-zero; value is reduced later
  };
  if (a.c0)
    for (const auto& [id, v] : b.terms) bump(id, a.c0 * v);
  if (b.c0)
    for (const auto& [id, v] : a.terms) bump(id, b.c0 * v);
  for (const auto& [ia, va] : a.terms)
    for (const auto& [ib, vb] : b.terms) {
      long long w = va * vb % p_;
      ModSum prod = atom_product(ia, ib);
      c0 += w * prod.c0;
      for (const auto& [id, v] : prod.terms) bump(id, w * v);
    }
  r.c0 = c0 % p_;
  std::sort(touched_.begin(), touched_.end());
  for (int id : touched_) {
    long long v = acc_[id] % p_;
    acc_[id] = 0;
    if (v) r.terms.push_back({id, v});
  }
  touched_.clear();
  note(r.terms.size());
  return r;
}

ModSum ModSumEngine::pow(const ModSum& a, long long k) {
  ModSum r = constant(1);
  for (long long i = 0; i < k; ++i) r = mul(r, a);
  return r;
}

ModSum ModSumEngine::chi(const ModSum& y, const std::vector<long long>& accepting) {
  std::vector<long long> s;
  for (long long t : accepting) s.push_back(mod(t, p_));
  std::sort(s.begin(), s.end());
  s.erase(std::unique(s.begin(), s.end()), s.end());
  if (static_cast<long long>(s.size()) == p_) return constant(1);
  ModSum out = constant(0);
  for (long long t : s) {
    ModSum d = y;
    d.c0 = mod(d.c0 - t, p_);
    out = add(out, add(constant(1), scale(pow(d, p_ - 1), -1)));
  }
  return out;
}

ModSum ModSumEngine::eval_poly(const MultilinearPoly& g, const std::vector<ModSum>& args) {
  if (g.p != p_ || g.n != static_cast<int>(args.size())) throw std::invalid_argument("eval_poly: mismatched arguments");
  std::unordered_map<std::uint64_t, ModSum> memo;
  memo.emplace(0, constant(1));
  std::function<const ModSum&(std::uint64_t)> product = [&](std::uint64_t mask) -> const ModSum& {
    if (auto it = memo.find(mask); it != memo.end()) return it->second;
    int low = std::countr_zero(mask);
    ModSum v = mul(product(mask & (mask - 1)), args[low]);
    return memo.emplace(mask, std::move(v)).first->second;
  };
  ModSum out = constant(0);
  for (const auto& [mask, c] : g.terms) out = add(out, scale(product(mask), c));
  return out;
}

long long ModSumEngine::eval(const ModSum& s, std::uint64_t index) const {
  long long r = s.c0;
  for (const auto& [id, mu] : s.terms) {
    const LinearForm& l = atoms_[id];
    long long v = l.constant;
    for (const auto& [f, c] : l.coef)
      if ((index & features_[f]) == features_[f]) v += c;
    if (v % m_ == 0) r += mu;
  }
  return r % p_;
}

std::vector<Wire> ModSumEngine::emit_atoms(CCBuilder& b, const ModSum& s, bool and_layer) {
  std::vector<Wire> out;
  for (const auto& [id, mu] : s.terms) {
    const LinearForm& l = atoms_[id];
    std::vector<Wire> wires;
    for (const auto& [f, c] : l.coef) {
      std::uint64_t mono = features_[f];
      int src;
      if (and_layer) {
        std::vector<int> bits;
        for (int i = 0; i < n_; ++i)
          if (mono >> i & 1U) bits.push_back(i);
        src = b.add_and(bits);
      } else {
        if (std::popcount(mono) != 1) throw std::logic_error("emit: product feature without an AND layer");
        src = std::countr_zero(mono);
      }
      wires.push_back({src, c});
    }
    out.push_back({b.add_mod(m_, {mod(-l.constant, m_)}, wires), mu});
  }
  return out;
}

int ModSumEngine::emit_mod_p(CCBuilder& b, const ModSum& s, bool and_layer) {
  return b.add_mod(p_, {mod(1 - s.c0, p_)}, emit_atoms(b, s, and_layer));
}

int ModSumEngine::emit_sump(CCBuilder& b, const ModSum& s, bool and_layer) {
  std::vector<Wire> wires = emit_atoms(b, s, and_layer);
  std::vector<ZpMatrix> coeffs(wires.size(), ZpMatrix::Identity(1, 1));
  return b.add_sump(p_, 1, wires, coeffs, ZpVector::Constant(1, s.c0));
}

}  // namespace nudfa
