#include "nudfa/localizer.hpp"

#include <algorithm>
#include <map>

#include "nudfa/common.hpp"
#include "nudfa/congruence.hpp"

namespace nudfa {

namespace {

std::vector<Element> range_of(const std::vector<Element>& f) {
  std::vector<Element> r(f.begin(), f.end());
  std::sort(r.begin(), r.end());
  r.erase(std::unique(r.begin(), r.end()), r.end());
  return r;
}

bool is_subset(const std::vector<Element>& small, const std::vector<Element>& big) {
  return std::includes(big.begin(), big.end(), small.begin(), small.end());
}

std::vector<Element> compose_tables(const std::vector<Element>& outer, const std::vector<Element>& inner) {
  std::vector<Element> r(inner.size());
  for (std::size_t x = 0; x < inner.size(); ++x) r[x] = outer[inner[x]];
  return r;
}

bool is_idempotent(const std::vector<Element>& f) { return compose_tables(f, f) == f; }

void attach_idempotent(MinimalSet& m, const UnaryClone& clone) {
  // powers of the witness first
  std::vector<Element> g = m.witness;
  for (std::size_t k = 0; k <= 2 * m.witness.size() + 2; ++k) {
    if (is_idempotent(g) && range_of(g) == m.elements) {
      m.idempotent = g;
      break;
    }
    g = compose_tables(m.witness, g);
  }
  if (!m.idempotent) {
    for (int i = 0; i < clone.size(); ++i) {
      const auto& t = clone.table(i);
      if (is_idempotent(t) && range_of(t) == m.elements) {
        m.idempotent = t;
        break;
      }
    }
  }
  if (m.idempotent) {
    if (auto idx = clone.find(*m.idempotent)) m.idempotent_circuit = clone.witness(*idx);
  }
}

}  // namespace

bool separates(const std::vector<Element>& f, const Congruence& alpha, const Congruence& beta) {
  int n = beta.size();
  for (int x = 0; x < n; ++x)
    for (int y = x + 1; y < n; ++y)
      if (beta.related(x, y) && !alpha.related(f[x], f[y])) return true;
  return false;
}

std::vector<MinimalSet> minimal_sets(const FiniteAlgebra& a, const UnaryClone& clone, const Congruence& alpha,
                                     const Congruence& beta) {
  if (clone.universe() != a.size()) throw std::invalid_argument("minimal_sets: clone does not match algebra");
  if (!leq(alpha, beta) || alpha == beta) throw std::invalid_argument("minimal_sets: need alpha < beta");
  std::map<std::vector<Element>, int> first;
  for (int i = 0; i < clone.size(); ++i) {
    const auto& t = clone.table(i);
    if (!separates(t, alpha, beta)) continue;
    first.emplace(range_of(t), i);
  }
  std::vector<std::pair<std::vector<Element>, int>> cands(first.begin(), first.end());
  std::vector<MinimalSet> out;
  for (const auto& [r, i] : cands) {
    bool minimal = true;
    for (const auto& [s, j] : cands)
      if (s.size() < r.size() && is_subset(s, r)) {
        minimal = false;
        break;
      }
    if (!minimal) continue;
    MinimalSet m;
    m.elements = r;
    m.witness = clone.table(i);
    m.witness_circuit = clone.witness(i);
    attach_idempotent(m, clone);
    out.push_back(std::move(m));
  }
  std::stable_sort(out.begin(), out.end(), [](const MinimalSet& x, const MinimalSet& y) {
    if (x.elements.size() != y.elements.size()) return x.elements.size() < y.elements.size();
    return x.elements < y.elements;
  });
  return out;
}

std::vector<std::vector<Element>> traces(const MinimalSet& u, const Congruence& alpha, const Congruence& beta) {
  std::vector<std::vector<Element>> out;
  std::vector<char> seen(beta.size(), 0);
  for (Element x : u.elements) {
    if (seen[x]) continue;
    std::vector<Element> cls;
    bool wider = false;
    for (Element y : u.elements)
      if (beta.related(x, y)) {
        cls.push_back(y);
        seen[y] = 1;
        if (!alpha.related(x, y)) wider = true;
      }
    if (wider) out.push_back(std::move(cls));
  }
  return out;
}

MinimalSet minimal_set_through(const FiniteAlgebra& a, const UnaryClone& clone, const Congruence& delta,
                               const Congruence& theta, Element e) {
  if (e < 0 || e >= a.size()) throw std::invalid_argument("minimal_set_through: element out of range");
  auto all = minimal_sets(a, clone, delta, theta);
  if (all.empty()) throw HypothesisError("minimal_set_through: no minimal set for this quotient");
  const MinimalSet& v = all.front();
  // step 1: a pair of V in theta but not in delta
  std::optional<std::pair<Element, Element>> cd;
  for (Element c : v.elements) {
    for (Element d : v.elements)
      if (c < d && theta.related(c, d) && !delta.related(c, d)) {
        cd = {c, d};
        break;
      }
    if (cd) break;
  }
  if (!cd) throw HypothesisError("minimal_set_through: minimal set has no theta pair outside delta");
  auto [c, d] = *cd;
  // step 2: partners of e in Theta(c,d) outside delta
  Congruence pcd = principal_congruence(a, c, d);
  bool any_partner = false;
  for (Element x = 0; x < a.size(); ++x) {
    if (!pcd.related(e, x) || delta.related(e, x)) continue;
    any_partner = true;
    // step 3: a unary polynomial sending c to e and d to x
    for (int i = 0; i < clone.size(); ++i) {
      const auto& p = clone.table(i);
      if (p[c] != e || p[d] != x) continue;
      std::vector<Element> f = compose_tables(p, v.witness);
      std::vector<Element> r = range_of(f);
      if (!separates(f, delta, theta)) continue;
      auto hit = std::find_if(all.begin(), all.end(), [&](const MinimalSet& m) { return m.elements == r; });
      if (hit == all.end()) continue;
      MinimalSet out;
      out.elements = r;
      out.witness = f;
      out.witness_circuit = compose(clone.witness(i), {v.witness_circuit}, 1);
      attach_idempotent(out, clone);
      return out;
    }
  }
  if (!any_partner) throw HypothesisError("minimal_set_through: no partner of e in Theta(c,d) outside delta");
  throw HypothesisError("minimal_set_through: no unary polynomial moves the minimal set onto e");
}

}  // namespace nudfa
