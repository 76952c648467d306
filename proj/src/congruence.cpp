#include "nudfa/congruence.hpp"

#include <algorithm>
#include <deque>
#include <set>
#include <sstream>
#include <stdexcept>

#include "nudfa/common.hpp"

namespace nudfa {

namespace {

// Tables of all elementary translations x -> f(c_1, .., x, .., c_r).
std::vector<std::vector<Element>> elementary_translations(const FiniteAlgebra& a) {
  const int n = a.size();
  std::set<std::vector<Element>> seen;
  std::vector<std::vector<Element>> out;
  std::vector<Element> args;
  for (int op = 0; op < a.num_ops(); ++op) {
    int r = a.op(op).arity;
    if (r == 0) continue;
    std::size_t others = 1;
    for (int i = 0; i < r - 1; ++i) others *= static_cast<std::size_t>(n);
    for (int pos = 0; pos < r; ++pos) {
      for (std::size_t code = 0; code < others; ++code) {
        args.assign(r, 0);
        std::size_t rest = code;
        for (int i = r - 1; i >= 0; --i) {
          if (i == pos) continue;
          args[i] = static_cast<Element>(rest % n);
          rest /= n;
        }
        std::vector<Element> t(n);
        for (int x = 0; x < n; ++x) {
          args[pos] = x;
          t[x] = a.apply(op, args);
        }
        bool is_id = true;
        for (int x = 0; x < n; ++x) is_id = is_id && t[x] == x;
        if (is_id) continue;
        if (seen.insert(t).second) out.push_back(std::move(t));
      }
    }
  }
  return out;
}

}  // namespace

Congruence generate_congruence(const FiniteAlgebra& a, const std::vector<std::pair<Element, Element>>& pairs,
                               const Congruence* base) {
  const int n = a.size();
  UnionFind uf(n);
  if (base)
    for (int x = 0; x < n; ++x) uf.unite(x, base->cls[x]);
  std::deque<std::pair<Element, Element>> queue;
  for (auto [x, y] : pairs)
    if (uf.unite(x, y)) queue.emplace_back(x, y);
  if (queue.empty()) return uf.partition();
  auto trans = elementary_translations(a);
  while (!queue.empty()) {
    auto [x, y] = queue.front();
    queue.pop_front();
    for (const auto& t : trans)
      if (uf.unite(t[x], t[y])) queue.emplace_back(t[x], t[y]);
  }
  return uf.partition();
}

Congruence principal_congruence(const FiniteAlgebra& a, Element x, Element y) {
  if (x < 0 || y < 0 || x >= a.size() || y >= a.size())
    throw std::invalid_argument("principal_congruence: element out of range");
  return generate_congruence(a, {{x, y}});
}

bool canonical_less(const Congruence& a, const Congruence& b) {
  int ka = a.num_classes(), kb = b.num_classes();
  if (ka != kb) return ka > kb;
  return a.cls < b.cls;
}

CongruenceLattice::CongruenceLattice(std::vector<Congruence> elements) : elements_(std::move(elements)) {
  std::sort(elements_.begin(), elements_.end(), canonical_less);
  elements_.erase(std::unique(elements_.begin(), elements_.end()), elements_.end());
  const int k = size();
  for (int i = 0; i < k; ++i) index_.emplace(elements_[i].cls, i);
  leq_.assign(k, std::vector<char>(k, 0));
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j) leq_[i][j] = nudfa::leq(elements_[i], elements_[j]);
  meet_.assign(k, std::vector<int>(k, 0));
  join_.assign(k, std::vector<int>(k, 0));
  for (int i = 0; i < k; ++i)
    for (int j = i; j < k; ++j) {
      meet_[i][j] = meet_[j][i] = index_of(nudfa::meet(elements_[i], elements_[j]));
      join_[i][j] = join_[j][i] = index_of(nudfa::join(elements_[i], elements_[j]));
    }
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j)
      if (i != j && leq_[i][j]) {
        bool cover = true;
        for (int c = 0; c < k && cover; ++c)
          if (c != i && c != j && leq_[i][c] && leq_[c][j]) cover = false;
        if (cover) covers_.emplace_back(i, j);
      }
  for (int i = 0; i < k; ++i) {
    if (covers(0, i)) atoms_.push_back(i);
    if (upper_covers(i).size() == 1) meet_irr_.push_back(i);
    if (lower_covers(i).size() == 1) join_irr_.push_back(i);
  }
  modular_ = !has_pentagon(*this);
}

std::optional<int> CongruenceLattice::find(const Congruence& c) const {
  auto it = index_.find(c.cls);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

int CongruenceLattice::index_of(const Congruence& c) const {
  auto i = find(c);
  if (!i) throw std::invalid_argument("congruence " + to_string(c) + " not in lattice");
  return *i;
}

bool CongruenceLattice::covers(int lower, int upper) const {
  return std::find(covers_.begin(), covers_.end(), std::make_pair(lower, upper)) != covers_.end();
}

std::vector<int> CongruenceLattice::upper_covers(int a) const {
  std::vector<int> out;
  for (auto [l, u] : covers_)
    if (l == a) out.push_back(u);
  return out;
}

std::vector<int> CongruenceLattice::lower_covers(int a) const {
  std::vector<int> out;
  for (auto [l, u] : covers_)
    if (u == a) out.push_back(l);
  return out;
}

std::optional<int> CongruenceLattice::unique_cover(int a) const {
  auto u = upper_covers(a);
  if (u.size() != 1) return std::nullopt;
  return u[0];
}

std::optional<int> CongruenceLattice::unique_subcover(int a) const {
  auto l = lower_covers(a);
  if (l.size() != 1) return std::nullopt;
  return l[0];
}

std::vector<int> CongruenceLattice::interval(int a, int b) const {
  std::vector<int> out;
  for (int i = 0; i < size(); ++i)
    if (leq_[a][i] && leq_[i][b]) out.push_back(i);
  return out;
}

bool has_pentagon(const CongruenceLattice& lat) {
  const int k = lat.size();
  for (int a = 0; a < k; ++a)
    for (int b = 0; b < k; ++b) {
      if (a == b || !lat.leq(a, b)) continue;
      for (int c = 0; c < k; ++c)
        if (lat.join(a, c) == lat.join(b, c) && lat.meet(a, c) == lat.meet(b, c)) return true;
    }
  return false;
}

CongruenceLattice all_congruences(const FiniteAlgebra& a) {
  const int n = a.size();
  if (n > budget().max_lattice_size)
    throw BudgetError("all_congruences: |A| = " + std::to_string(n) + " exceeds bound " +
                      std::to_string(budget().max_lattice_size));
  std::set<std::vector<int>> seen;
  std::vector<Congruence> list;
  auto add = [&](const Congruence& c) {
    if (seen.insert(c.cls).second) list.push_back(c);
  };
  add(Congruence::identity(n));
  for (int x = 0; x < n; ++x)
    for (int y = x + 1; y < n; ++y) add(principal_congruence(a, x, y));
  for (std::size_t i = 0; i < list.size(); ++i)
    for (std::size_t j = 0; j < i; ++j) add(join(list[i], list[j]));
  add(Congruence::total(n));
  return CongruenceLattice(std::move(list));
}

std::vector<Congruence> brute_force_congruences(const FiniteAlgebra& a) {
  const int n = a.size();
  std::vector<Congruence> out;
  std::vector<int> rgs(n, 0), mx(n, 0);
  // restricted growth strings enumerate set partitions
  while (true) {
    Congruence c = Congruence::from_labels(rgs);
    if (is_compatible(a, c)) out.push_back(c);
    int i = n - 1;
    while (i > 0 && rgs[i] == mx[i - 1] + 1) --i;
    if (i <= 0) break;
    ++rgs[i];
    mx[i] = std::max(mx[i - 1], rgs[i]);
    for (int j = i + 1; j < n; ++j) {
      rgs[j] = 0;
      mx[j] = mx[i];
    }
  }
  std::sort(out.begin(), out.end(), canonical_less);
  return out;
}

Congruence commutator(const FiniteAlgebra& a, const Congruence& alpha, const Congruence& beta) {
  const long long n = a.size();
  const long long n4 = n * n * n * n;
  if (n4 > 4000000) throw BudgetError("commutator: |A|^4 = " + std::to_string(n4) + " exceeds the matrix cap");
  auto enc = [n](long long x, long long y, long long z, long long w) { return ((x * n + y) * n + z) * n + w; };
  std::vector<char> in(static_cast<std::size_t>(n4), 0);
  std::vector<std::array<Element, 4>> elems;
  auto add = [&](std::array<Element, 4> m) {
    long long k = enc(m[0], m[1], m[2], m[3]);
    if (in[k]) return;
    in[k] = 1;
    elems.push_back(m);
  };
  for (Element x = 0; x < n; ++x)
    for (Element y = 0; y < n; ++y) {
      if (alpha.related(x, y)) add({x, x, y, y});
      if (beta.related(x, y)) add({x, y, x, y});
    }
  std::vector<Element> args;
  for (std::size_t i = 0; i < elems.size(); ++i) {
    for (int op = 0; op < a.num_ops(); ++op) {
      int r = a.op(op).arity;
      if (r == 0) continue;
      // tuples over [0, i] containing i, first occurrence of i at position j
      std::vector<std::size_t> t(r);
      for (int j = 0; j < r; ++j) {
        if (j > 0 && i == 0) continue;
        std::fill(t.begin(), t.end(), 0);
        t[j] = i;
        while (true) {
          std::array<Element, 4> m;
          args.resize(r);
          for (int c = 0; c < 4; ++c) {
            for (int q = 0; q < r; ++q) args[q] = elems[t[q]][c];
            m[c] = a.apply(op, args);
          }
          add(m);
          int q = r - 1;
          for (; q >= 0; --q) {
            if (q == j) continue;
            std::size_t lim = q < j ? i : i + 1;
            if (++t[q] < lim) break;
            t[q] = 0;
          }
          if (q < 0) break;
        }
      }
    }
  }
  Congruence delta = Congruence::identity(static_cast<int>(n));
  while (true) {
    std::vector<std::pair<Element, Element>> pairs;
    for (const auto& m : elems)
      if (delta.related(m[0], m[1]) && !delta.related(m[2], m[3])) pairs.emplace_back(m[2], m[3]);
    if (pairs.empty()) return delta;
    delta = generate_congruence(a, pairs, &delta);
  }
}

std::string Solvability::to_string() const {
  switch (kind) {
    case Kind::Abelian: return "abelian";
    case Kind::Nilpotent: return "nilpotent(" + std::to_string(k) + ")";
    case Kind::Solvable: return "solvable(" + std::to_string(k) + ")";
    case Kind::NonSolvable: return "non-solvable";
  }
  return "";
}

Solvability solvability_class(const FiniteAlgebra& a, const Congruence& alpha) {
  const int n = a.size();
  Congruence zero = Congruence::identity(n);
  Congruence c2 = commutator(a, alpha, alpha);
  if (c2 == zero) return {Solvability::Kind::Abelian, 1};
  Congruence g = c2;
  for (int k = 2;; ++k) {
    Congruence next = commutator(a, g, alpha);
    if (next == zero) return {Solvability::Kind::Nilpotent, k};
    if (next == g) break;
    g = next;
  }
  Congruence d = c2;
  for (int k = 2;; ++k) {
    Congruence next = commutator(a, d, d);
    if (next == zero) return {Solvability::Kind::Solvable, k};
    if (next == d) return {Solvability::Kind::NonSolvable, 0};
    d = next;
  }
}

bool is_nilpotent(const FiniteAlgebra& a) {
  auto s = solvability_class(a, Congruence::total(a.size()));
  return s.kind == Solvability::Kind::Abelian || s.kind == Solvability::Kind::Nilpotent;
}

int CongruenceAnalysis::commutator(int alpha, int beta) {
  auto key = std::make_pair(alpha, beta);
  auto it = comm_.find(key);
  if (it != comm_.end()) return it->second;
  int r = lat_.index_of(nudfa::commutator(a_, lat_.element(alpha), lat_.element(beta)));
  comm_[key] = r;
  return r;
}

CharInfo CongruenceAnalysis::characteristic(int lower, int upper) {
  auto key = std::make_pair(lower, upper);
  auto it = chars_.find(key);
  if (it != chars_.end()) return it->second;
  if (!lat_.covers(lower, upper)) throw std::invalid_argument("characteristic: not a covering pair");
  if (!lat_.leq(commutator(upper, upper), lower))
    throw HypothesisError("characteristic: cover " + to_string(lat_.element(lower)) + " < " +
                          to_string(lat_.element(upper)) + " is not abelian");
  const Congruence& lo = lat_.element(lower);
  const Congruence& up = lat_.element(upper);
  // number of lower-classes inside each upper-class
  std::map<int, int> count;
  for (int x = 0; x < lo.size(); ++x)
    if (lo.cls[x] == x) ++count[up.cls[x]];
  int s = -1;
  for (auto [cls, c] : count) {
    if (s >= 0 && c != s)
      throw HypothesisError("characteristic: unequal coset sizes in cover " + to_string(lo) + " < " + to_string(up));
    s = c;
  }
  auto [p, k] = prime_power(s);
  if (p <= 1) throw HypothesisError("characteristic: coset size " + std::to_string(s) + " is not a prime power");
  CharInfo info{lower, upper, p, s};
  chars_[key] = info;
  return info;
}

std::vector<long long> CongruenceAnalysis::charr_set(int alpha, int beta) {
  std::set<long long> out;
  for (auto [l, u] : lat_.cover_pairs())
    if (lat_.leq(alpha, l) && lat_.leq(u, beta)) out.insert(characteristic(l, u).characteristic);
  return {out.begin(), out.end()};
}

std::optional<std::vector<int>> CongruenceAnalysis::pupi_witness(int alpha, int beta) {
  auto key = std::make_pair(alpha, beta);
  auto it = pupi_.find(key);
  if (it != pupi_.end()) return it->second;
  std::optional<std::vector<int>> result;
  if (alpha != beta && lat_.leq(alpha, beta)) {
    std::vector<int> cand;
    for (int g : lat_.interval(alpha, beta)) {
      if (g == alpha) continue;
      try {
        if (charr_set(alpha, g).size() == 1) cand.push_back(g);
      } catch (const HypothesisError&) {
      }
    }
    int max_size = 0;
    for (int g : lat_.interval(alpha, beta))
      if (lat_.covers(alpha, g)) ++max_size;
    std::vector<int> fam;
    auto independent = [&]() {
      for (std::size_t i = 0; i < fam.size(); ++i) {
        int others = alpha;
        for (std::size_t j = 0; j < fam.size(); ++j)
          if (j != i) others = lat_.join(others, fam[j]);
        if (lat_.meet(fam[i], others) != alpha) return false;
      }
      return true;
    };
    std::function<bool(std::size_t)> dfs = [&](std::size_t start) -> bool {
      if (!fam.empty()) {
        int j = alpha;
        for (int g : fam) j = lat_.join(j, g);
        if (j == beta) return true;
      }
      if (static_cast<int>(fam.size()) >= max_size) return false;
      for (std::size_t i = start; i < cand.size(); ++i) {
        fam.push_back(cand[i]);
        if (independent() && dfs(i + 1)) return true;
        fam.pop_back();
      }
      return false;
    };
    if (dfs(0)) result = fam;
  }
  pupi_[key] = result;
  return result;
}

bool CongruenceAnalysis::is_supernilpotent_quotient(int beta) {
  return beta == lat_.top() || is_pupi(beta, lat_.top());
}

int CongruenceAnalysis::supernilpotent_rank() {
  if (lat_.size() == 1) return 0;
  if (!is_nilpotent(a_)) throw HypothesisError("supernilpotent_rank: algebra is not nilpotent");
  std::vector<int> dist(lat_.size(), -1);
  std::deque<int> q{lat_.bottom()};
  dist[lat_.bottom()] = 0;
  while (!q.empty()) {
    int x = q.front();
    q.pop_front();
    if (x == lat_.top()) return dist[x];
    for (int y = 0; y < lat_.size(); ++y)
      if (dist[y] < 0 && x != y && lat_.leq(x, y) && is_pupi(x, y)) {
        dist[y] = dist[x] + 1;
        q.push_back(y);
      }
  }
  throw HypothesisError("supernilpotent_rank: no PUPI chain from 0 to 1");
}

namespace {

std::string describe(const CongruenceLattice& lat, const std::vector<int>& c) {
  std::ostringstream s;
  for (std::size_t i = 0; i < c.size(); ++i) s << (i ? ", " : "") << to_string(lat.element(c[i]));
  return s.str();
}

int unique_max(const CongruenceLattice& lat, const std::vector<int>& c, const char* what) {
  for (int x : c) {
    bool top = true;
    for (int y : c) top = top && lat.leq(y, x);
    if (top) return x;
  }
  throw HypothesisError(std::string(what) + ": no unique maximum among candidates " + describe(lat, c));
}

int unique_min(const CongruenceLattice& lat, const std::vector<int>& c, const char* what) {
  for (int x : c) {
    bool bot = true;
    for (int y : c) bot = bot && lat.leq(x, y);
    if (bot) return x;
  }
  throw HypothesisError(std::string(what) + ": no unique minimum among candidates " + describe(lat, c));
}

bool p_power_classes(const Congruence& c, long long p) {
  for (int s : c.class_sizes()) {
    long long v = s;
    while (v % p == 0) v /= p;
    if (v != 1) return false;
  }
  return true;
}

}  // namespace

int sigma_p(CongruenceAnalysis& an, long long p) {
  const auto& lat = an.lattice();
  std::vector<int> cand;
  for (int b = 0; b < lat.size(); ++b)
    if ((b == lat.bottom() || an.is_pupi(lat.bottom(), b)) && p_power_classes(lat.element(b), p)) cand.push_back(b);
  return unique_max(lat, cand, "sigma_p");
}

Distinguished distinguished_congruences(CongruenceAnalysis& an) {
  const auto& lat = an.lattice();
  if (!is_nilpotent(an.algebra())) throw HypothesisError("distinguished_congruences: algebra is not nilpotent");
  Distinguished d;
  std::vector<int> sig, kap;
  for (int b = 0; b < lat.size(); ++b) {
    if (b == lat.bottom() || an.is_pupi(lat.bottom(), b)) sig.push_back(b);
    if (an.is_supernilpotent_quotient(b)) kap.push_back(b);
  }
  d.sigma = unique_max(lat, sig, "sigma");
  d.kappa = unique_min(lat, kap, "kappa");
  for (long long p : prime_factors(an.algebra().size())) d.sigma_p[p] = sigma_p(an, p);
  return d;
}

bool check_atom_classes_simple(const FiniteAlgebra& a, const UnaryClone& clone, const Congruence& atom) {
  for (const auto& cls : atom.classes()) {
    if (cls.size() < 2) continue;
    std::vector<char> member(a.size(), 0);
    for (int x : cls) member[x] = 1;
    std::vector<int> keep;
    for (int f = 0; f < clone.size(); ++f) {
      bool ok = true;
      for (int x : cls) ok = ok && member[clone.table(f)[x]];
      if (ok) keep.push_back(f);
    }
    for (std::size_t i = 0; i < cls.size(); ++i)
      for (std::size_t j = i + 1; j < cls.size(); ++j) {
        UnionFind uf(a.size());
        for (int f : keep) uf.unite(clone.table(f)[cls[i]], clone.table(f)[cls[j]]);
        int root = uf.find(cls[0]);
        for (int x : cls)
          if (uf.find(x) != root) return false;
      }
  }
  return true;
}

bool check_atom_module(const FiniteAlgebra& a, const AlgCircuit& malcev, const Congruence& atom) {
  for (const auto& cls : atom.classes()) {
    auto [p, k] = prime_power(static_cast<long long>(cls.size()));
    if (cls.size() > 1 && p <= 1) return false;
    std::vector<char> member(a.size(), 0);
    for (int x : cls) member[x] = 1;
    for (int e : cls) {
      auto add = [&](Element x, Element y) {
        Element t[3] = {x, e, y};
        return eval_circuit(malcev, a, t);
      };
      for (int x : cls)
        for (int y : cls) {
          Element s = add(x, y);
          if (!member[s] || s != add(y, x)) return false;
          for (int z : cls)
            if (add(s, z) != add(x, add(y, z))) return false;
        }
      for (int x : cls) {
        if (add(x, e) != x) return false;
        Element acc = x;
        for (long long i = 1; i < p; ++i) acc = add(acc, x);
        if (acc != e) return false;  // every element has order dividing p
      }
    }
  }
  return true;
}

bool check_join_irreducible_chars(CongruenceAnalysis& an) {
  const auto& lat = an.lattice();
  for (int al = 0; al < lat.size(); ++al)
    for (int be = 0; be < lat.size(); ++be) {
      if (al == be || !lat.leq(al, be) || !an.is_pupi(al, be)) continue;
      for (int g : lat.interval(al, be)) {
        if (g == al) continue;
        int inner = 0;
        for (int l : lat.lower_covers(g)) inner += lat.leq(al, l);
        if (inner == 1 && an.charr_set(al, g).size() != 1) return false;
      }
    }
  return true;
}

bool check_equal_coset_sizes(const CongruenceLattice& lat) {
  for (const auto& c : lat.elements()) {
    auto s = c.class_sizes();
    for (int x : s)
      if (x != s[0]) return false;
  }
  return true;
}

}  // namespace nudfa
