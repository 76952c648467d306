#include "nudfa/algebra.hpp"

#include <algorithm>
#include <array>
#include <functional>
#include <stdexcept>
#include <unordered_set>

#include "nudfa/common.hpp"
#include "nudfa/congruence.hpp"

namespace nudfa {

FiniteAlgebra::FiniteAlgebra(std::string name, int size, std::vector<Operation> ops)
    : name_(std::move(name)), size_(size), ops_(std::move(ops)) {
  if (size_ < 1) throw std::invalid_argument("algebra: size must be at least 1");
  std::unordered_set<std::string> names;
  for (const auto& o : ops_) {
    if (o.arity < 0) throw std::invalid_argument("algebra: negative arity for " + o.name);
    if (!names.insert(o.name).second) throw std::invalid_argument("algebra: duplicate operation " + o.name);
    std::size_t expect = 1;
    for (int i = 0; i < o.arity; ++i) expect *= static_cast<std::size_t>(size_);
    if (o.table.size() != expect)
      throw std::invalid_argument("algebra: table of " + o.name + " has length " + std::to_string(o.table.size()) +
                                  ", expected " + std::to_string(expect));
    for (Element v : o.table)
      if (v < 0 || v >= size_) throw std::invalid_argument("algebra: table entry out of range in " + o.name);
  }
}

int FiniteAlgebra::op_index(std::string_view name) const {
  for (int i = 0; i < num_ops(); ++i)
    if (ops_[i].name == name) return i;
  throw std::invalid_argument("unknown operation: " + std::string(name));
}

int FiniteAlgebra::max_arity() const {
  int r = 0;
  for (const auto& o : ops_) r = std::max(r, o.arity);
  return r;
}

Element eval_op(const FiniteAlgebra& a, std::string_view op_name, std::span<const Element> args) {
  int i = a.op_index(op_name);
  if (static_cast<int>(args.size()) != a.op(i).arity)
    throw std::invalid_argument("eval_op: arity mismatch for " + std::string(op_name));
  for (Element x : args)
    if (x < 0 || x >= a.size()) throw std::invalid_argument("eval_op: element out of range");
  return a.apply(i, args);
}

namespace {

std::string key_of(const std::vector<Element>& t) {
  std::string k(t.size() * 2, '\0');
  for (std::size_t i = 0; i < t.size(); ++i) {
    k[2 * i] = static_cast<char>(t[i] & 0xff);
    k[2 * i + 1] = static_cast<char>((t[i] >> 8) & 0xff);
  }
  return k;
}

// Calls f(tuple) for every tuple in [0, hi)^r that contains at least one index
// in [lo, hi).
template <class F>
void for_tuples_touching(int r, int lo, int hi, F&& f) {
  std::vector<int> t(r);
  // position j holds the first index >= lo
  for (int j = 0; j < r; ++j) {
    std::vector<int> lim(r);
    for (int q = 0; q < r; ++q) lim[q] = q < j ? lo : hi;
    bool empty = false;
    for (int q = 0; q < r; ++q)
      if (q != j && lim[q] == 0) empty = true;
    if (empty || hi <= lo) continue;
    std::fill(t.begin(), t.end(), 0);
    t[j] = lo;
    while (true) {
      f(t);
      int q = r - 1;
      for (; q >= 0; --q) {
        int start = q == j ? lo : 0;
        if (++t[q] < lim[q]) break;
        t[q] = start;
      }
      if (q < 0) break;
    }
  }
}

}  // namespace

std::optional<int> UnaryClone::find(const std::vector<Element>& table) const {
  auto it = index_.find(key_of(table));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

void UnaryClone::build(int i, CircuitBuilder& b, std::vector<int>& memo) const {
  if (memo[i] >= 0) return;
  const Derivation& d = derivations_[i];
  if (d.op == -1) {
    memo[i] = b.var(0);
  } else if (d.op == -2) {
    memo[i] = b.constant(d.args[0]);
  } else {
    std::vector<int> ch;
    for (int a : d.args) {
      build(a, b, memo);
      ch.push_back(memo[a]);
    }
    memo[i] = b.gate(d.op, ch);
  }
}

AlgCircuit UnaryClone::witness(int i) const {
  CircuitBuilder b(1);
  std::vector<int> memo(tables_.size(), -1);
  build(i, b, memo);
  return b.build(memo[i]);
}

UnaryClone unary_polynomial_clone(const FiniteAlgebra& a) {
  const int n = a.size();
  const std::size_t cap = budget().clone_functions;
  UnaryClone u;
  u.n_ = n;
  auto add = [&](std::vector<Element> t, UnaryClone::Derivation d) {
    std::string k = key_of(t);
    if (u.index_.count(k)) return;
    if (u.tables_.size() >= cap)
      throw BudgetError("unary clone exceeds budget of " + std::to_string(cap) + " functions (partial count " +
                        std::to_string(u.tables_.size()) + ")");
    u.index_.emplace(std::move(k), static_cast<int>(u.tables_.size()));
    u.tables_.push_back(std::move(t));
    u.derivations_.push_back(std::move(d));
  };
  std::vector<Element> id(n);
  for (int x = 0; x < n; ++x) id[x] = x;
  add(id, {-1, {}});
  for (int c = 0; c < n; ++c) add(std::vector<Element>(n, c), {-2, {c}});

  std::vector<Element> args;
  for (int i = 0; i < u.size(); ++i) {
    for (int op = 0; op < a.num_ops(); ++op) {
      int r = a.op(op).arity;
      if (r == 0) continue;
      for_tuples_touching(r, i, i + 1, [&](const std::vector<int>& t) {
        std::vector<Element> out(n);
        args.resize(r);
        for (int x = 0; x < n; ++x) {
          for (int q = 0; q < r; ++q) args[q] = u.tables_[t[q]][x];
          out[x] = a.apply(op, args);
        }
        add(std::move(out), {op, t});
      });
    }
  }
  return u;
}

bool is_malcev(const AlgCircuit& d, const FiniteAlgebra& a) {
  if (d.num_vars != 3) return false;
  for (Element x = 0; x < a.size(); ++x)
    for (Element y = 0; y < a.size(); ++y) {
      Element t1[3] = {y, x, x}, t2[3] = {x, x, y};
      if (eval_circuit(d, a, t1) != y || eval_circuit(d, a, t2) != y) return false;
    }
  return true;
}

std::optional<AlgCircuit> find_malcev_polynomial(const FiniteAlgebra& a, int depth_bound) {
  if (depth_bound < 1) throw std::invalid_argument("find_malcev_polynomial: depth bound must be positive");
  const int n = a.size();
  // Only the points (y,x,x) and (x,x,y) matter; composition is pointwise, so
  // tables restricted to these points are closed under the search.
  std::vector<std::array<Element, 3>> pts;
  std::vector<Element> target;
  for (Element y = 0; y < n; ++y)
    for (Element x = 0; x < n; ++x) {
      pts.push_back({y, x, x});
      target.push_back(y);
      if (x != y) {
        pts.push_back({x, x, y});
        target.push_back(y);
      }
    }
  struct Deriv {
    int op;  // -1 variable, -2 constant
    int leaf;
    std::vector<int> args;
  };
  std::vector<std::vector<Element>> tables;
  std::vector<Deriv> derivs;
  std::unordered_map<std::string, int> seen;
  const std::size_t cap = budget().malcev_functions;
  int found = -1;
  auto add = [&](std::vector<Element> t, Deriv d) {
    std::string k = key_of(t);
    if (seen.count(k)) return;
    seen.emplace(std::move(k), static_cast<int>(tables.size()));
    if (t == target && found < 0) found = static_cast<int>(tables.size());
    tables.push_back(std::move(t));
    derivs.push_back(std::move(d));
  };
  for (int v = 0; v < 3; ++v) {
    std::vector<Element> t(pts.size());
    for (std::size_t i = 0; i < pts.size(); ++i) t[i] = pts[i][v];
    add(std::move(t), {-1, v, {}});
  }
  for (Element c = 0; c < n; ++c) add(std::vector<Element>(pts.size(), c), {-2, c, {}});
  for (int op = 0; op < a.num_ops(); ++op)
    if (a.op(op).arity == 0) {
      std::vector<Element> none;
      add(std::vector<Element>(pts.size(), a.apply(op, none)), {op, 0, {}});
    }

  int lo = 0;
  std::vector<Element> args;
  for (int depth = 1; depth <= depth_bound && found < 0; ++depth) {
    int hi = static_cast<int>(tables.size());
    if (lo == hi) break;  // clone exhausted
    for (int op = 0; op < a.num_ops() && found < 0; ++op) {
      int r = a.op(op).arity;
      if (r == 0) continue;
      for_tuples_touching(r, lo, hi, [&](const std::vector<int>& t) {
        if (found >= 0) return;
        std::vector<Element> out(pts.size());
        args.resize(r);
        for (std::size_t i = 0; i < pts.size(); ++i) {
          for (int q = 0; q < r; ++q) args[q] = tables[t[q]][i];
          out[i] = a.apply(op, args);
        }
        add(std::move(out), {op, 0, t});
        if (tables.size() > cap) throw BudgetError("Malcev search exceeds budget of " + std::to_string(cap) + " functions");
      });
    }
    lo = hi;
  }
  if (found < 0) return std::nullopt;

  CircuitBuilder b(3);
  std::vector<int> memo(tables.size(), -1);
  std::function<int(int)> build = [&](int i) -> int {
    if (memo[i] >= 0) return memo[i];
    const Deriv& d = derivs[i];
    int id;
    if (d.op == -1) {
      id = b.var(d.leaf);
    } else if (d.op == -2) {
      id = b.constant(d.leaf);
    } else {
      std::vector<int> ch;
      for (int x : d.args) ch.push_back(build(x));
      id = b.gate(d.op, ch);
    }
    return memo[i] = id;
  };
  AlgCircuit c = b.build(build(found));
  if (!is_malcev(c, a)) throw std::logic_error("find_malcev_polynomial: result fails the identities");
  return c;
}

bool is_compatible(const FiniteAlgebra& a, const Congruence& theta) {
  if (theta.size() != a.size()) return false;
  std::vector<Element> args, reps;
  for (int op = 0; op < a.num_ops(); ++op) {
    int r = a.op(op).arity;
    std::size_t count = a.op(op).table.size();
    args.assign(r, 0);
    reps.assign(r, 0);
    for (std::size_t idx = 0; idx < count; ++idx) {
      std::size_t rest = idx;
      for (int q = r - 1; q >= 0; --q) {
        args[q] = static_cast<Element>(rest % a.size());
        rest /= a.size();
        reps[q] = theta.cls[args[q]];
      }
      if (!theta.related(a.apply(op, args), a.apply(op, reps))) return false;
    }
  }
  return true;
}

Quotient quotient_algebra(const FiniteAlgebra& a, const Congruence& theta) {
  if (!is_compatible(a, theta)) throw std::invalid_argument("quotient_algebra: partition is not a congruence");
  Quotient q;
  q.projection = theta.class_index();
  int k = theta.num_classes();
  q.representatives.assign(k, -1);
  for (int x = a.size() - 1; x >= 0; --x) q.representatives[q.projection[x]] = x;
  std::vector<Operation> ops;
  std::vector<Element> args;
  for (const auto& o : a.ops()) {
    Operation qo{o.name, o.arity, {}};
    std::size_t count = 1;
    for (int i = 0; i < o.arity; ++i) count *= static_cast<std::size_t>(k);
    qo.table.resize(count);
    args.assign(o.arity, 0);
    for (std::size_t idx = 0; idx < count; ++idx) {
      std::size_t rest = idx;
      for (int i = o.arity - 1; i >= 0; --i) {
        args[i] = q.representatives[rest % k];
        rest /= k;
      }
      std::size_t t = 0;
      for (Element x : args) t = t * a.size() + x;
      qo.table[idx] = q.projection[o.table[t]];
    }
    ops.push_back(std::move(qo));
  }
  q.algebra = FiniteAlgebra(a.name() + "/" + to_string(theta), k, std::move(ops));
  return q;
}

bool is_valid_decomposition(const FiniteAlgebra& a, const Decomposition& d) {
  int n = a.size();
  if (d.factors.empty() || d.factors.size() != d.factor_sizes.size()) return false;
  long long prod = 1;
  Congruence all = Congruence::total(n);
  for (std::size_t i = 0; i < d.factors.size(); ++i) {
    if (d.factors[i].size() != n || !is_compatible(a, d.factors[i])) return false;
    if (d.factors[i].num_classes() != d.factor_sizes[i]) return false;
    prod *= d.factor_sizes[i];
    all = meet(all, d.factors[i]);
  }
  if (prod != n || !all.is_identity()) return false;
  for (std::size_t i = 0; i < d.factors.size(); ++i) {
    Congruence others = Congruence::total(n);
    for (std::size_t j = 0; j < d.factors.size(); ++j)
      if (j != i) others = meet(others, d.factors[j]);
    if (!join(d.factors[i], others).is_total()) return false;
  }
  return true;
}

std::optional<Decomposition> prime_power_decomposition(const FiniteAlgebra& a, const CongruenceLattice& lat) {
  int n = a.size();
  if (n == 1 || prime_power(n).first != 0) {
    return Decomposition{{Congruence::identity(n)}, {n}};
  }
  std::vector<long long> primes = prime_factors(n);
  std::vector<std::vector<int>> candidates;
  for (long long p : primes) {
    long long part = 1;
    for (int m = n; m % p == 0; m /= static_cast<int>(p)) part *= p;
    std::vector<int> c;
    for (int i = 0; i < lat.size(); ++i)
      if (lat.element(i).num_classes() == part) c.push_back(i);
    if (c.empty()) return std::nullopt;
    candidates.push_back(std::move(c));
  }
  std::vector<std::size_t> pick(primes.size(), 0);
  while (true) {
    Decomposition d;
    for (std::size_t i = 0; i < primes.size(); ++i) {
      d.factors.push_back(lat.element(candidates[i][pick[i]]));
      d.factor_sizes.push_back(d.factors.back().num_classes());
    }
    if (is_valid_decomposition(a, d)) {
      // report factors in lattice order
      std::vector<std::size_t> ord(primes.size());
      for (std::size_t i = 0; i < ord.size(); ++i) ord[i] = i;
      std::sort(ord.begin(), ord.end(),
                [&](std::size_t x, std::size_t y) { return candidates[x][pick[x]] < candidates[y][pick[y]]; });
      Decomposition out;
      for (std::size_t i : ord) {
        out.factors.push_back(d.factors[i]);
        out.factor_sizes.push_back(d.factor_sizes[i]);
      }
      return out;
    }
    std::size_t q = primes.size();
    while (q > 0) {
      --q;
      if (++pick[q] < candidates[q].size()) break;
      pick[q] = 0;
      if (q == 0) return std::nullopt;
    }
  }
}

}  // namespace nudfa
