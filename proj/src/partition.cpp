#include "nudfa/partition.hpp"

#include <algorithm>
#include <map>
#include <numeric>

namespace nudfa {

Congruence Congruence::identity(int n) {
  Congruence c;
  c.cls.resize(n);
  std::iota(c.cls.begin(), c.cls.end(), 0);
  return c;
}

Congruence Congruence::total(int n) {
  Congruence c;
  c.cls.assign(n, 0);
  return c;
}

Congruence Congruence::from_labels(const std::vector<int>& labels) {
  std::map<int, int> least;
  for (int x = 0; x < static_cast<int>(labels.size()); ++x) least.emplace(labels[x], x);
  Congruence c;
  c.cls.resize(labels.size());
  for (int x = 0; x < static_cast<int>(labels.size()); ++x) c.cls[x] = least[labels[x]];
  return c;
}

int Congruence::num_classes() const {
  int k = 0;
  for (int x = 0; x < size(); ++x) k += cls[x] == x;
  return k;
}

bool Congruence::is_identity() const { return num_classes() == size(); }
bool Congruence::is_total() const { return num_classes() <= 1; }

std::vector<std::vector<int>> Congruence::classes() const {
  std::vector<int> idx = class_index();
  std::vector<std::vector<int>> out(num_classes());
  for (int x = 0; x < size(); ++x) out[idx[x]].push_back(x);
  return out;
}

std::vector<int> Congruence::class_index() const {
  std::vector<int> rank(size(), -1), idx(size());
  int k = 0;
  for (int x = 0; x < size(); ++x)
    if (cls[x] == x) rank[x] = k++;
  for (int x = 0; x < size(); ++x) idx[x] = rank[cls[x]];
  return idx;
}

std::vector<int> Congruence::class_sizes() const {
  std::vector<int> idx = class_index();
  std::vector<int> out(num_classes(), 0);
  for (int x = 0; x < size(); ++x) ++out[idx[x]];
  return out;
}

bool leq(const Congruence& a, const Congruence& b) {
  for (int x = 0; x < a.size(); ++x)
    if (b.cls[x] != b.cls[a.cls[x]]) return false;
  return true;
}

Congruence meet(const Congruence& a, const Congruence& b) {
  std::vector<int> labels(a.size());
  for (int x = 0; x < a.size(); ++x) labels[x] = a.cls[x] * a.size() + b.cls[x];
  return Congruence::from_labels(labels);
}

Congruence join(const Congruence& a, const Congruence& b) {
  UnionFind uf(a.size());
  for (int x = 0; x < a.size(); ++x) {
    uf.unite(x, a.cls[x]);
    uf.unite(x, b.cls[x]);
  }
  return uf.partition();
}

std::string to_string(const Congruence& c) {
  std::string s = "{";
  bool first_block = true;
  for (const auto& block : c.classes()) {
    if (!first_block) s += ",";
    first_block = false;
    s += "{";
    for (std::size_t i = 0; i < block.size(); ++i) {
      if (i) s += ",";
      s += std::to_string(block[i]);
    }
    s += "}";
  }
  return s + "}";
}

UnionFind::UnionFind(int n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0); }

int UnionFind::find(int x) {
  while (parent_[x] != x) {
    parent_[x] = parent_[parent_[x]];
    x = parent_[x];
  }
  return x;
}

bool UnionFind::unite(int a, int b) {
  a = find(a);
  b = find(b);
  if (a == b) return false;
  if (a < b) std::swap(a, b);
  parent_[a] = b;  // keep the smaller root
  return true;
}

Congruence UnionFind::partition() {
  std::vector<int> labels(parent_.size());
  for (int x = 0; x < static_cast<int>(parent_.size()); ++x) labels[x] = find(x);
  return Congruence::from_labels(labels);
}

}  // namespace nudfa
