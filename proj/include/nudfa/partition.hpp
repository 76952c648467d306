#pragma once

#include <string>
#include <vector>

namespace nudfa {

using Element = int;

// Partition of {0..n-1}; cls[x] is the least member of x's block.
struct Congruence {
  std::vector<int> cls;

  static Congruence identity(int n);
  static Congruence total(int n);
  // Canonicalise an arbitrary labelling (equal labels = same block).
  static Congruence from_labels(const std::vector<int>& labels);

  int size() const { return static_cast<int>(cls.size()); }
  int num_classes() const;
  bool related(int a, int b) const { return cls[a] == cls[b]; }
  bool is_identity() const;
  bool is_total() const;
  // Blocks sorted by least member, members ascending.
  std::vector<std::vector<int>> classes() const;
  // Element -> index of its block in classes() order.
  std::vector<int> class_index() const;
  std::vector<int> class_sizes() const;

  bool operator==(const Congruence& o) const { return cls == o.cls; }
  bool operator!=(const Congruence& o) const { return cls != o.cls; }
  bool operator<(const Congruence& o) const { return cls < o.cls; }
};

bool leq(const Congruence& a, const Congruence& b);
Congruence meet(const Congruence& a, const Congruence& b);
Congruence join(const Congruence& a, const Congruence& b);
std::string to_string(const Congruence& c);

// Union-find used by congruence generation.
class UnionFind {
 public:
  explicit UnionFind(int n);
  int find(int x);
  bool unite(int a, int b);  // true if merged
  Congruence partition();

 private:
  std::vector<int> parent_;
};

}  // namespace nudfa
