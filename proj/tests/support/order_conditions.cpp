#include "order_conditions.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

namespace mppfv::testing {

int RootedTree::order() const {
  int n = 1;
  for (const auto& c : children) n += c.order();
  return n;
}

double RootedTree::density() const {
  double g = order();
  for (const auto& c : children) g *= c.density();
  return g;
}

std::string RootedTree::str() const {
  if (children.empty()) return ".";
  std::string s = "[";
  for (const auto& c : children) s += c.str();
  return s + "]";
}

namespace {

// Trees of order n as sorted multisets of subtrees. Canonical strings decide
// ordering so that each tree is produced once.
void partitions(int remaining, std::size_t min_index, const std::vector<RootedTree>& pool,
                std::vector<RootedTree>& current, std::vector<RootedTree>& out) {
  if (remaining == 0) {
    out.push_back(RootedTree{current});
    return;
  }
  for (std::size_t k = min_index; k < pool.size(); ++k) {
    const int w = pool[k].order();
    if (w > remaining) continue;
    current.push_back(pool[k]);
    partitions(remaining - w, k, pool, current, out);
    current.pop_back();
  }
}

}  // namespace

std::vector<RootedTree> rooted_trees(int max_order) {
  std::vector<RootedTree> all;
  for (int n = 1; n <= max_order; ++n) {
    std::vector<RootedTree> current, made;
    partitions(n - 1, 0, all, current, made);
    all.insert(all.end(), made.begin(), made.end());
  }
  return all;
}

double OrderCondition::residual() const { return std::abs(weight - expected); }

std::vector<OrderCondition> order_conditions(const std::vector<std::vector<double>>& a,
                                             const std::vector<double>& b, int max_order) {
  const std::size_t m = b.size();
  std::function<std::vector<double>(const RootedTree&)> phi = [&](const RootedTree& t) {
    std::vector<double> v(m, 1.0);
    for (const auto& c : t.children) {
      const auto pc = phi(c);
      for (std::size_t i = 0; i < m; ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j < m; ++j) s += a[i][j] * pc[j];
        v[i] *= s;
      }
    }
    return v;
  };
  std::vector<OrderCondition> out;
  for (const auto& t : rooted_trees(max_order)) {
    const auto p = phi(t);
    double w = 0.0;
    for (std::size_t i = 0; i < m; ++i) w += b[i] * p[i];
    out.push_back({t, w, 1.0 / t.density()});
  }
  return out;
}

}  // namespace mppfv::testing
