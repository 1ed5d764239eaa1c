#include "ctbn/parent_sets.hpp"

#include <algorithm>
#include <string>

#include "ctbn/errors.hpp"

namespace ctbn {

namespace {

// All subsets of `pool` with size <= max_size, ordered by size then
// lexicographically.
std::vector<std::vector<int>> subsets_up_to(const std::vector<int>& pool,
                                            int max_size) {
  std::vector<std::vector<int>> out;
  out.push_back({});
  std::vector<int> current;
  const int n = static_cast<int>(pool.size());
  for (int size = 1; size <= max_size; ++size) {
    std::vector<int> idx(size);
    for (int i = 0; i < size; ++i) idx[i] = i;
    while (true) {
      current.clear();
      for (int i : idx) current.push_back(pool[i]);
      out.push_back(current);
      int k = size - 1;
      while (k >= 0 && idx[k] == n - size + k) --k;
      if (k < 0) break;
      ++idx[k];
      for (int j = k + 1; j < size; ++j) idx[j] = idx[j - 1] + 1;
    }
  }
  return out;
}

}  // namespace

std::vector<std::vector<int>> enumerate_parent_sets(const SearchMode& mode,
                                                    int n, int node) {
  std::vector<int> pool;
  int max_size = 0;
  switch (mode.kind) {
    case SearchMode::Kind::Exhaustive:
      if (n - 1 > 20) {
        throw SearchSpaceTooLargeError(
            "exhaustive search over " + std::to_string(n - 1) +
            " potential parents is infeasible; use greedy or restricted mode");
      }
      for (int j = 0; j < n; ++j) {
        if (j != node) pool.push_back(j);
      }
      max_size = static_cast<int>(pool.size());
      break;
    case SearchMode::Kind::Restricted: {
      if (!mode.prior_graph.has_value()) {
        throw InvalidModelError("restricted mode needs a prior graph");
      }
      pool = mode.prior_graph->parents(node);
      max_size = static_cast<int>(pool.size());
      break;
    }
    case SearchMode::Kind::Greedy:
      if (mode.max_parents < 0 || mode.max_parents > n - 1) {
        throw InvalidModelError("greedy max_parents must be in [0, n-1]");
      }
      for (int j = 0; j < n; ++j) {
        if (j != node) pool.push_back(j);
      }
      max_size = mode.max_parents;
      break;
  }
  return subsets_up_to(pool, max_size);
}

std::vector<int> overcomplete_parents(const SearchMode& mode, int n,
                                      int node) {
  if (mode.kind == SearchMode::Kind::Restricted) {
    return mode.prior_graph->parents(node);
  }
  std::vector<int> pool;
  if (mode.kind == SearchMode::Kind::Greedy && mode.max_parents == 0) {
    return pool;
  }
  for (int j = 0; j < n; ++j) {
    if (j != node) pool.push_back(j);
  }
  return pool;
}

}  // namespace ctbn
