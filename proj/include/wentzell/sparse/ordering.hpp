#pragma once

#include <algorithm>
#include <cstddef>
#include <queue>
#include <vector>

#include "wentzell/sparse/csr.hpp"

namespace wentzell {

namespace detail {

/// Adjacency lists of the symmetrized pattern of A, without self loops.
inline std::vector<std::vector<std::size_t>> symmetric_adjacency(const CsrMatrix& a) {
  const std::size_t n = a.nrows();
  std::vector<std::vector<std::size_t>> adj(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = a.row_ptr()[i]; k < a.row_ptr()[i + 1]; ++k) {
      const std::size_t j = a.col_idx()[k];
      if (j == i) continue;
      adj[i].push_back(j);
      adj[j].push_back(i);
    }
  for (auto& l : adj) {
    std::sort(l.begin(), l.end());
    l.erase(std::unique(l.begin(), l.end()), l.end());
  }
  return adj;
}

/// BFS level structure from `root`; returns the nodes of the last level and the depth.
inline std::pair<std::vector<std::size_t>, std::size_t> last_level(
    const std::vector<std::vector<std::size_t>>& adj, std::size_t root,
    std::vector<std::size_t>& level) {
  std::vector<std::size_t> frontier{root};
  std::vector<std::size_t> touched{root};
  level[root] = 0;
  std::size_t depth = 0;
  while (true) {
    std::vector<std::size_t> next;
    for (auto v : frontier)
      for (auto w : adj[v])
        if (level[w] == static_cast<std::size_t>(-1)) {
          level[w] = depth + 1;
          next.push_back(w);
          touched.push_back(w);
        }
    if (next.empty()) break;
    frontier = std::move(next);
    ++depth;
  }
  for (auto v : touched) level[v] = static_cast<std::size_t>(-1);
  return {frontier, depth};
}

}  // namespace detail

/// Reverse Cuthill-McKee ordering of the symmetrized sparsity pattern.
/// Returns `perm` with perm[new_index] = old_index. Each connected component
/// starts from a pseudo-peripheral node (George-Liu search).
inline std::vector<std::size_t> reverse_cuthill_mckee(const CsrMatrix& a) {
  if (a.nrows() != a.ncols()) throw InvalidArgument("reverse_cuthill_mckee: matrix not square");
  const std::size_t n = a.nrows();
  const auto adj = detail::symmetric_adjacency(a);
  const auto degree = [&](std::size_t v) { return adj[v].size(); };

  std::vector<char> visited(n, 0);
  std::vector<std::size_t> level(n, static_cast<std::size_t>(-1));
  std::vector<std::size_t> order;
  order.reserve(n);

  for (std::size_t seed = 0; seed < n; ++seed) {
    if (visited[seed]) continue;
    // minimum degree node of this component as the initial guess
    std::size_t root = seed;
    {
      std::vector<std::size_t> stack{seed};
      std::vector<char> seen(n, 0);
      seen[seed] = 1;
      while (!stack.empty()) {
        auto v = stack.back();
        stack.pop_back();
        if (degree(v) < degree(root)) root = v;
        for (auto w : adj[v])
          if (!seen[w] && !visited[w]) {
            seen[w] = 1;
            stack.push_back(w);
          }
      }
    }
    auto [last, depth] = detail::last_level(adj, root, level);
    while (true) {
      std::size_t best = last.front();
      for (auto v : last)
        if (degree(v) < degree(best)) best = v;
      auto [l2, d2] = detail::last_level(adj, best, level);
      if (d2 <= depth) break;
      root = best;
      last = std::move(l2);
      depth = d2;
    }

    std::queue<std::size_t> q;
    q.push(root);
    visited[root] = 1;
    while (!q.empty()) {
      auto v = q.front();
      q.pop();
      order.push_back(v);
      std::vector<std::size_t> nbrs;
      for (auto w : adj[v])
        if (!visited[w]) nbrs.push_back(w);
      std::stable_sort(nbrs.begin(), nbrs.end(),
                       [&](std::size_t x, std::size_t y) { return degree(x) < degree(y); });
      for (auto w : nbrs) {
        visited[w] = 1;
        q.push(w);
      }
    }
  }
  std::reverse(order.begin(), order.end());
  return order;
}

/// Half-bandwidths (lower, upper) of A after the symmetric permutation `perm`.
inline std::pair<std::size_t, std::size_t> bandwidths(const CsrMatrix& a,
                                                      const std::vector<std::size_t>& perm) {
  std::vector<std::size_t> inv(perm.size());
  for (std::size_t i = 0; i < perm.size(); ++i) inv[perm[i]] = i;
  std::size_t kl = 0, ku = 0;
  for (std::size_t i = 0; i < a.nrows(); ++i)
    for (std::size_t k = a.row_ptr()[i]; k < a.row_ptr()[i + 1]; ++k) {
      const std::size_t r = inv[i], c = inv[a.col_idx()[k]];
      if (r > c) kl = std::max(kl, r - c);
      else ku = std::max(ku, c - r);
    }
  return {kl, ku};
}

}  // namespace wentzell
