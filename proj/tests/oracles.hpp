#pragma once

// Brute-force reference implementations. These deliberately avoid the
// library's algorithms so agreement means something.

#include "bmt/digraph.hpp"
#include "bmt/kernel.hpp"
#include "bmt/partitions.hpp"
#include "bmt/rational.hpp"

#include <algorithm>
#include <numeric>
#include <random>
#include <set>
#include <vector>

namespace oracle {

using bmt::Block;
using bmt::Digraph;
using bmt::Edge;
using bmt::Integer;
using bmt::Partition;
using bmt::Vertex;
using bmt::Word;

// All restricted-growth strings of length m, by recursion.
inline void rgs_rec(int m, std::vector<int>& cur, int max_used, std::vector<std::vector<int>>& out) {
  if (static_cast<int>(cur.size()) == m) {
    out.push_back(cur);
    return;
  }
  for (int v = 0; v <= max_used + 1; ++v) {
    cur.push_back(v);
    rgs_rec(m, cur, std::max(max_used, v), out);
    cur.pop_back();
  }
}

inline std::vector<std::vector<int>> all_rgs(int m) {
  std::vector<std::vector<int>> out;
  std::vector<int> cur;
  rgs_rec(m, cur, -1, out);
  return out;
}

inline std::vector<Block> blocks_of(const std::vector<int>& rgs) {
  int k = 0;
  for (int r : rgs) k = std::max(k, r + 1);
  std::vector<Block> out(static_cast<std::size_t>(k));
  for (std::size_t i = 0; i < rgs.size(); ++i) out[static_cast<std::size_t>(rgs[i])].push_back(static_cast<int>(i) + 1);
  return out;
}

// Every element of b lies between c_k and c_{k+1} for a single k.
inline bool nested_quad(const Block& b, const Block& c) {
  for (std::size_t k = 0; k + 1 < c.size(); ++k) {
    bool all = true;
    for (int x : b) all = all && c[k] < x && x < c[k + 1];
    if (all) return true;
  }
  return false;
}

// b_i < c_k < b_j < c_l in either role assignment.
inline bool crossing_quad(const Block& b, const Block& c) {
  auto one = [](const Block& x, const Block& y) {
    for (int a : x)
      for (int p : y)
        for (int bb : x)
          for (int q : y)
            if (a < p && p < bb && bb < q) return true;
    return false;
  };
  return one(b, c) || one(c, b);
}

inline bool straddle(const Block& b, const Block& c) {
  for (int l : b)
    if (c.front() < l && l < c.back()) return true;
  return false;
}

// The defining relation of ker_G for one pair of positions (0-based).
inline bool pairwise_related(const Word& w, const Digraph& g, std::size_t k, std::size_t kk) {
  if (k > kk) std::swap(k, kk);
  if (w[k] != w[kk]) return false;
  for (std::size_t l = k + 1; l < kk; ++l) {
    if (w[l] != w[k] && !g.has_edge(w[l], w[k])) return false;
  }
  return true;
}

// ker_G by the pairwise relation, closed transitively with union-find.
inline std::vector<int> ker_g_pairwise(const Word& w, const Digraph& g) {
  const std::size_t m = w.size();
  std::vector<int> parent(m);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int x) {
    while (parent[static_cast<std::size_t>(x)] != x) x = parent[static_cast<std::size_t>(x)];
    return x;
  };
  for (std::size_t k = 0; k < m; ++k) {
    for (std::size_t kk = k + 1; kk < m; ++kk) {
      if (w[k] != w[kk]) continue;
      bool ok = true;
      for (std::size_t l = k + 1; l < kk; ++l) {
        if (w[l] != w[k] && !g.has_edge(w[l], w[k])) ok = false;
      }
      if (ok) parent[static_cast<std::size_t>(find(static_cast<int>(kk)))] = find(static_cast<int>(k));
    }
  }
  std::vector<int> rgs(m);
  std::vector<int> label(m, -1);
  int next = 0;
  for (std::size_t k = 0; k < m; ++k) {
    int r = find(static_cast<int>(k));
    if (label[static_cast<std::size_t>(r)] == -1) label[static_cast<std::size_t>(r)] = next++;
    rgs[k] = label[static_cast<std::size_t>(r)];
  }
  return rgs;
}

// Edge set {(i_l, i_k) : i_k != i_l, exists k' with k < l < k', i_k = i_k'}.
inline std::set<Edge> direct_relabeled_edges(const Word& w) {
  std::set<Edge> out;
  const std::size_t m = w.size();
  for (std::size_t k = 0; k < m; ++k)
    for (std::size_t l = k + 1; l < m; ++l)
      for (std::size_t kk = l + 1; kk < m; ++kk)
        if (w[k] == w[kk] && w[l] != w[k]) out.emplace(w[l], w[k]);
  return out;
}

// Bijective labellings L of the blocks by 1..n with L(inner) <= L(outer)
// whenever inner is nested in outer.
inline long label_count_by_permutation(const Partition& p) {
  const auto& bs = p.blocks();
  std::vector<int> perm(bs.size());
  std::iota(perm.begin(), perm.end(), 1);
  long count = 0;
  do {
    bool ok = true;
    for (std::size_t i = 0; i < bs.size() && ok; ++i)
      for (std::size_t j = 0; j < bs.size() && ok; ++j)
        if (i != j && nested_quad(bs[i], bs[j]) && perm[i] > perm[j]) ok = false;
    count += ok;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return count;
}

inline Digraph random_digraph(int n, std::mt19937_64& rng, double p = 0.5) {
  std::bernoulli_distribution coin(p);
  std::vector<Edge> edges;
  for (int a = 1; a <= n; ++a)
    for (int b = 1; b <= n; ++b)
      if (a != b && coin(rng)) edges.emplace_back(a, b);
  return Digraph::on_range(n, edges);
}

// Every word of length exactly len over 1..n.
inline std::vector<Word> words_of_length(int n, int len) {
  std::vector<Word> out{Word{}};
  for (int l = 0; l < len; ++l) {
    std::vector<Word> next;
    for (const Word& w : out)
      for (Vertex v = 1; v <= n; ++v) {
        Word x = w;
        x.push_back(v);
        next.push_back(std::move(x));
      }
    out = std::move(next);
  }
  return out;
}

inline std::vector<Word> words_up_to(int n, int max_len) {
  std::vector<Word> out;
  for (int len = 1; len <= max_len; ++len) {
    auto ws = words_of_length(n, len);
    out.insert(out.end(), ws.begin(), ws.end());
  }
  return out;
}

}  // namespace oracle
