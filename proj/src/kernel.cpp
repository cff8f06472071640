#include "bmt/kernel.hpp"

#include "bmt/errors.hpp"

#include <charconv>
#include <map>

namespace bmt {

Word parse_word(std::string_view text) {
  Word w;
  if (text.empty()) return w;
  std::size_t start = 0;
  while (true) {
    auto comma = text.find(',', start);
    std::string_view tok = text.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start);
    while (!tok.empty() && tok.front() == ' ') tok.remove_prefix(1);
    while (!tok.empty() && tok.back() == ' ') tok.remove_suffix(1);
    int v = 0;
    auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (tok.empty() || ec != std::errc() || ptr != tok.data() + tok.size() || v < 1) {
      throw InvalidInput("bad letter '" + std::string(tok) + "' in word");
    }
    w.push_back(v);
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return w;
}

std::string to_string(const Word& w) {
  std::string out;
  for (std::size_t k = 0; k < w.size(); ++k) {
    if (k) out += ',';
    out += std::to_string(w[k]);
  }
  return out;
}

Partition ker(const Word& w) {
  if (w.empty()) throw InvalidInput("kernel of an empty word");
  std::map<Vertex, int> label;
  std::vector<int> rgs;
  rgs.reserve(w.size());
  for (Vertex v : w) {
    auto [it, fresh] = label.emplace(v, static_cast<int>(label.size()));
    rgs.push_back(it->second);
  }
  return Partition::from_rgs(std::move(rgs));
}

KernelResult ker_g(const Word& w, const Digraph& g) {
  Partition k = ker(w);
  const std::size_t m = w.size();
  std::vector<std::size_t> idx(m);
  for (std::size_t p = 0; p < m; ++p) {
    auto i = g.index_of(w[p]);
    if (!i) throw InvalidInput("letter " + std::to_string(w[p]) + " is not a vertex of the graph");
    idx[p] = *i;
  }
  std::map<Vertex, std::pair<std::size_t, int>> last;  // letter -> (position, block)
  std::vector<int> owner(m);
  int blocks = 0;
  for (std::size_t p = 0; p < m; ++p) {
    auto it = last.find(w[p]);
    int block = -1;
    if (it != last.end()) {
      bool joined = true;
      for (std::size_t l = it->second.first + 1; l < p && joined; ++l) {
        joined = g.has_edge_at(idx[l], idx[p]);
      }
      if (joined) block = it->second.second;
    }
    if (block == -1) block = blocks++;
    owner[p] = block;
    last[w[p]] = {p, block};
  }
  // Blocks were numbered in order of first element, so owner is already a
  // restricted-growth string.
  Partition kg = Partition::from_rgs(std::move(owner));
  bool equal = kg == k;
  return {std::move(k), std::move(kg), equal};
}

Digraph relabeled_ncg(const Partition& p, const Word& w) {
  if (w.empty() || ker(w) != p) throw InvalidInput("word does not have kernel " + p.to_string());
  Digraph ncg = nesting_crossing_graph(p);
  std::vector<Vertex> letters;
  for (const Block& b : p.blocks()) letters.push_back(w[static_cast<std::size_t>(b.front() - 1)]);
  std::vector<Edge> edges;
  for (const Edge& e : ncg.edges()) {
    edges.emplace_back(letters[static_cast<std::size_t>(e.first - 1)], letters[static_cast<std::size_t>(e.second - 1)]);
  }
  return Digraph(letters, edges);
}

bool kernel_equality_criterion(const Word& w, const Digraph& g) {
  for (Vertex v : w) {
    if (!g.has_vertex(v)) throw InvalidInput("letter " + std::to_string(v) + " is not a vertex of the graph");
  }
  return is_subgraph(relabeled_ncg(ker(w), w), g);
}

}  // namespace bmt
