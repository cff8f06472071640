#include "bmt/moments.hpp"

#include "bmt/errors.hpp"

#include <algorithm>

namespace bmt {

BmtEnsemble::BmtEnsemble(Digraph graph, MomentSequence shared)
    : graph_(std::move(graph)), marginals_(graph_.num_vertices(), shared) {}

BmtEnsemble::BmtEnsemble(Digraph graph, std::map<Vertex, MomentSequence> per_vertex) : graph_(std::move(graph)) {
  for (Vertex v : graph_.vertices()) {
    auto it = per_vertex.find(v);
    if (it == per_vertex.end()) throw InvalidInput("vertex " + std::to_string(v) + " has no marginal");
    marginals_.push_back(it->second);
  }
}

const MomentSequence& BmtEnsemble::marginal(Vertex v) const {
  auto i = graph_.index_of(v);
  if (!i) throw InvalidInput("vertex " + std::to_string(v) + " is not in the ensemble");
  return marginals_[*i];
}

Rational mixed_moment(const BmtEnsemble& e, const Word& w) {
  if (w.empty()) return 1;
  KernelResult k = ker_g(w, e.graph());
  Rational product = 1;
  for (const Block& b : k.ker_g.blocks()) {
    product *= e.marginal(w[static_cast<std::size_t>(b.front() - 1)]).moment(static_cast<int>(b.size()));
    if (product == 0) break;
  }
  return product;
}

int pair_partition_moment_is_indicator(const BmtEnsemble& e, const Word& w) {
  if (w.empty()) throw InvalidInput("empty word has no pairing kernel");
  Partition p = ker(w);
  if (!p.is_pairing()) throw InvalidInput("kernel " + p.to_string() + " is not a pairing");
  for (Vertex v : w) {
    const MomentSequence& m = e.marginal(v);
    if (m.moment(1) != 0 || m.moment(2) != 1) {
      throw InvalidInput("marginal of vertex " + std::to_string(v) + " is not centered with unit variance");
    }
  }
  Word letters = w;
  std::sort(letters.begin(), letters.end());
  letters.erase(std::unique(letters.begin(), letters.end()), letters.end());
  return is_subgraph(relabeled_ncg(p, w), restrict(e.graph(), letters)) ? 1 : 0;
}

Word PowerWord::expand() const {
  if (powers.size() != letters.size()) throw InvalidInput("power word needs one exponent per letter");
  Word out;
  for (std::size_t k = 0; k < letters.size(); ++k) {
    if (powers[k] < 1) throw InvalidInput("exponents must be positive");
    out.insert(out.end(), static_cast<std::size_t>(powers[k]), letters[k]);
  }
  return out;
}

PowerWord PowerWord::without(std::size_t k) const {
  PowerWord out = *this;
  out.letters.erase(out.letters.begin() + static_cast<std::ptrdiff_t>(k));
  out.powers.erase(out.powers.begin() + static_cast<std::ptrdiff_t>(k));
  return out;
}

void IdentityCheck::expect(bool holds, const std::string& what) {
  ++checked;
  if (!holds) failures.push_back(what);
}

void IdentityCheck::merge(const IdentityCheck& other) {
  checked += other.checked;
  failures.insert(failures.end(), other.failures.begin(), other.failures.end());
}

namespace {

void require_alternating(const Word& w) {
  for (std::size_t k = 1; k < w.size(); ++k) {
    if (w[k] == w[k - 1]) throw InvalidInput("word " + to_string(w) + " is not alternating");
  }
}

std::string describe(const PowerWord& w) {
  std::string out;
  for (std::size_t k = 0; k < w.letters.size(); ++k) {
    if (k) out += ' ';
    out += "a" + std::to_string(w.letters[k]);
    if (w.powers[k] != 1) out += "^" + std::to_string(w.powers[k]);
  }
  return out;
}

Rational phi(const BmtEnsemble& e, const PowerWord& w) { return mixed_moment(e, w.expand()); }

Rational single(const BmtEnsemble& e, const PowerWord& w, std::size_t k) {
  return e.marginal(w.letters[k]).moment(w.powers[k]);
}

Rational product_of_singles(const BmtEnsemble& e, const PowerWord& w) {
  Rational out = 1;
  for (std::size_t k = 0; k < w.letters.size(); ++k) out *= single(e, w, k);
  return out;
}

}  // namespace

IdentityCheck check_monotone_axioms(const BmtEnsemble& e, const PowerWord& w) {
  const Digraph& g = e.graph();
  for (Vertex a : g.vertices()) {
    for (Vertex b : g.vertices()) {
      if (a != b && g.has_edge(a, b) != (b < a)) throw InvalidInput("graph is not the digraph of the natural total order");
    }
  }
  require_alternating(w.letters);
  IdentityCheck check;
  const Rational lhs = phi(e, w);
  const auto& l = w.letters;
  for (std::size_t k = 1; k + 1 < l.size(); ++k) {
    if (l[k - 1] < l[k] && l[k] > l[k + 1]) {
      check.expect(lhs == single(e, w, k) * phi(e, w.without(k)), "M.1 at position " + std::to_string(k + 1) + " of " + describe(w));
    }
  }
  std::size_t bottom = 0;
  while (bottom + 1 < l.size() && l[bottom] > l[bottom + 1]) ++bottom;
  std::size_t k = bottom;
  while (k + 1 < l.size() && l[k] < l[k + 1]) ++k;
  if (k + 1 == l.size()) check.expect(lhs == product_of_singles(e, w), "M.2 for " + describe(w));
  return check;
}

IdentityCheck check_weak_bm(const BmtEnsemble& e, const PartialOrder& order, const std::vector<PowerWord>& words) {
  if (!(e.graph() == order.digraph())) throw InvalidInput("ensemble graph is not the digraph of the given order");
  IdentityCheck check;
  for (const PowerWord& w : words) {
    require_alternating(w.letters);
    const auto& l = w.letters;
    const Rational lhs = phi(e, w);
    auto below = [&](Vertex a, Vertex b) { return order.below(a, b); };
    auto incomparable = [&](Vertex a, Vertex b) { return order.incomparable(a, b); };
    for (std::size_t k = 1; k + 1 < l.size(); ++k) {
      Vertex prev = l[k - 1], cur = l[k], next = l[k + 1];
      bool pattern = (below(prev, cur) && below(next, cur)) || (incomparable(prev, cur) && below(next, cur)) ||
                     (below(prev, cur) && incomparable(cur, next));
      if (pattern) {
        check.expect(lhs == single(e, w, k) * phi(e, w.without(k)),
                     "weak BM1 at position " + std::to_string(k + 1) + " of " + describe(w));
      }
    }
    // BM2: consecutive steps read as down*, incomparable*, up*.
    std::size_t k = 0;
    while (k + 1 < l.size() && below(l[k + 1], l[k])) ++k;
    while (k + 1 < l.size() && incomparable(l[k], l[k + 1])) ++k;
    while (k + 1 < l.size() && below(l[k], l[k + 1])) ++k;
    if (k + 1 >= l.size()) check.expect(lhs == product_of_singles(e, w), "BM2 for " + describe(w));
  }
  return check;
}

std::vector<Word> alternating_words(const std::vector<Vertex>& alphabet, int max_len) {
  std::vector<Word> out;
  std::vector<Word> frontier{Word{}};
  for (int len = 1; len <= max_len; ++len) {
    std::vector<Word> next;
    for (const Word& w : frontier) {
      for (Vertex v : alphabet) {
        if (!w.empty() && w.back() == v) continue;
        Word x = w;
        x.push_back(v);
        next.push_back(x);
      }
    }
    out.insert(out.end(), next.begin(), next.end());
    frontier = std::move(next);
  }
  return out;
}

std::string to_string(Independence rel) {
  switch (rel) {
    case Independence::Boolean: return "boolean";
    case Independence::Monotone: return "monotone";
    case Independence::Tensor: return "tensor";
  }
  return "?";
}

Independence parse_independence(std::string_view name) {
  for (auto rel : {Independence::Boolean, Independence::Monotone, Independence::Tensor}) {
    if (to_string(rel) == name) return rel;
  }
  throw InvalidInput("unknown independence '" + std::string(name) + "'");
}

Rational expand_moment(const BmtEnsemble& e, const std::vector<Polynomial>& factors) {
  Rational total = 0;
  std::vector<std::size_t> choice(factors.size(), 0);
  for (const Polynomial& p : factors) {
    if (p.empty()) return 0;
  }
  while (true) {
    Rational coeff = 1;
    Word word;
    for (std::size_t f = 0; f < factors.size(); ++f) {
      const Term& t = factors[f][choice[f]];
      coeff *= t.coeff;
      word.insert(word.end(), t.word.begin(), t.word.end());
    }
    if (coeff != 0) total += coeff * mixed_moment(e, word);
    std::size_t f = 0;
    while (f < factors.size() && ++choice[f] == factors[f].size()) choice[f++] = 0;
    if (f == factors.size()) break;
  }
  return total;
}

void check_grouping_precondition(const Digraph& g, const std::vector<std::vector<Vertex>>& groups, Independence rel) {
  std::vector<Vertex> seen;
  for (const auto& group : groups) {
    if (group.empty()) throw InvalidInput("groups must be non-empty");
    for (Vertex v : group) {
      if (!g.has_vertex(v)) throw InvalidInput("group vertex " + std::to_string(v) + " not in graph");
      if (std::find(seen.begin(), seen.end(), v) != seen.end()) throw InvalidInput("groups overlap at " + std::to_string(v));
      seen.push_back(v);
    }
  }
  if (seen.size() != g.num_vertices()) throw InvalidInput("groups must cover every vertex");
  for (std::size_t j = 0; j < groups.size(); ++j) {
    for (std::size_t jj = 0; jj < groups.size(); ++jj) {
      if (j == jj) continue;
      for (Vertex a : groups[j]) {
        for (Vertex b : groups[jj]) {
          bool edge = g.has_edge(a, b);
          bool want = rel == Independence::Tensor || (rel == Independence::Monotone && j > jj);
          if (edge != want) {
            throw InvalidInput("cross-group edge pattern does not give " + to_string(rel) + " independence (pair " +
                               std::to_string(a) + "," + std::to_string(b) + ")");
          }
        }
      }
    }
  }
}

IdentityCheck check_consistency_grouping(const BmtEnsemble& e, const std::vector<std::vector<Vertex>>& groups,
                                         Independence rel, const std::vector<std::vector<GroupElement>>& words) {
  check_grouping_precondition(e.graph(), groups, rel);
  IdentityCheck check;
  for (const auto& word : words) {
    if (word.empty()) continue;
    if (word.size() > 6) throw CapExceeded("grouped products are capped at 6 factors");
    std::vector<std::size_t> gs;
    std::vector<Polynomial> polys;
    for (const GroupElement& el : word) {
      if (el.group >= groups.size()) throw InvalidInput("group index out of range");
      for (const Term& t : el.poly) {
        for (Vertex v : t.word) {
          if (std::find(groups[el.group].begin(), groups[el.group].end(), v) == groups[el.group].end()) {
            throw InvalidInput("letter " + std::to_string(v) + " is outside group " + std::to_string(el.group));
          }
        }
      }
      gs.push_back(el.group);
      polys.push_back(el.poly);
    }
    for (std::size_t k = 1; k < gs.size(); ++k) {
      if (gs[k] == gs[k - 1]) throw InvalidInput("grouped product is not alternating");
    }
    std::string label = "groups";
    for (std::size_t gi : gs) label += " " + std::to_string(gi);
    const Rational lhs = expand_moment(e, polys);
    auto singles = [&] {
      Rational out = 1;
      for (const Polynomial& p : polys) out *= expand_moment(e, {p});
      return out;
    };
    switch (rel) {
      case Independence::Boolean: check.expect(lhs == singles(), "boolean factorization for " + label); break;
      case Independence::Tensor: {
        Rational rhs = 1;
        std::vector<bool> used(gs.size(), false);
        for (std::size_t a = 0; a < gs.size(); ++a) {
          if (used[a]) continue;
          std::vector<Polynomial> block;
          for (std::size_t b = a; b < gs.size(); ++b) {
            if (gs[b] == gs[a]) {
              used[b] = true;
              block.push_back(polys[b]);
            }
          }
          rhs *= expand_moment(e, block);
        }
        check.expect(lhs == rhs, "tensor factorization for " + label);
        break;
      }
      case Independence::Monotone: {
        for (std::size_t k = 1; k + 1 < gs.size(); ++k) {
          if (gs[k - 1] < gs[k] && gs[k] > gs[k + 1]) {
            std::vector<Polynomial> rest = polys;
            rest.erase(rest.begin() + static_cast<std::ptrdiff_t>(k));
            check.expect(lhs == expand_moment(e, {polys[k]}) * expand_moment(e, rest),
                         "monotone peak at position " + std::to_string(k + 1) + " for " + label);
          }
        }
        std::size_t k = 0;
        while (k + 1 < gs.size() && gs[k] > gs[k + 1]) ++k;
        while (k + 1 < gs.size() && gs[k] < gs[k + 1]) ++k;
        if (k + 1 == gs.size()) check.expect(lhs == singles(), "monotone V-shape for " + label);
        break;
      }
    }
  }
  return check;
}

}  // namespace bmt
