#pragma once

#include "bmt/digraph.hpp"
#include "bmt/partitions.hpp"

#include <string>
#include <string_view>
#include <vector>

namespace bmt {

/// A tuple of vertex labels (i_1, ..., i_m).
using Word = std::vector<Vertex>;

/// "1,8,8,4" -> {1,8,8,4}. Throws InvalidInput on anything else.
Word parse_word(std::string_view text);
std::string to_string(const Word& w);

/// Positions grouped by equal letters. Throws InvalidInput on an empty word.
Partition ker(const Word& w);

struct KernelResult {
  Partition ker;
  Partition ker_g;
  bool equal;
};

/// Two occurrences of a letter v stay together unless some letter u != v
/// between them has no edge (u, v) in g.
/// Throws InvalidInput if a letter is not a vertex of g.
KernelResult ker_g(const Word& w, const Digraph& g);

/// Nesting-crossing graph of p with each block renamed to its letter in w.
/// Throws InvalidInput unless ker(w) == p.
Digraph relabeled_ncg(const Partition& p, const Word& w);

/// Whether the relabeled nesting-crossing graph of ker(w) sits inside g.
bool kernel_equality_criterion(const Word& w, const Digraph& g);

}  // namespace bmt
