#pragma once

#include "bmt/digraph.hpp"
#include "bmt/distributions.hpp"
#include "bmt/kernel.hpp"
#include "bmt/rational.hpp"

#include <map>
#include <string>
#include <vector>

namespace bmt {

/// One generator per vertex of a digraph, each with a marginal law.
class BmtEnsemble {
 public:
  BmtEnsemble(Digraph graph, MomentSequence shared);
  /// Throws InvalidInput if some vertex has no marginal.
  BmtEnsemble(Digraph graph, std::map<Vertex, MomentSequence> per_vertex);

  const Digraph& graph() const { return graph_; }
  /// Throws InvalidInput for an unknown vertex.
  const MomentSequence& marginal(Vertex v) const;

 private:
  Digraph graph_;
  std::vector<MomentSequence> marginals_;  // by vertex position
};

/// Product over the blocks of ker_G(w) of the block letter's moment of order
/// |block|. The empty word gives 1.
Rational mixed_moment(const BmtEnsemble& e, const Word& w);

/// For a word whose kernel is a pairing: 1 when the relabeled
/// nesting-crossing graph of ker(w) lies in the graph, else 0. Throws
/// InvalidInput unless ker(w) is a pairing and every marginal used is
/// centered with unit variance.
int pair_partition_moment_is_indicator(const BmtEnsemble& e, const Word& w);

/// Letters with exponents: letter k stands for the generator of letters[k]
/// raised to powers[k].
struct PowerWord {
  Word letters;
  std::vector<int> powers;

  static PowerWord plain(const Word& w) { return {w, std::vector<int>(w.size(), 1)}; }
  Word expand() const;
  PowerWord without(std::size_t k) const;
};

/// Outcome of checking an identity on finitely many words.
struct IdentityCheck {
  std::size_t checked = 0;
  std::vector<std::string> failures;

  bool ok() const { return failures.empty(); }
  explicit operator bool() const { return ok(); }
  void expect(bool holds, const std::string& what);
  void merge(const IdentityCheck& other);
};

/// Monotone peak extraction (M.1) at every peak of w and full factorization
/// (M.2) when w is V-shaped, relative to the natural order on labels.
/// Throws InvalidInput if the graph is not a total-order digraph on its
/// vertices or w is not alternating.
IdentityCheck check_monotone_axioms(const BmtEnsemble& e, const PowerWord& w);

/// Weak BM1 at every matching position and BM2 for each word.
/// Throws InvalidInput if the graph differs from order.digraph() or a word
/// is not alternating.
IdentityCheck check_weak_bm(const BmtEnsemble& e, const PartialOrder& order, const std::vector<PowerWord>& words);

/// Every alternating word over the alphabet with length in [1, max_len].
std::vector<Word> alternating_words(const std::vector<Vertex>& alphabet, int max_len);

enum class Independence { Boolean, Monotone, Tensor };

std::string to_string(Independence rel);
Independence parse_independence(std::string_view name);

/// A linear combination of words.
struct Term {
  Rational coeff;
  Word word;
};
using Polynomial = std::vector<Term>;

/// An element of the algebra generated by one group.
struct GroupElement {
  std::size_t group;
  Polynomial poly;
};

/// phi of a product of polynomials, expanded by linearity.
Rational expand_moment(const BmtEnsemble& e, const std::vector<Polynomial>& factors);

/// Throws InvalidInput unless the cross-group edges match rel: none for
/// Boolean, all both ways for Tensor, and for Monotone every vertex of a
/// later group points to every vertex of an earlier group with no edge back.
void check_grouping_precondition(const Digraph& g, const std::vector<std::vector<Vertex>>& groups, Independence rel);

/// Checks that group algebras satisfy the factorization of rel on each
/// alternating product of group elements. Group order is list order.
/// Throws InvalidInput on precondition failures, on a word that is not
/// alternating in groups, or on a term using letters outside its group.
/// Products longer than 6 factors throw CapExceeded.
IdentityCheck check_consistency_grouping(const BmtEnsemble& e, const std::vector<std::vector<Vertex>>& groups,
                                         Independence rel, const std::vector<std::vector<GroupElement>>& words);

}  // namespace bmt
