#pragma once

#include "bmt/digraph.hpp"
#include "bmt/distributions.hpp"
#include "bmt/moments.hpp"
#include "bmt/partitions.hpp"
#include "bmt/rational.hpp"

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace bmt {

enum class Normalization { SqrtN, None };

/// raw / N^{m/2} (SqrtN) or raw (None). With odd m and N not a square the
/// value is irrational, so it is kept in this split form.
struct NormalizedMoment {
  Rational raw;
  long n = 1;
  int m = 0;
  Normalization normalization = Normalization::None;

  bool is_rational() const;
  /// Throws InvalidInput when the value is irrational.
  Rational rational() const;
  double to_double() const;
  /// |value - reference| <= bound, decided exactly. An irrational value is
  /// only comparable against reference 0.
  bool within(const Rational& reference, const Rational& bound) const;
  std::string to_string() const;
};

/// Total injective labelings the class engine will enumerate.
inline constexpr double kLabelingBudget = 1e8;
/// Total words the naive engine will enumerate.
inline constexpr double kNaiveBudget = 1e7;

/// Sum over all words of length m in the vertices of g of mixed_moment,
/// with every vertex carrying `marginal`, optionally divided by
/// N^{m/2} where N = |V(g)|. Words are grouped by their kernel and each
/// kernel class is walked through its injective labelings. Throws
/// CapExceeded above kLabelingBudget or the partition cap.
NormalizedMoment exact_sum_moment(const Digraph& g, const MomentSequence& marginal, int m,
                                  Normalization normalization = Normalization::SqrtN);

/// Same value by evaluating every word with the kernel module. Throws
/// CapExceeded when N^m exceeds kNaiveBudget.
NormalizedMoment exact_sum_moment_naive(const Digraph& g, const MomentSequence& marginal, int m,
                                        Normalization normalization = Normalization::SqrtN);

/// Injective labelings of the blocks of p by vertices of g whose relabeled
/// nesting-crossing graph lies in g.
Integer count_indicator_labelings(const Digraph& g, const Partition& p);

/// N^{-m/2} times the number of words with a pairing kernel whose relabeled
/// nesting-crossing graph lies in g. Throws InvalidInput for odd m.
Rational clt_leading_term(const Digraph& g, int m);

/// Moment m of sum_p sqrt(w_p) x_p where the x_p are BMT independent over h
/// with the given marginals. Every term with an odd number of letters from
/// a part must vanish; otherwise InvalidInput.
Rational block_mixture_moment(const Digraph& h, const std::vector<MomentSequence>& marginals,
                              const std::vector<Rational>& weights, int m);

/// Limit of the normalized m-th moment for a family, when it is known:
/// empty and star give the symmetric Bernoulli law, complete the Gaussian,
/// total the arcsine, and turan (fixed r), bipartite and cliquepair a
/// block mixture.
std::optional<Rational> clt_reference(const FamilyTemplate& family, int m);

struct CltConfig {
  FamilyTemplate family;
  MomentSequence marginal = centered_bernoulli();
  std::vector<int> moments;
  std::vector<int> n_list;
};

struct MomentRow {
  int n = 0;             // family parameter
  long vertices = 0;     // |V(G_N)|, used for the normalization
  int m = 0;
  NormalizedMoment exact;
  Rational leading;      // zero for odd m
  std::optional<Rational> reference;
  double gap_leading = 0.0;
  std::optional<double> gap_reference;
};

struct MomentTable {
  std::string family;
  std::string marginal;
  std::vector<MomentRow> rows;
  /// Per m: max over rows of sqrt(N) |exact - leading|.
  std::map<int, double> fitted_c;
  /// Per m: whether |exact - reference| strictly decreases along n_list.
  std::map<int, bool> reference_gap_decreasing;
};

/// Throws InvalidInput unless the marginal is centered with unit variance.
MomentTable clt_gap_decay(const CltConfig& config);

/// Fourth moment of the normalized sum over the doubling family at level n,
/// by the recursion x_n = (x_{n-1} + 3)/2 at odd n and (x_{n-1} + 1)/2 at
/// even n, seeded by exact enumeration at levels 0..2.
Rational counterexample_fourth_moment(int n);
/// The same quantity by exact enumeration on the generated graph.
NormalizedMoment counterexample_fourth_moment_direct(int n);

struct PerturbationRow {
  int n = 0;
  int m = 0;
  NormalizedMoment g_moment;
  NormalizedMoment h_moment;
  double gap = 0.0;
  std::optional<Rational> gap_exact;
  std::size_t symmetric_difference = 0;
  Rational difference_ratio;  // |E(g) xor E(h)| / N^2
};

/// Both families must produce graphs on the same vertex set for each n.
std::vector<PerturbationRow> perturbation_gap(const std::function<Digraph(int)>& gf,
                                              const std::function<Digraph(int)>& hf, const MomentSequence& marginal,
                                              const std::vector<int>& moments, const std::vector<int>& n_list);

struct PoissonMoment {
  Rational exact;     // un-normalized sum moment with poisson-bernoulli marginals
  Rational leading;   // sum_pi lambda^#pi N^-#pi #(labelings with the indicator)
  Rational envelope;  // proven bound on exact - leading
};

PoissonMoment poisson_exact_moment(const Digraph& g, const Rational& lambda, int m);

/// complete: classical Poisson; empty: Boolean Poisson; total: monotone
/// Poisson (k <= 12).
std::optional<Rational> poisson_reference(const FamilyTemplate& family, const Rational& lambda, int m);

struct PoissonRow {
  int n = 0;
  long vertices = 0;
  int m = 0;
  PoissonMoment value;
  std::optional<Rational> reference;
};

std::vector<PoissonRow> poisson_table(const FamilyTemplate& family, const Rational& lambda,
                                      const std::vector<int>& moments, const std::vector<int>& n_list);

struct ConvolutionReport {
  Rational t;
  int m = 0;
  Rational limit;
  std::vector<int> n_list;
  std::vector<NormalizedMoment> exact;
  std::vector<double> gaps;
  bool decreasing = true;
};

/// For bipartite or cliquepair families whose first part has exactly t N
/// vertices: exact moments against the mixture sqrt(t) a + sqrt(1-t) b of
/// the two part limits. Throws InvalidInput for other families or when the
/// part size is not t N.
ConvolutionReport convolution_split_check(const FamilyTemplate& family, const Rational& t, int m,
                                          const std::vector<int>& n_list);

}  // namespace bmt
