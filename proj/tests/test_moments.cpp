#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "bmt/errors.hpp"
#include "bmt/moments.hpp"
#include "oracles.hpp"

using namespace bmt;

namespace {

Rational R(long p, long q = 1) { return ratio(p, q); }

Rational phi(const Digraph& g, const MomentSequence& law, const Word& w) {
  return mixed_moment(BmtEnsemble(g, law), w);
}

// Values 0, 1, 2 with weights 1/2, 1/4, 1/4: every moment is positive.
MomentSequence nonnegative_law() { return discrete_law("nonneg", {R(0), R(1), R(2)}, {R(1, 2), R(1, 4), R(1, 4)}); }

// Alternating power words with each power drawn from 1..3.
std::vector<PowerWord> powered(const std::vector<Word>& words, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> pow(1, 3);
  std::vector<PowerWord> out;
  for (const Word& w : words) {
    out.push_back(PowerWord::plain(w));
    PowerWord p = PowerWord::plain(w);
    for (int& x : p.powers) x = pow(rng);
    out.push_back(p);
  }
  return out;
}

Polynomial random_poly(const std::vector<Vertex>& group, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> terms(1, 3), len(1, 3), coeff(-2, 3);
  std::uniform_int_distribution<std::size_t> pick(0, group.size() - 1);
  Polynomial p;
  for (int t = terms(rng); t > 0; --t) {
    Word w;
    for (int l = len(rng); l > 0; --l) w.push_back(group[pick(rng)]);
    int c = coeff(rng);
    p.push_back({c == 0 ? Rational(1) : Rational(c), w});
  }
  return p;
}

Polynomial group_sum(const std::vector<Vertex>& group) {
  Polynomial p;
  for (Vertex v : group) p.push_back({1, {v}});
  return p;
}

// Every alternating sequence of group indices up to max_len, each slot
// filled once with the plain group sum and once with random polynomials.
std::vector<std::vector<GroupElement>> grouped_words(const std::vector<std::vector<Vertex>>& groups, int max_len,
                                                     std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<Vertex> idx;
  for (std::size_t i = 0; i < groups.size(); ++i) idx.push_back(static_cast<Vertex>(i) + 1);
  std::vector<std::vector<GroupElement>> out;
  for (const Word& gw : alternating_words(idx, max_len)) {
    std::vector<GroupElement> plain, random;
    for (Vertex g : gw) {
      auto gi = static_cast<std::size_t>(g - 1);
      plain.push_back({gi, group_sum(groups[gi])});
      random.push_back({gi, random_poly(groups[gi], rng)});
    }
    out.push_back(plain);
    out.push_back(random);
  }
  return out;
}

}  // namespace

TEST_CASE("mixed moment examples") {
  auto b = centered_bernoulli();
  CHECK(phi(Digraph::on_range(2), b, {1, 2, 1}) == 0);
  CHECK(phi(generate(family::Complete{2}), b, {1, 2, 1, 2}) == 1);
  CHECK(phi(Digraph::on_range(2), b, {1, 2, 1, 2}) == 0);
  CHECK(phi(Digraph::on_range(2), b, {}) == 1);
  CHECK(phi(Digraph::on_range(2), b, {1, 1, 2, 2}) == 1);
  CHECK_THROWS_AS(phi(Digraph::on_range(2), b, {1, 3}), InvalidInput);
  auto s = skewed_law();
  CHECK(phi(Digraph::on_range(2, {{2, 1}}), s, {1, 2, 2, 1}) == s.moment(2) * s.moment(2));
  CHECK(phi(Digraph::on_range(2), s, {1, 2, 2, 1, 1}) == s.moment(1) * s.moment(2) * s.moment(2));
}

TEST_CASE("per-vertex marginals") {
  std::map<Vertex, MomentSequence> laws{{1, skewed_law()}, {2, centered_bernoulli()}};
  BmtEnsemble e(generate(family::Complete{2}), laws);
  CHECK(mixed_moment(e, {1, 2, 1, 1, 2}) == R(-3, 2));
  CHECK(mixed_moment(e, {2, 1, 2, 1, 2, 1, 1}) == R(13, 4) * 0);
  CHECK(mixed_moment(e, {2, 1, 1, 2, 1}) == R(-3, 2));
  CHECK_THROWS_AS(BmtEnsemble(generate(family::Complete{3}), laws), InvalidInput);
  CHECK_THROWS_AS(e.marginal(5), InvalidInput);
}

TEST_CASE("singleton condition") {
  std::size_t zero = 0;
  for (const Digraph& g : all_digraphs_on(3))
    for (const Word& w : oracle::words_up_to(3, 6))
      if (ker(w).has_singleton()) {
        CHECK(phi(g, skewed_law(), w) == 0);
        ++zero;
      }
  CHECK(zero > 0);
}

TEST_CASE("pair-kernel words give a 0/1 subgraph indicator") {
  std::mt19937_64 rng(5);
  std::vector<Digraph> graphs = all_digraphs_on(3);
  for (int t = 0; t < 40; ++t) graphs.push_back(oracle::random_digraph(4, rng));
  for (const Digraph& g : graphs) {
    int n = static_cast<int>(g.num_vertices());
    for (int len : {2, 4, 6})
      for (const Word& w : oracle::words_of_length(n, len)) {
        if (!ker(w).is_pairing()) continue;
        for (const auto& law : {centered_bernoulli(), skewed_law()}) {
          BmtEnsemble e(g, law);
          std::set<Vertex> letters(w.begin(), w.end());
          bool inside = is_subgraph(relabeled_ncg(ker(w), w), restrict(g, {letters.begin(), letters.end()}));
          Rational m = mixed_moment(e, w);
          CHECK((m == 0 || m == 1));
          CHECK(m == (inside ? 1 : 0));
          CHECK(pair_partition_moment_is_indicator(e, w) == (inside ? 1 : 0));
        }
      }
  }
}

TEST_CASE("indicator preconditions") {
  BmtEnsemble e(generate(family::Complete{2}), centered_bernoulli());
  CHECK(pair_partition_moment_is_indicator(BmtEnsemble(generate(family::TotalOrder{2}), centered_bernoulli()),
                                           {1, 2, 2, 1}) == 1);
  CHECK(pair_partition_moment_is_indicator(e, {1, 2, 1, 2}) == 1);
  CHECK(pair_partition_moment_is_indicator(BmtEnsemble(Digraph::on_range(2), centered_bernoulli()), {1, 2, 1, 2}) ==
        0);
  CHECK_THROWS_AS(pair_partition_moment_is_indicator(e, {1, 1, 1, 2}), InvalidInput);
  CHECK_THROWS_AS(pair_partition_moment_is_indicator(BmtEnsemble(generate(family::Complete{2}), poisson_bernoulli(1, 2)),
                                                     {1, 2, 1, 2}),
                  InvalidInput);
}

TEST_CASE("complete graph factorizes over the plain kernel") {
  auto s = skewed_law();
  Digraph g = generate(family::Complete{3});
  for (const Word& w : oracle::words_up_to(3, 7)) {
    Rational want = 1;
    const Partition k = ker(w);
    for (const Block& b : k.blocks()) want *= s.moment(static_cast<int>(b.size()));
    CHECK(phi(g, s, w) == want);
  }
}

TEST_CASE("empty graph factorizes alternating products completely") {
  auto s = skewed_law();
  BmtEnsemble e(Digraph::on_range(3), s);
  for (const PowerWord& w : powered(alternating_words({1, 2, 3}, 6), 3)) {
    Rational want = 1;
    for (int p : w.powers) want *= s.moment(p);
    CHECK(mixed_moment(e, w.expand()) == want);
  }
}

TEST_CASE("total order satisfies the monotone axioms") {
  CHECK(check_monotone_axioms(BmtEnsemble(generate(family::TotalOrder{3}), centered_bernoulli()),
                              PowerWord::plain({1, 3, 2})));
  BmtEnsemble e3(generate(family::TotalOrder{3}), centered_bernoulli());
  CHECK(mixed_moment(e3, {1, 3, 1}) == 0);
  CHECK(mixed_moment(e3, {2, 1, 3}) == 0);
  BmtEnsemble e(generate(family::TotalOrder{4}), skewed_law());
  IdentityCheck all;
  for (const PowerWord& w : powered(alternating_words({1, 2, 3, 4}, 6), 9)) all.merge(check_monotone_axioms(e, w));
  CHECK(all.checked > 1000);
  CHECK(all.ok());
  CHECK_THROWS_AS(check_monotone_axioms(BmtEnsemble(generate(family::Complete{3}), skewed_law()),
                                        PowerWord::plain({1, 2})),
                  InvalidInput);
  CHECK_THROWS_AS(check_monotone_axioms(e, PowerWord::plain({1, 1})), InvalidInput);
}

TEST_CASE("valleys factorize completely rather than by peak extraction") {
  Digraph reversed = Digraph::on_range(3, {{1, 2}, {1, 3}, {2, 3}});
  CHECK_THROWS_AS(check_monotone_axioms(BmtEnsemble(reversed, skewed_law()), PowerWord::plain({1, 3, 1})),
                  InvalidInput);
  BmtEnsemble e(generate(family::TotalOrder{2}), skewed_law());
  PowerWord valley{{2, 1, 2}, {2, 2, 2}};
  Rational lhs = mixed_moment(e, valley.expand());
  CHECK(lhs == pow(skewed_law().moment(2), 3));
  CHECK(lhs != skewed_law().moment(2) * mixed_moment(e, valley.without(1).expand()));
}

TEST_CASE("weak BM identities on the N-shaped poset") {
  PartialOrder np = PartialOrder::n_shaped();
  BmtEnsemble e(np.digraph(), skewed_law());
  IdentityCheck c = check_weak_bm(e, np, powered(alternating_words({1, 2, 3, 4}, 6), 17));
  CHECK(c.checked > 1000);
  CHECK(c.ok());
  for (const auto& f : c.failures) MESSAGE(f);
}

TEST_CASE("weak BM identities on chains and antichains") {
  for (const PartialOrder& o : {PartialOrder::chain(3), PartialOrder::antichain(3), PartialOrder(3, {{1, 3}})}) {
    BmtEnsemble e(o.digraph(), skewed_law());
    IdentityCheck c = check_weak_bm(e, o, powered(alternating_words({1, 2, 3}, 6), 23));
    CHECK(c.ok());
  }
  CHECK_THROWS_AS(check_weak_bm(BmtEnsemble(generate(family::Complete{4}), skewed_law()), PartialOrder::n_shaped(), {}),
                  InvalidInput);
}

TEST_CASE("state is monotone under graph inclusion for nonnegative laws") {
  std::mt19937_64 rng(31);
  auto law = nonnegative_law();
  auto words = oracle::words_up_to(4, 6);
  for (int t = 0; t < 30; ++t) {
    Digraph g = oracle::random_digraph(4, rng, 0.3);
    Digraph extra = oracle::random_digraph(4, rng, 0.3);
    Digraph h = with_edges(g, {extra.edges().begin(), extra.edges().end()});
    BmtEnsemble eg(g, law), eh(h, law);
    std::size_t bad = 0;
    for (const Word& w : words) bad += mixed_moment(eg, w) > mixed_moment(eh, w);
    CHECK(bad == 0);
  }
}

TEST_CASE("linear expansion of products") {
  BmtEnsemble e(generate(family::Complete{2}), centered_bernoulli());
  Polynomial x{{1, {1}}, {1, {2}}};
  CHECK(expand_moment(e, {x, x}) == 2);
  CHECK(expand_moment(e, {x, x, x, x}) == 8);
  CHECK(expand_moment(e, {{{R(1, 2), {}}}}) == R(1, 2));
}

TEST_CASE("grouping preconditions") {
  Digraph picture = Digraph::on_range(3, {{1, 3}, {2, 3}});
  CHECK_NOTHROW(check_grouping_precondition(picture, {{3}, {1, 2}}, Independence::Monotone));
  CHECK_THROWS_AS(check_grouping_precondition(picture, {{1, 2}, {3}}, Independence::Monotone), InvalidInput);
  CHECK_THROWS_AS(check_grouping_precondition(picture, {{3}, {1, 2}}, Independence::Boolean), InvalidInput);
  CHECK_THROWS_AS(check_grouping_precondition(picture, {{3}, {1, 2}}, Independence::Tensor), InvalidInput);
  CHECK_NOTHROW(check_grouping_precondition(Digraph::on_range(2, {{1, 2}, {2, 1}}), {{1}, {2}}, Independence::Tensor));
  CHECK_THROWS_AS(check_grouping_precondition(picture, {{1}, {2}}, Independence::Boolean), InvalidInput);
  CHECK_THROWS_AS(check_grouping_precondition(picture, {{1, 3}, {2, 3}}, Independence::Boolean), InvalidInput);
}

TEST_CASE("grouped algebras inherit the cross relation") {
  auto law = skewed_law();
  SUBCASE("boolean singletons") {
    BmtEnsemble e(Digraph::on_range(2), law);
    CHECK(check_consistency_grouping(e, {{1}, {2}}, Independence::Boolean, grouped_words({{1}, {2}}, 5, 1)));
  }
  SUBCASE("boolean groups with tensor inside") {
    BmtEnsemble e(Digraph::on_range(3, {{1, 2}, {2, 1}}), law);
    auto c = check_consistency_grouping(e, {{1, 2}, {3}}, Independence::Boolean, grouped_words({{1, 2}, {3}}, 5, 2));
    CHECK(c.ok());
    CHECK(c.checked == 20);
  }
  SUBCASE("tensor singletons") {
    BmtEnsemble e(generate(family::Complete{2}), law);
    CHECK(check_consistency_grouping(e, {{1}, {2}}, Independence::Tensor, grouped_words({{1}, {2}}, 5, 3)));
  }
  SUBCASE("tensor groups with a monotone edge inside") {
    BmtEnsemble e(Digraph::on_range(3, {{1, 3}, {3, 1}, {2, 3}, {3, 2}, {2, 1}}), law);
    CHECK(check_consistency_grouping(e, {{1, 2}, {3}}, Independence::Tensor, grouped_words({{1, 2}, {3}}, 5, 4)));
  }
  SUBCASE("edges (1,3) and (2,3) make {1,2} sit above {3}") {
    BmtEnsemble e(Digraph::on_range(3, {{1, 3}, {2, 3}}), law);
    std::vector<std::vector<Vertex>> groups{{3}, {1, 2}};
    auto c = check_consistency_grouping(e, groups, Independence::Monotone, grouped_words(groups, 5, 5));
    CHECK(c.ok());
    for (const auto& f : c.failures) MESSAGE(f);

    Polynomial b12 = group_sum({1, 2});
    Polynomial b12sq{{1, {1, 1}}, {1, {2, 2}}, {1, {1, 2}}};
    Polynomial b3{{1, {3, 3}}};
    // Peak extraction holds for the upper group in the middle.
    CHECK(expand_moment(e, {b3, b12sq, b3}) == expand_moment(e, {b12sq}) * expand_moment(e, {b3, b3}));
    // The mirrored identity, with {3} extracted from between {1,2} factors, does not.
    CHECK(expand_moment(e, {b12sq, b3, b12sq}) != expand_moment(e, {b3}) * expand_moment(e, {b12sq, b12sq}));
    CHECK(expand_moment(e, {b12sq, b3, b12sq}) ==
          expand_moment(e, {b12sq}) * expand_moment(e, {b3}) * expand_moment(e, {b12sq}));
    CHECK(expand_moment(e, {b12, b3, b12}) == 0);
  }
  SUBCASE("monotone groups with an internal tensor pair") {
    BmtEnsemble e(Digraph::on_range(4, {{3, 1}, {3, 2}, {4, 1}, {4, 2}, {1, 2}, {2, 1}, {3, 4}}), law);
    std::vector<std::vector<Vertex>> groups{{1, 2}, {3, 4}};
    CHECK(check_consistency_grouping(e, groups, Independence::Monotone, grouped_words(groups, 5, 6)));
  }
}

TEST_CASE("grouping input validation") {
  BmtEnsemble e(Digraph::on_range(2), skewed_law());
  std::vector<std::vector<Vertex>> groups{{1}, {2}};
  std::vector<GroupElement> long_word;
  for (int k = 0; k < 7; ++k) long_word.push_back({static_cast<std::size_t>(k % 2), group_sum(groups[k % 2])});
  CHECK_THROWS_AS(check_consistency_grouping(e, groups, Independence::Boolean, {long_word}), CapExceeded);
  CHECK_THROWS_AS(check_consistency_grouping(e, groups, Independence::Boolean,
                                             {{{0, group_sum({1})}, {0, group_sum({1})}}}),
                  InvalidInput);
  CHECK_THROWS_AS(check_consistency_grouping(e, groups, Independence::Boolean, {{{0, group_sum({2})}}}), InvalidInput);
  CHECK(parse_independence("monotone") == Independence::Monotone);
  CHECK_THROWS_AS(parse_independence("free"), InvalidInput);
}

TEST_CASE("alternating word enumeration") {
  auto ws = alternating_words({1, 2, 3}, 4);
  CHECK(ws.size() == 3 + 6 + 12 + 24);
  for (const Word& w : ws)
    for (std::size_t k = 1; k < w.size(); ++k) CHECK(w[k] != w[k - 1]);
  PowerWord p{{1, 2, 1}, {2, 1, 3}};
  CHECK(p.expand() == Word{1, 1, 2, 1, 1, 1});
  CHECK(p.without(1).letters == Word{1, 1});
}
