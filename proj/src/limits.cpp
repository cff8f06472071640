#include "bmt/limits.hpp"

#include "bmt/errors.hpp"
#include "bmt/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

namespace bmt {

// ---------------------------------------------------------------------------
// NormalizedMoment

namespace {

bool is_square(long n) {
  Integer z = n;
  return mpz_perfect_square_p(z.get_mpz_t()) != 0;
}

Integer isqrt(long n) {
  Integer z = n, r;
  mpz_sqrt(r.get_mpz_t(), z.get_mpz_t());
  return r;
}

}  // namespace

bool NormalizedMoment::is_rational() const {
  return normalization == Normalization::None || m % 2 == 0 || raw == 0 || is_square(n);
}

Rational NormalizedMoment::rational() const {
  if (normalization == Normalization::None) return raw;
  if (raw == 0) return 0;
  if (m % 2 == 0) return raw / Rational(pow(Integer(n), static_cast<unsigned>(m / 2)));
  if (is_square(n)) return raw / Rational(pow(isqrt(n), static_cast<unsigned>(m)));
  throw InvalidInput("moment " + to_string() + " is irrational");
}

double NormalizedMoment::to_double() const {
  if (is_rational()) return bmt::to_double(rational());
  return bmt::to_double(raw) / std::pow(static_cast<double>(n), m / 2.0);
}

bool NormalizedMoment::within(const Rational& reference, const Rational& bound) const {
  if (is_rational()) return abs_leq(rational() - reference, bound);
  if (reference != 0) throw InvalidInput("irrational moment can only be compared with 0");
  // |raw| / N^{m/2} <= bound  <=>  raw^2 <= bound^2 N^m
  if (bound < 0) return false;
  return raw * raw <= bound * bound * Rational(pow(Integer(n), static_cast<unsigned>(m)));
}

std::string NormalizedMoment::to_string() const {
  if (is_rational()) return bmt::to_string(rational());
  return bmt::to_string(raw) + "/" + std::to_string(n) + "^(" + std::to_string(m) + "/2)";
}

// ---------------------------------------------------------------------------
// Class engine

namespace {

constexpr int kMaxEngineLength = 14;

struct ClassPlan {
  std::vector<int> size;                          // per block
  std::vector<std::vector<std::uint32_t>> gaps;   // per block, per gap: mask of blocks inside the gap
};

ClassPlan make_plan(const Partition& p) {
  ClassPlan plan;
  const auto& rgs = p.rgs();
  for (const Block& b : p.blocks()) {
    plan.size.push_back(static_cast<int>(b.size()));
    std::vector<std::uint32_t> gaps;
    for (std::size_t k = 0; k + 1 < b.size(); ++k) {
      std::uint32_t mask = 0;
      for (int pos = b[k] + 1; pos < b[k + 1]; ++pos) mask |= 1u << rgs[static_cast<std::size_t>(pos - 1)];
      gaps.push_back(mask);
    }
    plan.gaps.push_back(std::move(gaps));
  }
  return plan;
}

double falling(long n, long k) {
  double out = 1.0;
  for (long j = 0; j < k; ++j) out *= static_cast<double>(n - j);
  return out;
}

// Walks injective labelings of one kernel class and histograms the sorted
// block sizes of ker_G.
class LabelingWalker {
 public:
  LabelingWalker(const Digraph& g, const ClassPlan& plan, const std::vector<bool>& zero_size,
                 std::unordered_map<std::uint64_t, std::uint64_t>& histogram)
      : g_(g), plan_(plan), zero_(zero_size), hist_(histogram), n_(g.num_vertices()),
        label_(plan.size.size()), used_(g.num_vertices(), false) {}

  void run() { descend(0); }

 private:
  void descend(std::size_t b) {
    if (b == label_.size()) {
      leaf();
      return;
    }
    for (std::size_t v = 0; v < n_; ++v) {
      if (used_[v]) continue;
      used_[v] = true;
      label_[b] = v;
      descend(b + 1);
      used_[v] = false;
    }
  }

  void leaf() {
    int sizes[kMaxEngineLength + 1];
    int count = 0;
    for (std::size_t b = 0; b < label_.size(); ++b) {
      const std::size_t target = label_[b];
      int run = 1;
      for (std::uint32_t mask : plan_.gaps[b]) {
        bool split = false;
        while (mask) {
          const int c = __builtin_ctz(mask);
          mask &= mask - 1;
          if (!g_.has_edge_at(label_[static_cast<std::size_t>(c)], target)) {
            split = true;
            break;
          }
        }
        if (split) {
          if (zero_[static_cast<std::size_t>(run)]) return;
          sizes[count++] = run;
          run = 1;
        } else {
          ++run;
        }
      }
      if (zero_[static_cast<std::size_t>(run)]) return;
      sizes[count++] = run;
    }
    std::sort(sizes, sizes + count);
    std::uint64_t key = 0;
    for (int k = 0; k < count; ++k) key = (key << 4) | static_cast<std::uint64_t>(sizes[k]);
    ++hist_[key];
  }

  const Digraph& g_;
  const ClassPlan& plan_;
  const std::vector<bool>& zero_;
  std::unordered_map<std::uint64_t, std::uint64_t>& hist_;
  std::size_t n_;
  std::vector<std::size_t> label_;
  std::vector<bool> used_;
};

NormalizedMoment finish(Rational raw, long n, int m, Normalization normalization) {
  NormalizedMoment out;
  out.raw = std::move(raw);
  out.n = n;
  out.m = m;
  out.normalization = normalization;
  return out;
}

Integer to_integer(std::uint64_t x) {
  Integer z;
  mpz_import(z.get_mpz_t(), 1, 1, sizeof(x), 0, 0, &x);
  return z;
}

}  // namespace

NormalizedMoment exact_sum_moment(const Digraph& g, const MomentSequence& marginal, int m,
                                  Normalization normalization) {
  const long n = static_cast<long>(g.num_vertices());
  if (m < 0) throw InvalidInput("moment order must be non-negative");
  if (m == 0) return finish(1, n, 0, normalization);
  if (m > kMaxEngineLength) {
    throw CapExceeded("sum moments of order " + std::to_string(m) + " exceed the cap " + std::to_string(kMaxEngineLength));
  }
  std::vector<bool> zero(static_cast<std::size_t>(m) + 1, false);
  for (int k = 1; k <= m; ++k) zero[static_cast<std::size_t>(k)] = marginal.moment(k) == 0;
  const PartitionClass cls = zero[1] ? PartitionClass::NoSingleton : PartitionClass::All;
  std::vector<Partition> classes = enumerate(m, cls);
  double work = 0.0;
  for (const Partition& p : classes) work += falling(n, static_cast<long>(p.num_blocks()));
  if (work > kLabelingBudget) {
    std::ostringstream msg;
    msg << "exact sum moment needs " << work << " labelings; the budget is " << kLabelingBudget;
    throw CapExceeded(msg.str());
  }
  std::unordered_map<std::uint64_t, std::uint64_t> histogram;
  for (const Partition& p : classes) {
    if (static_cast<long>(p.num_blocks()) > n) continue;
    ClassPlan plan = make_plan(p);
    LabelingWalker(g, plan, zero, histogram).run();
  }
  Rational raw = 0;
  for (const auto& [key, count] : histogram) {
    Rational term = Rational(to_integer(count));
    for (std::uint64_t k = key; k; k >>= 4) term *= marginal.moment(static_cast<int>(k & 0xF));
    raw += term;
  }
  return finish(std::move(raw), n, m, normalization);
}

NormalizedMoment exact_sum_moment_naive(const Digraph& g, const MomentSequence& marginal, int m,
                                        Normalization normalization) {
  const long n = static_cast<long>(g.num_vertices());
  if (m < 0) throw InvalidInput("moment order must be non-negative");
  if (std::pow(static_cast<double>(n), m) > kNaiveBudget) {
    throw CapExceeded("naive enumeration of " + std::to_string(n) + "^" + std::to_string(m) + " words exceeds the budget");
  }
  BmtEnsemble e(g, marginal);
  const auto& vs = g.vertices();
  std::vector<std::size_t> digits(static_cast<std::size_t>(m), 0);
  Rational raw = 0;
  Word w(static_cast<std::size_t>(m));
  while (true) {
    for (std::size_t k = 0; k < w.size(); ++k) w[k] = vs[digits[k]];
    raw += mixed_moment(e, w);
    std::size_t k = 0;
    while (k < digits.size() && ++digits[k] == vs.size()) digits[k++] = 0;
    if (k == digits.size()) break;
  }
  return finish(std::move(raw), n, m, normalization);
}

Integer count_indicator_labelings(const Digraph& g, const Partition& p) {
  const Digraph ncg = nesting_crossing_graph(p);
  const std::size_t k = p.num_blocks();
  const std::size_t n = g.num_vertices();
  if (k > n) return 0;
  // required[b] lists (other, outgoing) pairs among blocks labelled before b
  std::vector<std::vector<std::pair<std::size_t, bool>>> required(k);
  for (const Edge& e : ncg.edges()) {
    auto a = static_cast<std::size_t>(e.first - 1), b = static_cast<std::size_t>(e.second - 1);
    if (a > b) required[a].emplace_back(b, true);
    else required[b].emplace_back(a, false);
  }
  std::vector<std::size_t> label(k);
  std::vector<bool> used(n, false);
  std::uint64_t count = 0;
  auto descend = [&](auto&& self, std::size_t b) -> void {
    if (b == k) {
      ++count;
      return;
    }
    for (std::size_t v = 0; v < n; ++v) {
      if (used[v]) continue;
      bool ok = true;
      for (auto [other, outgoing] : required[b]) {
        ok = outgoing ? g.has_edge_at(v, label[other]) : g.has_edge_at(label[other], v);
        if (!ok) break;
      }
      if (!ok) continue;
      used[v] = true;
      label[b] = v;
      self(self, b + 1);
      used[v] = false;
    }
  };
  descend(descend, 0);
  return to_integer(count);
}

Rational clt_leading_term(const Digraph& g, int m) {
  if (m <= 0 || m % 2 != 0) throw InvalidInput("leading term needs a positive even order");
  const long n = static_cast<long>(g.num_vertices());
  if (falling(n, m / 2) * static_cast<double>(odd_double_factorial(static_cast<unsigned>(m / 2)).get_d()) > kLabelingBudget) {
    throw CapExceeded("leading term enumeration exceeds the labeling budget");
  }
  Integer total = 0;
  for (const Partition& p : enumerate(m, PartitionClass::Pairing)) total += count_indicator_labelings(g, p);
  return ratio(total, pow(Integer(n), static_cast<unsigned>(m / 2)));
}

Rational block_mixture_moment(const Digraph& h, const std::vector<MomentSequence>& marginals,
                              const std::vector<Rational>& weights, int m) {
  const std::size_t k = h.num_vertices();
  if (marginals.size() != k || weights.size() != k) throw InvalidInput("one marginal and weight per part");
  if (std::pow(static_cast<double>(k), m) > 4e6) throw CapExceeded("block mixture needs too many words");
  std::map<Vertex, MomentSequence> per_vertex;
  for (std::size_t i = 0; i < k; ++i) per_vertex.emplace(h.vertices()[i], marginals[i]);
  BmtEnsemble e(h, per_vertex);
  std::vector<std::size_t> digits(static_cast<std::size_t>(m), 0);
  Word w(static_cast<std::size_t>(m));
  Rational total = 0;
  while (true) {
    std::vector<unsigned> counts(k, 0);
    for (std::size_t j = 0; j < w.size(); ++j) {
      w[j] = h.vertices()[digits[j]];
      ++counts[digits[j]];
    }
    bool zero_weight = false;
    for (std::size_t i = 0; i < k; ++i) zero_weight = zero_weight || (counts[i] > 0 && weights[i] == 0);
    if (!zero_weight) {
      Rational mm = mixed_moment(e, w);
      if (mm != 0) {
        Rational term = mm;
        for (std::size_t i = 0; i < k; ++i) {
          if (counts[i] % 2 != 0) throw InvalidInput("block mixture needs symmetric part laws");
          term *= pow(weights[i], counts[i] / 2);
        }
        total += term;
      }
    }
    std::size_t j = 0;
    while (j < digits.size() && ++digits[j] == k) digits[j++] = 0;
    if (j == digits.size()) break;
  }
  return total;
}

namespace {

constexpr int kProbeA = 2520;
constexpr int kProbeB = 5040;

std::optional<Rational> part_fraction(int first_a, int second_a, int first_b, int second_b) {
  Rational ta = ratio(first_a, first_a + second_a);
  Rational tb = ratio(first_b, first_b + second_b);
  if (ta != tb) return std::nullopt;
  return ta;
}

}  // namespace

std::optional<Rational> clt_reference(const FamilyTemplate& family, int m) {
  if (!family.depends_on_n()) return std::nullopt;
  const std::string& kind = family.kind();
  if (kind == "empty" || kind == "star") return reference_moment({LawKind::SymmetricBernoulli}, m);
  if (kind == "complete") return reference_moment({LawKind::Gaussian}, m);
  if (kind == "total") return reference_moment({LawKind::Arcsine}, m);
  const GraphFamily a = family.instantiate(kProbeA);
  const GraphFamily b = family.instantiate(kProbeB);
  if (kind == "turan") {
    int ra = std::get<family::Turan>(a).r, rb = std::get<family::Turan>(b).r;
    if (ra == kProbeA && rb == kProbeB) return reference_moment({LawKind::Gaussian}, m);
    if (ra != rb || std::pow(static_cast<double>(ra), m) > 4e6) return std::nullopt;
    std::vector<Rational> weights(static_cast<std::size_t>(ra), ratio(1, ra));
    std::vector<MomentSequence> laws(static_cast<std::size_t>(ra), centered_bernoulli());
    return block_mixture_moment(generate(family::Complete{ra}), laws, weights, m);
  }
  if (kind == "bipartite" || kind == "cliquepair") {
    std::optional<Rational> t;
    if (kind == "bipartite") {
      auto fa = std::get<family::CompleteBipartite>(a), fb = std::get<family::CompleteBipartite>(b);
      t = part_fraction(fa.m, fa.l, fb.m, fb.l);
    } else {
      auto fa = std::get<family::DisjointCompletePair>(a), fb = std::get<family::DisjointCompletePair>(b);
      t = part_fraction(fa.m, fa.l, fb.m, fb.l);
    }
    if (!t) return std::nullopt;
    const bool tensor = kind == "bipartite";
    MomentSequence part = tensor ? centered_bernoulli() : as_sequence({LawKind::Gaussian});
    Digraph h = tensor ? generate(family::Complete{2}) : generate(family::Empty{2});
    return block_mixture_moment(h, {part, part}, {*t, 1 - *t}, m);
  }
  return std::nullopt;
}

MomentTable clt_gap_decay(const CltConfig& config) {
  if (config.marginal.moment(1) != 0 || config.marginal.moment(2) != 1) {
    throw InvalidInput("central limit tables need a centered marginal with unit variance");
  }
  MomentTable table;
  table.family = config.family.spec();
  table.marginal = config.marginal.name();
  std::map<int, std::optional<Rational>> refs;
  for (int m : config.moments) refs[m] = clt_reference(config.family, m);
  for (int n : config.n_list) {
    Digraph g = generate(config.family.instantiate(n));
    for (int m : config.moments) {
      MomentRow row;
      row.n = n;
      row.vertices = static_cast<long>(g.num_vertices());
      row.m = m;
      row.exact = exact_sum_moment(g, config.marginal, m);
      row.leading = m % 2 == 0 ? clt_leading_term(g, m) : Rational(0);
      row.reference = refs[m];
      row.gap_leading = row.exact.is_rational() ? to_double(abs(row.exact.rational() - row.leading))
                                                : std::abs(row.exact.to_double() - to_double(row.leading));
      if (row.reference) {
        row.gap_reference = row.exact.is_rational() ? to_double(abs(row.exact.rational() - *row.reference))
                                                    : std::abs(row.exact.to_double() - to_double(*row.reference));
      }
      double c = std::sqrt(static_cast<double>(row.vertices)) * row.gap_leading;
      table.fitted_c[m] = std::max(table.fitted_c[m], c);
      table.rows.push_back(std::move(row));
    }
  }
  for (int m : config.moments) {
    std::optional<double> previous;
    bool decreasing = true;
    for (const MomentRow& r : table.rows) {
      if (r.m != m || !r.gap_reference) continue;
      if (previous && !(*r.gap_reference < *previous || (*previous == 0.0 && *r.gap_reference == 0.0))) decreasing = false;
      previous = r.gap_reference;
    }
    table.reference_gap_decreasing[m] = decreasing;
  }
  return table;
}

NormalizedMoment counterexample_fourth_moment_direct(int n) {
  return exact_sum_moment(generate(family::Counterexample{n}), centered_bernoulli(), 4);
}

Rational counterexample_fourth_moment(int n) {
  if (n < 0) throw InvalidInput("level must be non-negative");
  static std::once_flag once;
  static std::vector<Rational> seeds;
  std::call_once(once, [] {
    for (int level = 0; level <= 2; ++level) seeds.push_back(counterexample_fourth_moment_direct(level).rational());
  });
  auto step = [](int level, const Rational& prev) -> Rational { return (prev + (level % 2 == 1 ? 3 : 1)) / 2; };
  if (step(1, seeds[0]) != seeds[1] || step(2, seeds[1]) != seeds[2]) {
    throw std::logic_error("doubling recursion disagrees with exact enumeration at the seed levels");
  }
  if (n <= 2) return seeds[static_cast<std::size_t>(n)];
  Rational x = seeds[2];
  for (int level = 3; level <= n; ++level) x = step(level, x);
  return x;
}

std::vector<PerturbationRow> perturbation_gap(const std::function<Digraph(int)>& gf,
                                              const std::function<Digraph(int)>& hf, const MomentSequence& marginal,
                                              const std::vector<int>& moments, const std::vector<int>& n_list) {
  std::vector<PerturbationRow> rows;
  for (int n : n_list) {
    Digraph g = gf(n), h = hf(n);
    const std::size_t diff = symmetric_difference_size(g, h);
    const long nv = static_cast<long>(g.num_vertices());
    for (int m : moments) {
      PerturbationRow row;
      row.n = n;
      row.m = m;
      row.g_moment = exact_sum_moment(g, marginal, m);
      row.h_moment = exact_sum_moment(h, marginal, m);
      if (row.g_moment.is_rational() && row.h_moment.is_rational()) {
        row.gap_exact = abs(row.g_moment.rational() - row.h_moment.rational());
        row.gap = to_double(*row.gap_exact);
      } else {
        row.gap = std::abs(row.g_moment.to_double() - row.h_moment.to_double());
      }
      row.symmetric_difference = diff;
      row.difference_ratio = ratio(static_cast<long>(diff), nv * nv);
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

PoissonMoment poisson_exact_moment(const Digraph& g, const Rational& lambda, int m) {
  if (m < 1) throw InvalidInput("poisson moments need m >= 1");
  const long n = static_cast<long>(g.num_vertices());
  PoissonMoment out;
  out.exact = exact_sum_moment(g, poisson_bernoulli(lambda, n), m, Normalization::None).raw;
  const Rational p = lambda / Rational(n);
  for (const Partition& part : enumerate(m, PartitionClass::All)) {
    const auto k = static_cast<unsigned>(part.num_blocks());
    out.leading += pow(p, k) * Rational(count_indicator_labelings(g, part));
    if (nesting_crossing_graph(part).num_edges() > 0) {
      out.envelope += Rational(falling_factorial(n, k)) * pow(p, k + 1);
    }
  }
  return out;
}

std::optional<Rational> poisson_reference(const FamilyTemplate& family, const Rational& lambda, int m) {
  if (!family.depends_on_n()) return std::nullopt;
  const std::string& kind = family.kind();
  if (kind == "complete") return reference_moment({LawKind::ClassicalPoisson, lambda}, m);
  if (kind == "empty") return reference_moment({LawKind::BooleanPoisson, lambda}, m);
  if (kind == "total" && m <= reference_cap(LawKind::MonotonePoisson)) {
    return reference_moment({LawKind::MonotonePoisson, lambda}, m);
  }
  return std::nullopt;
}

std::vector<PoissonRow> poisson_table(const FamilyTemplate& family, const Rational& lambda,
                                      const std::vector<int>& moments, const std::vector<int>& n_list) {
  std::vector<PoissonRow> rows;
  for (int n : n_list) {
    Digraph g = generate(family.instantiate(n));
    for (int m : moments) {
      PoissonRow row;
      row.n = n;
      row.vertices = static_cast<long>(g.num_vertices());
      row.m = m;
      row.value = poisson_exact_moment(g, lambda, m);
      row.reference = poisson_reference(family, lambda, m);
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

ConvolutionReport convolution_split_check(const FamilyTemplate& family, const Rational& t, int m,
                                          const std::vector<int>& n_list) {
  const std::string& kind = family.kind();
  if (kind != "bipartite" && kind != "cliquepair") {
    throw InvalidInput("convolution check needs a bipartite or cliquepair family, got " + kind);
  }
  if (t < 0 || t > 1) throw InvalidInput("t must lie in [0, 1]");
  const bool tensor = kind == "bipartite";
  ConvolutionReport report;
  report.t = t;
  report.m = m;
  MomentSequence part = tensor ? centered_bernoulli() : as_sequence({LawKind::Gaussian});
  Digraph h = tensor ? generate(family::Complete{2}) : generate(family::Empty{2});
  report.limit = block_mixture_moment(h, {part, part}, {t, 1 - t}, m);
  std::optional<double> previous;
  for (int n : n_list) {
    GraphFamily inst = family.instantiate(n);
    int first = tensor ? std::get<family::CompleteBipartite>(inst).m : std::get<family::DisjointCompletePair>(inst).m;
    Digraph g = generate(inst);
    if (Rational(first) != t * Rational(static_cast<long>(g.num_vertices()))) {
      throw InvalidInput("first part has " + std::to_string(first) + " of " + std::to_string(g.num_vertices()) +
                         " vertices, not t*N");
    }
    NormalizedMoment exact = exact_sum_moment(g, centered_bernoulli(), m);
    double gap = exact.is_rational() ? to_double(abs(exact.rational() - report.limit))
                                     : std::abs(exact.to_double() - to_double(report.limit));
    if (previous && !(gap < *previous || (gap == 0.0 && *previous == 0.0))) report.decreasing = false;
    previous = gap;
    report.n_list.push_back(n);
    report.exact.push_back(exact);
    report.gaps.push_back(gap);
  }
  return report;
}

}  // namespace bmt
