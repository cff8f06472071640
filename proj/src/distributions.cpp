#include "bmt/distributions.hpp"

#include "bmt/errors.hpp"
#include "bmt/partitions.hpp"

#include <mutex>
#include <unordered_map>

namespace bmt {

struct MomentSequence::Cache {
  std::function<Rational(int)> formula;
  std::mutex mutex;
  std::unordered_map<int, Rational> values;
};

MomentSequence::MomentSequence(std::string name, std::function<Rational(int)> formula)
    : name_(std::move(name)), cache_(std::make_shared<Cache>()) {
  cache_->formula = std::move(formula);
}

Rational MomentSequence::moment(int k) const {
  if (k < 0) throw InvalidInput("negative moment order");
  if (k == 0) return 1;
  {
    std::lock_guard lock(cache_->mutex);
    if (auto it = cache_->values.find(k); it != cache_->values.end()) return it->second;
  }
  Rational value = cache_->formula(k);
  std::lock_guard lock(cache_->mutex);
  cache_->values.emplace(k, value);
  return value;
}

MomentSequence centered_bernoulli() {
  return MomentSequence("bernoulli", [](int k) { return Rational(k % 2 == 0 ? 1 : 0); });
}

MomentSequence poisson_bernoulli(const Rational& lambda, long n) {
  if (n < 1) throw InvalidInput("poisson-bernoulli needs N >= 1");
  if (lambda < 0 || lambda > n) throw InvalidInput("poisson-bernoulli needs 0 <= lambda <= N");
  Rational p = lambda / Rational(n);
  return MomentSequence("poisson:" + to_string(lambda) + "," + std::to_string(n), [p](int) { return p; });
}

MomentSequence discrete_law(std::string name, std::vector<Rational> values, std::vector<Rational> weights) {
  if (values.size() != weights.size() || values.empty()) throw InvalidInput("discrete law needs matching values and weights");
  Rational total = 0;
  for (const Rational& w : weights) {
    if (w < 0) throw InvalidInput("negative weight in discrete law");
    total += w;
  }
  if (total != 1) throw InvalidInput("discrete law weights sum to " + to_string(total));
  return MomentSequence(std::move(name), [values = std::move(values), weights = std::move(weights)](int k) {
    Rational sum = 0;
    for (std::size_t i = 0; i < values.size(); ++i) sum += weights[i] * pow(values[i], static_cast<unsigned>(k));
    return sum;
  });
}

MomentSequence skewed_law() {
  return discrete_law("skewed", {Rational(-2), Rational(1, 2)}, {Rational(1, 5), Rational(4, 5)});
}

MomentSequence parse_marginal(std::string_view spec) {
  if (spec == "bernoulli") return centered_bernoulli();
  if (spec == "skewed") return skewed_law();
  constexpr std::string_view kPoisson = "poisson:";
  if (spec.substr(0, kPoisson.size()) == kPoisson) {
    auto args = spec.substr(kPoisson.size());
    auto comma = args.find(',');
    if (comma == std::string_view::npos) throw InvalidInput("poisson marginal needs 'poisson:LAMBDA,N'");
    Rational n = parse_rational(args.substr(comma + 1));
    if (n.get_den() != 1 || n < 1) throw InvalidInput("poisson marginal needs a positive integer N");
    return poisson_bernoulli(parse_rational(args.substr(0, comma)), n.get_num().get_si());
  }
  throw InvalidInput("unknown marginal '" + std::string(spec) + "' (expected bernoulli, skewed, poisson:LAMBDA,N)");
}

namespace {

const std::vector<std::pair<LawKind, std::string>>& law_names() {
  static const std::vector<std::pair<LawKind, std::string>> names = {
      {LawKind::SymmetricBernoulli, "bernoulli"},  {LawKind::Gaussian, "gaussian"},
      {LawKind::Arcsine, "arcsine"},               {LawKind::ClassicalPoisson, "poisson"},
      {LawKind::BooleanPoisson, "boolean-poisson"}, {LawKind::MonotonePoisson, "monotone-poisson"}};
  return names;
}

Rational touchard(int k, const Rational& lambda) {
  // S(k, j) by the triangle recurrence.
  std::vector<Integer> row{1};
  for (int n = 1; n <= k; ++n) {
    std::vector<Integer> next(static_cast<std::size_t>(n) + 1, 0);
    for (int j = 1; j <= n; ++j) {
      Integer v = 0;
      if (j <= n - 1) v = Integer(j) * row[static_cast<std::size_t>(j)];
      v += row[static_cast<std::size_t>(j - 1)];
      next[static_cast<std::size_t>(j)] = v;
    }
    row = std::move(next);
  }
  Rational sum = 0;
  for (int j = 1; j <= k; ++j) sum += Rational(row[static_cast<std::size_t>(j)]) * pow(lambda, static_cast<unsigned>(j));
  return sum;
}

}  // namespace

ReferenceLaw ReferenceLaw::parse(std::string_view name, const Rational& lambda) {
  for (const auto& [kind, n] : law_names()) {
    if (n == name) return ReferenceLaw{kind, lambda};
  }
  throw InvalidInput("unknown law '" + std::string(name) +
                     "' (expected bernoulli, gaussian, arcsine, poisson, boolean-poisson, monotone-poisson)");
}

std::string ReferenceLaw::name() const {
  for (const auto& [k, n] : law_names()) {
    if (k == kind) {
      bool poisson = kind == LawKind::ClassicalPoisson || kind == LawKind::BooleanPoisson ||
                     kind == LawKind::MonotonePoisson;
      return poisson ? n + "(" + to_string(lambda) + ")" : n;
    }
  }
  return "?";
}

int reference_cap(LawKind kind) {
  switch (kind) {
    case LawKind::SymmetricBernoulli:
    case LawKind::Gaussian:
    case LawKind::ClassicalPoisson:
    case LawKind::BooleanPoisson: return 200;
    case LawKind::Arcsine: return 20;
    case LawKind::MonotonePoisson: return 12;
  }
  return 0;
}

Rational reference_moment(const ReferenceLaw& law, int k) {
  if (k < 0) throw InvalidInput("negative moment order");
  if (k == 0) return 1;
  if (k > reference_cap(law.kind)) {
    throw CapExceeded("moment " + std::to_string(k) + " of " + law.name() + " requires cap k>=" + std::to_string(k) +
                      " but the cap is k<=" + std::to_string(reference_cap(law.kind)));
  }
  switch (law.kind) {
    case LawKind::SymmetricBernoulli: return k % 2 == 0 ? 1 : 0;
    case LawKind::Gaussian: return k % 2 == 0 ? Rational(odd_double_factorial(static_cast<unsigned>(k / 2))) : Rational(0);
    case LawKind::Arcsine: {
      if (k % 2 != 0) return 0;
      Integer total = 0;
      for (const Partition& p : enumerate(k, PartitionClass::NonCrossingPairing)) total += monotone_label_count(p);
      return ratio(total, factorial(static_cast<unsigned>(k / 2)));
    }
    case LawKind::ClassicalPoisson: return touchard(k, law.lambda);
    case LawKind::BooleanPoisson: {
      Rational sum = 0;
      for (int j = 1; j <= k; ++j) sum += Rational(binomial(k - 1, j - 1)) * pow(law.lambda, static_cast<unsigned>(j));
      return sum;
    }
    case LawKind::MonotonePoisson: {
      Rational sum = 0;
      for (const Partition& p : enumerate(k, PartitionClass::NonCrossing)) {
        const auto b = static_cast<unsigned>(p.num_blocks());
        sum += pow(law.lambda, b) * ratio(nesting_forest_extensions(p), factorial(b));
      }
      return sum;
    }
  }
  return 0;
}

MomentSequence as_sequence(const ReferenceLaw& law) {
  return MomentSequence(law.name(), [law](int k) { return reference_moment(law, k); });
}

}  // namespace bmt
