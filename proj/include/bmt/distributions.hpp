#pragma once

#include "bmt/rational.hpp"

#include <functional>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

namespace bmt {

/// A law known only through its moments. moment(0) is 1; other moments are
/// produced by a formula and cached. Copies share the cache, which is
/// internally locked.
class MomentSequence {
 public:
  MomentSequence(std::string name, std::function<Rational(int)> formula);

  const std::string& name() const { return name_; }
  /// Throws InvalidInput for k < 0.
  Rational moment(int k) const;

 private:
  struct Cache;
  std::string name_;
  std::shared_ptr<Cache> cache_;
};

/// (delta_{-1} + delta_{+1}) / 2.
MomentSequence centered_bernoulli();
/// (1 - lambda/N) delta_0 + (lambda/N) delta_1. Requires N >= 1 and
/// 0 <= lambda <= N.
MomentSequence poisson_bernoulli(const Rational& lambda, long n);
/// Finite atomic law. Weights must be non-negative and sum to 1.
MomentSequence discrete_law(std::string name, std::vector<Rational> values, std::vector<Rational> weights);
/// P(-2) = 1/5, P(1/2) = 4/5: centered, unit variance, third moment -3/2.
MomentSequence skewed_law();

/// Marginal names accepted by the command line: "bernoulli", "skewed",
/// "poisson:LAMBDA,N".
MomentSequence parse_marginal(std::string_view spec);

enum class LawKind { SymmetricBernoulli, Gaussian, Arcsine, ClassicalPoisson, BooleanPoisson, MonotonePoisson };

struct ReferenceLaw {
  LawKind kind;
  Rational lambda = 1;

  /// "bernoulli", "gaussian", "arcsine", "poisson", "boolean-poisson",
  /// "monotone-poisson"; lambda given separately.
  static ReferenceLaw parse(std::string_view name, const Rational& lambda = 1);
  std::string name() const;
};

/// Largest k accepted by reference_moment for the law.
int reference_cap(LawKind kind);

/// k-th moment of the law. Arcsine and monotone Poisson are computed by
/// summing block-order counts over non-crossing partitions; classical
/// Poisson through Stirling numbers of the second kind. Throws CapExceeded
/// above reference_cap.
Rational reference_moment(const ReferenceLaw& law, int k);

MomentSequence as_sequence(const ReferenceLaw& law);

}  // namespace bmt
