#pragma once

#include "bmt/digraph.hpp"
#include "bmt/kernel.hpp"
#include "bmt/moments.hpp"

#include <Eigen/Dense>

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

namespace bmt {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

/// Largest total Hilbert-space dimension a model may have.
inline constexpr std::size_t kMaxModelDimension = 4096;
/// Largest dimension for which embed() materializes a full matrix.
inline constexpr std::size_t kMaxEmbedDimension = 1024;

/// One tensor factor: a local operator and a distinguished unit vector.
struct Site {
  Matrix op;
  Vector xi;

  int dim() const { return static_cast<int>(xi.size()); }
  /// <A xi, xi>.
  Complex state(const Matrix& a) const { return xi.dot(a * xi); }

  /// diag(1, -1) with xi = (1, 1)/sqrt(2).
  static Site bernoulli();
  /// diag(1, 0) with xi = (sqrt(lambda/N), sqrt(1 - lambda/N)).
  static Site poisson_bernoulli(const Rational& lambda, long n);
  /// diag(values) with xi_k = sqrt(weights_k).
  static Site diagonal(const std::vector<double>& values, const std::vector<double>& weights);
};

Matrix kron(const Matrix& a, const Matrix& b);

/// The product space H_1 (x) ... (x) H_N over a digraph with vertices
/// 1..N, where pi_i(A) carries A in slot i, the identity in slot j when
/// (i, j) is an edge and the projection onto xi_j otherwise.
class OperatorModel {
 public:
  /// Throws InvalidInput unless the graph has vertices 1..N with one site
  /// each and unit vectors of norm 1; CapExceeded above kMaxModelDimension.
  static OperatorModel build(const Digraph& graph, std::vector<Site> sites);

  const Digraph& graph() const { return graph_; }
  const std::vector<Site>& sites() const { return sites_; }
  std::size_t dimension() const { return dimension_; }
  const Vector& state_vector() const { return xi_; }

  /// pi_v(a) applied to every column of x, without forming pi_v(a).
  Matrix apply(Vertex v, const Matrix& a, const Matrix& x) const;
  /// The full matrix pi_v(a). Throws CapExceeded above kMaxEmbedDimension.
  Matrix embed(Vertex v, const Matrix& a) const;
  /// <T xi, xi> for a full operator.
  Complex state(const Matrix& t) const { return xi_.dot(t * xi_); }

  /// <pi_{i_1}(A_{i_1}) ... pi_{i_m}(A_{i_m}) xi, xi> with each A the site
  /// operator. Throws InvalidInput for an unknown letter.
  Complex state_moment(const Word& w) const;

 private:
  explicit OperatorModel(Digraph graph) : graph_(std::move(graph)) {}
  std::size_t slot(Vertex v) const;
  void apply_local(std::size_t slot, const Matrix& a, Matrix& x) const;

  Digraph graph_;
  std::vector<Site> sites_;
  std::vector<std::size_t> stride_;  // product of dimensions after each slot
  std::size_t dimension_ = 1;
  Vector xi_;
  std::vector<Matrix> projections_;
};

struct VerifyReport {
  std::size_t checked = 0;
  std::size_t violations = 0;
  double max_deviation = 0.0;
  bool exhaustive = false;
  std::vector<std::string> examples;  // first few violations

  bool ok() const { return violations == 0; }
  void record(double deviation, double tolerance, const std::string& what);
};

inline constexpr double kOracleTolerance = 1e-10;

/// Compares state_moment with mixed_moment on words up to max_len:
/// all of them when there are at most 5 vertices and max_len <= 6,
/// otherwise `samples` words drawn with the seed. Throws InvalidInput if
/// the graphs differ or a site's moments up to max_len disagree with the
/// ensemble marginal.
VerifyReport verify_bmt(const OperatorModel& model, const BmtEnsemble& e, int max_len, std::uint64_t seed = 1,
                        std::size_t samples = 20000);

/// For each triple (x, r, y) with x < r > y, x ~/ r > y, or x < r ~/ y in
/// the order and each of `draws` random complex site matrices, checks
/// pi_x(T1) pi_r(T2) pi_y(T3) = <T2 xi_r, xi_r> pi_x(T1) pi_y(T3) entrywise.
/// Throws InvalidInput unless the model graph is order.digraph().
VerifyReport verify_bm1(const OperatorModel& model, const PartialOrder& order, int draws, std::uint64_t seed = 1);

}  // namespace bmt
