#include "bmt/operator_model.hpp"

#include "bmt/errors.hpp"

#include <cmath>
#include <random>
#include <sstream>

namespace bmt {

Site Site::bernoulli() {
  Site s;
  s.op = Matrix::Zero(2, 2);
  s.op(0, 0) = 1.0;
  s.op(1, 1) = -1.0;
  s.xi = Vector::Constant(2, Complex(1.0 / std::sqrt(2.0), 0.0));
  return s;
}

Site Site::poisson_bernoulli(const Rational& lambda, long n) {
  if (n < 1 || lambda < 0 || lambda > n) throw InvalidInput("poisson site needs N >= 1 and 0 <= lambda <= N");
  const double p = to_double(lambda / Rational(n));
  return diagonal({1.0, 0.0}, {p, 1.0 - p});
}

Site Site::diagonal(const std::vector<double>& values, const std::vector<double>& weights) {
  if (values.size() != weights.size() || values.size() < 2) throw InvalidInput("diagonal site needs >= 2 atoms");
  Site s;
  const auto d = static_cast<Eigen::Index>(values.size());
  s.op = Matrix::Zero(d, d);
  s.xi = Vector::Zero(d);
  for (Eigen::Index k = 0; k < d; ++k) {
    if (weights[static_cast<std::size_t>(k)] < 0) throw InvalidInput("negative weight");
    s.op(k, k) = values[static_cast<std::size_t>(k)];
    s.xi(k) = std::sqrt(weights[static_cast<std::size_t>(k)]);
  }
  return s;
}

Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

OperatorModel OperatorModel::build(const Digraph& graph, std::vector<Site> sites) {
  const std::size_t n = graph.num_vertices();
  if (graph.vertices().back() != static_cast<Vertex>(n)) throw InvalidInput("operator model needs vertices 1..N");
  if (sites.size() != n) {
    throw InvalidInput("operator model needs one site per vertex: " + std::to_string(n) + " vertices, " +
                       std::to_string(sites.size()) + " sites");
  }
  std::size_t dim = 1;
  for (const Site& s : sites) {
    if (s.dim() < 1 || s.op.rows() != s.dim() || s.op.cols() != s.dim()) throw InvalidInput("site operator has the wrong shape");
    if (std::abs(s.xi.norm() - 1.0) > 1e-12) throw InvalidInput("site vector is not a unit vector");
    dim *= static_cast<std::size_t>(s.dim());
    if (dim > kMaxModelDimension) {
      throw CapExceeded("operator model dimension exceeds the cap " + std::to_string(kMaxModelDimension));
    }
  }
  OperatorModel m(graph);
  m.sites_ = std::move(sites);
  m.dimension_ = dim;
  m.stride_.assign(n, 1);
  for (std::size_t s = n; s-- > 1;) m.stride_[s - 1] = m.stride_[s] * static_cast<std::size_t>(m.sites_[s].dim());
  Matrix state = Matrix::Ones(1, 1);
  for (const Site& s : m.sites_) {
    state = kron(state, s.xi);
    m.projections_.push_back(s.xi * s.xi.adjoint());
  }
  m.xi_ = state.col(0);
  for (std::size_t v = 1; v <= n; ++v) {
    const Site& s = m.sites_[v - 1];
    Complex lifted = m.state_moment({static_cast<Vertex>(v)});
    if (std::abs(lifted - s.state(s.op)) > 1e-12) {
      throw InvalidInput("marginal of vertex " + std::to_string(v) + " is not preserved by the embedding");
    }
  }
  return m;
}

std::size_t OperatorModel::slot(Vertex v) const {
  auto i = graph_.index_of(v);
  if (!i) throw InvalidInput("letter " + std::to_string(v) + " is not a model vertex");
  return *i;
}

void OperatorModel::apply_local(std::size_t s, const Matrix& a, Matrix& x) const {
  const auto d = static_cast<std::size_t>(sites_[s].dim());
  const std::size_t st = stride_[s];
  const std::size_t block = d * st;
  std::vector<Complex> buf(d);
  for (Eigen::Index c = 0; c < x.cols(); ++c) {
    for (std::size_t base = 0; base < dimension_; base += block) {
      for (std::size_t i = 0; i < st; ++i) {
        for (std::size_t r = 0; r < d; ++r) {
          Complex sum = 0.0;
          for (std::size_t t = 0; t < d; ++t) {
            sum += a(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(t)) *
                   x(static_cast<Eigen::Index>(base + t * st + i), c);
          }
          buf[r] = sum;
        }
        for (std::size_t r = 0; r < d; ++r) x(static_cast<Eigen::Index>(base + r * st + i), c) = buf[r];
      }
    }
  }
}

Matrix OperatorModel::apply(Vertex v, const Matrix& a, const Matrix& x) const {
  const std::size_t sv = slot(v);
  if (a.rows() != sites_[sv].dim() || a.cols() != sites_[sv].dim()) throw InvalidInput("local operator has the wrong shape");
  if (static_cast<std::size_t>(x.rows()) != dimension_) throw InvalidInput("vector has the wrong dimension");
  Matrix y = x;
  for (std::size_t j = 0; j < sites_.size(); ++j) {
    if (j == sv) continue;
    if (!graph_.has_edge_at(sv, j)) apply_local(j, projections_[j], y);
  }
  apply_local(sv, a, y);
  return y;
}

Matrix OperatorModel::embed(Vertex v, const Matrix& a) const {
  if (dimension_ > kMaxEmbedDimension) {
    throw CapExceeded("materializing a " + std::to_string(dimension_) + "-dimensional operator exceeds the cap " +
                      std::to_string(kMaxEmbedDimension));
  }
  const std::size_t sv = slot(v);
  Matrix out = Matrix::Ones(1, 1);
  for (std::size_t j = 0; j < sites_.size(); ++j) {
    const auto d = sites_[j].dim();
    if (j == sv) {
      out = kron(out, a);
    } else if (graph_.has_edge_at(sv, j)) {
      out = kron(out, Matrix::Identity(d, d));
    } else {
      out = kron(out, projections_[j]);
    }
  }
  return out;
}

Complex OperatorModel::state_moment(const Word& w) const {
  Matrix x = xi_;
  for (std::size_t k = w.size(); k-- > 0;) x = apply(w[k], sites_[slot(w[k])].op, x);
  return xi_.dot(x.col(0));
}

void VerifyReport::record(double deviation, double tolerance, const std::string& what) {
  ++checked;
  if (deviation > max_deviation) max_deviation = deviation;
  if (deviation > tolerance) {
    ++violations;
    if (examples.size() < 10) {
      std::ostringstream out;
      out << what << " deviation " << deviation;
      examples.push_back(out.str());
    }
  }
}

VerifyReport verify_bmt(const OperatorModel& model, const BmtEnsemble& e, int max_len, std::uint64_t seed,
                        std::size_t samples) {
  if (!(model.graph() == e.graph())) throw InvalidInput("model and ensemble graphs differ");
  if (max_len < 0) throw InvalidInput("max length must be non-negative");
  const auto& vs = model.graph().vertices();
  for (Vertex v : vs) {
    const Site& s = model.sites()[static_cast<std::size_t>(v - 1)];
    Matrix power = Matrix::Identity(s.dim(), s.dim());
    for (int k = 1; k <= max_len; ++k) {
      power = power * s.op;
      double want = to_double(e.marginal(v).moment(k));
      if (std::abs(s.state(power) - want) > 1e-12) {
        throw InvalidInput("site " + std::to_string(v) + " moment " + std::to_string(k) +
                           " disagrees with the ensemble marginal");
      }
    }
  }
  VerifyReport report;
  auto check = [&](const Word& w) {
    Complex got = model.state_moment(w);
    double want = to_double(mixed_moment(e, w));
    report.record(std::abs(got - want), kOracleTolerance, "word (" + to_string(w) + ")");
  };
  report.exhaustive = vs.size() <= 5 && max_len <= 6;
  if (report.exhaustive) {
    check({});
    std::vector<Word> frontier{Word{}};
    for (int len = 1; len <= max_len; ++len) {
      std::vector<Word> next;
      for (const Word& w : frontier) {
        for (Vertex v : vs) {
          Word x = w;
          x.push_back(v);
          check(x);
          next.push_back(std::move(x));
        }
      }
      frontier = std::move(next);
    }
  } else {
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> len_dist(1, std::max(1, max_len));
    std::uniform_int_distribution<std::size_t> letter(0, vs.size() - 1);
    for (std::size_t s = 0; s < samples; ++s) {
      Word w(static_cast<std::size_t>(len_dist(rng)));
      for (Vertex& x : w) x = vs[letter(rng)];
      check(w);
    }
  }
  return report;
}

namespace {

Matrix random_matrix(int d, std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  Matrix m(d, d);
  for (Eigen::Index i = 0; i < d; ++i) {
    for (Eigen::Index j = 0; j < d; ++j) m(i, j) = Complex(normal(rng), normal(rng));
  }
  return m;
}

}  // namespace

VerifyReport verify_bm1(const OperatorModel& model, const PartialOrder& order, int draws, std::uint64_t seed) {
  if (!(model.graph() == order.digraph())) throw InvalidInput("model graph is not the digraph of the given order");
  if (model.dimension() > kMaxEmbedDimension) {
    throw CapExceeded("BM1 check materializes operators; dimension exceeds the cap " + std::to_string(kMaxEmbedDimension));
  }
  std::mt19937_64 rng(seed);
  VerifyReport report;
  report.exhaustive = true;
  const int n = order.size();
  const Matrix identity = Matrix::Identity(static_cast<Eigen::Index>(model.dimension()),
                                           static_cast<Eigen::Index>(model.dimension()));
  for (int x = 1; x <= n; ++x) {
    for (int r = 1; r <= n; ++r) {
      for (int y = 1; y <= n; ++y) {
        if (x == r || r == y) continue;
        bool pattern = (order.below(x, r) && order.below(y, r)) || (order.incomparable(x, r) && order.below(y, r)) ||
                       (order.below(x, r) && order.incomparable(r, y));
        if (!pattern) continue;
        for (int draw = 0; draw < draws; ++draw) {
          const Site& sx = model.sites()[static_cast<std::size_t>(x - 1)];
          const Site& sr = model.sites()[static_cast<std::size_t>(r - 1)];
          const Site& sy = model.sites()[static_cast<std::size_t>(y - 1)];
          Matrix t1 = random_matrix(sx.dim(), rng);
          Matrix t2 = random_matrix(sr.dim(), rng);
          Matrix t3 = random_matrix(sy.dim(), rng);
          Matrix right = model.apply(y, t3, identity);
          Matrix lhs = model.apply(x, t1, model.apply(r, t2, right));
          Matrix rhs = sr.state(t2) * model.apply(x, t1, right);
          double dev = (lhs - rhs).cwiseAbs().maxCoeff();
          report.record(dev, kOracleTolerance,
                        "triple (" + std::to_string(x) + "," + std::to_string(r) + "," + std::to_string(y) + ")");
        }
      }
    }
  }
  return report;
}

}  // namespace bmt
