#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

namespace bmt {

using Vertex = int;
using Edge = std::pair<Vertex, Vertex>;

/// Largest vertex count any generator or parser will produce.
inline constexpr int kMaxVertices = 512;

/// A simple directed graph on a non-empty set of positive integers.
///
/// An edge (u, v) means the algebra at u sees the algebra at v through an
/// identity leg: both orientations present is the tensor relation, exactly
/// one is monotone, neither is Boolean. Values are immutable once built.
class Digraph {
 public:
  /// Throws InvalidInput on loops, non-positive labels, dangling endpoints,
  /// or an empty vertex set. Duplicate vertices and edges are merged.
  Digraph(std::vector<Vertex> vertices, const std::vector<Edge>& edges = {});

  /// Vertices 1..n with the given edges.
  static Digraph on_range(int n, const std::vector<Edge>& edges = {});

  const std::vector<Vertex>& vertices() const { return vertices_; }
  const std::set<Edge>& edges() const { return edges_; }
  std::size_t num_vertices() const { return vertices_.size(); }
  std::size_t num_edges() const { return edges_.size(); }

  bool has_vertex(Vertex v) const { return index_of(v).has_value(); }
  bool has_edge(Vertex u, Vertex v) const;

  /// Position of v in the sorted vertex list.
  std::optional<std::size_t> index_of(Vertex v) const;
  /// Edge test by vertex position, O(1).
  bool has_edge_at(std::size_t from, std::size_t to) const {
    return adjacency_[from * vertices_.size() + to] != 0;
  }

  /// "vertices: v1 ... vk" followed by one "u v" line per edge.
  std::string to_text() const;
  static Digraph parse_text(std::string_view text);

  friend bool operator==(const Digraph& a, const Digraph& b) {
    return a.vertices_ == b.vertices_ && a.edges_ == b.edges_;
  }

 private:
  std::vector<Vertex> vertices_;
  std::set<Edge> edges_;
  std::vector<std::uint8_t> adjacency_;
};

bool is_subgraph(const Digraph& g, const Digraph& h);

/// Induced subgraph on vs. Throws InvalidInput if vs is empty or names an
/// unknown vertex.
Digraph restrict(const Digraph& g, const std::vector<Vertex>& vs);

/// |E(g) xor E(h)|; requires equal vertex sets.
std::size_t symmetric_difference_size(const Digraph& g, const Digraph& h);

/// g with extra edges; vertices unchanged.
Digraph with_edges(const Digraph& g, const std::vector<Edge>& extra);

/// Every digraph on vertices 1..n, 2^(n(n-1)) of them. Requires n <= 4.
std::vector<Digraph> all_digraphs_on(int n);

/// A strict partial order on 1..n, stored as its transitive closure.
/// below(a, b) means a precedes b. The associated digraph has the edge
/// (b, a) exactly when a precedes b, so the larger element points down.
class PartialOrder {
 public:
  /// Takes generating relations (a, b) meaning a < b; closes transitively.
  /// Throws InvalidInput on cycles or out-of-range elements.
  PartialOrder(int n, const std::vector<std::pair<int, int>>& less_than);

  static PartialOrder chain(int n);
  static PartialOrder antichain(int n);
  /// The zigzag 1<3, 2<3, 2<4.
  static PartialOrder n_shaped();
  /// Reads the order back out of a partial-order digraph. Throws
  /// InvalidInput if g is not one (double edge or missing transitive edge).
  static PartialOrder from_digraph(const Digraph& g);

  int size() const { return n_; }
  bool below(int a, int b) const { return closure_[idx(a, b)] != 0; }
  bool incomparable(int a, int b) const { return a != b && !below(a, b) && !below(b, a); }
  Digraph digraph() const;

 private:
  std::size_t idx(int a, int b) const {
    return static_cast<std::size_t>(a - 1) * static_cast<std::size_t>(n_) + static_cast<std::size_t>(b - 1);
  }
  int n_;
  std::vector<std::uint8_t> closure_;
};

/// True when g has no double edges and its edge relation is transitive,
/// i.e. g is the digraph of some partial order on its vertex set.
bool is_partial_order_digraph(const Digraph& g);

namespace family {
struct Empty { int n; };
struct Complete { int n; };
/// Edge (j, i) iff i < j.
struct TotalOrder { int n; };
struct Poset { int n; std::vector<std::pair<int, int>> less_than; };
/// Parts [1..m] and [m+1..m+l], every cross pair joined both ways.
struct CompleteBipartite { int m; int l; };
/// r contiguous parts, sizes as equal as possible with larger parts first.
struct Turan { int n; int r; };
/// Complete graph on [1..m] plus complete graph on [m+1..m+l].
struct DisjointCompletePair { int m; int l; };
/// 2^level vertices built by doubling; odd levels join the two copies
/// completely in both directions, even levels leave them disjoint.
struct Counterexample { int level; };
/// Edges (j, 1) for j = 2..n.
struct Star { int n; };
}  // namespace family

using GraphFamily = std::variant<family::Empty, family::Complete, family::TotalOrder, family::Poset,
                                 family::CompleteBipartite, family::Turan, family::DisjointCompletePair,
                                 family::Counterexample, family::Star>;

/// Throws CapExceeded above kMaxVertices, InvalidInput on bad parameters.
Digraph generate(const GraphFamily& family);

std::string family_name(const GraphFamily& family);

/// A family spec whose integer arguments may depend on a size parameter N,
/// e.g. "turan:N,3", "bipartite:N/2,N/2", "complete:5", "counterexample:3".
/// Argument grammar: INT | N | N/INT | N-INT | N+INT | INT*N.
class FamilyTemplate {
 public:
  static FamilyTemplate parse(std::string_view spec);

  /// Throws InvalidInput if the spec uses N and no value is supplied.
  GraphFamily instantiate(std::optional<int> n = std::nullopt) const;
  bool depends_on_n() const;
  const std::string& spec() const { return spec_; }
  const std::string& kind() const { return kind_; }

 private:
  struct Arg {
    enum class Op { Constant, Plus, Minus, Div, Times } op = Op::Constant;
    bool uses_n = false;
    long value = 0;
    int eval(std::optional<int> n) const;
  };
  std::string spec_;
  std::string kind_;
  std::vector<Arg> args_;
  std::vector<std::pair<int, int>> relations_;
};

}  // namespace bmt
