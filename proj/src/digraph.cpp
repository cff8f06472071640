#include "bmt/digraph.hpp"

#include "bmt/errors.hpp"

#include <algorithm>
#include <charconv>
#include <sstream>

namespace bmt {

namespace {

std::string edge_str(const Edge& e) {
  return "(" + std::to_string(e.first) + "," + std::to_string(e.second) + ")";
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

int parse_int(std::string_view s, const char* what) {
  s = trim(s);
  int value = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw InvalidInput(std::string("bad ") + what + ": '" + std::string(s) + "'");
  }
  return value;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    auto pos = s.find(sep, start);
    out.push_back(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

void check_size(long n, const char* what) {
  if (n < 1) throw InvalidInput(std::string(what) + " must be positive, got " + std::to_string(n));
  if (n > kMaxVertices) {
    throw CapExceeded(std::string(what) + "=" + std::to_string(n) + " exceeds the vertex cap " +
                      std::to_string(kMaxVertices));
  }
}

}  // namespace

Digraph::Digraph(std::vector<Vertex> vertices, const std::vector<Edge>& edges) : vertices_(std::move(vertices)) {
  std::sort(vertices_.begin(), vertices_.end());
  vertices_.erase(std::unique(vertices_.begin(), vertices_.end()), vertices_.end());
  if (vertices_.empty()) throw InvalidInput("a digraph needs at least one vertex");
  if (vertices_.front() < 1) throw InvalidInput("vertex labels must be positive integers");
  if (vertices_.size() > static_cast<std::size_t>(kMaxVertices)) {
    throw CapExceeded("digraph with " + std::to_string(vertices_.size()) + " vertices exceeds the cap " +
                      std::to_string(kMaxVertices));
  }
  const std::size_t n = vertices_.size();
  adjacency_.assign(n * n, 0);
  for (const Edge& e : edges) {
    if (e.first == e.second) throw InvalidInput("loop " + edge_str(e) + " is not allowed");
    auto from = index_of(e.first);
    auto to = index_of(e.second);
    if (!from || !to) throw InvalidInput("edge " + edge_str(e) + " has an endpoint outside the vertex set");
    edges_.insert(e);
    adjacency_[*from * n + *to] = 1;
  }
}

Digraph Digraph::on_range(int n, const std::vector<Edge>& edges) {
  check_size(n, "vertex count");
  std::vector<Vertex> vs(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) vs[static_cast<std::size_t>(i)] = i + 1;
  return Digraph(std::move(vs), edges);
}

std::optional<std::size_t> Digraph::index_of(Vertex v) const {
  auto it = std::lower_bound(vertices_.begin(), vertices_.end(), v);
  if (it == vertices_.end() || *it != v) return std::nullopt;
  return static_cast<std::size_t>(it - vertices_.begin());
}

bool Digraph::has_edge(Vertex u, Vertex v) const {
  auto from = index_of(u);
  auto to = index_of(v);
  return from && to && has_edge_at(*from, *to);
}

std::string Digraph::to_text() const {
  std::ostringstream out;
  out << "vertices:";
  for (Vertex v : vertices_) out << ' ' << v;
  out << '\n';
  for (const Edge& e : edges_) out << e.first << ' ' << e.second << '\n';
  return out.str();
}

Digraph Digraph::parse_text(std::string_view text) {
  std::optional<std::vector<Vertex>> vertices;
  std::vector<Edge> edges;
  int line_no = 0;
  for (std::string_view raw : split(text, '\n')) {
    ++line_no;
    std::string_view line = raw;
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    if (!vertices) {
      constexpr std::string_view kHeader = "vertices:";
      if (line.substr(0, kHeader.size()) != kHeader) {
        throw InvalidInput("line " + std::to_string(line_no) + ": expected 'vertices:' header");
      }
      vertices.emplace();
      std::istringstream in{std::string(line.substr(kHeader.size()))};
      std::string token;
      while (in >> token) vertices->push_back(parse_int(token, "vertex"));
      continue;
    }
    std::istringstream in{std::string(line)};
    std::string a, b, extra;
    if (!(in >> a >> b) || (in >> extra)) {
      throw InvalidInput("line " + std::to_string(line_no) + ": expected 'u v'");
    }
    edges.emplace_back(parse_int(a, "vertex"), parse_int(b, "vertex"));
  }
  if (!vertices) throw InvalidInput("graph text has no 'vertices:' line");
  return Digraph(std::move(*vertices), edges);
}

bool is_subgraph(const Digraph& g, const Digraph& h) {
  if (!std::includes(h.vertices().begin(), h.vertices().end(), g.vertices().begin(), g.vertices().end())) {
    return false;
  }
  return std::all_of(g.edges().begin(), g.edges().end(),
                     [&](const Edge& e) { return h.has_edge(e.first, e.second); });
}

Digraph restrict(const Digraph& g, const std::vector<Vertex>& vs) {
  for (Vertex v : vs) {
    if (!g.has_vertex(v)) throw InvalidInput("restrict: unknown vertex " + std::to_string(v));
  }
  std::vector<Edge> kept;
  for (const Edge& e : g.edges()) {
    bool a = std::find(vs.begin(), vs.end(), e.first) != vs.end();
    bool b = std::find(vs.begin(), vs.end(), e.second) != vs.end();
    if (a && b) kept.push_back(e);
  }
  return Digraph(vs, kept);
}

std::size_t symmetric_difference_size(const Digraph& g, const Digraph& h) {
  if (g.vertices() != h.vertices()) throw InvalidInput("symmetric difference needs equal vertex sets");
  std::vector<Edge> diff;
  std::set_symmetric_difference(g.edges().begin(), g.edges().end(), h.edges().begin(), h.edges().end(),
                                std::back_inserter(diff));
  return diff.size();
}

Digraph with_edges(const Digraph& g, const std::vector<Edge>& extra) {
  std::vector<Edge> all(g.edges().begin(), g.edges().end());
  all.insert(all.end(), extra.begin(), extra.end());
  return Digraph(g.vertices(), all);
}

std::vector<Digraph> all_digraphs_on(int n) {
  if (n < 1 || n > 4) throw CapExceeded("all_digraphs_on supports 1 <= n <= 4");
  std::vector<Edge> slots;
  for (int a = 1; a <= n; ++a) {
    for (int b = 1; b <= n; ++b) {
      if (a != b) slots.emplace_back(a, b);
    }
  }
  std::vector<Digraph> out;
  for (std::uint32_t mask = 0; mask < (1u << slots.size()); ++mask) {
    std::vector<Edge> edges;
    for (std::size_t k = 0; k < slots.size(); ++k) {
      if (mask & (1u << k)) edges.push_back(slots[k]);
    }
    out.push_back(Digraph::on_range(n, edges));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Partial orders

PartialOrder::PartialOrder(int n, const std::vector<std::pair<int, int>>& less_than) : n_(n) {
  check_size(n, "poset size");
  closure_.assign(static_cast<std::size_t>(n) * static_cast<std::size_t>(n), 0);
  for (auto [a, b] : less_than) {
    if (a < 1 || a > n || b < 1 || b > n) {
      throw InvalidInput("relation " + std::to_string(a) + "<" + std::to_string(b) + " is out of range");
    }
    closure_[idx(a, b)] = 1;
  }
  // Warshall
  for (int k = 1; k <= n; ++k) {
    for (int i = 1; i <= n; ++i) {
      if (!closure_[idx(i, k)]) continue;
      for (int j = 1; j <= n; ++j) {
        if (closure_[idx(k, j)]) closure_[idx(i, j)] = 1;
      }
    }
  }
  for (int i = 1; i <= n; ++i) {
    if (closure_[idx(i, i)]) throw InvalidInput("relations contain a cycle through " + std::to_string(i));
  }
}

PartialOrder PartialOrder::chain(int n) {
  std::vector<std::pair<int, int>> rel;
  for (int i = 1; i < n; ++i) rel.emplace_back(i, i + 1);
  return PartialOrder(n, rel);
}

PartialOrder PartialOrder::antichain(int n) { return PartialOrder(n, {}); }

PartialOrder PartialOrder::n_shaped() { return PartialOrder(4, {{1, 3}, {2, 3}, {2, 4}}); }

PartialOrder PartialOrder::from_digraph(const Digraph& g) {
  if (!is_partial_order_digraph(g)) throw InvalidInput("graph is not the digraph of a partial order");
  const auto& vs = g.vertices();
  int n = static_cast<int>(vs.size());
  if (vs.back() != n) throw InvalidInput("partial-order digraph must have vertices 1..n");
  std::vector<std::pair<int, int>> rel;
  for (const Edge& e : g.edges()) rel.emplace_back(e.second, e.first);
  return PartialOrder(n, rel);
}

Digraph PartialOrder::digraph() const {
  std::vector<Edge> edges;
  for (int a = 1; a <= n_; ++a) {
    for (int b = 1; b <= n_; ++b) {
      if (below(a, b)) edges.emplace_back(b, a);
    }
  }
  return Digraph::on_range(n_, edges);
}

bool is_partial_order_digraph(const Digraph& g) {
  const std::size_t n = g.num_vertices();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (!g.has_edge_at(i, j)) continue;
      if (g.has_edge_at(j, i)) return false;
      for (std::size_t k = 0; k < n; ++k) {
        if (k != i && g.has_edge_at(j, k) && !g.has_edge_at(i, k)) return false;
      }
    }
  }
  return true;
}

// ---------------------------------------------------------------------------
// Generators

namespace {

Digraph make_counterexample(int level) {
  if (level < 0) throw InvalidInput("counterexample level must be >= 0");
  if (level > 9) throw CapExceeded("counterexample level " + std::to_string(level) + " exceeds the cap 9");
  std::vector<Edge> edges;
  int size = 1;
  for (int step = 1; step <= level; ++step) {
    std::size_t existing = edges.size();
    for (std::size_t e = 0; e < existing; ++e) {
      edges.emplace_back(edges[e].first + size, edges[e].second + size);
    }
    if (step % 2 == 1) {
      for (int a = 1; a <= size; ++a) {
        for (int b = size + 1; b <= 2 * size; ++b) {
          edges.emplace_back(a, b);
          edges.emplace_back(b, a);
        }
      }
    }
    size *= 2;
  }
  return Digraph::on_range(size, edges);
}

void join_parts(std::vector<Edge>& edges, int lo1, int hi1, int lo2, int hi2) {
  for (int a = lo1; a <= hi1; ++a) {
    for (int b = lo2; b <= hi2; ++b) {
      edges.emplace_back(a, b);
      edges.emplace_back(b, a);
    }
  }
}

void clique(std::vector<Edge>& edges, int lo, int hi) {
  for (int a = lo; a <= hi; ++a) {
    for (int b = lo; b <= hi; ++b) {
      if (a != b) edges.emplace_back(a, b);
    }
  }
}

struct Generator {
  Digraph operator()(const family::Empty& f) const {
    check_size(f.n, "N");
    return Digraph::on_range(f.n);
  }
  Digraph operator()(const family::Complete& f) const {
    check_size(f.n, "N");
    std::vector<Edge> edges;
    clique(edges, 1, f.n);
    return Digraph::on_range(f.n, edges);
  }
  Digraph operator()(const family::TotalOrder& f) const {
    check_size(f.n, "N");
    std::vector<Edge> edges;
    for (int j = 1; j <= f.n; ++j) {
      for (int i = 1; i < j; ++i) edges.emplace_back(j, i);
    }
    return Digraph::on_range(f.n, edges);
  }
  Digraph operator()(const family::Poset& f) const { return PartialOrder(f.n, f.less_than).digraph(); }
  Digraph operator()(const family::CompleteBipartite& f) const {
    if (f.m < 0 || f.l < 0) throw InvalidInput("bipartite part sizes must be non-negative");
    check_size(f.m + f.l, "M+L");
    std::vector<Edge> edges;
    join_parts(edges, 1, f.m, f.m + 1, f.m + f.l);
    return Digraph::on_range(f.m + f.l, edges);
  }
  Digraph operator()(const family::Turan& f) const {
    check_size(f.n, "N");
    if (f.r < 1 || f.r > f.n) throw InvalidInput("Turan graph needs 1 <= r <= N");
    std::vector<int> start;
    int base = f.n / f.r;
    int extra = f.n % f.r;
    int next = 1;
    for (int p = 0; p < f.r; ++p) {
      start.push_back(next);
      next += base + (p < extra ? 1 : 0);
    }
    start.push_back(f.n + 1);
    std::vector<Edge> edges;
    for (int p = 0; p < f.r; ++p) {
      for (int q = p + 1; q < f.r; ++q) join_parts(edges, start[p], start[p + 1] - 1, start[q], start[q + 1] - 1);
    }
    return Digraph::on_range(f.n, edges);
  }
  Digraph operator()(const family::DisjointCompletePair& f) const {
    if (f.m < 0 || f.l < 0) throw InvalidInput("clique sizes must be non-negative");
    check_size(f.m + f.l, "M+L");
    std::vector<Edge> edges;
    clique(edges, 1, f.m);
    clique(edges, f.m + 1, f.m + f.l);
    return Digraph::on_range(f.m + f.l, edges);
  }
  Digraph operator()(const family::Counterexample& f) const { return make_counterexample(f.level); }
  Digraph operator()(const family::Star& f) const {
    check_size(f.n, "N");
    std::vector<Edge> edges;
    for (int j = 2; j <= f.n; ++j) edges.emplace_back(j, 1);
    return Digraph::on_range(f.n, edges);
  }
};

struct Namer {
  std::string operator()(const family::Empty& f) const { return "empty:" + std::to_string(f.n); }
  std::string operator()(const family::Complete& f) const { return "complete:" + std::to_string(f.n); }
  std::string operator()(const family::TotalOrder& f) const { return "total:" + std::to_string(f.n); }
  std::string operator()(const family::Poset& f) const {
    std::string s = "poset:" + std::to_string(f.n);
    for (auto [a, b] : f.less_than) s += "," + std::to_string(a) + "<" + std::to_string(b);
    return s;
  }
  std::string operator()(const family::CompleteBipartite& f) const {
    return "bipartite:" + std::to_string(f.m) + "," + std::to_string(f.l);
  }
  std::string operator()(const family::Turan& f) const {
    return "turan:" + std::to_string(f.n) + "," + std::to_string(f.r);
  }
  std::string operator()(const family::DisjointCompletePair& f) const {
    return "cliquepair:" + std::to_string(f.m) + "," + std::to_string(f.l);
  }
  std::string operator()(const family::Counterexample& f) const {
    return "counterexample:" + std::to_string(f.level);
  }
  std::string operator()(const family::Star& f) const { return "star:" + std::to_string(f.n); }
};

}  // namespace

Digraph generate(const GraphFamily& family) { return std::visit(Generator{}, family); }

std::string family_name(const GraphFamily& family) { return std::visit(Namer{}, family); }

// ---------------------------------------------------------------------------
// Family specs

int FamilyTemplate::Arg::eval(std::optional<int> n) const {
  if (!uses_n) return static_cast<int>(value);
  if (!n) throw InvalidInput("family spec uses N but no N was given");
  switch (op) {
    case Op::Constant: return *n;
    case Op::Plus: return *n + static_cast<int>(value);
    case Op::Minus: return *n - static_cast<int>(value);
    case Op::Div: return *n / static_cast<int>(value);
    case Op::Times: return *n * static_cast<int>(value);
  }
  return *n;
}

FamilyTemplate FamilyTemplate::parse(std::string_view spec) {
  FamilyTemplate t;
  t.spec_ = std::string(spec);
  auto colon = spec.find(':');
  if (colon == std::string_view::npos) throw InvalidInput("family spec '" + t.spec_ + "' must look like name:args");
  t.kind_ = std::string(trim(spec.substr(0, colon)));
  static const std::vector<std::string> kKinds = {"empty",     "complete",   "total",          "poset", "bipartite",
                                                  "turan",     "cliquepair", "counterexample", "star"};
  if (std::find(kKinds.begin(), kKinds.end(), t.kind_) == kKinds.end()) {
    throw InvalidInput("unknown graph family '" + t.kind_ + "'");
  }
  for (std::string_view raw : split(spec.substr(colon + 1), ',')) {
    std::string_view tok = trim(raw);
    if (tok.empty()) throw InvalidInput("empty argument in family spec '" + t.spec_ + "'");
    if (t.kind_ == "poset" && tok.find('<') != std::string_view::npos) {
      auto lt = tok.find('<');
      t.relations_.emplace_back(parse_int(tok.substr(0, lt), "poset element"),
                                parse_int(tok.substr(lt + 1), "poset element"));
      continue;
    }
    Arg arg;
    if (tok.front() == 'N') {
      arg.uses_n = true;
      std::string_view rest = tok.substr(1);
      if (!rest.empty()) {
        switch (rest.front()) {
          case '+': arg.op = Arg::Op::Plus; break;
          case '-': arg.op = Arg::Op::Minus; break;
          case '/': arg.op = Arg::Op::Div; break;
          default: throw InvalidInput("bad N expression '" + std::string(tok) + "'");
        }
        arg.value = parse_int(rest.substr(1), "N expression");
        if (arg.op == Arg::Op::Div && arg.value <= 0) throw InvalidInput("division by non-positive in family spec");
      }
    } else if (auto star = tok.find('*'); star != std::string_view::npos) {
      if (trim(tok.substr(star + 1)) != "N") throw InvalidInput("bad N expression '" + std::string(tok) + "'");
      arg.uses_n = true;
      arg.op = Arg::Op::Times;
      arg.value = parse_int(tok.substr(0, star), "N multiplier");
    } else {
      arg.value = parse_int(tok, "family argument");
    }
    t.args_.push_back(arg);
  }
  std::size_t want = (t.kind_ == "bipartite" || t.kind_ == "turan" || t.kind_ == "cliquepair") ? 2 : 1;
  if (t.args_.size() != want) {
    throw InvalidInput("family '" + t.kind_ + "' takes " + std::to_string(want) + " integer argument(s)");
  }
  return t;
}

bool FamilyTemplate::depends_on_n() const {
  return std::any_of(args_.begin(), args_.end(), [](const Arg& a) { return a.uses_n; });
}

GraphFamily FamilyTemplate::instantiate(std::optional<int> n) const {
  auto a = [&](std::size_t i) { return args_[i].eval(n); };
  if (kind_ == "empty") return family::Empty{a(0)};
  if (kind_ == "complete") return family::Complete{a(0)};
  if (kind_ == "total") return family::TotalOrder{a(0)};
  if (kind_ == "poset") return family::Poset{a(0), relations_};
  if (kind_ == "bipartite") return family::CompleteBipartite{a(0), a(1)};
  if (kind_ == "turan") return family::Turan{a(0), a(1)};
  if (kind_ == "cliquepair") return family::DisjointCompletePair{a(0), a(1)};
  if (kind_ == "counterexample") return family::Counterexample{a(0)};
  return family::Star{a(0)};
}

}  // namespace bmt
