#include "bmt/partitions.hpp"

#include "bmt/errors.hpp"

#include <algorithm>
#include <charconv>
#include <sstream>

namespace bmt {

namespace {

int parse_element(std::string_view s) {
  while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
  while (!s.empty() && s.back() == ' ') s.remove_suffix(1);
  int value = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size()) {
    throw InvalidInput("bad partition element '" + std::string(s) + "'");
  }
  return value;
}

std::string join(const Block& b, char sep) {
  std::string out;
  for (std::size_t k = 0; k < b.size(); ++k) {
    if (k) out += sep;
    out += std::to_string(b[k]);
  }
  return out;
}

// Labels of the merged sequence of two disjoint blocks with equal neighbours
// collapsed: 0 for b, 1 for c.
std::vector<int> runs(const Block& b, const Block& c) {
  if (b.empty() || c.empty()) throw InvalidInput("blocks must be non-empty");
  std::vector<int> out;
  std::size_t i = 0, j = 0;
  while (i < b.size() || j < c.size()) {
    int label;
    if (j == c.size() || (i < b.size() && b[i] < c[j])) {
      label = 0;
      ++i;
    } else if (i == b.size() || c[j] < b[i]) {
      label = 1;
      ++j;
    } else {
      throw InvalidInput("blocks overlap at " + std::to_string(b[i]));
    }
    if (out.empty() || out.back() != label) out.push_back(label);
  }
  return out;
}

}  // namespace

Partition::Partition(std::vector<int> rgs) : rgs_(std::move(rgs)) {
  int count = 0;
  for (int r : rgs_) count = std::max(count, r + 1);
  blocks_.assign(static_cast<std::size_t>(count), {});
  for (std::size_t k = 0; k < rgs_.size(); ++k) blocks_[static_cast<std::size_t>(rgs_[k])].push_back(static_cast<int>(k) + 1);
}

Partition Partition::from_rgs(std::vector<int> rgs) {
  if (rgs.empty()) throw InvalidInput("partition of an empty set");
  int next = 0;
  for (int r : rgs) {
    if (r < 0 || r > next) throw InvalidInput("not a restricted-growth string");
    if (r == next) ++next;
  }
  return Partition(std::move(rgs));
}

Partition Partition::from_blocks(int m, std::vector<Block> blocks) {
  if (m < 1) throw InvalidInput("partition size must be positive");
  std::vector<int> owner(static_cast<std::size_t>(m), -1);
  for (std::size_t bi = 0; bi < blocks.size(); ++bi) {
    if (blocks[bi].empty()) throw InvalidInput("partition has an empty block");
    for (int e : blocks[bi]) {
      if (e < 1 || e > m) throw InvalidInput("element " + std::to_string(e) + " outside [1," + std::to_string(m) + "]");
      if (owner[static_cast<std::size_t>(e - 1)] != -1) throw InvalidInput("element " + std::to_string(e) + " repeated");
      owner[static_cast<std::size_t>(e - 1)] = static_cast<int>(bi);
    }
  }
  std::vector<int> relabel(blocks.size(), -1);
  std::vector<int> rgs(static_cast<std::size_t>(m));
  int next = 0;
  for (int k = 0; k < m; ++k) {
    int o = owner[static_cast<std::size_t>(k)];
    if (o == -1) throw InvalidInput("element " + std::to_string(k + 1) + " not covered");
    if (relabel[static_cast<std::size_t>(o)] == -1) relabel[static_cast<std::size_t>(o)] = next++;
    rgs[static_cast<std::size_t>(k)] = relabel[static_cast<std::size_t>(o)];
  }
  return Partition(std::move(rgs));
}

Partition Partition::parse(std::string_view text) {
  std::vector<Block> blocks;
  int m = 0;
  std::size_t start = 0;
  while (true) {
    auto slash = text.find('/', start);
    std::string_view part = text.substr(start, slash == std::string_view::npos ? std::string_view::npos : slash - start);
    Block b;
    std::size_t s = 0;
    while (true) {
      auto comma = part.find(',', s);
      b.push_back(parse_element(part.substr(s, comma == std::string_view::npos ? std::string_view::npos : comma - s)));
      m = std::max(m, b.back());
      if (comma == std::string_view::npos) break;
      s = comma + 1;
    }
    blocks.push_back(std::move(b));
    if (slash == std::string_view::npos) break;
    start = slash + 1;
  }
  return from_blocks(m, std::move(blocks));
}

bool Partition::is_pairing() const {
  return std::all_of(blocks_.begin(), blocks_.end(), [](const Block& b) { return b.size() == 2; });
}

bool Partition::is_even() const {
  return std::all_of(blocks_.begin(), blocks_.end(), [](const Block& b) { return b.size() % 2 == 0; });
}

bool Partition::has_singleton() const {
  return std::any_of(blocks_.begin(), blocks_.end(), [](const Block& b) { return b.size() == 1; });
}

bool Partition::is_noncrossing() const {
  for (std::size_t i = 0; i < blocks_.size(); ++i) {
    for (std::size_t j = i + 1; j < blocks_.size(); ++j) {
      if (crossing(blocks_[i], blocks_[j])) return false;
    }
  }
  return true;
}

bool Partition::is_interval() const {
  return std::all_of(blocks_.begin(), blocks_.end(),
                     [](const Block& b) { return b.back() - b.front() + 1 == static_cast<int>(b.size()); });
}

std::string Partition::to_string() const {
  std::string out;
  for (std::size_t i = 0; i < blocks_.size(); ++i) {
    if (i) out += '/';
    out += join(blocks_[i], ',');
  }
  return out;
}

std::string Partition::to_set_notation() const {
  std::string out = "{";
  for (std::size_t i = 0; i < blocks_.size(); ++i) {
    if (i) out += ',';
    out += "{" + join(blocks_[i], ',') + "}";
  }
  return out + "}";
}

bool is_refinement(const Partition& p, const Partition& q) {
  if (p.size() != q.size()) throw InvalidInput("refinement test needs partitions of the same set");
  for (const Block& b : p.blocks()) {
    int target = q.block_of(b.front());
    for (int e : b) {
      if (q.block_of(e) != target) return false;
    }
  }
  return true;
}

bool nested(const Block& b, const Block& c) {
  auto r = runs(b, c);
  return r.size() == 3 && r.front() == 1;
}

bool crossing(const Block& b, const Block& c) { return runs(b, c).size() >= 4; }

Digraph nesting_crossing_graph(const Partition& p) {
  const auto& blocks = p.blocks();
  std::vector<Edge> edges;
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    for (std::size_t j = 0; j < blocks.size(); ++j) {
      if (i == j) continue;
      const Block& c = blocks[j];
      bool straddled = std::any_of(blocks[i].begin(), blocks[i].end(),
                                   [&](int l) { return c.front() < l && l < c.back(); });
      if (straddled) edges.emplace_back(static_cast<int>(i) + 1, static_cast<int>(j) + 1);
    }
  }
  return Digraph::on_range(static_cast<int>(blocks.size()), edges);
}

Integer nesting_forest_extensions(const Partition& p) {
  if (!p.is_noncrossing()) throw InvalidInput("nesting forest needs a non-crossing partition, got " + p.to_string());
  const auto& blocks = p.blocks();
  const std::size_t n = blocks.size();
  // Parent = innermost enclosing block; enclosing blocks of a non-crossing
  // partition form a chain, so the one with the largest minimum is innermost.
  std::vector<int> parent(n, -1);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j || !nested(blocks[i], blocks[j])) continue;
      if (parent[i] == -1 || blocks[j].front() > blocks[static_cast<std::size_t>(parent[i])].front()) {
        parent[i] = static_cast<int>(j);
      }
    }
  }
  std::vector<long> subtree(n, 1);
  // Children start after their parents, so sweeping by decreasing minimum
  // finishes every subtree before its root.
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return blocks[a].front() > blocks[b].front(); });
  for (std::size_t i : order) {
    if (parent[i] != -1) subtree[static_cast<std::size_t>(parent[i])] += subtree[i];
  }
  Integer denom = 1;
  for (long s : subtree) denom *= s;
  return factorial(static_cast<unsigned>(n)) / denom;
}

Integer monotone_label_count(const Partition& p) {
  if (!p.is_pairing()) throw InvalidInput("monotone label count needs a pairing, got " + p.to_string());
  return nesting_forest_extensions(p);
}

std::string to_string(PartitionClass c) {
  switch (c) {
    case PartitionClass::All: return "all";
    case PartitionClass::Even: return "even";
    case PartitionClass::Pairing: return "pairing";
    case PartitionClass::NoSingleton: return "no-singleton";
    case PartitionClass::NonCrossingPairing: return "nc-pairing";
    case PartitionClass::NonCrossing: return "nc";
  }
  return "all";
}

PartitionClass parse_partition_class(std::string_view name) {
  for (auto c : {PartitionClass::All, PartitionClass::Even, PartitionClass::Pairing, PartitionClass::NoSingleton,
                 PartitionClass::NonCrossingPairing, PartitionClass::NonCrossing}) {
    if (to_string(c) == name) return c;
  }
  throw InvalidInput("unknown partition class '" + std::string(name) + "'");
}

bool in_class(const Partition& p, PartitionClass c) {
  switch (c) {
    case PartitionClass::All: return true;
    case PartitionClass::Even: return p.is_even();
    case PartitionClass::Pairing: return p.is_pairing();
    case PartitionClass::NoSingleton: return !p.has_singleton();
    case PartitionClass::NonCrossingPairing: return p.is_pairing() && p.is_noncrossing();
    case PartitionClass::NonCrossing: return p.is_noncrossing();
  }
  return false;
}

int enumeration_cap(PartitionClass c) {
  return (c == PartitionClass::Pairing || c == PartitionClass::NonCrossingPairing) ? 20 : 14;
}

PartitionStream::PartitionStream(int m, PartitionClass c) : m_(m), class_(c) {
  if (m < 1) throw InvalidInput("partition size must be positive");
  if (m > enumeration_cap(c)) {
    throw CapExceeded("enumerating class " + to_string(c) + " at m=" + std::to_string(m) + " requires cap m>=" +
                      std::to_string(m) + " but the cap is m<=" + std::to_string(enumeration_cap(c)));
  }
  rgs_.assign(static_cast<std::size_t>(m), -1);
}

void PartitionStream::place(int pos, int block) {
  rgs_[static_cast<std::size_t>(pos)] = block;
  if (block == static_cast<int>(blocks_.size())) blocks_.emplace_back();
  blocks_[static_cast<std::size_t>(block)].push_back(pos + 1);
}

int PartitionStream::undo(int pos) {
  int block = rgs_[static_cast<std::size_t>(pos)];
  auto& b = blocks_[static_cast<std::size_t>(block)];
  b.pop_back();
  if (b.empty()) blocks_.pop_back();
  rgs_[static_cast<std::size_t>(pos)] = -1;
  return block;
}

// Checks the partial assignment ending at pos_ can still be completed.
bool PartitionStream::feasible() const {
  const int remaining = m_ - pos_ - 1;
  const int block = rgs_[static_cast<std::size_t>(pos_)];
  const Block& cur = blocks_[static_cast<std::size_t>(block)];
  int deficit = 0;
  switch (class_) {
    case PartitionClass::Pairing:
    case PartitionClass::NonCrossingPairing:
      if (cur.size() > 2) return false;
      for (const Block& b : blocks_) deficit += b.size() == 1;
      break;
    case PartitionClass::Even:
      for (const Block& b : blocks_) deficit += b.size() % 2;
      break;
    case PartitionClass::NoSingleton:
      for (const Block& b : blocks_) deficit += b.size() == 1;
      break;
    default: break;
  }
  if (deficit > remaining) return false;
  if ((class_ == PartitionClass::NonCrossing || class_ == PartitionClass::NonCrossingPairing) && cur.size() > 1) {
    // The new element crosses c iff an earlier element of this block lies
    // strictly inside the span of c.
    for (std::size_t c = 0; c < blocks_.size(); ++c) {
      if (static_cast<int>(c) == block || blocks_[c].size() < 2) continue;
      int lo = blocks_[c].front(), hi = blocks_[c].back();
      for (std::size_t k = 0; k + 1 < cur.size(); ++k) {
        if (lo < cur[k] && cur[k] < hi) return false;
      }
    }
  }
  return true;
}

std::optional<Partition> PartitionStream::next() {
  if (done_) return std::nullopt;
  while (true) {
    if (pos_ < 0) {
      done_ = true;
      return std::nullopt;
    }
    if (pos_ == m_) {
      Partition out = Partition::from_rgs(rgs_);
      pos_ = m_ - 1;
      candidate_ = undo(pos_) + 1;
      return out;
    }
    bool placed = false;
    const int limit = static_cast<int>(blocks_.size());
    for (int c = candidate_; c <= limit; ++c) {
      place(pos_, c);
      if (feasible()) {
        placed = true;
        break;
      }
      undo(pos_);
    }
    if (placed) {
      ++pos_;
      candidate_ = 0;
    } else {
      --pos_;
      if (pos_ >= 0) candidate_ = undo(pos_) + 1;
    }
  }
}

std::vector<Partition> enumerate(int m, PartitionClass c) {
  PartitionStream stream(m, c);
  std::vector<Partition> out;
  while (auto p = stream.next()) out.push_back(std::move(*p));
  return out;
}

}  // namespace bmt
