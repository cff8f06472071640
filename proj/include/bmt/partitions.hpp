#pragma once

#include "bmt/digraph.hpp"
#include "bmt/rational.hpp"

#include <compare>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace bmt {

/// Sorted ascending, 1-based elements.
using Block = std::vector<int>;

/// A set partition of [m]. Blocks are ordered by their minimum element,
/// which makes the restricted-growth string (block index per position) a
/// canonical encoding.
class Partition {
 public:
  /// Validates disjointness and coverage of [m]; any block order accepted.
  static Partition from_blocks(int m, std::vector<Block> blocks);
  /// rgs[k] is the 0-based block index of element k+1; must be a
  /// restricted-growth string.
  static Partition from_rgs(std::vector<int> rgs);
  /// "1,5/2,3,7/4/6"
  static Partition parse(std::string_view text);

  int size() const { return static_cast<int>(rgs_.size()); }
  std::size_t num_blocks() const { return blocks_.size(); }
  const std::vector<Block>& blocks() const { return blocks_; }
  const std::vector<int>& rgs() const { return rgs_; }
  /// 0-based index of the block holding element e (1-based).
  int block_of(int e) const { return rgs_[static_cast<std::size_t>(e - 1)]; }

  bool is_pairing() const;
  bool is_even() const;
  bool has_singleton() const;
  bool is_noncrossing() const;
  /// Every block is a run of consecutive integers.
  bool is_interval() const;

  std::string to_string() const;
  /// {{1,4,6},{2,5},{3}}
  std::string to_set_notation() const;

  friend bool operator==(const Partition& a, const Partition& b) { return a.rgs_ == b.rgs_; }
  friend std::strong_ordering operator<=>(const Partition& a, const Partition& b) { return a.rgs_ <=> b.rgs_; }

 private:
  explicit Partition(std::vector<int> rgs);
  std::vector<int> rgs_;
  std::vector<Block> blocks_;
};

/// Every block of p lies inside a block of q. Throws InvalidInput on a size
/// mismatch.
bool is_refinement(const Partition& p, const Partition& q);

/// B lies strictly between two consecutive elements of C.
/// Throws InvalidInput if the blocks overlap or are empty.
bool nested(const Block& b, const Block& c);
/// Elements interleave as b < c < b < c or c < b < c < b. Symmetric.
bool crossing(const Block& b, const Block& c);

/// Vertices 1..#p in canonical block order; edge (B, C) when B is nested in
/// C or the two cross.
Digraph nesting_crossing_graph(const Partition& p);

/// Linear extensions of the nesting forest of a non-crossing partition.
/// Throws InvalidInput for a crossing partition.
Integer nesting_forest_extensions(const Partition& p);
/// Same count restricted to non-crossing pairings, as used for the
/// monotone central limit. Throws InvalidInput otherwise.
Integer monotone_label_count(const Partition& p);

enum class PartitionClass { All, Even, Pairing, NoSingleton, NonCrossingPairing, NonCrossing };

std::string to_string(PartitionClass c);
PartitionClass parse_partition_class(std::string_view name);
bool in_class(const Partition& p, PartitionClass c);
/// Largest m accepted by enumerate for the class.
int enumeration_cap(PartitionClass c);

/// Lazily yields every partition of [m] in a class, in increasing order of
/// restricted-growth string. Single consumer.
class PartitionStream {
 public:
  /// Throws InvalidInput for m < 1 and CapExceeded above the class cap.
  PartitionStream(int m, PartitionClass c);

  std::optional<Partition> next();

 private:
  bool feasible() const;
  void place(int pos, int block);
  int undo(int pos);

  int m_;
  PartitionClass class_;
  std::vector<int> rgs_;
  std::vector<Block> blocks_;
  int pos_ = 0;
  int candidate_ = 0;
  bool done_ = false;
};

std::vector<Partition> enumerate(int m, PartitionClass c);

}  // namespace bmt
