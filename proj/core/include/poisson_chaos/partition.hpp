#pragma once

#include <string>
#include <vector>

namespace poisson_chaos {

// Partition of a subset I of {1..d}; elements are 1-based.
struct Partition {
  int d = 0;
  std::vector<std::vector<int>> blocks;

  std::size_t size() const { return blocks.size(); }
  std::vector<int> support() const;  // sorted union of blocks
  // Throws InvalidArgument on empty/overlapping blocks or elements outside 1..d.
  void validate() const;
  // "{1,2}{3}"; "{}" for the empty partition.
  std::string to_string() const;
  // Block sizes, decreasing.
  std::vector<int> shape() const;

  bool operator==(const Partition&) const = default;
};

Partition parse_partition(int d, const std::string& text);

// Every set partition of `elements`.
std::vector<Partition> enumerate_partitions(int d, const std::vector<int>& elements);

// One representative per block-size multiset, blocks filled with consecutive
// elements; multiplicity = number of set partitions sharing the shape.
struct ShapeClass {
  Partition representative;
  long long multiplicity = 1;
};
std::vector<ShapeClass> shape_classes(int d, const std::vector<int>& elements);

// {first, ..., last}; empty when first > last.
std::vector<int> range_set(int first, int last);

}  // namespace poisson_chaos
