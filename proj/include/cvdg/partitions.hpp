#pragma once

#include <cstddef>
#include <utility>
#include <vector>

namespace cvdg {

inline constexpr int max_pair_partition_size = 12;
inline constexpr int max_set_partition_size = 8;

/// Perfect matching of {0..n-1}; each pair sorted, pairs sorted by first index.
struct PairPartition {
  std::vector<std::pair<int, int>> pairs;
};

/// Set partition of {0..n-1}; blocks sorted internally and by first element.
struct SetPartition {
  std::vector<std::vector<int>> blocks;
};

/// Set partition whose blocks all have even size.
struct EvenPartition {
  std::vector<std::vector<int>> blocks;
};

/// All (n-1)!! perfect matchings, in lexicographic order of their pair lists.
std::vector<PairPartition> pair_partitions(int n);

/// All Bell(n) set partitions, enumerated by restricted-growth strings.
std::vector<SetPartition> set_partitions(int n);

std::vector<EvenPartition> even_partitions(int n);

long double double_factorial(int n);

}  // namespace cvdg
