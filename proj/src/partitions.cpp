#include "cvdg/partitions.hpp"

#include <algorithm>
#include <string>

#include "cvdg/errors.hpp"

namespace cvdg {

namespace {

void match(std::vector<int>& free, std::vector<std::pair<int, int>>& current, std::vector<PairPartition>& out) {
  if (free.empty()) {
    out.push_back({current});
    return;
  }
  const int first = free.front();
  for (std::size_t j = 1; j < free.size(); ++j) {
    const int partner = free[j];
    std::vector<int> rest;
    rest.reserve(free.size() - 2);
    for (std::size_t k = 1; k < free.size(); ++k) {
      if (k != j) rest.push_back(free[k]);
    }
    current.emplace_back(first, partner);
    match(rest, current, out);
    current.pop_back();
  }
}

}  // namespace

std::vector<PairPartition> pair_partitions(int n) {
  if (n < 0 || n % 2 != 0) throw DimensionError("pair partitions need an even size, got " + std::to_string(n));
  if (n > max_pair_partition_size) throw GuardError("pair partitions limited to n <= 12");
  std::vector<PairPartition> out;
  std::vector<int> free(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) free[static_cast<std::size_t>(i)] = i;
  std::vector<std::pair<int, int>> current;
  match(free, current, out);
  return out;
}

std::vector<SetPartition> set_partitions(int n) {
  if (n < 0) throw DimensionError("negative set size");
  if (n > max_set_partition_size) throw GuardError("set partitions limited to n <= 8");
  std::vector<SetPartition> out;
  if (n == 0) {
    out.push_back({});
    return out;
  }
  // a[i] is the block of element i; a[0] = 0 and a[i] <= 1 + max(a[0..i-1]).
  std::vector<int> a(static_cast<std::size_t>(n), 0);
  std::vector<int> prefix_max(static_cast<std::size_t>(n), 0);
  while (true) {
    SetPartition p;
    p.blocks.resize(static_cast<std::size_t>(prefix_max.back() + 1));
    for (int i = 0; i < n; ++i) p.blocks[static_cast<std::size_t>(a[static_cast<std::size_t>(i)])].push_back(i);
    out.push_back(std::move(p));

    int i = n - 1;
    while (i > 0 && a[static_cast<std::size_t>(i)] == prefix_max[static_cast<std::size_t>(i - 1)] + 1) --i;
    if (i == 0) break;
    ++a[static_cast<std::size_t>(i)];
    prefix_max[static_cast<std::size_t>(i)] =
        std::max(prefix_max[static_cast<std::size_t>(i - 1)], a[static_cast<std::size_t>(i)]);
    for (int j = i + 1; j < n; ++j) {
      a[static_cast<std::size_t>(j)] = 0;
      prefix_max[static_cast<std::size_t>(j)] = prefix_max[static_cast<std::size_t>(i)];
    }
  }
  return out;
}

std::vector<EvenPartition> even_partitions(int n) {
  std::vector<EvenPartition> out;
  for (auto& p : set_partitions(n)) {
    bool even = true;
    for (const auto& b : p.blocks) even = even && b.size() % 2 == 0;
    if (even) out.push_back({std::move(p.blocks)});
  }
  return out;
}

long double double_factorial(int n) {
  long double r = 1;
  for (int k = n; k > 1; k -= 2) r *= k;
  return r;
}

}  // namespace cvdg
