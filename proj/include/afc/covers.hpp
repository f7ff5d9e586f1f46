#pragma once

// Covers of {1..p}: sets of pairwise-distinct subsets of {1..p} (the empty
// subset allowed) whose union is all of {1..p}. They index the summands of a
// cross effect of a composite.

#include <cstdint>
#include <string>
#include <vector>

namespace afc {

/// Subset of {1..p} as a bitmask; bit i-1 stands for element i.
using Subset = std::uint32_t;

struct Cover {
  std::vector<Subset> sets;  // non-empty subsets by (size, mask), then the empty set if present
  bool has_empty() const { return !sets.empty() && sets.back() == 0; }
  friend bool operator==(const Cover&, const Cover&) = default;
};

inline constexpr int kDefaultCoverBound = 4;

/// All covers of {1..p} in a deterministic order (fewest sets first).
/// Throws DomainError for p < 1 and ResourceError for p > bound.
std::vector<Cover> enumerate_covers(int p, int bound = kDefaultCoverBound);

/// "{1,2} {2} {}" style rendering.
std::string to_string(const Cover& c);
std::string subset_to_string(Subset s);

}  // namespace afc
