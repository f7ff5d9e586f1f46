#include "afc/covers.hpp"

#include <algorithm>
#include <bit>

#include "afc/error.hpp"

namespace afc {

namespace {

bool subset_less(Subset a, Subset b) {
  if (a == 0 || b == 0) return a != 0 && b == 0;
  if (std::popcount(a) != std::popcount(b)) return std::popcount(a) < std::popcount(b);
  return a < b;
}

// Decide membership of candidates[i], ... in turn. `coverable[i]` is the
// union of candidates[i..]; a branch dies once the still-uncovered elements
// can no longer be reached.
void extend(const std::vector<Subset>& candidates, const std::vector<Subset>& coverable, std::size_t i,
            Subset covered, Subset full, std::vector<Subset>& chosen, std::vector<Cover>& out) {
  if (i == candidates.size()) {
    if (covered == full) out.push_back(Cover{chosen});
    return;
  }
  if ((covered | coverable[i]) != full) return;
  chosen.push_back(candidates[i]);
  extend(candidates, coverable, i + 1, covered | candidates[i], full, chosen, out);
  chosen.pop_back();
  extend(candidates, coverable, i + 1, covered, full, chosen, out);
}

}  // namespace

std::vector<Cover> enumerate_covers(int p, int bound) {
  if (p < 1) throw DomainError("covers need p >= 1, got " + std::to_string(p));
  if (p > bound) {
    throw ResourceError("p = " + std::to_string(p) + " exceeds the cover bound " + std::to_string(bound));
  }
  const Subset full = (Subset{1} << p) - 1;
  std::vector<Subset> candidates;
  for (Subset s = 0; s <= full; ++s) candidates.push_back(s);
  std::sort(candidates.begin(), candidates.end(), subset_less);

  std::vector<Subset> coverable(candidates.size() + 1, 0);
  for (std::size_t i = candidates.size(); i-- > 0;) coverable[i] = coverable[i + 1] | candidates[i];

  std::vector<Cover> out;
  std::vector<Subset> chosen;
  extend(candidates, coverable, 0, 0, full, chosen, out);
  std::stable_sort(out.begin(), out.end(), [](const Cover& a, const Cover& b) {
    if (a.sets.size() != b.sets.size()) return a.sets.size() < b.sets.size();
    return std::lexicographical_compare(a.sets.begin(), a.sets.end(), b.sets.begin(), b.sets.end(), subset_less);
  });
  return out;
}

std::string subset_to_string(Subset s) {
  std::string out = "{";
  bool first = true;
  for (int i = 0; i < 32; ++i) {
    if ((s >> i & 1U) == 0) continue;
    if (!first) out += ",";
    out += std::to_string(i + 1);
    first = false;
  }
  return out + "}";
}

std::string to_string(const Cover& c) {
  std::string out;
  for (std::size_t i = 0; i < c.sets.size(); ++i) {
    if (i > 0) out += " ";
    out += subset_to_string(c.sets[i]);
  }
  return out;
}

}  // namespace afc
