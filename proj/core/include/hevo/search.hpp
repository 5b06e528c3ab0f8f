#pragma once

// Proposal rules over a finite grid of configurations. Inner harness evolution
// and meta blueprint evolution both reduce their spaces to a Grid and share
// these rules, so "skip what was already tried" means the same thing at both
// levels.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "hevo/model.hpp"

namespace hevo::search {

using Coords = std::vector<std::size_t>;

// Mixed-radix grid; the last dimension varies fastest in enumeration order.
class Grid {
 public:
  Grid() = default;
  explicit Grid(std::vector<std::size_t> extents);

  std::size_t size() const { return size_; }
  std::size_t dimensions() const { return extents_.size(); }
  const std::vector<std::size_t>& extents() const { return extents_; }

  std::size_t encode(const Coords& coords) const;
  Coords decode(std::size_t index) const;

 private:
  std::vector<std::size_t> extents_;
  std::size_t size_ = 0;
};

// One evaluated history entry as seen by a strategy: its grid index (absent if
// the configuration lies outside the grid) and its verdict.
struct Visit {
  std::optional<std::size_t> index;
  Verdict verdict = Verdict::regressed;
};

std::vector<bool> seen_mask(const Grid& grid, const std::vector<Visit>& visits);

// First unseen index in enumeration order.
std::optional<std::size_t> next_exhaustive(const Grid& grid, const std::vector<Visit>& visits);

// Uniform over unseen indices.
std::optional<std::size_t> next_random(const Grid& grid, const std::vector<Visit>& visits, std::uint64_t seed);

// Single-dimension moves away from `best`, dimensions in order, -1 before +1.
// A dimension is deprioritized when a move along it since the last improvement
// regressed, or when it carried the last improvement itself. Falls back to the
// remaining neighbours, then to the nearest unseen index (fewest differing
// dimensions, then smallest total step distance, then enumeration order).
std::optional<std::size_t> next_hill_climb(const Grid& grid, const std::vector<Visit>& visits, std::size_t best);

// Dimension in which a and b differ, if they differ in exactly one.
std::optional<std::size_t> single_difference(const Coords& a, const Coords& b);

}  // namespace hevo::search
