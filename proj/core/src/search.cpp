#include "hevo/search.hpp"

#include <utility>

#include "hevo/error.hpp"

namespace hevo::search {

Grid::Grid(std::vector<std::size_t> extents) : extents_(std::move(extents)) {
  size_ = extents_.empty() ? 0 : 1;
  for (std::size_t e : extents_) size_ *= e;
}

std::size_t Grid::encode(const Coords& coords) const {
  if (coords.size() != extents_.size()) throw Error(ErrorCode::invalid_argument, "coordinate rank mismatch");
  std::size_t index = 0;
  for (std::size_t d = 0; d < extents_.size(); ++d) {
    if (coords[d] >= extents_[d]) throw Error(ErrorCode::invalid_argument, "coordinate out of range");
    index = index * extents_[d] + coords[d];
  }
  return index;
}

Coords Grid::decode(std::size_t index) const {
  if (index >= size_) throw Error(ErrorCode::invalid_argument, "grid index out of range");
  Coords coords(extents_.size());
  for (std::size_t d = extents_.size(); d-- > 0;) {
    coords[d] = index % extents_[d];
    index /= extents_[d];
  }
  return coords;
}

std::optional<std::size_t> single_difference(const Coords& a, const Coords& b) {
  std::optional<std::size_t> dim;
  for (std::size_t d = 0; d < a.size() && d < b.size(); ++d) {
    if (a[d] == b[d]) continue;
    if (dim) return std::nullopt;
    dim = d;
  }
  return dim;
}

std::vector<bool> seen_mask(const Grid& grid, const std::vector<Visit>& visits) {
  std::vector<bool> seen(grid.size(), false);
  for (const auto& v : visits) {
    if (v.index && *v.index < grid.size()) seen[*v.index] = true;
  }
  return seen;
}

std::optional<std::size_t> next_exhaustive(const Grid& grid, const std::vector<Visit>& visits) {
  auto seen = seen_mask(grid, visits);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!seen[i]) return i;
  }
  return std::nullopt;
}

std::optional<std::size_t> next_random(const Grid& grid, const std::vector<Visit>& visits, std::uint64_t seed) {
  auto seen = seen_mask(grid, visits);
  std::vector<std::size_t> unseen;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!seen[i]) unseen.push_back(i);
  }
  if (unseen.empty()) return std::nullopt;
  return unseen[uniform_index(seed, unseen.size())];
}

std::optional<std::size_t> next_hill_climb(const Grid& grid, const std::vector<Visit>& visits, std::size_t best) {
  auto seen = seen_mask(grid, visits);
  const Coords base = grid.decode(best);

  // Locate the last improvement and the one before it.
  std::optional<std::size_t> last_improved;
  std::optional<std::size_t> previous_improved;
  for (std::size_t i = 0; i < visits.size(); ++i) {
    if (visits[i].verdict == Verdict::improved) {
      previous_improved = last_improved;
      last_improved = i;
    }
  }

  std::vector<bool> deprioritized(grid.dimensions(), false);
  if (last_improved && previous_improved && visits[*last_improved].index && visits[*previous_improved].index) {
    auto dim = single_difference(grid.decode(*visits[*last_improved].index), grid.decode(*visits[*previous_improved].index));
    if (dim) deprioritized[*dim] = true;
  }
  const std::size_t since = last_improved ? *last_improved + 1 : 0;
  for (std::size_t i = since; i < visits.size(); ++i) {
    if (visits[i].verdict != Verdict::regressed || !visits[i].index) continue;
    if (auto dim = single_difference(grid.decode(*visits[i].index), base)) deprioritized[*dim] = true;
  }

  auto first_neighbor = [&](bool skip_deprioritized) -> std::optional<std::size_t> {
    for (std::size_t d = 0; d < grid.dimensions(); ++d) {
      if (skip_deprioritized && deprioritized[d]) continue;
      for (int delta : {-1, +1}) {
        if (delta < 0 && base[d] == 0) continue;
        if (delta > 0 && base[d] + 1 >= grid.extents()[d]) continue;
        Coords c = base;
        c[d] = delta < 0 ? base[d] - 1 : base[d] + 1;
        std::size_t index = grid.encode(c);
        if (!seen[index]) return index;
      }
    }
    return std::nullopt;
  };

  if (auto n = first_neighbor(true)) return n;
  if (auto n = first_neighbor(false)) return n;

  // Neighbourhood exhausted: widen it. Nearest unseen point by number of
  // differing dimensions, then total step distance, then enumeration order.
  std::optional<std::size_t> nearest;
  std::pair<std::size_t, std::size_t> nearest_key{0, 0};
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (seen[i]) continue;
    Coords c = grid.decode(i);
    std::pair<std::size_t, std::size_t> key{0, 0};
    for (std::size_t d = 0; d < c.size(); ++d) {
      std::size_t step = c[d] > base[d] ? c[d] - base[d] : base[d] - c[d];
      if (step > 0) ++key.first;
      key.second += step;
    }
    if (!nearest || key < nearest_key) {
      nearest = i;
      nearest_key = key;
    }
  }
  return nearest;
}

}  // namespace hevo::search
