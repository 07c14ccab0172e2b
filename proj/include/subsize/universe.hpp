#ifndef SUBSIZE_UNIVERSE_HPP
#define SUBSIZE_UNIVERSE_HPP

#include <algorithm>
#include <cstdint>
#include <memory>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <unordered_map>
#include <vector>

#include "subsize/group.hpp"

namespace subsize {

/// Cached prefix of a group's canonical enumeration. Window W_N is the first
/// N entries; membership of an arbitrary element is decided by its
/// enumeration index.
///
/// `ensure()` grows the cache and must not run concurrently with lookups.
/// Searches call it once up front, before any parallel section.
template<Group G>
class Universe
{
public:
  using E = element_t<G>;

  explicit Universe(G group) : group_(std::move(group)) {}

  const G &group() const { return group_; }

  void ensure(std::size_t n) const
  {
    std::scoped_lock lock(mutex_);
    if (n <= elems_.size())
      return;
    std::size_t target = std::max(n, elems_.size() * 2);
    auto fresh = group_.enumerate(target);
    if constexpr (!RankedGroup<G>) {
      for (std::size_t i = elems_.size(); i < fresh.size(); ++i)
        index_.emplace(fresh[i], i);
    }
    elems_ = std::move(fresh);
  }

  std::size_t capacity() const { return elems_.size(); }

  /// The k-th element of the enumeration (k < capacity()).
  const E &at(std::size_t k) const { return elems_[k]; }

  /// Enumeration index, or nullopt if it lies beyond every window this
  /// universe can currently answer for.
  std::optional<std::uint64_t> index_of(const E &e) const
  {
    if constexpr (RankedGroup<G>) {
      return group_.rank(e);
    } else {
      auto it = index_.find(e);
      if (it == index_.end())
        return std::nullopt;
      return it->second;
    }
  }

  bool in_window(const E &e, std::size_t n) const
  {
    if constexpr (!RankedGroup<G>) {
      if (n > elems_.size())
        throw std::logic_error("window exceeds the enumerated prefix; call ensure() first");
    }
    auto k = index_of(e);
    return k && *k < n;
  }

  std::vector<E> window(std::size_t n) const
  {
    ensure(n);
    return {elems_.begin(), elems_.begin() + static_cast<std::ptrdiff_t>(n)};
  }

private:
  G group_;
  mutable std::mutex mutex_;
  mutable std::vector<E> elems_;
  mutable std::unordered_map<E, std::uint64_t, typename G::hash> index_;
};

template<Group G>
using UniversePtr = std::shared_ptr<const Universe<G>>;

template<Group G>
UniversePtr<G> make_universe(G group)
{
  return std::make_shared<const Universe<G>>(std::move(group));
}

} // namespace subsize

#endif // SUBSIZE_UNIVERSE_HPP
