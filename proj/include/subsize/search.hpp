#ifndef SUBSIZE_SEARCH_HPP
#define SUBSIZE_SEARCH_HPP

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <thread>
#include <tuple>
#include <utility>
#include <vector>

#include "subsize/group.hpp"
#include "subsize/universe.hpp"

namespace subsize {

/// Outcome of exploring one top-level branch of a search with a node limit.
/// `nodes` counts visited nodes up to and including the hit; it exceeds the
/// limit only when the branch was cut short.
template<typename Cert>
struct BranchOutcome
{
  std::optional<Cert> hit;
  std::size_t nodes = 0;
};

template<typename Cert>
struct SearchOutcome
{
  std::optional<Cert> hit;
  std::size_t nodes = 0;
  bool budget_hit = false;
};

/// Runs `branch(i, limit)` for i = 0..count-1 and combines the results as a
/// single sequential scan under a global node budget. With several workers
/// the branches run concurrently, but the answer is the one the sequential
/// scan would give: the hit in the least branch that fits in the budget.
template<typename Cert, typename Branch>
SearchOutcome<Cert> ordered_search(std::size_t count, std::size_t budget, std::size_t workers,
                                   Branch branch)
{
  SearchOutcome<Cert> out;
  auto replay = [&](BranchOutcome<Cert> &&r, std::size_t &used) -> bool {
    std::size_t remaining = budget - used;
    if (r.nodes > remaining) {
      out.budget_hit = true;
      out.nodes = budget;
      return true;
    }
    used += r.nodes;
    if (r.hit) {
      out.hit = std::move(r.hit);
      out.nodes = used;
      return true;
    }
    return false;
  };

  std::size_t used = 0;
  if (workers <= 1 || count <= 1) {
    for (std::size_t i = 0; i < count; ++i)
      if (replay(branch(i, budget - used), used))
        return out;
    out.nodes = used;
    return out;
  }

  std::vector<std::optional<BranchOutcome<Cert>>> results(count);
  std::atomic<std::size_t> next{0};
  std::atomic<std::size_t> best{count};
  auto work = [&] {
    for (;;) {
      std::size_t i = next.fetch_add(1);
      if (i >= count || i > best.load())
        return;
      auto r = branch(i, budget);
      if (r.hit) {
        std::size_t cur = best.load();
        while (i < cur && !best.compare_exchange_weak(cur, i)) {
        }
      }
      results[i] = std::move(r);
    }
  };
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < std::min(workers, count); ++w)
    pool.emplace_back(work);
  for (auto &t : pool)
    t.join();

  for (std::size_t i = 0; i < count; ++i)
    if (replay(std::move(*results[i]), used))
      return out;
  out.nodes = used;
  return out;
}

/// Total order used for tie-breaking: enumeration index, then (for elements
/// beyond the cached prefix of an unranked group) the JSON encoding.
template<Group G>
struct OrderKey
{
  std::uint64_t index;
  std::string encoding;

  friend bool operator<(const OrderKey &a, const OrderKey &b)
  {
    return std::tie(a.index, a.encoding) < std::tie(b.index, b.encoding);
  }
  friend bool operator==(const OrderKey &, const OrderKey &) = default;
};

template<Group G>
OrderKey<G> order_key(const Universe<G> &u, const element_t<G> &e)
{
  if (auto k = u.index_of(e))
    return {*k, {}};
  return {std::numeric_limits<std::uint64_t>::max(), u.group().to_json(e).dump()};
}

/// Sorts elements by order_key and removes duplicates.
template<Group G>
void sort_canonical(const Universe<G> &u, std::vector<element_t<G>> &v)
{
  std::vector<std::pair<OrderKey<G>, element_t<G>>> keyed;
  keyed.reserve(v.size());
  for (auto &e : v)
    keyed.emplace_back(order_key(u, e), std::move(e));
  std::sort(keyed.begin(), keyed.end(),
            [](const auto &a, const auto &b) { return a.first < b.first; });
  keyed.erase(std::unique(keyed.begin(), keyed.end(),
                          [](const auto &a, const auto &b) { return a.first == b.first; }),
              keyed.end());
  v.clear();
  for (auto &[k, e] : keyed)
    v.push_back(std::move(e));
}

} // namespace subsize

#endif // SUBSIZE_SEARCH_HPP
