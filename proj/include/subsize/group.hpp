#ifndef SUBSIZE_GROUP_HPP
#define SUBSIZE_GROUP_HPP

#include <concepts>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace subsize {

using json = nlohmann::json;

inline bool is_nonnegative_integer(const json &j)
{
  return j.is_number_integer() && j.get<std::int64_t>() >= 0;
}

/// A countable group with exact arithmetic and a fixed injective enumeration
/// g_0 = e, g_1, g_2, ... that reaches every element at a finite index.
///
/// `enumerate(n)` must be prefix-stable. Groups whose enumeration index has a
/// closed form expose `rank()`; the others are ranked through a lookup table
/// kept by `Universe`.
template<typename G>
concept Group = requires(const G &g, const typename G::element_type &a,
                         const json &j, std::size_t n)
{
  typename G::element_type;
  typename G::hash;
  { g.identity() } -> std::same_as<typename G::element_type>;
  { g.op(a, a) } -> std::same_as<typename G::element_type>;
  { g.inv(a) } -> std::same_as<typename G::element_type>;
  { g.valid(a) } -> std::same_as<bool>;
  { g.enumerate(n) } -> std::same_as<std::vector<typename G::element_type>>;
  { g.to_json(a) } -> std::same_as<json>;
  { g.from_json(j) } -> std::same_as<typename G::element_type>;
  { g.name() } -> std::same_as<std::string>;
  { g.descriptor() } -> std::same_as<json>;
};

template<typename G>
concept RankedGroup = Group<G> && requires(const G &g, const typename G::element_type &a)
{
  { g.rank(a) } -> std::same_as<std::optional<std::uint64_t>>;
};

template<Group G>
using element_t = typename G::element_type;

/// Multiplies a left-to-right sequence of elements.
template<Group G>
element_t<G> product_of(const G &group, const std::vector<element_t<G>> &factors)
{
  auto acc = group.identity();
  for (const auto &f : factors)
    acc = group.op(acc, f);
  return acc;
}

} // namespace subsize

#endif // SUBSIZE_GROUP_HPP
