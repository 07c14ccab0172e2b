#ifndef SUBSIZE_GROUPS_FIN_PERM_HPP
#define SUBSIZE_GROUPS_FIN_PERM_HPP

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <utility>
#include <vector>

#include "subsize/errors.hpp"
#include "subsize/group.hpp"

namespace subsize {

/// Finitely supported permutation of {0, 1, 2, ...}: the (point, image)
/// pairs of exactly the moved points, sorted by point.
struct Perm
{
  std::vector<std::pair<std::uint32_t, std::uint32_t>> moves;

  std::uint32_t operator()(std::uint32_t x) const
  {
    auto it = std::lower_bound(moves.begin(), moves.end(), x,
                               [](const auto &m, std::uint32_t v) { return m.first < v; });
    return (it != moves.end() && it->first == x) ? it->second : x;
  }

  std::size_t moved() const { return moves.size(); }

  friend bool operator==(const Perm &, const Perm &) = default;
};

/// The transposition swapping a and b.
inline Perm transposition(std::uint32_t a, std::uint32_t b)
{
  if (a == b)
    return {};
  if (a > b)
    std::swap(a, b);
  return Perm{{{a, b}, {b, a}}};
}

/// Group of finitely supported permutations of the naturals under
/// composition, (g h)(x) = g(h(x)). Enumerated by largest moved point, then
/// number of moved points, then lexicographic image list.
class FinPerm
{
public:
  using element_type = Perm;

  struct hash
  {
    std::size_t operator()(const Perm &p) const noexcept
    {
      std::size_t h = 0x84222325cbf29ce4ULL;
      for (auto [a, b] : p.moves)
        h = ((h ^ a) * 1099511628211ULL ^ b) * 1099511628211ULL;
      return h;
    }
  };

  Perm identity() const { return {}; }

  bool valid(const Perm &p) const
  {
    std::vector<std::uint32_t> images;
    images.reserve(p.moves.size());
    for (std::size_t i = 0; i < p.moves.size(); ++i) {
      if (p.moves[i].first == p.moves[i].second)
        return false;
      if (i > 0 && p.moves[i - 1].first >= p.moves[i].first)
        return false;
      images.push_back(p.moves[i].second);
    }
    std::sort(images.begin(), images.end());
    for (std::size_t i = 0; i < images.size(); ++i)
      if (images[i] != p.moves[i].first)
        return false;
    return true;
  }

  Perm op(const Perm &g, const Perm &h) const
  {
    require(g);
    require(h);
    std::vector<std::uint32_t> pts;
    pts.reserve(g.moves.size() + h.moves.size());
    for (auto [a, b] : g.moves)
      pts.push_back(a);
    for (auto [a, b] : h.moves)
      pts.push_back(a);
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    Perm out;
    for (auto x : pts) {
      auto y = g(h(x));
      if (y != x)
        out.moves.emplace_back(x, y);
    }
    return out;
  }

  Perm inv(const Perm &g) const
  {
    require(g);
    Perm out;
    out.moves.reserve(g.moves.size());
    for (auto [a, b] : g.moves)
      out.moves.emplace_back(b, a);
    std::sort(out.moves.begin(), out.moves.end());
    return out;
  }

  /// Builds a permutation from its image list on {0, ..., n-1}.
  static Perm from_images(const std::vector<std::uint32_t> &images)
  {
    Perm p;
    for (std::uint32_t x = 0; x < images.size(); ++x)
      if (images[x] != x)
        p.moves.emplace_back(x, images[x]);
    return p;
  }

  std::vector<Perm> enumerate(std::size_t n) const
  {
    std::vector<Perm> out;
    out.reserve(n);
    out.push_back(identity());
    for (std::uint32_t top = 1; out.size() < n; ++top) {
      // all permutations of {0..top} that move top, grouped by moved count
      std::vector<std::uint32_t> images(top + 1);
      std::iota(images.begin(), images.end(), 0U);
      std::vector<std::pair<std::size_t, Perm>> level;
      do {
        if (images[top] != top) {
          auto p = from_images(images);
          level.emplace_back(p.moved(), std::move(p));
        }
      } while (std::next_permutation(images.begin(), images.end()));
      std::stable_sort(level.begin(), level.end(),
                       [](const auto &a, const auto &b) { return a.first < b.first; });
      for (auto &[count, p] : level) {
        if (out.size() >= n)
          break;
        out.push_back(std::move(p));
      }
    }
    return out;
  }

  json to_json(const Perm &p) const
  {
    json arr = json::array();
    for (auto [a, b] : p.moves)
      arr.push_back({a, b});
    return arr;
  }

  Perm from_json(const json &j) const
  {
    if (!j.is_array())
      throw malformed_element("permutation must be an array of [point, image] pairs");
    Perm p;
    for (const auto &pair : j) {
      if (!pair.is_array() || pair.size() != 2 || !is_nonnegative_integer(pair[0]) ||
          !is_nonnegative_integer(pair[1]))
        throw malformed_element("permutation entry must be [point, image], got " + pair.dump());
      p.moves.emplace_back(pair[0].get<std::uint32_t>(), pair[1].get<std::uint32_t>());
    }
    std::sort(p.moves.begin(), p.moves.end());
    if (!valid(p))
      throw malformed_element("pairs " + j.dump() + " do not describe a permutation's moved points");
    return p;
  }

  std::string name() const { return "fin-perm"; }
  json descriptor() const { return {{"kind", "fin-perm"}}; }

private:
  void require(const Perm &p) const
  {
    if (!valid(p))
      throw malformed_element("non-canonical permutation encoding");
  }
};

} // namespace subsize

#endif // SUBSIZE_GROUPS_FIN_PERM_HPP
