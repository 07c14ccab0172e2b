#ifndef SUBSIZE_BUILTINS_HPP
#define SUBSIZE_BUILTINS_HPP

#include <algorithm>
#include <climits>
#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

#include "subsize/errors.hpp"
#include "subsize/group.hpp"
#include "subsize/groups/boolean_sum.hpp"
#include "subsize/groups/fin_perm.hpp"
#include "subsize/groups/free_group.hpp"
#include "subsize/groups/integer_group.hpp"

namespace subsize {

struct BuiltinInfo
{
  std::string name;
  std::string params;
  std::string summary;
};

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t x)
{
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::int64_t int_param(const json &params, const char *key, std::int64_t lo,
                              std::int64_t hi, std::optional<std::int64_t> fallback = {})
{
  if (!params.contains(key)) {
    if (fallback)
      return *fallback;
    throw spec_error(std::string("builtin parameter \"") + key + "\" is required");
  }
  const auto &v = params.at(key);
  if (!v.is_number_integer())
    throw spec_error(std::string("builtin parameter \"") + key + "\" must be an integer");
  auto x = v.get<std::int64_t>();
  if (x < lo || x > hi)
    throw spec_error(std::string("builtin parameter \"") + key + "\" out of range [" +
                     std::to_string(lo) + ", " + std::to_string(hi) + "]");
  return x;
}

inline bool is_square(std::int64_t x)
{
  if (x < 0)
    return false;
  auto r = static_cast<std::int64_t>(std::llround(std::sqrt(static_cast<double>(x))));
  for (auto c = std::max<std::int64_t>(0, r - 1); c <= r + 1; ++c)
    if (c * c == x)
      return true;
  return false;
}

} // namespace detail

/// Registry of named subsets, per group kind. Every group also has "all",
/// "identity" and "random" {seed, density}.
template<Group G>
std::vector<BuiltinInfo> builtin_registry()
{
  std::vector<BuiltinInfo> out{
    {"all", "", "the whole group"},
    {"identity", "", "{e}"},
    {"random", "seed, density", "pseudo-random subset, each element kept with probability density"},
  };
  if constexpr (std::is_same_v<G, IntegerGroup>) {
    out.insert(out.end(), {
      {"evens", "", "2Z"},
      {"odds", "", "2Z + 1"},
      {"squares", "", "{k^2 : k >= 0}"},
      {"positive", "", "{x > 0}"},
      {"multiples", "k", "kZ"},
      {"residue", "mod, r", "{x : x = r (mod mod)}"},
      {"powers", "base", "{base^k : k >= 0}"},
      {"range", "lo, hi", "{lo <= x <= hi}"},
    });
  } else if constexpr (std::is_same_v<G, BooleanSum>) {
    out.insert(out.end(), {
      {"supt-eq", "m", "elements with exactly m non-zero coordinates"},
      {"supt-le", "m", "elements with at most m non-zero coordinates"},
      {"coord", "i", "elements whose coordinate i is 1"},
    });
  } else if constexpr (std::is_same_v<G, FreeGroup>) {
    out.insert(out.end(), {
      {"positive-words", "", "non-empty words without inverse letters"},
      {"length-le", "n", "words of length at most n"},
      {"length-eq", "n", "words of length exactly n"},
    });
  } else if constexpr (std::is_same_v<G, FinPerm>) {
    out.insert(out.end(), {
      {"transpositions", "", "permutations swapping exactly two points"},
      {"involutions", "", "g with g g = e, g != e"},
      {"moves-le", "m", "permutations moving at most m points"},
      {"fixes", "point", "permutations fixing the given point"},
    });
  }
  return out;
}

/// Membership predicate of a builtin subset.
template<Group G>
std::function<bool(const element_t<G> &)> builtin_predicate(const G &group,
                                                            const std::string &name,
                                                            const json &params)
{
  using E = element_t<G>;
  using detail::int_param;
  if (name == "all")
    return [](const E &) { return true; };
  if (name == "identity")
    return [id = group.identity()](const E &e) { return e == id; };
  if (name == "random") {
    auto seed = static_cast<std::uint64_t>(int_param(params, "seed", 0, INT64_MAX));
    if (!params.contains("density") || !params["density"].is_number())
      throw spec_error("builtin \"random\" needs a numeric density");
    double density = params["density"].get<double>();
    if (!(density >= 0.0 && density <= 1.0))
      throw spec_error("builtin \"random\" density must be in [0, 1]");
    auto cut = static_cast<long double>(density) * 18446744073709551616.0L;
    return [seed, cut](const E &e) {
      auto h = detail::splitmix64(static_cast<std::uint64_t>(typename G::hash{}(e)) ^
                                  detail::splitmix64(seed));
      return static_cast<long double>(h) < cut;
    };
  }

  if constexpr (std::is_same_v<G, IntegerGroup>) {
    if (name == "evens")
      return [](std::int64_t x) { return x % 2 == 0; };
    if (name == "odds")
      return [](std::int64_t x) { return x % 2 != 0; };
    if (name == "squares")
      return [](std::int64_t x) { return detail::is_square(x); };
    if (name == "positive")
      return [](std::int64_t x) { return x > 0; };
    if (name == "multiples") {
      auto k = int_param(params, "k", 1, INT32_MAX);
      return [k](std::int64_t x) { return x % k == 0; };
    }
    if (name == "residue") {
      auto mod = int_param(params, "mod", 1, INT32_MAX);
      auto r = int_param(params, "r", 0, mod - 1);
      return [mod, r](std::int64_t x) { return ((x % mod) + mod) % mod == r; };
    }
    if (name == "powers") {
      auto base = int_param(params, "base", 2, INT32_MAX);
      return [base](std::int64_t x) {
        if (x < 1)
          return false;
        while (x % base == 0)
          x /= base;
        return x == 1;
      };
    }
    if (name == "range") {
      auto lo = int_param(params, "lo", INT64_MIN / 4, INT64_MAX / 4);
      auto hi = int_param(params, "hi", INT64_MIN / 4, INT64_MAX / 4);
      return [lo, hi](std::int64_t x) { return lo <= x && x <= hi; };
    }
  } else if constexpr (std::is_same_v<G, BooleanSum>) {
    if (name == "supt-eq") {
      auto m = static_cast<std::size_t>(int_param(params, "m", 0, INT32_MAX));
      return [m](const Support &s) { return s.weight() == m; };
    }
    if (name == "supt-le") {
      auto m = static_cast<std::size_t>(int_param(params, "m", 0, INT32_MAX));
      return [m](const Support &s) { return s.weight() <= m; };
    }
    if (name == "coord") {
      auto i = static_cast<std::uint32_t>(int_param(params, "i", 0, INT32_MAX));
      return [i](const Support &s) {
        return std::binary_search(s.coords.begin(), s.coords.end(), i);
      };
    }
  } else if constexpr (std::is_same_v<G, FreeGroup>) {
    if (name == "positive-words")
      return [](const Word &w) {
        if (w.symbols.empty())
          return false;
        for (auto s : w.symbols)
          if (s & 1)
            return false;
        return true;
      };
    if (name == "length-le") {
      auto n = static_cast<std::size_t>(int_param(params, "n", 0, INT32_MAX));
      return [n](const Word &w) { return w.symbols.size() <= n; };
    }
    if (name == "length-eq") {
      auto n = static_cast<std::size_t>(int_param(params, "n", 0, INT32_MAX));
      return [n](const Word &w) { return w.symbols.size() == n; };
    }
  } else if constexpr (std::is_same_v<G, FinPerm>) {
    if (name == "transpositions")
      return [](const Perm &p) { return p.moved() == 2; };
    if (name == "involutions")
      return [group](const Perm &p) { return p.moved() > 0 && group.op(p, p).moved() == 0; };
    if (name == "moves-le") {
      auto m = static_cast<std::size_t>(int_param(params, "m", 0, INT32_MAX));
      return [m](const Perm &p) { return p.moved() <= m; };
    }
    if (name == "fixes") {
      auto pt = static_cast<std::uint32_t>(int_param(params, "point", 0, INT32_MAX));
      return [pt](const Perm &p) { return p(pt) == pt; };
    }
  }
  throw spec_error("unknown builtin \"" + name + "\" for group " + group.name());
}

} // namespace subsize

#endif // SUBSIZE_BUILTINS_HPP
