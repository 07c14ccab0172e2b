#ifndef SUBSIZE_GROUPS_BOOLEAN_SUM_HPP
#define SUBSIZE_GROUPS_BOOLEAN_SUM_HPP

#include <algorithm>
#include <cstdint>
#include <iterator>
#include <optional>
#include <vector>

#include "subsize/errors.hpp"
#include "subsize/group.hpp"

namespace subsize {

/// Element of the countable direct sum of copies of Z_2, stored as the
/// strictly increasing list of coordinates equal to 1.
struct Support
{
  std::vector<std::uint32_t> coords;

  std::size_t weight() const { return coords.size(); }

  friend bool operator==(const Support &, const Support &) = default;
};

/// Direct sum of countably many Z_2. Element n of the enumeration is the
/// support of the binary digits of n.
class BooleanSum
{
public:
  using element_type = Support;

  struct hash
  {
    std::size_t operator()(const Support &s) const noexcept
    {
      std::size_t h = 0xcbf29ce484222325ULL;
      for (auto c : s.coords)
        h = (h ^ (c + 1)) * 1099511628211ULL;
      return h;
    }
  };

  Support identity() const { return {}; }

  bool valid(const Support &s) const
  {
    return std::adjacent_find(s.coords.begin(), s.coords.end(),
                              [](auto a, auto b) { return a >= b; }) == s.coords.end();
  }

  Support op(const Support &a, const Support &b) const
  {
    require(a);
    require(b);
    Support out;
    out.coords.reserve(a.coords.size() + b.coords.size());
    std::set_symmetric_difference(a.coords.begin(), a.coords.end(), b.coords.begin(),
                                  b.coords.end(), std::back_inserter(out.coords));
    return out;
  }

  Support inv(const Support &a) const
  {
    require(a);
    return a;
  }

  static Support from_bits(std::uint64_t bits)
  {
    Support s;
    for (std::uint32_t i = 0; bits != 0; ++i, bits >>= 1)
      if (bits & 1)
        s.coords.push_back(i);
    return s;
  }

  std::optional<std::uint64_t> rank(const Support &s) const
  {
    std::uint64_t r = 0;
    for (auto c : s.coords) {
      if (c >= 63)
        return std::nullopt;
      r |= std::uint64_t{1} << c;
    }
    return r;
  }

  std::vector<Support> enumerate(std::size_t n) const
  {
    std::vector<Support> out;
    out.reserve(n);
    for (std::uint64_t k = 0; k < n; ++k)
      out.push_back(from_bits(k));
    return out;
  }

  json to_json(const Support &s) const { return s.coords; }

  Support from_json(const json &j) const
  {
    if (!j.is_array())
      throw malformed_element("direct-sum element must be an index array, got " + j.dump());
    Support s;
    for (const auto &c : j) {
      if (!c.is_number_integer() || c.get<std::int64_t>() < 0)
        throw malformed_element("support index must be a non-negative integer");
      s.coords.push_back(c.get<std::uint32_t>());
    }
    if (!valid(s))
      throw malformed_element("support " + j.dump() + " is not strictly increasing");
    return s;
  }

  std::string name() const { return "boolean-sum"; }
  json descriptor() const { return {{"kind", "boolean-sum"}}; }

private:
  void require(const Support &s) const
  {
    if (!valid(s))
      throw malformed_element("support list is not strictly increasing");
  }
};

} // namespace subsize

#endif // SUBSIZE_GROUPS_BOOLEAN_SUM_HPP
