#ifndef SUBSIZE_GROUPS_INTEGER_GROUP_HPP
#define SUBSIZE_GROUPS_INTEGER_GROUP_HPP

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "subsize/errors.hpp"
#include "subsize/group.hpp"

namespace subsize {

/// (Z, +), enumerated as 0, 1, -1, 2, -2, ...
class IntegerGroup
{
public:
  using element_type = std::int64_t;
  using hash = std::hash<std::int64_t>;

  element_type identity() const { return 0; }
  element_type op(element_type a, element_type b) const { return a + b; }
  element_type inv(element_type a) const { return -a; }
  bool valid(element_type) const { return true; }

  static element_type nth(std::uint64_t k)
  {
    if (k == 0)
      return 0;
    auto half = static_cast<std::int64_t>((k + 1) / 2);
    return (k % 2 == 1) ? half : -half;
  }

  std::optional<std::uint64_t> rank(element_type a) const
  {
    if (a > 0)
      return static_cast<std::uint64_t>(a) * 2 - 1;
    return static_cast<std::uint64_t>(-a) * 2;
  }

  std::vector<element_type> enumerate(std::size_t n) const
  {
    std::vector<element_type> out;
    out.reserve(n);
    for (std::size_t k = 0; k < n; ++k)
      out.push_back(nth(k));
    return out;
  }

  json to_json(element_type a) const { return a; }

  element_type from_json(const json &j) const
  {
    if (!j.is_number_integer())
      throw malformed_element("integer group element must be an integer, got " + j.dump());
    return j.get<std::int64_t>();
  }

  std::string name() const { return "integers"; }
  json descriptor() const { return {{"kind", "integers"}}; }
};

} // namespace subsize

#endif // SUBSIZE_GROUPS_INTEGER_GROUP_HPP
