#ifndef SUBSIZE_GROUP_DESCRIPTOR_HPP
#define SUBSIZE_GROUP_DESCRIPTOR_HPP

#include <string>
#include <utility>

#include "subsize/errors.hpp"
#include "subsize/groups/boolean_sum.hpp"
#include "subsize/groups/fin_perm.hpp"
#include "subsize/groups/free_group.hpp"
#include "subsize/groups/integer_group.hpp"

namespace subsize {

enum class GroupKind { Integers, Free, BooleanSum, FinPerm };

/// Names one of the four concrete groups. The descriptor fixes element
/// encoding and enumeration order.
struct GroupDescriptor
{
  GroupKind kind = GroupKind::Integers;
  unsigned rank = 1; // free group only

  friend bool operator==(const GroupDescriptor &, const GroupDescriptor &) = default;
};

/// Accepts "integers", "boolean-sum", "fin-perm", "free" (rank from the
/// object form) or the shorthand "free:R"; JSON objects use {"kind", "rank"}.
inline GroupDescriptor parse_group(const json &j)
{
  std::string kind;
  unsigned rank = 2;
  if (j.is_string()) {
    kind = j.get<std::string>();
  } else if (j.is_object() && j.contains("kind") && j["kind"].is_string()) {
    kind = j["kind"].get<std::string>();
    if (j.contains("rank")) {
      if (!j["rank"].is_number_integer() || j["rank"].get<std::int64_t>() < 1)
        throw spec_error("group rank must be a positive integer");
      rank = j["rank"].get<unsigned>();
    }
  } else {
    throw spec_error("group descriptor must be a string or {\"kind\": ...}");
  }
  if (auto colon = kind.find(':'); colon != std::string::npos) {
    try {
      rank = static_cast<unsigned>(std::stoul(kind.substr(colon + 1)));
    } catch (const std::exception &) {
      throw spec_error("bad rank in group descriptor \"" + kind + "\"");
    }
    kind = kind.substr(0, colon);
  }
  if (kind == "integers" || kind == "Z")
    return {GroupKind::Integers, 1};
  if (kind == "boolean-sum")
    return {GroupKind::BooleanSum, 1};
  if (kind == "fin-perm")
    return {GroupKind::FinPerm, 1};
  if (kind == "free") {
    if (rank < 1 || rank > 26)
      throw spec_error("free group rank must be in [1, 26]");
    return {GroupKind::Free, rank};
  }
  throw spec_error("unknown group \"" + kind + "\"");
}

/// Calls `f` with the concrete group object named by `desc`.
template<typename F>
decltype(auto) visit_group(const GroupDescriptor &desc, F &&f)
{
  switch (desc.kind) {
  case GroupKind::Free:
    return std::forward<F>(f)(FreeGroup(desc.rank));
  case GroupKind::BooleanSum:
    return std::forward<F>(f)(BooleanSum{});
  case GroupKind::FinPerm:
    return std::forward<F>(f)(FinPerm{});
  case GroupKind::Integers:
  default:
    return std::forward<F>(f)(IntegerGroup{});
  }
}

} // namespace subsize

#endif // SUBSIZE_GROUP_DESCRIPTOR_HPP
