#ifndef SUBSIZE_CERTIFICATES_HPP
#define SUBSIZE_CERTIFICATES_HPP

#include <cstddef>
#include <unordered_set>
#include <vector>

#include "subsize/errors.hpp"
#include "subsize/group.hpp"
#include "subsize/subset.hpp"

namespace subsize {

template<Group G>
json encode_elements(const G &group, const std::vector<element_t<G>> &v)
{
  json arr = json::array();
  for (const auto &e : v)
    arr.push_back(group.to_json(e));
  return arr;
}

template<Group G>
std::vector<element_t<G>> decode_elements(const G &group, const json &j)
{
  if (!j.is_array())
    throw malformed_element("expected an array of elements, got " + j.dump());
  std::vector<element_t<G>> out;
  out.reserve(j.size());
  for (const auto &e : j)
    out.push_back(group.from_json(e));
  return out;
}

/// A product XY inside A: a stripe when Y is long, a rectangle otherwise.
template<Group G>
struct Grid
{
  std::vector<element_t<G>> X;
  std::vector<element_t<G>> Y;
};

template<Group G>
json grid_to_json(const G &group, const Grid<G> &g)
{
  return {{"X", encode_elements(group, g.X)}, {"Y", encode_elements(group, g.Y)}};
}

template<Group G>
Grid<G> grid_from_json(const G &group, const json &j)
{
  if (!j.is_object() || !j.contains("X") || !j.contains("Y"))
    throw spec_error("grid certificate needs X and Y");
  return {decode_elements(group, j["X"]), decode_elements(group, j["Y"])};
}

template<Group G>
bool all_distinct(const std::vector<element_t<G>> &v)
{
  std::unordered_set<element_t<G>, typename G::hash> seen(v.begin(), v.end());
  return seen.size() == v.size();
}

/// Direct check that X and Y are repetition-free and XY lies in the sample.
template<Group G>
bool verify_grid(const SampleSet<G> &a, const Grid<G> &g)
{
  if (!all_distinct<G>(g.X) || !all_distinct<G>(g.Y))
    return false;
  const G &group = a.universe()->group();
  for (const auto &x : g.X)
    for (const auto &y : g.Y)
      if (!a.contains(group.op(x, y)))
        return false;
  return true;
}

/// Generators g_1..g_d and, for a piecewise shifted witness, shifts b_1..b_d.
/// The witness set holds g_{i_1}...g_{i_k} b_{i_k} for every i_1 < ... < i_k.
template<Group G>
struct FPWitness
{
  std::vector<element_t<G>> generators;
  std::vector<element_t<G>> shifts;
};

/// Products indexed by bitmask over the generators (mask 0 omitted), shift
/// of the highest set bit applied last.
template<Group G>
std::vector<element_t<G>> fp_products(const G &group, const FPWitness<G> &w)
{
  const std::size_t d = w.generators.size();
  std::vector<element_t<G>> out;
  out.reserve((std::size_t{1} << d) - 1);
  for (std::size_t mask = 1; mask < (std::size_t{1} << d); ++mask) {
    auto p = group.identity();
    std::size_t last = 0;
    for (std::size_t i = 0; i < d; ++i)
      if (mask >> i & 1) {
        p = group.op(p, w.generators[i]);
        last = i;
      }
    if (!w.shifts.empty())
      p = group.op(p, w.shifts[last]);
    out.push_back(std::move(p));
  }
  return out;
}

template<Group G>
json fp_to_json(const G &group, const FPWitness<G> &w)
{
  json j{{"depth", w.generators.size()},
         {"generators", encode_elements(group, w.generators)},
         {"products", encode_elements(group, fp_products(group, w))}};
  if (!w.shifts.empty())
    j["shifts"] = encode_elements(group, w.shifts);
  return j;
}

template<Group G>
FPWitness<G> fp_from_json(const G &group, const json &j)
{
  if (!j.is_object() || !j.contains("generators"))
    throw spec_error("FP certificate needs generators");
  FPWitness<G> w{decode_elements(group, j["generators"]), {}};
  if (j.contains("shifts"))
    w.shifts = decode_elements(group, j["shifts"]);
  if (!w.shifts.empty() && w.shifts.size() != w.generators.size())
    throw spec_error("FP certificate needs one shift per generator");
  return w;
}

/// Generators distinct with pairwise distinct products, every product of the
/// witness set inside the sample.
template<Group G>
bool verify_fp(const SampleSet<G> &a, const FPWitness<G> &w)
{
  const G &group = a.universe()->group();
  if (w.generators.empty())
    return false;
  FPWitness<G> bare{w.generators, {}};
  if (!all_distinct<G>(fp_products(group, bare)))
    return false;
  for (const auto &p : fp_products(group, w))
    if (!a.contains(p))
      return false;
  return true;
}

} // namespace subsize

#endif // SUBSIZE_CERTIFICATES_HPP
