#ifndef SUBSIZE_RAMSEY_HPP
#define SUBSIZE_RAMSEY_HPP

#include <bit>
#include <cstdint>
#include <optional>
#include <random>
#include <vector>

#include "subsize/errors.hpp"
#include "subsize/report.hpp"

namespace subsize {

inline constexpr std::size_t kRamseyExhaustiveCap = 5;

/// A 2-coloring of the r×r grid: bit c of rows[i] is the color of cell (i, c).
struct Coloring
{
  std::size_t size = 0;
  std::vector<std::uint32_t> rows;
};

inline json coloring_to_json(const Coloring &c)
{
  json rows = json::array();
  for (auto row : c.rows) {
    json cells = json::array();
    for (std::size_t j = 0; j < c.size; ++j)
      cells.push_back(row >> j & 1U);
    rows.push_back(cells);
  }
  return {{"size", c.size}, {"rows", rows}};
}

inline Coloring coloring_from_json(const json &j)
{
  Coloring c;
  c.size = j.at("size").get<std::size_t>();
  for (const auto &cells : j.at("rows")) {
    if (cells.size() != c.size)
      throw spec_error("coloring rows must have `size` cells");
    std::uint32_t row = 0;
    for (std::size_t k = 0; k < c.size; ++k)
      if (cells[k].get<int>())
        row |= std::uint32_t{1} << k;
    c.rows.push_back(row);
  }
  if (c.rows.size() != c.size)
    throw spec_error("coloring must have `size` rows");
  return c;
}

namespace detail {

/// True when some n rows including `rows.back()` agree in one color on n columns.
inline bool closes_mono(const std::vector<std::uint32_t> &rows, std::size_t n, std::uint32_t full)
{
  if (rows.size() < n)
    return false;
  const std::size_t last = rows.size() - 1;
  std::vector<std::size_t> pick;
  auto rec = [&](auto &&self, std::size_t start, std::uint32_t ones, std::uint32_t zeros) -> bool {
    if (static_cast<std::size_t>(std::popcount(ones)) < n && static_cast<std::size_t>(std::popcount(zeros)) < n)
      return false;
    if (pick.size() == n - 1)
      return true;
    for (std::size_t i = start; i < last; ++i) {
      pick.push_back(i);
      bool hit = self(self, i + 1, ones & rows[i], zeros & (~rows[i] & full));
      pick.pop_back();
      if (hit)
        return true;
    }
    return false;
  };
  return rec(rec, 0, rows[last], ~rows[last] & full);
}

/// Searches for an r×r coloring without a monochromatic n×n sub-grid.
/// Rows are generated in non-decreasing order (row permutations preserve the
/// property), so every coloring is examined up to row order.
inline std::optional<Coloring> avoiding_coloring(std::size_t r, std::size_t n, std::uint64_t &nodes)
{
  if (r == 0)
    return Coloring{0, {}};
  const std::uint32_t full = r >= 32 ? ~std::uint32_t{0} : (std::uint32_t{1} << r) - 1;
  std::vector<std::uint32_t> rows;
  auto rec = [&](auto &&self, std::uint32_t from) -> bool {
    if (rows.size() == r)
      return true;
    for (std::uint64_t v = from; v <= full; ++v) {
      ++nodes;
      rows.push_back(static_cast<std::uint32_t>(v));
      if (!closes_mono(rows, n, full) && self(self, static_cast<std::uint32_t>(v)))
        return true;
      rows.pop_back();
    }
    return false;
  };
  if (rec(rec, 0))
    return Coloring{r, rows};
  return std::nullopt;
}

/// Seeded local search; can only exhibit an avoiding coloring, never refute one.
inline std::optional<Coloring> heuristic_coloring(std::size_t r, std::size_t n, std::uint64_t seed,
                                                  std::size_t steps)
{
  const std::uint32_t full = (std::uint32_t{1} << r) - 1;
  std::mt19937_64 rng(seed);
  auto bad_rows = [&](const std::vector<std::uint32_t> &rows) {
    std::size_t bad = 0;
    std::vector<std::uint32_t> prefix;
    for (auto row : rows) {
      prefix.push_back(row);
      bad += closes_mono(prefix, n, full);
    }
    return bad;
  };
  std::vector<std::uint32_t> rows(r);
  for (auto &row : rows)
    row = static_cast<std::uint32_t>(rng()) & full;
  std::size_t score = bad_rows(rows);
  for (std::size_t s = 0; s < steps && score > 0; ++s) {
    auto i = rng() % r, j = rng() % r;
    rows[i] ^= std::uint32_t{1} << j;
    auto next = bad_rows(rows);
    if (next <= score)
      score = next;
    else
      rows[i] ^= std::uint32_t{1} << j;
  }
  if (score == 0)
    return Coloring{r, rows};
  return std::nullopt;
}

} // namespace detail

/// Direct check of a coloring: true when no n rows and n columns are
/// monochromatic.
inline bool verify_avoiding(const Coloring &c, std::size_t n)
{
  if (c.rows.size() != c.size)
    return false;
  const std::uint32_t full = c.size >= 32 ? ~std::uint32_t{0} : (std::uint32_t{1} << c.size) - 1;
  std::vector<std::uint32_t> prefix;
  for (auto row : c.rows) {
    if (row & ~full)
      return false;
    prefix.push_back(row);
    if (n >= 1 && detail::closes_mono(prefix, n, full))
      return false;
  }
  return true;
}

/// Least r <= r_max such that every 2-coloring of the r×r grid has a
/// monochromatic n×n sub-grid; the certificate carries an avoiding coloring
/// of size r-1. Sizes above the exhaustive cap only run a labeled heuristic.
inline CheckReport bipartite_ramsey(std::size_t n, std::size_t r_max, std::uint64_t seed = 0)
{
  if (n < 1)
    throw spec_error("bipartite_ramsey needs n >= 1");
  if (r_max > 31)
    throw spec_error("r_max must stay below 32");
  CheckReport rep;
  rep.property = "bipartite-ramsey";
  rep.window = r_max;
  ReportTimer timer(rep);
  std::uint64_t nodes = 0;
  Coloring best{0, {}};
  std::string best_mode = "exhaustive";
  std::optional<std::size_t> answer;
  json heuristic = json::array();
  for (std::size_t r = 1; r <= r_max; ++r) {
    if (r <= kRamseyExhaustiveCap) {
      auto c = detail::avoiding_coloring(r, n, nodes);
      if (!c) {
        answer = r;
        break;
      }
      best = *c;
    } else {
      auto c = detail::heuristic_coloring(r, n, seed + r, 20000);
      heuristic.push_back({{"r", r}, {"found", c.has_value()}});
      if (!c)
        break;
      best = *c;
      best_mode = "heuristic";
    }
  }
  rep.verdict = answer ? Verdict::Holds : Verdict::Exhausted;
  rep.certificate = {{"n", n},
                     {"r", answer ? json(*answer) : json(nullptr)},
                     {"extremal", coloring_to_json(best)},
                     {"extremal_mode", best_mode}};
  if (!heuristic.empty())
    rep.certificate["heuristic"] = heuristic;
  rep.budgets_used = {{"nodes", nodes}, {"r_max", r_max}, {"exhaustive_cap", kRamseyExhaustiveCap}};
  return rep;
}

} // namespace subsize

#endif // SUBSIZE_RAMSEY_HPP
