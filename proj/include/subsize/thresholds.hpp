#ifndef SUBSIZE_THRESHOLDS_HPP
#define SUBSIZE_THRESHOLDS_HPP

#include <cstddef>
#include <string>

#include "subsize/errors.hpp"
#include "subsize/group.hpp"

namespace subsize {

/// Finitary stand-ins for "finite"/"infinite" plus every search budget.
struct Thresholds
{
  /// Minimum trace size that counts as infinite-like (stripe Y sides,
  /// translate intersections).
  std::size_t tau_inf = 8;
  /// Largest F tried by the sparse checker.
  std::size_t f_max = 4;
  /// Largest FP depth a search accepts.
  std::size_t depth_max = 4;
  /// Candidate generators considered at each FP level.
  std::size_t gen_budget = 64;
  /// One-step extensions every FP prefix must admit; 0 disables the check.
  std::size_t fp_breadth = 8;
  /// Candidate X-tuples examined by stripe and rectangle searches.
  std::size_t rect_budget = 2'000'000;
  /// Non-identity translators tested by the thin checker.
  std::size_t translator_count = 20;
  /// Inner window factor for product materialization (M = factor * N).
  std::size_t product_factor = 4;
  /// Worker threads for the partitionable searches.
  std::size_t workers = 1;

  void validate() const
  {
    if (tau_inf < 2)
      throw spec_error("tau_inf must be at least 2");
    if (f_max < 1)
      throw spec_error("f_max must be at least 1");
    if (depth_max < 2)
      throw spec_error("depth_max must be at least 2");
    if (gen_budget < 1 || rect_budget < 1 || translator_count < 1)
      throw spec_error("search budgets must be positive");
    if (product_factor < 1)
      throw spec_error("product_factor must be positive");
    if (workers < 1)
      throw spec_error("workers must be positive");
  }

  friend bool operator==(const Thresholds &, const Thresholds &) = default;
};

inline json to_json(const Thresholds &t)
{
  return {{"tau_inf", t.tau_inf},
          {"f_max", t.f_max},
          {"depth_max", t.depth_max},
          {"gen_budget", t.gen_budget},
          {"fp_breadth", t.fp_breadth},
          {"rect_budget", t.rect_budget},
          {"translator_count", t.translator_count},
          {"product_factor", t.product_factor}};
}

/// Reads the keys present in `j` on top of `base`; unknown keys are errors.
inline Thresholds thresholds_from_json(const json &j, Thresholds base = {})
{
  if (!j.is_object())
    throw spec_error("thresholds must be a JSON object");
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (!is_nonnegative_integer(it.value()))
      throw spec_error("threshold \"" + it.key() + "\" must be a non-negative integer");
    auto v = it.value().get<std::size_t>();
    const auto &k = it.key();
    if (k == "tau_inf")
      base.tau_inf = v;
    else if (k == "f_max")
      base.f_max = v;
    else if (k == "depth_max")
      base.depth_max = v;
    else if (k == "gen_budget")
      base.gen_budget = v;
    else if (k == "fp_breadth")
      base.fp_breadth = v;
    else if (k == "rect_budget")
      base.rect_budget = v;
    else if (k == "translator_count")
      base.translator_count = v;
    else if (k == "product_factor")
      base.product_factor = v;
    else if (k == "workers")
      base.workers = v;
    else
      throw spec_error("unknown threshold \"" + k + "\"");
  }
  base.validate();
  return base;
}

} // namespace subsize

#endif // SUBSIZE_THRESHOLDS_HPP
