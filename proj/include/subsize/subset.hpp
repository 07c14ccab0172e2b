#ifndef SUBSIZE_SUBSET_HPP
#define SUBSIZE_SUBSET_HPP

#include <algorithm>
#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

#include "subsize/builtins.hpp"
#include "subsize/errors.hpp"
#include "subsize/group.hpp"
#include "subsize/subset_spec.hpp"
#include "subsize/thresholds.hpp"
#include "subsize/universe.hpp"

namespace subsize {

/// Turns a Constructed(id, params) node into a concrete spec; installed by
/// whoever owns the construction registry (the CLI runner, tests).
template<Group G>
using ConstructionResolver =
  std::function<SpecPtr<element_t<G>>(const std::string &id, const json &params)>;

/// Everything a checker needs besides its own arguments.
template<Group G>
struct Context
{
  UniversePtr<G> universe;
  Thresholds thresholds;
  ConstructionResolver<G> resolve;

  const G &group() const { return universe->group(); }
};

template<Group G>
Context<G> make_context(G group, Thresholds t = {}, ConstructionResolver<G> resolve = {})
{
  t.validate();
  return {make_universe(std::move(group)), t, std::move(resolve)};
}

/// (denoted set) intersected with W_N, sorted by enumeration index.
template<Group G>
class SampleSet
{
public:
  using E = element_t<G>;

  SampleSet() = default;

  SampleSet(UniversePtr<G> universe, std::size_t window, std::vector<std::uint64_t> indices,
            std::string spec_key = {}, bool truncated = false)
  : universe_(std::move(universe)), window_(window), indices_(std::move(indices)),
    mask_(window, false), spec_key_(std::move(spec_key)), truncated_(truncated)
  {
    std::sort(indices_.begin(), indices_.end());
    indices_.erase(std::unique(indices_.begin(), indices_.end()), indices_.end());
    universe_->ensure(window);
    elements_.reserve(indices_.size());
    for (auto k : indices_) {
      if (k >= window)
        throw spec_error("sample element lies outside its window");
      mask_[k] = true;
      elements_.push_back(universe_->at(k));
    }
  }

  std::size_t window() const { return window_; }
  std::size_t size() const { return indices_.size(); }
  bool empty() const { return indices_.empty(); }
  const std::vector<E> &elements() const { return elements_; }
  const std::vector<std::uint64_t> &indices() const { return indices_; }
  const std::string &spec_key() const { return spec_key_; }
  /// Set when a product inside the spec lost members to the inner window.
  bool truncated() const { return truncated_; }
  const UniversePtr<G> &universe() const { return universe_; }

  bool contains(const E &e) const
  {
    auto k = universe_->index_of(e);
    return k && *k < window_ && mask_[*k];
  }

  bool contains_index(std::uint64_t k) const { return k < window_ && mask_[k]; }

private:
  UniversePtr<G> universe_;
  std::size_t window_ = 0;
  std::vector<std::uint64_t> indices_;
  std::vector<E> elements_;
  std::vector<bool> mask_;
  std::string spec_key_;
  bool truncated_ = false;
};

/// Builds a sample from explicit elements; elements outside W_N are dropped.
template<Group G>
SampleSet<G> sample_of(const UniversePtr<G> &universe, std::size_t window,
                       const std::vector<element_t<G>> &elements)
{
  universe->ensure(window);
  std::vector<std::uint64_t> idx;
  for (const auto &e : elements)
    if (auto k = universe->index_of(e); k && *k < window)
      idx.push_back(*k);
  return SampleSet<G>(universe, window, std::move(idx));
}

/// Membership oracle of a spec. `window` is the materialization window
/// (used by window complements) and `inner` the window products draw their
/// factors from.
template<Group G>
class Membership
{
public:
  using E = element_t<G>;
  using Fn = std::function<bool(const E &)>;

  Membership() = default;
  Membership(Fn fn, bool window_dependent) : fn_(std::move(fn)), window_dependent_(window_dependent) {}

  bool operator()(const E &e) const { return fn_(e); }
  /// True when the answer depends on the inner product window.
  bool window_dependent() const { return window_dependent_; }

private:
  Fn fn_;
  bool window_dependent_ = false;
};

template<Group G>
Membership<G> compile(const SpecPtr<element_t<G>> &s, const Context<G> &ctx, std::size_t window,
                      std::size_t inner)
{
  using E = element_t<G>;
  using S = SubsetSpec<E>;
  using M = Membership<G>;
  const G &group = ctx.group();
  const auto &universe = ctx.universe;

  return std::visit(
    [&](const auto &n) -> M {
      using N = std::decay_t<decltype(n)>;
      if constexpr (std::is_same_v<N, typename S::Explicit>) {
        auto set = std::make_shared<std::unordered_set<E, typename G::hash>>();
        for (const auto &e : n.elements) {
          if (!group.valid(e))
            throw malformed_element("explicit set holds a non-canonical element");
          set->insert(e);
        }
        return M([set](const E &e) { return set->count(e) > 0; }, false);
      } else if constexpr (std::is_same_v<N, typename S::Builtin>) {
        return M(builtin_predicate(group, n.name, n.params), false);
      } else if constexpr (std::is_same_v<N, typename S::Constructed>) {
        if (!ctx.resolve)
          throw spec_error("no construction registry available for \"" + n.id + "\"");
        return compile(ctx.resolve(n.id, n.params), ctx, window, inner);
      } else if constexpr (std::is_same_v<N, typename S::Translate>) {
        auto a = compile(n.of, ctx, window, inner);
        auto ginv = group.inv(n.by);
        if (n.side == Side::Left)
          return M([a, ginv, universe](const E &e) { return a(universe->group().op(ginv, e)); },
                   a.window_dependent());
        return M([a, ginv, universe](const E &e) { return a(universe->group().op(e, ginv)); },
                 a.window_dependent());
      } else if constexpr (std::is_same_v<N, typename S::Inverse>) {
        auto a = compile(n.of, ctx, window, inner);
        return M([a, universe](const E &e) { return a(universe->group().inv(e)); }, a.window_dependent());
      } else if constexpr (std::is_same_v<N, typename S::Union> ||
                           std::is_same_v<N, typename S::Intersection>) {
        std::vector<M> parts;
        bool dep = false;
        for (const auto &p : n.parts) {
          parts.push_back(compile(p, ctx, window, inner));
          dep = dep || parts.back().window_dependent();
        }
        constexpr bool any = std::is_same_v<N, typename S::Union>;
        return M(
          [parts = std::move(parts)](const E &e) {
            for (const auto &p : parts)
              if (p(e) == any)
                return any;
            return !any;
          },
          dep);
      } else if constexpr (std::is_same_v<N, typename S::Difference>) {
        auto a = compile(n.left, ctx, window, inner);
        auto b = compile(n.right, ctx, window, inner);
        return M([a, b](const E &e) { return a(e) && !b(e); },
                 a.window_dependent() || b.window_dependent());
      } else if constexpr (std::is_same_v<N, typename S::WindowComplement>) {
        auto a = compile(n.of, ctx, window, inner);
        universe->ensure(window);
        return M([a, universe, window](const E &e) { return universe->in_window(e, window) && !a(e); },
                 a.window_dependent());
      } else {
        // Product: z in AB iff z = ab with a, b in W_inner. Scan the smaller
        // factor list and test the cofactor against the other oracle.
        auto a = compile(n.left, ctx, inner, inner);
        auto b = compile(n.right, ctx, inner, inner);
        universe->ensure(inner);
        auto as = std::make_shared<std::vector<E>>();
        auto bs = std::make_shared<std::vector<E>>();
        for (std::size_t k = 0; k < inner; ++k) {
          const auto &e = universe->at(k);
          if (a(e))
            as->push_back(e);
          if (b(e))
            bs->push_back(e);
        }
        if (as->size() <= bs->size())
          return M(
            [as, b, universe, inner](const E &z) {
              const auto &g = universe->group();
              for (const auto &x : *as) {
                auto y = g.op(g.inv(x), z);
                if (universe->in_window(y, inner) && b(y))
                  return true;
              }
              return false;
            },
            true);
        return M(
          [bs, a, universe, inner](const E &z) {
            const auto &g = universe->group();
            for (const auto &y : *bs) {
              auto x = g.op(z, g.inv(y));
              if (universe->in_window(x, inner) && a(x))
                return true;
            }
            return false;
          },
          true);
      }
    },
    s->node);
}

template<Group G>
std::string spec_key(const Context<G> &ctx, const SpecPtr<element_t<G>> &s)
{
  return spec_to_json(ctx.group(), s).dump();
}

/// Exact intersection of the denoted set with W_N. Products draw factors
/// from W_M, M = product_factor * N; the sample is flagged truncated when
/// doubling M changes the result.
template<Group G>
SampleSet<G> materialize(const SpecPtr<element_t<G>> &s, const Context<G> &ctx, std::size_t window)
{
  if (window < 1)
    throw spec_error("window must hold at least one element");
  const std::size_t inner = ctx.thresholds.product_factor * window;
  auto member = compile(s, ctx, window, inner);
  ctx.universe->ensure(window);
  std::vector<std::uint64_t> idx;
  for (std::size_t k = 0; k < window; ++k)
    if (member(ctx.universe->at(k)))
      idx.push_back(k);

  bool truncated = false;
  if (member.window_dependent()) {
    auto wide = compile(s, ctx, window, 2 * inner);
    std::size_t j = 0;
    for (std::size_t k = 0; k < window && !truncated; ++k) {
      bool in = j < idx.size() && idx[j] == k;
      if (in)
        ++j;
      else if (wide(ctx.universe->at(k)))
        truncated = true;
    }
  }
  return SampleSet<G>(ctx.universe, window, std::move(idx), spec_key(ctx, s), truncated);
}

/// The standing finiteness proxy: a trace is finite-like when it does not
/// grow from window N to window 2N.
template<Group G>
bool finite_like(const SampleSet<G> &at_n, const SampleSet<G> &at_2n)
{
  if (at_2n.window() != 2 * at_n.window())
    throw spec_error("finite_like needs samples at windows N and 2N");
  if (at_n.spec_key() != at_2n.spec_key())
    throw spec_error("finite_like needs two samples of the same spec");
  return at_2n.size() == at_n.size();
}

} // namespace subsize

#endif // SUBSIZE_SUBSET_HPP
