#ifndef SUBSIZE_CHECKERS_HPP
#define SUBSIZE_CHECKERS_HPP

#include <algorithm>
#include <bit>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <unordered_set>
#include <vector>

#include "subsize/certificates.hpp"
#include "subsize/errors.hpp"
#include "subsize/group.hpp"
#include "subsize/report.hpp"
#include "subsize/search.hpp"
#include "subsize/subset.hpp"

namespace subsize {

namespace detail {

template<Group G>
CheckReport start_report(const Context<G> &ctx, std::string property, std::size_t window)
{
  CheckReport r;
  r.property = std::move(property);
  r.window = window;
  r.thresholds = ctx.thresholds;
  return r;
}

/// Size of (g_1 S ∩ ... ∩ g_k S) ∩ W, where W is the sample's window.
template<Group G>
std::size_t translate_trace(const SampleSet<G> &s, const std::vector<element_t<G>> &F)
{
  const auto &u = *s.universe();
  const G &group = u.group();
  std::vector<element_t<G>> invs;
  for (std::size_t i = 1; i < F.size(); ++i)
    invs.push_back(group.inv(F[i]));
  std::size_t count = 0;
  for (const auto &a : s.elements()) {
    auto z = group.op(F[0], a);
    if (!u.in_window(z, s.window()))
      continue;
    bool in = true;
    for (const auto &gi : invs)
      if (!s.contains(group.op(gi, z))) {
        in = false;
        break;
      }
    count += in;
  }
  return count;
}

/// First `count` non-identity elements of the enumeration.
template<Group G>
std::vector<element_t<G>> leading_translators(const Context<G> &ctx, std::size_t count)
{
  ctx.universe->ensure(count + 1);
  std::vector<element_t<G>> out;
  for (std::size_t k = 1; k <= count; ++k)
    out.push_back(ctx.universe->at(k));
  return out;
}

} // namespace detail

// ---------------------------------------------------------------- large/small

/// Greedy cover of W_N by left translates f(A ∩ W_M), f ∈ W_N, M = factor*N.
template<Group G>
CheckReport check_large(const Context<G> &ctx, const SpecPtr<element_t<G>> &A, std::size_t window,
                        std::size_t f_budget)
{
  if (f_budget < 1)
    throw spec_error("check_large needs a positive F budget");
  auto r = detail::start_report(ctx, "large", window);
  ReportTimer timer(r);
  const std::size_t inner = ctx.thresholds.product_factor * window;
  auto a = materialize(A, ctx, inner);
  const auto &u = *ctx.universe;
  const G &group = ctx.group();
  r.budgets_used = {{"F_budget", f_budget}, {"inner_window", inner}};
  if (a.empty()) {
    r.verdict = Verdict::Fails;
    r.certificate = {{"reason", "A has no elements in the inner window"}, {"inner_window", inner}};
    return r;
  }

  const std::size_t words = (window + 63) / 64;
  std::vector<std::vector<std::uint64_t>> cover(window, std::vector<std::uint64_t>(words, 0));
  for (std::size_t f = 0; f < window; ++f)
    for (const auto &x : a.elements()) {
      auto k = u.index_of(group.op(u.at(f), x));
      if (k && *k < window)
        cover[f][*k / 64] |= std::uint64_t{1} << (*k % 64);
    }

  std::vector<std::uint64_t> covered(words, 0);
  std::vector<std::uint64_t> chosen;
  std::size_t covered_count = 0;
  while (covered_count < window && chosen.size() < f_budget) {
    std::size_t best = 0, gain = 0;
    for (std::size_t f = 0; f < window; ++f) {
      std::size_t g = 0;
      for (std::size_t w = 0; w < words; ++w)
        g += static_cast<std::size_t>(std::popcount(cover[f][w] & ~covered[w]));
      if (g > gain) {
        gain = g;
        best = f;
      }
    }
    if (gain == 0)
      break;
    chosen.push_back(best);
    for (std::size_t w = 0; w < words; ++w)
      covered[w] |= cover[best][w];
    covered_count += gain;
  }
  std::sort(chosen.begin(), chosen.end());
  std::vector<element_t<G>> F;
  for (auto k : chosen)
    F.push_back(u.at(k));
  r.budgets_used["cover_size"] = F.size();
  r.certificate = {{"F", encode_elements(group, F)},
                   {"inner_window", inner},
                   {"uncovered", window - covered_count}};
  r.verdict = covered_count == window ? Verdict::Holds : Verdict::Exhausted;
  return r;
}

/// Re-checks W_N ⊆ F(A ∩ W_M) directly.
template<Group G>
bool verify_cover(const Context<G> &ctx, const SpecPtr<element_t<G>> &A, std::size_t window,
                  const std::vector<element_t<G>> &F)
{
  const std::size_t inner = ctx.thresholds.product_factor * window;
  auto a = materialize(A, ctx, inner);
  const G &group = ctx.group();
  for (std::size_t k = 0; k < window; ++k) {
    const auto &z = ctx.universe->at(k);
    bool hit = std::any_of(F.begin(), F.end(),
                           [&](const auto &f) { return a.contains(group.op(group.inv(f), z)); });
    if (!hit)
      return false;
  }
  return true;
}

/// A is small relative to the given large L: L ∖ A is still large.
template<Group G>
CheckReport check_small(const Context<G> &ctx, const SpecPtr<element_t<G>> &A,
                        const SpecPtr<element_t<G>> &L, std::size_t window, std::size_t f_budget)
{
  auto r = detail::start_report(ctx, "small", window);
  ReportTimer timer(r);
  auto large_l = check_large(ctx, L, window, f_budget);
  if (!large_l.holds())
    throw spec_error(std::string("check_small needs a large L, check_large(L) returned ") +
                     to_string(large_l.verdict));
  auto rest = check_large(ctx, spec::difference(L, A), window, f_budget);
  r.verdict = rest.verdict;
  r.certificate = {{"L", large_l.certificate}, {"L_minus_A", rest.certificate}};
  r.budgets_used = {{"L", large_l.budgets_used}, {"L_minus_A", rest.budgets_used}};
  return r;
}

// ---------------------------------------------------------------------- thin

/// Overlap |(gS ∩ S)| at windows N and 2N for each translator. A translator
/// witnesses infiniteness when its overlap both reaches tau_inf and grows
/// from N to 2N.
template<Group G>
CheckReport check_thin(const Context<G> &ctx, const SpecPtr<element_t<G>> &A, std::size_t window,
                       std::optional<std::size_t> translator_count = {})
{
  const std::size_t count = translator_count.value_or(ctx.thresholds.translator_count);
  if (count < 1)
    throw spec_error("check_thin needs at least one translator");
  auto r = detail::start_report(ctx, "thin", window);
  ReportTimer timer(r);
  const G &group = ctx.group();
  auto sn = materialize(A, ctx, window);
  auto s2 = materialize(A, ctx, 2 * window);
  const auto tau = ctx.thresholds.tau_inf;

  json rows = json::array();
  json failing = nullptr;
  for (const auto &g : detail::leading_translators(ctx, count)) {
    std::vector<element_t<G>> F{group.identity(), g};
    auto tn = detail::translate_trace(sn, F);
    auto t2 = detail::translate_trace(s2, F);
    bool infinite_like = tn >= tau && t2 > tn;
    rows.push_back({{"g", group.to_json(g)},
                    {"overlap_n", tn},
                    {"overlap_2n", t2},
                    {"finite_like", !infinite_like}});
    if (infinite_like && failing.is_null())
      failing = group.to_json(g);
  }
  r.verdict = failing.is_null() ? Verdict::Holds : Verdict::Fails;
  r.certificate = {{"translators", rows}, {"failing", failing}};
  r.budgets_used = {{"translator_count", count}};
  return r;
}

// ----------------------------------------------------------- stripes & grids

namespace detail {

/// Searches normalized grids X = {e, c_1 < ... < c_{n-1}}, Y ⊆ S with XY ⊆ S
/// and |Y| >= need. One node is one candidate X-tuple.
template<Group G>
SearchOutcome<Grid<G>> search_grid(const Context<G> &ctx, const SampleSet<G> &s, std::size_t n,
                                   std::size_t need,
                                   const std::optional<std::vector<element_t<G>>> &translators,
                                   std::size_t &candidate_count)
{
  using E = element_t<G>;
  const auto &u = *ctx.universe;
  const G &group = u.group();
  const auto &elems = s.elements();

  if (n == 1) {
    candidate_count = 0;
    SearchOutcome<Grid<G>> out;
    out.nodes = 1;
    if (elems.size() >= need)
      out.hit = Grid<G>{{group.identity()}, elems};
    return out;
  }

  std::vector<E> cands;
  if (translators) {
    cands = *translators;
  } else {
    std::unordered_set<E, typename G::hash> seen;
    for (const auto &a : elems)
      for (const auto &b : elems)
        if (!(a == b))
          seen.insert(group.op(a, group.inv(b)));
    cands.assign(seen.begin(), seen.end());
  }
  cands.erase(std::remove(cands.begin(), cands.end(), group.identity()), cands.end());
  sort_canonical(u, cands);
  candidate_count = cands.size();

  std::vector<std::uint32_t> all(elems.size());
  for (std::uint32_t i = 0; i < all.size(); ++i)
    all[i] = i;
  auto narrow = [&](const std::vector<std::uint32_t> &ys, const E &c) {
    std::vector<std::uint32_t> out;
    for (auto y : ys)
      if (s.contains(group.op(c, elems[y])))
        out.push_back(y);
    return out;
  };

  auto branch = [&](std::size_t i, std::size_t limit) {
    BranchOutcome<Grid<G>> res;
    std::vector<std::size_t> picked{i};
    std::function<std::optional<std::vector<std::uint32_t>>(const std::vector<std::uint32_t> &)>
      dfs = [&](const std::vector<std::uint32_t> &ys) -> std::optional<std::vector<std::uint32_t>> {
      if (++res.nodes > limit)
        return std::nullopt;
      if (ys.size() < need)
        return std::nullopt;
      if (picked.size() + 1 == n)
        return ys;
      for (std::size_t j = picked.back() + 1; j < cands.size(); ++j) {
        picked.push_back(j);
        auto found = dfs(narrow(ys, cands[j]));
        if (found)
          return found;
        picked.pop_back();
        if (res.nodes > limit)
          return std::nullopt;
      }
      return std::nullopt;
    };
    if (auto ys = dfs(narrow(all, cands[i]))) {
      Grid<G> g;
      g.X.push_back(group.identity());
      for (auto p : picked)
        g.X.push_back(cands[p]);
      for (auto y : *ys)
        g.Y.push_back(elems[y]);
      res.hit = std::move(g);
    }
    return res;
  };
  return ordered_search<Grid<G>>(cands.size(), ctx.thresholds.rect_budget, ctx.thresholds.workers,
                                 branch);
}

template<Group G>
void record_grid_search(CheckReport &r, const SearchOutcome<Grid<G>> &o, std::size_t candidates,
                        std::size_t budget)
{
  r.budgets_used = {{"x_tuples", o.nodes},
                    {"rect_budget", budget},
                    {"budget_hit", o.budget_hit},
                    {"candidate_translators", candidates}};
}

} // namespace detail

/// n-stripe XY ⊆ A ∩ W_N with |X| = n, |Y| >= tau_inf. Candidate translators
/// are the quotients a b^-1 of window members, or the supplied list.
template<Group G>
CheckReport find_stripe(const Context<G> &ctx, const SpecPtr<element_t<G>> &A, std::size_t n,
                        std::size_t window,
                        const std::optional<std::vector<element_t<G>>> &translators = {})
{
  if (n < 1)
    throw spec_error("stripe size n must be at least 1");
  auto r = detail::start_report(ctx, "stripe", window);
  ReportTimer timer(r);
  auto s = materialize(A, ctx, window);
  std::size_t cands = 0;
  auto o = detail::search_grid(ctx, s, n, ctx.thresholds.tau_inf, translators, cands);
  detail::record_grid_search(r, o, cands, ctx.thresholds.rect_budget);
  r.certificate = {{"n", n}};
  if (o.hit) {
    r.verdict = Verdict::Holds;
    r.certificate.update(grid_to_json(ctx.group(), *o.hit));
  } else {
    r.verdict = Verdict::Exhausted;
  }
  return r;
}

/// No (n+1)-stripe in A ∩ W_N; exhausted when the search budget ran out.
template<Group G>
CheckReport check_n_thin(const Context<G> &ctx, const SpecPtr<element_t<G>> &A, std::size_t n,
                         std::size_t window,
                         const std::optional<std::vector<element_t<G>>> &translators = {})
{
  if (n < 1)
    throw spec_error("n-thin needs n >= 1");
  auto s = find_stripe(ctx, A, n + 1, window, translators);
  CheckReport r = s;
  r.property = "n-thin";
  r.certificate["n"] = n;
  if (s.holds()) {
    r.verdict = Verdict::Fails;
    r.certificate["stripe_size"] = n + 1;
  } else {
    r.verdict = s.budgets_used.value("budget_hit", false) ? Verdict::Exhausted : Verdict::Holds;
  }
  return r;
}

/// Convenience: the first translator_count non-identity elements, the
/// translator set check_thin uses.
template<Group G>
std::vector<element_t<G>> thin_translators(const Context<G> &ctx)
{
  return detail::leading_translators(ctx, ctx.thresholds.translator_count);
}

template<Group G>
CheckReport find_rectangle(const Context<G> &ctx, const SpecPtr<element_t<G>> &A, std::size_t n,
                           std::size_t m, std::size_t window)
{
  if (n < 1 || m < 1)
    throw spec_error("rectangle sides must be at least 1");
  auto r = detail::start_report(ctx, "rectangle", window);
  ReportTimer timer(r);
  auto s = materialize(A, ctx, window);
  std::size_t cands = 0;
  auto o = detail::search_grid(ctx, s, n, m, std::nullopt, cands);
  detail::record_grid_search(r, o, cands, ctx.thresholds.rect_budget);
  r.certificate = {{"n", n}, {"m", m}};
  if (o.hit) {
    o.hit->Y.resize(m);
    r.verdict = Verdict::Holds;
    r.certificate.update(grid_to_json(ctx.group(), *o.hit));
  } else {
    r.verdict = Verdict::Exhausted;
  }
  return r;
}

/// Least n <= n_max without an (n,n)-rectangle, or fails with one at every n.
template<Group G>
CheckReport check_bounded_rectangles(const Context<G> &ctx, const SpecPtr<element_t<G>> &A,
                                     std::size_t window, std::size_t n_max)
{
  if (n_max < 1)
    throw spec_error("n_max must be at least 1");
  auto r = detail::start_report(ctx, "bounded-rectangles", window);
  ReportTimer timer(r);
  json rects = json::array();
  json used = json::array();
  for (std::size_t n = 1; n <= n_max; ++n) {
    auto f = find_rectangle(ctx, A, n, n, window);
    used.push_back(f.budgets_used);
    if (!f.holds()) {
      r.verdict = Verdict::Holds;
      r.certificate = {{"n", n}, {"rectangles", rects}};
      r.budgets_used = {{"searches", used}};
      return r;
    }
    rects.push_back(f.certificate);
  }
  r.verdict = Verdict::Fails;
  r.certificate = {{"n_max", n_max}, {"rectangles", rects}};
  r.budgets_used = {{"searches", used}};
  return r;
}

// -------------------------------------------------------------------- sparse

/// For every supplied X, some F ⊆ X with |F| <= f_max whose translates of A
/// meet in a finite-like trace. Only the supplied samples are examined.
template<Group G>
CheckReport check_sparse(const Context<G> &ctx, const SpecPtr<element_t<G>> &A,
                         const std::vector<SampleSet<G>> &samples, std::size_t window)
{
  if (samples.empty())
    throw spec_error("check_sparse needs at least one X sample");
  for (const auto &x : samples)
    if (x.size() < ctx.thresholds.tau_inf)
      throw spec_error("every X sample needs at least tau_inf elements");
  auto r = detail::start_report(ctx, "sparse", window);
  ReportTimer timer(r);
  const G &group = ctx.group();
  auto sn = materialize(A, ctx, window);
  auto s2 = materialize(A, ctx, 2 * window);
  const std::size_t fmax = ctx.thresholds.f_max;

  json rows = json::array();
  json failing = nullptr;
  std::size_t tried_total = 0;
  for (std::size_t xi = 0; xi < samples.size(); ++xi) {
    const auto &xs = samples[xi].elements();
    std::vector<std::size_t> pick;
    std::size_t tried = 0;
    json row = {{"X", encode_elements(group, xs)}, {"F", nullptr}};
    // subsets by size, then lexicographically by position
    std::function<bool(std::size_t, std::size_t)> rec = [&](std::size_t start, std::size_t k) {
      if (pick.size() == k) {
        std::vector<element_t<G>> F;
        for (auto p : pick)
          F.push_back(xs[p]);
        ++tried;
        auto tn = detail::translate_trace(sn, F);
        auto t2 = detail::translate_trace(s2, F);
        if (t2 == tn) {
          row["F"] = encode_elements(group, F);
          row["trace_n"] = tn;
          row["trace_2n"] = t2;
          return true;
        }
        return false;
      }
      for (std::size_t p = start; p < xs.size(); ++p) {
        pick.push_back(p);
        if (rec(p + 1, k))
          return true;
        pick.pop_back();
      }
      return false;
    };
    bool found = false;
    for (std::size_t k = 1; k <= std::min(fmax, xs.size()) && !found; ++k)
      found = rec(0, k);
    row["subsets_tried"] = tried;
    tried_total += tried;
    rows.push_back(row);
    if (!found && failing.is_null())
      failing = xi;
  }
  r.verdict = failing.is_null() ? Verdict::Holds : Verdict::Fails;
  r.certificate = {{"samples", rows},
                   {"failing_sample", failing},
                   {"under_approximation",
                    "only the supplied X samples were examined, not every infinite X"}};
  r.budgets_used = {{"f_max", fmax}, {"subsets_tried", tried_total}};
  return r;
}

/// Some (x, y) in X × Y with xy ∈ A and yx ∈ A.
template<Group G>
CheckReport ramsey_product_check(const Context<G> &ctx, const SpecPtr<element_t<G>> &A,
                                 const SampleSet<G> &X, const SampleSet<G> &Y)
{
  if (X.empty() || Y.empty())
    throw spec_error("ramsey_product_check needs nonempty X and Y");
  const std::size_t window = std::max(X.window(), Y.window());
  auto r = detail::start_report(ctx, "ramsey-product", window);
  ReportTimer timer(r);
  const G &group = ctx.group();
  auto member = compile(A, ctx, window, ctx.thresholds.product_factor * window);
  std::size_t pairs = 0;
  for (const auto &x : X.elements())
    for (const auto &y : Y.elements()) {
      ++pairs;
      if (member(group.op(x, y)) && member(group.op(y, x))) {
        r.verdict = Verdict::Holds;
        r.certificate = {{"x", group.to_json(x)}, {"y", group.to_json(y)}};
        r.budgets_used = {{"pairs", pairs}};
        return r;
      }
    }
  r.verdict = Verdict::Fails;
  r.certificate = {{"pairs_scanned", pairs}};
  r.budgets_used = {{"pairs", pairs}};
  return r;
}

// ------------------------------------------------------------------------ FP

namespace detail {

/// Depth-first search for g_1 < ... < g_d (enumeration order) with pairwise
/// distinct index-increasing products. Unshifted: every product lies in S.
/// Shifted: products ending at g_k are right-multiplied by b_k = g_k^-1 c_k,
/// c_k the least element of S with ({e} ∪ FP(g_1..g_{k-1})) c_k ⊆ S. Every
/// prefix, the full witness included, must admit fp_breadth valid next
/// generators.
template<Group G>
CheckReport fp_search(const Context<G> &ctx, const SpecPtr<element_t<G>> &A, std::size_t d,
                      std::size_t window, bool shifted)
{
  using E = element_t<G>;
  const auto &t = ctx.thresholds;
  if (d < 2 || d > t.depth_max)
    throw spec_error("FP depth must lie in [2, depth_max]");
  auto r = start_report(ctx, shifted ? "ps-fp" : "fp", window);
  ReportTimer timer(r);
  const G &group = ctx.group();
  auto s = materialize(A, ctx, window);

  std::vector<E> cands;
  if (shifted) {
    for (std::size_t k = 1; k < window && cands.size() < t.gen_budget; ++k)
      cands.push_back(ctx.universe->at(k));
  } else {
    for (const auto &e : s.elements())
      if (!(e == group.identity()) && cands.size() < t.gen_budget)
        cands.push_back(e);
  }

  // prods[k]: all products of chosen generators (bitmask order), with e at 0
  std::vector<E> prods{group.identity()};
  std::vector<std::size_t> chosen;
  std::vector<E> cs;
  std::size_t nodes = 0;

  auto shift_for = [&](const std::vector<E> &base) -> std::optional<E> {
    for (const auto &c : s.elements()) {
      bool ok = std::all_of(base.begin(), base.end(),
                            [&](const E &p) { return s.contains(group.op(p, c)); });
      if (ok)
        return c;
    }
    return std::nullopt;
  };
  // Products of the extension, or nullopt if g is not a valid next generator.
  auto extend = [&](const E &g) -> std::optional<std::vector<E>> {
    std::unordered_set<E, typename G::hash> seen(prods.begin() + 1, prods.end());
    std::vector<E> next = prods;
    for (std::size_t i = 0; i < prods.size(); ++i) {
      auto p = group.op(prods[i], g);
      if (p == group.identity() || !seen.insert(p).second)
        return std::nullopt;
      if (!shifted && !s.contains(p))
        return std::nullopt;
      next.push_back(std::move(p));
    }
    return next;
  };
  auto breadth_ok = [&](std::size_t from) {
    if (t.fp_breadth == 0)
      return true;
    if (shifted && !shift_for(prods))
      return false;
    std::size_t count = 0;
    for (std::size_t j = from; j < cands.size() && count < t.fp_breadth; ++j)
      if (extend(cands[j]))
        ++count;
    return count >= t.fp_breadth;
  };

  std::function<bool(std::size_t)> dfs = [&](std::size_t from) -> bool {
    if (chosen.size() == d)
      return breadth_ok(from);
    std::optional<E> c;
    if (shifted) {
      c = shift_for(prods);
      if (!c)
        return false;
    }
    for (std::size_t j = from; j < cands.size(); ++j) {
      ++nodes;
      auto next = extend(cands[j]);
      if (!next)
        continue;
      auto saved = prods;
      prods = std::move(*next);
      chosen.push_back(j);
      if (shifted)
        cs.push_back(*c);
      if ((chosen.size() == d || breadth_ok(j + 1)) && dfs(j + 1))
        return true;
      prods = std::move(saved);
      chosen.pop_back();
      if (shifted)
        cs.pop_back();
    }
    return false;
  };

  bool found = dfs(0);
  r.budgets_used = {{"nodes", nodes}, {"gen_budget", t.gen_budget}, {"candidates", cands.size()}};
  if (!found) {
    r.verdict = Verdict::Exhausted;
    r.certificate = {{"depth", d}};
    return r;
  }
  FPWitness<G> w;
  for (std::size_t k = 0; k < d; ++k) {
    w.generators.push_back(cands[chosen[k]]);
    if (shifted)
      w.shifts.push_back(group.op(group.inv(w.generators[k]), cs[k]));
  }
  r.verdict = Verdict::Holds;
  r.certificate = fp_to_json(group, w);
  return r;
}

} // namespace detail

template<Group G>
CheckReport find_fp_prefix(const Context<G> &ctx, const SpecPtr<element_t<G>> &A, std::size_t d,
                           std::size_t window)
{
  return detail::fp_search(ctx, A, d, window, false);
}

template<Group G>
CheckReport find_ps_fp_prefix(const Context<G> &ctx, const SpecPtr<element_t<G>> &A, std::size_t d,
                              std::size_t window)
{
  return detail::fp_search(ctx, A, d, window, true);
}

/// Holds iff no piecewise shifted FP prefix of depth d is found.
template<Group G>
CheckReport check_scattered(const Context<G> &ctx, const SpecPtr<element_t<G>> &A, std::size_t d,
                            std::size_t window)
{
  auto r = find_ps_fp_prefix(ctx, A, d, window);
  r.property = "scattered";
  r.verdict = r.holds() ? Verdict::Fails : Verdict::Holds;
  return r;
}

} // namespace subsize

#endif // SUBSIZE_CHECKERS_HPP
