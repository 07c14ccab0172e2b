#ifndef SUBSIZE_CONSTRUCTIONS_HPP
#define SUBSIZE_CONSTRUCTIONS_HPP

#include <algorithm>
#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <string>
#include <unordered_set>
#include <vector>

#include "subsize/certificates.hpp"
#include "subsize/checkers.hpp"
#include "subsize/errors.hpp"
#include "subsize/group.hpp"
#include "subsize/groups/boolean_sum.hpp"
#include "subsize/groups/fin_perm.hpp"
#include "subsize/report.hpp"
#include "subsize/subset.hpp"

namespace subsize {

inline constexpr const char *kWitnessSchema = "subsize.witness/1";

namespace detail {

template<Group G>
using ElemSet = std::unordered_set<element_t<G>, typename G::hash>;

template<Group G>
std::vector<element_t<G>> left_mul(const G &group, const std::vector<element_t<G>> &F,
                                   const std::vector<element_t<G>> &B)
{
  std::vector<element_t<G>> out;
  out.reserve(F.size() * B.size());
  for (const auto &f : F)
    for (const auto &b : B)
      out.push_back(group.op(f, b));
  return out;
}

template<Group G>
bool meets(const std::vector<element_t<G>> &a, const std::vector<element_t<G>> &b)
{
  ElemSet<G> s(a.begin(), a.end());
  return std::any_of(b.begin(), b.end(), [&](const auto &e) { return s.count(e) > 0; });
}

template<Group G>
std::size_t index_in(const Universe<G> &u, const element_t<G> &e)
{
  auto k = u.index_of(e);
  if (!k)
    throw spec_error("element lies beyond the enumerated prefix");
  return static_cast<std::size_t>(*k);
}

/// Smallest window holding every element of the list.
template<Group G>
std::size_t covering_window(const Universe<G> &u, const std::vector<element_t<G>> &v)
{
  std::size_t w = 1;
  for (const auto &e : v)
    w = std::max(w, index_in(u, e) + 1);
  return w;
}

} // namespace detail

// ------------------------------------------------------------ sparse witness

/// A = ∪_n A_n with A_n = K_n {x_{n,0}, ..., x_{n,r-1}}, |K_n| = n+1, e ∈ K_n.
/// x_{n,i} is chosen at stage max(n, i); stage s uses F_s = {g_0, ..., g_s}.
template<Group G>
struct SparseWitness
{
  std::size_t n_max = 0;
  std::size_t reps = 0;
  std::uint64_t seed = 0;
  std::vector<std::vector<element_t<G>>> K;
  std::vector<std::vector<element_t<G>>> x;
  json transcript = json::array();

  std::size_t stages() const { return std::max(reps - 1, n_max) + 1; }
  static std::size_t stage_of(std::size_t n, std::size_t i) { return std::max(n, i); }

  std::vector<element_t<G>> block(const G &group, std::size_t n, std::size_t i) const
  {
    return detail::left_mul(group, K[n], {x[n][i]});
  }

  std::vector<element_t<G>> level(const G &group, std::size_t n) const
  {
    return detail::left_mul(group, K[n], x[n]);
  }

  std::vector<element_t<G>> all(const G &group) const
  {
    std::vector<element_t<G>> out;
    for (std::size_t n = 0; n <= n_max; ++n)
      for (auto &e : level(group, n))
        out.push_back(std::move(e));
    return out;
  }
};

/// Greedy construction: K_n is the least-index choice with
/// K_n K_n^-1 ∩ {g_1..g_n} = ∅; each x is the least-index element whose
/// block K_m x satisfies F_s K_m x ∩ F_s B = ∅ against every block B chosen
/// so far (this covers conditions (2)-(4) at once).
template<Group G>
SparseWitness<G> construct_sparse_witness(const Context<G> &ctx, std::size_t n_max, std::size_t reps,
                                          std::uint64_t seed, std::size_t scan_budget = 1'000'000)
{
  using E = element_t<G>;
  if (n_max < 1)
    throw spec_error("n_max must be at least 1");
  if (reps < ctx.thresholds.tau_inf)
    throw spec_error("reps_per_level must be at least tau_inf");
  const auto &u = *ctx.universe;
  const G &group = u.group();

  SparseWitness<G> w;
  w.n_max = n_max;
  w.reps = reps;
  w.seed = seed;
  w.K.resize(n_max + 1);
  w.x.resize(n_max + 1);

  auto element = [&](std::size_t k) -> const E & {
    if (k >= u.capacity())
      u.ensure(k + 1);
    return u.at(k);
  };

  // chosen blocks with their level
  std::vector<std::pair<std::size_t, std::vector<E>>> blocks;
  const std::size_t S = w.stages();
  for (std::size_t s = 0; s < S; ++s) {
    std::vector<E> F;
    for (std::size_t k = 0; k <= s; ++k)
      F.push_back(element(k));
    std::vector<E> Q; // F^-1 F
    for (const auto &a : F)
      for (const auto &b : F)
        Q.push_back(group.op(group.inv(a), b));
    detail::ElemSet<G> forbidden_same, forbidden_all;
    std::vector<detail::ElemSet<G>> by_level(n_max + 1);
    auto forbid = [&](std::size_t level, const std::vector<E> &blk) {
      for (const auto &e : detail::left_mul(group, Q, blk)) {
        forbidden_all.insert(e);
        by_level[level].insert(e);
      }
    };
    for (const auto &[lvl, blk] : blocks)
      forbid(lvl, blk);

    if (s <= n_max) {
      std::vector<E> G_s(F.begin() + 1, F.end());
      detail::ElemSet<G> bad(G_s.begin(), G_s.end());
      std::vector<E> K{group.identity()};
      for (std::size_t k = 1; K.size() < s + 1; ++k) {
        if (k > scan_budget)
          throw construction_stalled("no K_" + std::to_string(s) + " within the scan budget", 1);
        const auto &c = element(k);
        bool ok = std::all_of(K.begin(), K.end(), [&](const E &kk) {
          return !bad.count(group.op(c, group.inv(kk))) && !bad.count(group.op(kk, group.inv(c)));
        });
        if (ok)
          K.push_back(c);
      }
      w.K[s] = K;
      w.transcript.push_back({{"stage", s}, {"choose", "K"}, {"level", s}, {"K", encode_elements(group, K)}});
    }

    auto choose_x = [&](std::size_t level, std::size_t i) {
      int last_condition = 0;
      for (std::size_t k = 0;; ++k) {
        if (k > scan_budget)
          throw construction_stalled("no x_{" + std::to_string(level) + "," + std::to_string(i) +
                                       "} within the scan budget",
                                     last_condition ? last_condition : 2);
        const auto &c = element(k);
        auto blk = detail::left_mul(group, w.K[level], {c});
        bool clash_same = false, clash_other = false;
        for (const auto &e : blk) {
          if (by_level[level].count(e))
            clash_same = true;
          else if (forbidden_all.count(e))
            clash_other = true;
        }
        if (clash_same) {
          last_condition = level == s ? 4 : 2;
          continue;
        }
        if (clash_other) {
          last_condition = 3;
          continue;
        }
        w.x[level].push_back(c);
        forbid(level, blk);
        blocks.emplace_back(level, blk);
        w.transcript.push_back({{"stage", s},
                                {"choose", "x"},
                                {"level", level},
                                {"index", i},
                                {"element", group.to_json(c)},
                                {"scanned", k + 1}});
        return;
      }
    };
    if (s < reps)
      for (std::size_t m = 0; m < std::min(s, n_max + 1); ++m)
        choose_x(m, s);
    if (s <= n_max)
      for (std::size_t i = 0; i <= std::min(s, reps - 1); ++i)
        choose_x(s, i);
  }
  return w;
}

/// Exact re-check of |K_n| = n+1, e ∈ K_n, conditions (1)-(4) with
/// F_s = {g_0..g_s}, and the pairwise disjointness of the K_n-translates of
/// {x_{n,i}} that makes A_n carry an (n+1)-stripe.
template<Group G>
CheckReport verify_sparse_conditions(const Context<G> &ctx, const SparseWitness<G> &w)
{
  using E = element_t<G>;
  const auto &u = *ctx.universe;
  const G &group = u.group();
  CheckReport r;
  r.property = "sparse-witness-conditions";
  r.thresholds = ctx.thresholds;
  ReportTimer timer(r);
  json violations = json::array();
  std::size_t checks = 0;

  if (w.K.size() != w.n_max + 1 || w.x.size() != w.n_max + 1)
    throw spec_error("witness needs K and x for every level 0..n_max");
  const std::size_t S = w.stages();
  u.ensure(S + 1);
  auto F_of = [&](std::size_t s) {
    std::vector<E> F;
    for (std::size_t k = 0; k <= s; ++k)
      F.push_back(u.at(k));
    return F;
  };
  auto xs = [&](std::size_t n, std::size_t lo, std::size_t hi) {
    std::vector<E> out;
    for (std::size_t i = lo; i < std::min(hi, w.x[n].size()); ++i)
      out.push_back(w.x[n][i]);
    return out;
  };

  for (std::size_t n = 0; n <= w.n_max; ++n) {
    ++checks;
    const auto &K = w.K[n];
    if (K.size() != n + 1 || std::find(K.begin(), K.end(), group.identity()) == K.end() ||
        !all_distinct<G>(K))
      violations.push_back({{"condition", "K-shape"}, {"level", n}});
    if (w.x[n].size() != w.reps || !all_distinct<G>(w.x[n]))
      violations.push_back({{"condition", "x-shape"}, {"level", n}});
    std::vector<E> Ginv;
    for (std::size_t k = 1; k <= n; ++k)
      Ginv.push_back(u.at(k));
    std::vector<E> KK;
    for (const auto &a : K)
      for (const auto &b : K)
        KK.push_back(group.op(a, group.inv(b)));
    ++checks;
    if (detail::meets<G>(Ginv, KK))
      violations.push_back({{"condition", 1}, {"level", n}});
    // stripe: the K_n-translates of {x_{n,i}} are pairwise disjoint
    for (std::size_t a = 0; a < K.size(); ++a)
      for (std::size_t b = a + 1; b < K.size(); ++b) {
        ++checks;
        if (detail::meets<G>(detail::left_mul(group, {K[a]}, w.x[n]),
                             detail::left_mul(group, {K[b]}, w.x[n])))
          violations.push_back({{"condition", "stripe"}, {"level", n}, {"k", {a, b}}});
      }
  }

  for (std::size_t s = 0; s < S; ++s) {
    auto F = F_of(s);
    // (2) F_s K_m x_{m,s} ∩ F_s K_m {x_{m,0..s-1}} = ∅, m <= s
    for (std::size_t m = 0; m <= std::min(s, w.n_max); ++m) {
      if (s >= w.x[m].size())
        continue;
      ++checks;
      auto FK = detail::left_mul(group, F, w.K[m]);
      if (detail::meets<G>(detail::left_mul(group, FK, {w.x[m][s]}),
                           detail::left_mul(group, FK, xs(m, 0, s))))
        violations.push_back({{"condition", 2}, {"stage", s}, {"level", m}});
    }
    if (s > w.n_max)
      continue;
    auto FKs = detail::left_mul(group, F, w.K[s]);
    // (3) F_s K_s {x_{s,0..s}} ∩ F_s K_m {x_{m,0..s}} = ∅, m < s
    for (std::size_t m = 0; m < s; ++m) {
      ++checks;
      if (detail::meets<G>(detail::left_mul(group, FKs, xs(s, 0, s + 1)),
                           detail::left_mul(group, detail::left_mul(group, F, w.K[m]), xs(m, 0, s + 1))))
        violations.push_back({{"condition", 3}, {"stage", s}, {"level", m}});
    }
    // (4) F_s K_s x_{s,i} ∩ F_s K_s x_{s,j} = ∅, i < j <= s
    for (std::size_t i = 0; i <= s && i < w.x[s].size(); ++i)
      for (std::size_t j = i + 1; j <= s && j < w.x[s].size(); ++j) {
        ++checks;
        if (detail::meets<G>(detail::left_mul(group, FKs, {w.x[s][i]}),
                             detail::left_mul(group, FKs, {w.x[s][j]})))
          violations.push_back({{"condition", 4}, {"stage", s}, {"i", i}, {"j", j}});
      }
  }
  r.window = detail::covering_window(u, w.all(group));
  r.verdict = violations.empty() ? Verdict::Holds : Verdict::Fails;
  r.certificate = {{"violations", violations}, {"stages", S}};
  r.budgets_used = {{"checks", checks}};
  return r;
}

/// Lemma conditions for the supplied F:
/// (i) F(A_i ∖ K) ∩ F(A_j ∖ K) = ∅ for all levels i < j, where K is the set
///     of elements chosen at stages <= t; the least such t is reported next
///     to the stage the construction guarantees, min(max index in F, last).
/// (ii) for g = g_m in F, g ≠ e: g x ∉ A for every x in A_n, n > m.
template<Group G>
CheckReport verify_lemma31(const Context<G> &ctx, const SparseWitness<G> &w,
                           const std::vector<element_t<G>> &F)
{
  using E = element_t<G>;
  if (F.empty())
    throw spec_error("verify_lemma31 needs a nonempty F");
  const auto &u = *ctx.universe;
  const G &group = u.group();
  CheckReport r;
  r.property = "lemma-3.1";
  r.thresholds = ctx.thresholds;
  ReportTimer timer(r);
  const std::size_t S = w.stages();
  auto A = w.all(group);
  u.ensure(detail::covering_window(u, F));
  r.window = std::max(detail::covering_window(u, A), detail::covering_window(u, F));

  std::size_t fmax_index = 0;
  for (const auto &f : F)
    fmax_index = std::max(fmax_index, detail::index_in(u, f));
  const std::size_t guaranteed = std::min(fmax_index, S - 1);

  auto level_minus = [&](std::size_t n, std::size_t t) {
    std::vector<E> out;
    for (std::size_t i = 0; i < w.x[n].size(); ++i)
      if (SparseWitness<G>::stage_of(n, i) > t || t == SIZE_MAX)
        for (auto &e : w.block(group, n, i))
          out.push_back(std::move(e));
    return out;
  };
  // K(t) holds whole blocks, so A_n ∖ K(t) is the union of later blocks
  auto pairs_at = [&](std::size_t t, bool record, json &rows) {
    bool ok = true;
    for (std::size_t i = 0; i <= w.n_max; ++i)
      for (std::size_t j = i + 1; j <= w.n_max; ++j) {
        bool hit = detail::meets<G>(detail::left_mul(group, F, level_minus(i, t)),
                                    detail::left_mul(group, F, level_minus(j, t)));
        if (record)
          rows.push_back({{"i", i}, {"j", j}, {"disjoint", !hit}});
        ok = ok && !hit;
      }
    return ok;
  };

  json rows = json::array();
  std::optional<std::size_t> least;
  for (std::size_t t = 0; t < S && !least; ++t) {
    json scratch = json::array();
    if (pairs_at(t, false, scratch))
      least = t;
  }
  bool cond_i = pairs_at(guaranteed, true, rows);

  std::vector<E> K;
  for (std::size_t n = 0; n <= w.n_max; ++n)
    for (std::size_t i = 0; i < w.x[n].size(); ++i)
      if (SparseWitness<G>::stage_of(n, i) <= guaranteed)
        for (auto &e : w.block(group, n, i))
          K.push_back(std::move(e));

  detail::ElemSet<G> inA(A.begin(), A.end());
  json tail = json::array();
  bool cond_ii = true;
  bool identity_in_F = false;
  for (const auto &g : F) {
    if (g == group.identity()) {
      identity_in_F = true;
      continue;
    }
    std::size_t m = detail::index_in(u, g);
    bool ok = true;
    for (std::size_t n = m + 1; n <= w.n_max && ok; ++n)
      for (const auto &x : w.level(group, n))
        if (inA.count(group.op(g, x))) {
          ok = false;
          break;
        }
    cond_ii = cond_ii && ok;
    tail.push_back({{"g", group.to_json(g)}, {"m", m}, {"vacuous", m >= w.n_max}, {"holds", ok}});
  }

  r.verdict = cond_i && cond_ii ? Verdict::Holds : Verdict::Fails;
  r.certificate = {{"K", encode_elements(group, K)},
                   {"K_stage", guaranteed},
                   {"least_K_stage", least ? json(*least) : json(nullptr)},
                   {"K_is_all_of_A", K.size() == A.size()},
                   {"pairs", rows},
                   {"condition_i", cond_i},
                   {"tail", tail},
                   {"condition_ii", cond_ii},
                   {"identity_excluded", identity_in_F}};
  if (!cond_i)
    for (const auto &row : rows)
      if (!row["disjoint"].get<bool>()) {
        r.certificate["offending_pair"] = {row["i"], row["j"]};
        break;
      }
  r.budgets_used = {{"F_size", F.size()}, {"stages", S}};
  return r;
}

// -------------------------------------------------------- rectangle witness

/// A = ∪_{n <= n_max} X_n Y_n with X_0 = Y_0 = {e}, |X_n| = |Y_n| = n+1.
template<Group G>
struct RectWitness
{
  std::size_t n_max = 0;
  std::uint64_t seed = 0;
  std::vector<std::vector<element_t<G>>> X;
  std::vector<std::vector<element_t<G>>> Y;
  json transcript = json::array();

  std::vector<element_t<G>> block(const G &group, std::size_t n) const
  {
    auto p = detail::left_mul(group, X[n], Y[n]);
    std::vector<element_t<G>> out;
    detail::ElemSet<G> seen;
    for (auto &e : p)
      if (seen.insert(e).second)
        out.push_back(std::move(e));
    return out;
  }

  std::vector<element_t<G>> all(const G &group) const
  {
    std::vector<element_t<G>> out;
    detail::ElemSet<G> seen;
    for (std::size_t n = 0; n <= n_max; ++n)
      for (auto &e : block(group, n))
        if (seen.insert(e).second)
          out.push_back(std::move(e));
    return out;
  }
};

namespace detail {

/// The disjointness rule for block n, in its two-sided form:
/// g P_n ∩ (P_0 ∪ ... ∪ P_n) = ∅ and g^-1 P_n ∩ (P_0 ∪ ... ∪ P_n) = ∅ for
/// g ∈ {g_1, ..., g_n}.
template<Group G>
std::optional<std::size_t> rect_block_violation(const G &group, const std::vector<element_t<G>> &P,
                                                const ElemSet<G> &old,
                                                const std::vector<element_t<G>> &translators)
{
  ElemSet<G> here(P.begin(), P.end());
  for (std::size_t i = 0; i < translators.size(); ++i) {
    auto gi = group.inv(translators[i]);
    for (const auto &p : P)
      for (const auto &q : {group.op(translators[i], p), group.op(gi, p)})
        if (here.count(q) || old.count(q))
          return i + 1;
  }
  return std::nullopt;
}

} // namespace detail

template<Group G>
RectWitness<G> construct_thin_unbounded_rect(const Context<G> &ctx, std::size_t n_max,
                                             std::uint64_t seed, std::size_t scan_budget = 1'000'000)
{
  using E = element_t<G>;
  if (n_max < 1)
    throw spec_error("n_max must be at least 1");
  const auto &u = *ctx.universe;
  const G &group = u.group();
  auto element = [&](std::size_t k) -> const E & {
    if (k >= u.capacity())
      u.ensure(k + 1);
    return u.at(k);
  };

  RectWitness<G> w;
  w.n_max = n_max;
  w.seed = seed;
  w.X.push_back({group.identity()});
  w.Y.push_back({group.identity()});
  w.transcript.push_back({{"reading",
                           "block n avoids g P_n and g^-1 P_n for g in {g_1..g_n} against P_0..P_n"}});
  detail::ElemSet<G> old{group.identity()};

  for (std::size_t n = 1; n <= n_max; ++n) {
    std::vector<E> T;
    for (std::size_t k = 1; k <= n; ++k)
      T.push_back(element(k));
    std::vector<E> X, Y;
    // alternate x, y; each the least-index element keeping the rule
    while (X.size() < n + 1 || Y.size() < n + 1) {
      bool pick_x = X.size() <= Y.size() && X.size() < n + 1;
      auto &side = pick_x ? X : Y;
      std::optional<std::size_t> last;
      for (std::size_t k = 0;; ++k) {
        if (k > scan_budget)
          throw construction_stalled("no element for block " + std::to_string(n) +
                                       " within the scan budget",
                                     static_cast<int>(last.value_or(1)));
        const auto &c = element(k);
        if (std::find(side.begin(), side.end(), c) != side.end())
          continue;
        side.push_back(c);
        auto P = detail::left_mul(group, X, Y);
        auto bad = detail::rect_block_violation(group, P, old, T);
        if (!bad) {
          w.transcript.push_back({{"block", n},
                                  {"side", pick_x ? "X" : "Y"},
                                  {"element", group.to_json(c)},
                                  {"scanned", k + 1}});
          break;
        }
        last = bad;
        side.pop_back();
      }
    }
    w.X.push_back(X);
    w.Y.push_back(Y);
    for (auto &e : detail::left_mul(group, X, Y))
      old.insert(e);
  }
  return w;
}

template<Group G>
CheckReport verify_rect_conditions(const Context<G> &ctx, const RectWitness<G> &w)
{
  using E = element_t<G>;
  const auto &u = *ctx.universe;
  const G &group = u.group();
  CheckReport r;
  r.property = "rect-witness-conditions";
  r.thresholds = ctx.thresholds;
  ReportTimer timer(r);
  if (w.X.size() != w.n_max + 1 || w.Y.size() != w.n_max + 1)
    throw spec_error("witness needs X and Y for every block 0..n_max");
  u.ensure(w.n_max + 1);
  json violations = json::array();
  detail::ElemSet<G> old;
  for (std::size_t n = 0; n <= w.n_max; ++n) {
    if (w.X[n].size() != n + 1 || w.Y[n].size() != n + 1 || !all_distinct<G>(w.X[n]) ||
        !all_distinct<G>(w.Y[n]))
      violations.push_back({{"condition", "shape"}, {"block", n}});
    std::vector<E> T;
    for (std::size_t k = 1; k <= n; ++k)
      T.push_back(u.at(k));
    auto P = detail::left_mul(group, w.X[n], w.Y[n]);
    if (auto bad = detail::rect_block_violation(group, P, old, T))
      violations.push_back({{"condition", "disjointness"}, {"block", n}, {"translator", *bad}});
    for (auto &e : P)
      old.insert(e);
  }
  r.window = detail::covering_window(u, w.all(group));
  r.verdict = violations.empty() ? Verdict::Holds : Verdict::Fails;
  r.certificate = {{"violations", violations}};
  r.budgets_used = {{"blocks", w.n_max + 1}};
  return r;
}

// ---------------------------------------------------- transposition family

/// f_i swaps points 2i and 2i+1 (x_i = i); h exchanges the pairs of W_1 and
/// W_2 along the bijection φ.
struct TranspositionFamily
{
  std::size_t m = 0;
  std::uint64_t seed = 0;
  std::vector<Perm> T;
  std::vector<std::size_t> W1, W2;
  std::vector<std::size_t> phi; // phi[k] is the image of W1[k]
  Perm h;

  std::size_t phi_of(std::size_t i) const
  {
    auto it = std::find(W1.begin(), W1.end(), i);
    if (it == W1.end())
      throw spec_error("index not in W1");
    return phi[static_cast<std::size_t>(it - W1.begin())];
  }

  std::size_t phi_inv(std::size_t j) const
  {
    auto it = std::find(phi.begin(), phi.end(), j);
    if (it == phi.end())
      throw spec_error("index not in W2");
    return W1[static_cast<std::size_t>(it - phi.begin())];
  }
};

/// Builds T and h for an explicit partition and bijection.
inline TranspositionFamily transposition_family(std::size_t m, std::vector<std::size_t> W1,
                                                std::vector<std::size_t> phi, std::uint64_t seed = 0)
{
  if (m < 2 || m % 2 != 0)
    throw spec_error("transposition family needs an even m >= 2");
  if (W1.size() != m / 2 || phi.size() != W1.size())
    throw spec_error("W1 and phi must each have m/2 entries");
  TranspositionFamily f;
  f.m = m;
  f.seed = seed;
  std::vector<int> role(m, 0);
  for (auto i : W1) {
    if (i >= m || role[i])
      throw spec_error("W1 must be distinct indices below m");
    role[i] = 1;
  }
  for (auto j : phi) {
    if (j >= m || role[j])
      throw spec_error("phi must map W1 onto the complement of W1");
    role[j] = 2;
  }
  f.W1 = std::move(W1);
  f.phi = std::move(phi);
  for (std::size_t i = 0; i < m; ++i)
    if (role[i] == 2)
      f.W2.push_back(i);
  for (std::uint32_t i = 0; i < m; ++i)
    f.T.push_back(transposition(2 * i, 2 * i + 1));

  std::vector<std::uint32_t> images(2 * m);
  for (std::size_t k = 0; k < f.W1.size(); ++k) {
    auto i = static_cast<std::uint32_t>(f.W1[k]);
    auto j = static_cast<std::uint32_t>(f.phi[k]);
    images[2 * i] = 2 * j;
    images[2 * i + 1] = 2 * j + 1;
    images[2 * j] = 2 * i;
    images[2 * j + 1] = 2 * i + 1;
  }
  f.h = FinPerm::from_images(images);
  return f;
}

/// Seeded random equal split; φ maps W_1 onto W_2 in increasing order.
inline TranspositionFamily construct_transposition_family(std::size_t m, std::uint64_t seed)
{
  if (m < 2 || m % 2 != 0)
    throw spec_error("transposition family needs an even m >= 2");
  std::vector<std::size_t> idx(m);
  for (std::size_t i = 0; i < m; ++i)
    idx[i] = i;
  std::mt19937_64 rng(seed);
  std::shuffle(idx.begin(), idx.end(), rng);
  std::vector<std::size_t> W1(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(m / 2));
  std::vector<std::size_t> W2(idx.begin() + static_cast<std::ptrdiff_t>(m / 2), idx.end());
  std::sort(W1.begin(), W1.end());
  std::sort(W2.begin(), W2.end());
  return transposition_family(m, std::move(W1), std::move(W2), seed);
}

/// |gT ∩ T|.
inline std::size_t translate_overlap(const TranspositionFamily &f, const Perm &g)
{
  FinPerm p;
  std::unordered_set<Perm, FinPerm::hash> T(f.T.begin(), f.T.end());
  std::size_t n = 0;
  for (const auto &t : f.T)
    n += T.count(p.op(g, t));
  return n;
}

inline CheckReport verify_transposition_family(const TranspositionFamily &f)
{
  FinPerm p;
  CheckReport r;
  r.property = "transposition-family";
  r.window = 2 * f.m;
  ReportTimer timer(r);
  json violations = json::array();
  for (std::size_t i = 0; i < f.T.size(); ++i) {
    const auto &t = f.T[i];
    if (t.moved() != 2 || !(p.op(t, t) == p.identity()))
      violations.push_back({{"condition", "involution"}, {"i", i}});
  }
  if (!(p.op(f.h, f.h) == p.identity()))
    violations.push_back({{"condition", "h-involution"}});
  for (auto [a, b] : f.h.moves)
    if (a >= 2 * f.m)
      violations.push_back({{"condition", "h-support"}, {"point", a}});
  for (std::size_t k = 0; k < f.W1.size(); ++k) {
    auto i = f.W1[k], j = f.phi[k];
    if (!(p.op(p.op(f.h, f.T[i]), f.h) == f.T[j]))
      violations.push_back({{"condition", "conjugation"}, {"i", i}});
    if (!(p.op(p.op(f.h, f.T[j]), f.h) == f.T[i]))
      violations.push_back({{"condition", "conjugation-inverse"}, {"j", j}});
  }
  r.verdict = violations.empty() ? Verdict::Holds : Verdict::Fails;
  r.certificate = {{"violations", violations}, {"h", p.to_json(f.h)}};
  r.budgets_used = {{"pairs", f.W1.size()}};
  return r;
}

// ------------------------------------------------------------ thin subsets

enum class Action { Left, Right, TwoSided };

inline Action action_from_string(const std::string &s)
{
  if (s == "left")
    return Action::Left;
  if (s == "right")
    return Action::Right;
  if (s == "two-sided")
    return Action::TwoSided;
  throw spec_error("action must be left, right or two-sided");
}

template<Group G>
struct ThinExtraction
{
  SampleSet<G> sample;
  bool partial = false;
};

/// Greedy scan of A in enumeration order: x is kept when no tested action
/// (g among the first translator_count non-identity elements) moves x onto
/// a kept element or a kept element onto x.
template<Group G>
ThinExtraction<G> extract_thin_subset(const Context<G> &ctx, const SampleSet<G> &A,
                                      std::size_t target_size, Action action = Action::Left)
{
  using E = element_t<G>;
  const G &group = ctx.group();
  auto gens = thin_translators(ctx);
  std::vector<std::pair<E, E>> moves; // x -> a x b
  auto e = group.identity();
  if (action == Action::Left || action == Action::TwoSided)
    for (const auto &g : gens)
      moves.emplace_back(g, e);
  if (action == Action::Right || action == Action::TwoSided)
    for (const auto &g : gens)
      moves.emplace_back(e, g);
  if (action == Action::TwoSided)
    for (const auto &g : gens)
      for (const auto &h : gens)
        moves.emplace_back(group.inv(g), h);

  std::vector<E> kept;
  detail::ElemSet<G> kept_set;
  for (const auto &x : A.elements()) {
    if (kept.size() >= target_size)
      break;
    bool ok = true;
    for (const auto &[a, b] : moves) {
      auto fwd = group.op(group.op(a, x), b);
      auto back = group.op(group.op(group.inv(a), x), group.inv(b));
      if (fwd == x)
        continue;
      if (kept_set.count(fwd) || kept_set.count(back)) {
        ok = false;
        break;
      }
    }
    if (ok) {
      kept.push_back(x);
      kept_set.insert(x);
    }
  }
  ThinExtraction<G> out{sample_of(A.universe(), A.window(), kept), kept.size() < target_size};
  return out;
}

// ------------------------------------------------------------------ demos

/// Every F ⊆ A^-1 satisfies ⋂_{g∈F} g(AA) ⊇ A ∩ W, so the sample X = A^-1
/// defeats check_sparse on AA. The inclusion is checked for each single g
/// in A^-1 ∩ W (an intersection contains A iff each member does) and, as a
/// direct cross-check, for every F of size <= f_max drawn from the first
/// elements of A^-1 ∩ W.
template<Group G>
CheckReport demo_product_not_sparse(const Context<G> &ctx, const SpecPtr<element_t<G>> &A,
                                    std::size_t window, std::size_t x_size = 12)
{
  using E = element_t<G>;
  const G &group = ctx.group();
  CheckReport r;
  r.property = "product-not-sparse";
  r.window = window;
  r.thresholds = ctx.thresholds;
  ReportTimer timer(r);
  auto a = materialize(A, ctx, window);
  if (a.size() < ctx.thresholds.tau_inf)
    throw spec_error("demo_product_not_sparse needs |A ∩ W| >= tau_inf");
  auto AA = spec::product(A, A);
  auto member = compile(AA, ctx, window, ctx.thresholds.product_factor * window);
  auto inv = materialize(spec::inverse(A), ctx, window);

  std::size_t checks = 0;
  json counter = nullptr;
  for (const auto &g : inv.elements()) {
    auto gi = group.inv(g);
    for (const auto &x : a.elements()) {
      ++checks;
      if (!member(group.op(gi, x))) {
        counter = {{"g", group.to_json(g)}, {"a", group.to_json(x)}};
        break;
      }
    }
    if (!counter.is_null())
      break;
  }

  std::vector<E> xs(inv.elements().begin(),
                    inv.elements().begin() + static_cast<std::ptrdiff_t>(std::min(x_size, inv.size())));
  std::size_t subsets = 0;
  bool subsets_ok = true;
  std::vector<std::size_t> pick;
  std::function<void(std::size_t)> rec = [&](std::size_t start) {
    if (!pick.empty()) {
      ++subsets;
      for (const auto &x : a.elements()) {
        bool in_all = std::all_of(pick.begin(), pick.end(), [&](std::size_t p) {
          return member(group.op(group.inv(xs[p]), x));
        });
        if (!in_all) {
          subsets_ok = false;
          return;
        }
      }
    }
    if (pick.size() == ctx.thresholds.f_max)
      return;
    for (std::size_t p = start; p < xs.size() && subsets_ok; ++p) {
      pick.push_back(p);
      rec(p + 1);
      pick.pop_back();
    }
  };
  rec(0);

  auto sparse = check_sparse(ctx, AA, {sample_of(ctx.universe, window, xs)}, window);
  bool ok = counter.is_null() && subsets_ok && sparse.verdict == Verdict::Fails;
  r.verdict = ok ? Verdict::Holds : Verdict::Fails;
  r.certificate = {{"X", encode_elements(group, xs)},
                   {"inclusion_all_singletons", counter.is_null()},
                   {"inclusion_all_subsets", subsets_ok},
                   {"subsets_checked", subsets},
                   {"counterexample", counter},
                   {"check_sparse", to_json(sparse)}};
  r.budgets_used = {{"membership_tests", checks}, {"f_max", ctx.thresholds.f_max}};
  return r;
}

/// S = {g : supt(g) <= m} searched for a piecewise shifted FP prefix.
inline CheckReport bounded_supt_scatter_demo(const Context<BooleanSum> &ctx, std::size_t m,
                                             std::size_t d, std::size_t window)
{
  if (m < 1)
    throw spec_error("supt bound m must be at least 1");
  auto S = spec::builtin<Support>("supt-le", {{"m", m}});
  auto r = find_ps_fp_prefix(ctx, S, d, window);
  r.property = "bounded-supt-scatter";
  r.certificate["supt_bound"] = m;
  return r;
}

// ------------------------------------------------------------- witness I/O

template<Group G>
json witness_to_json(const G &group, const SparseWitness<G> &w)
{
  json levels = json::array();
  for (std::size_t n = 0; n <= w.n_max; ++n)
    levels.push_back({{"n", n}, {"K", encode_elements(group, w.K[n])}, {"x", encode_elements(group, w.x[n])}});
  return {{"schema", kWitnessSchema},
          {"kind", "sparse"},
          {"group", group.descriptor()},
          {"params", {{"n_max", w.n_max}, {"reps_per_level", w.reps}, {"seed", w.seed}}},
          {"levels", levels},
          {"transcript", w.transcript}};
}

template<Group G>
json witness_to_json(const G &group, const RectWitness<G> &w)
{
  json blocks = json::array();
  for (std::size_t n = 0; n <= w.n_max; ++n)
    blocks.push_back({{"n", n}, {"X", encode_elements(group, w.X[n])}, {"Y", encode_elements(group, w.Y[n])}});
  return {{"schema", kWitnessSchema},
          {"kind", "rect"},
          {"group", group.descriptor()},
          {"params", {{"n_max", w.n_max}, {"seed", w.seed}}},
          {"blocks", blocks},
          {"transcript", w.transcript}};
}

inline json witness_to_json(const TranspositionFamily &f)
{
  FinPerm p;
  return {{"schema", kWitnessSchema},
          {"kind", "transposition"},
          {"group", p.descriptor()},
          {"params", {{"m", f.m}, {"seed", f.seed}}},
          {"T", encode_elements(p, f.T)},
          {"W1", f.W1},
          {"W2", f.W2},
          {"phi", f.phi},
          {"h", p.to_json(f.h)},
          {"transcript", json::array()}};
}

namespace detail {

inline const json &need(const json &j, const char *key)
{
  if (!j.is_object() || !j.contains(key))
    throw spec_error(std::string("witness file is missing \"") + key + "\"");
  return j.at(key);
}

inline void check_witness_header(const json &j, const char *kind)
{
  if (need(j, "schema") != kWitnessSchema)
    throw spec_error("unsupported witness schema");
  if (need(j, "kind") != kind)
    throw spec_error(std::string("expected a \"") + kind + "\" witness");
}

} // namespace detail

template<Group G>
SparseWitness<G> sparse_witness_from_json(const G &group, const json &j)
{
  try {
    detail::check_witness_header(j, "sparse");
    SparseWitness<G> w;
    const auto &p = detail::need(j, "params");
    w.n_max = detail::need(p, "n_max").get<std::size_t>();
    w.reps = detail::need(p, "reps_per_level").get<std::size_t>();
    w.seed = p.value("seed", std::uint64_t{0});
    const auto &levels = detail::need(j, "levels");
    if (!levels.is_array() || levels.size() != w.n_max + 1 || w.reps < 1)
      throw spec_error("witness levels do not match n_max");
    for (const auto &lv : levels) {
      w.K.push_back(decode_elements(group, detail::need(lv, "K")));
      w.x.push_back(decode_elements(group, detail::need(lv, "x")));
    }
    w.transcript = j.value("transcript", json::array());
    return w;
  } catch (const json::exception &e) {
    throw spec_error(std::string("malformed witness: ") + e.what());
  }
}

template<Group G>
RectWitness<G> rect_witness_from_json(const G &group, const json &j)
{
  try {
    detail::check_witness_header(j, "rect");
    RectWitness<G> w;
    const auto &p = detail::need(j, "params");
    w.n_max = detail::need(p, "n_max").get<std::size_t>();
    w.seed = p.value("seed", std::uint64_t{0});
    const auto &blocks = detail::need(j, "blocks");
    if (!blocks.is_array() || blocks.size() != w.n_max + 1)
      throw spec_error("witness blocks do not match n_max");
    for (const auto &b : blocks) {
      w.X.push_back(decode_elements(group, detail::need(b, "X")));
      w.Y.push_back(decode_elements(group, detail::need(b, "Y")));
    }
    w.transcript = j.value("transcript", json::array());
    return w;
  } catch (const json::exception &e) {
    throw spec_error(std::string("malformed witness: ") + e.what());
  }
}

inline TranspositionFamily transposition_family_from_json(const json &j)
{
  try {
    detail::check_witness_header(j, "transposition");
    FinPerm p;
    const auto &params = detail::need(j, "params");
    auto f = transposition_family(detail::need(params, "m").get<std::size_t>(),
                                  detail::need(j, "W1").get<std::vector<std::size_t>>(),
                                  detail::need(j, "phi").get<std::vector<std::size_t>>(),
                                  params.value("seed", std::uint64_t{0}));
    // keep the stored data so a tampered file is caught by verification
    f.T = decode_elements(p, detail::need(j, "T"));
    f.h = p.from_json(detail::need(j, "h"));
    return f;
  } catch (const json::exception &e) {
    throw spec_error(std::string("malformed witness: ") + e.what());
  }
}

} // namespace subsize

#endif // SUBSIZE_CONSTRUCTIONS_HPP
