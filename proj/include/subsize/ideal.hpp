#ifndef SUBSIZE_IDEAL_HPP
#define SUBSIZE_IDEAL_HPP

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "subsize/certificates.hpp"
#include "subsize/errors.hpp"
#include "subsize/report.hpp"
#include "subsize/subset.hpp"

namespace subsize {

/// An ideal of P(G) given by generators and closure rules. Downward and
/// finite-union closure are always on.
template<Group G>
struct IdealSpec
{
  std::vector<SpecPtr<element_t<G>>> generators;
  bool left_translation = false;
  bool right_translation = false;
  bool group_ideal = false;
  bool finite_sets = false;

  void validate() const
  {
    if (generators.empty() && !finite_sets)
      throw spec_error("an ideal needs generators or the finite sets");
    if (group_ideal && !finite_sets)
      throw spec_error("a group ideal must contain the finite sets");
    for (const auto &g : generators)
      if (!g)
        throw spec_error("null ideal generator");
  }
};

template<Group G>
json ideal_to_json(const G &group, const IdealSpec<G> &I)
{
  json gens = json::array();
  for (const auto &g : I.generators)
    gens.push_back(spec_to_json(group, g));
  return {{"generators", gens},
          {"left_translation", I.left_translation},
          {"right_translation", I.right_translation},
          {"group_ideal", I.group_ideal},
          {"finite_sets", I.finite_sets}};
}

template<Group G>
IdealSpec<G> ideal_from_json(const G &group, const json &j, const SpecRefLookup &lookup = {})
{
  if (!j.is_object())
    throw spec_error("ideal must be a JSON object");
  IdealSpec<G> I;
  for (const auto &g : j.value("generators", json::array()))
    I.generators.push_back(spec_from_json(group, g, lookup));
  I.left_translation = j.value("left_translation", false);
  I.right_translation = j.value("right_translation", false);
  I.group_ideal = j.value("group_ideal", false);
  I.finite_sets = j.value("finite_sets", false);
  I.validate();
  return I;
}

/// The filter {G ∖ A : A ∈ I}, kept as the ideal it is dual to.
template<Group G>
struct FilterSpec
{
  IdealSpec<G> ideal;
};

template<Group G>
FilterSpec<G> dual_filter(const IdealSpec<G> &I)
{
  I.validate();
  return {I};
}

template<Group G>
IdealSpec<G> dual_ideal(const FilterSpec<G> &F)
{
  return F.ideal;
}

/// Window view of the filter base: the complements W_N ∖ A of the generators.
template<Group G>
std::vector<SpecPtr<element_t<G>>> filter_base(const FilterSpec<G> &F)
{
  std::vector<SpecPtr<element_t<G>>> out;
  for (const auto &g : F.ideal.generators)
    out.push_back(spec::window_complement(g));
  return out;
}

struct IdealBudget
{
  std::size_t depth = 2;
  std::size_t fanout = 10;
};

// Derivation trees are JSON:
//   {"node":"generator","index":i}
//   {"node":"finite","elements":[...]}
//   {"node":"union","children":[...]}
//   {"node":"translate","g":x,"side":"left"|"right","child":t}
//   {"node":"product-inverse","left":t,"right":t}          (left · right^-1)
// A certificate for S at window N is a tree whose set C satisfies
// S ∩ W_N ⊆ C and S ∩ W_2N ⊆ C; finite leaves are literal and never grow.

namespace detail {

inline std::size_t tree_depth(const json &t)
{
  const auto &kind = t.at("node");
  if (kind == "union") {
    std::size_t d = 0;
    for (const auto &c : t.at("children"))
      d = std::max(d, tree_depth(c));
    return d;
  }
  if (kind == "translate")
    return 1 + tree_depth(t.at("child"));
  if (kind == "product-inverse")
    return 1 + std::max(tree_depth(t.at("left")), tree_depth(t.at("right")));
  return 0;
}

template<Group G>
SpecPtr<element_t<G>> tree_to_spec(const G &group, const IdealSpec<G> &I, const json &t)
{
  using E = element_t<G>;
  const auto kind = t.at("node").get<std::string>();
  if (kind == "generator") {
    auto k = t.at("index").get<std::size_t>();
    if (k >= I.generators.size())
      throw spec_error("certificate names a missing generator");
    return I.generators[k];
  }
  if (kind == "finite") {
    if (!I.finite_sets)
      throw spec_error("certificate uses a finite leaf but the ideal lacks the finite sets");
    return spec::explicit_set<E>(decode_elements(group, t.at("elements")));
  }
  if (kind == "union") {
    std::vector<SpecPtr<E>> parts;
    for (const auto &c : t.at("children"))
      parts.push_back(tree_to_spec(group, I, c));
    return spec::unite<E>(std::move(parts));
  }
  if (kind == "translate") {
    auto side = t.at("side").get<std::string>();
    if (side == "left" ? !I.left_translation : side == "right" ? !I.right_translation : true)
      throw spec_error("certificate uses a translation the ideal does not allow");
    return spec::translate<E>(group.from_json(t.at("g")), tree_to_spec(group, I, t.at("child")),
                              side == "left" ? Side::Left : Side::Right);
  }
  if (kind == "product-inverse") {
    if (!I.group_ideal)
      throw spec_error("certificate uses A B^-1 but the ideal is not a group ideal");
    return spec::product(tree_to_spec(group, I, t.at("left")),
                         spec::inverse(tree_to_spec(group, I, t.at("right"))));
  }
  throw spec_error("unknown certificate node \"" + kind + "\"");
}

inline std::vector<std::uint64_t> missing(const std::vector<std::uint64_t> &want,
                                          const std::vector<std::uint64_t> &have)
{
  std::vector<std::uint64_t> out;
  std::set_difference(want.begin(), want.end(), have.begin(), have.end(), std::back_inserter(out));
  return out;
}

template<Group G>
class IdealSearch
{
public:
  using E = element_t<G>;

  IdealSearch(const Context<G> &ctx, const IdealSpec<G> &I, std::size_t window, IdealBudget b)
  : ctx_(ctx), I_(I), window_(window), budget_(b)
  {}

  std::optional<json> derive(const SpecPtr<E> &S, std::size_t d)
  {
    ++nodes_;
    if (auto t = saturate(S, d))
      return t;
    using Sp = SubsetSpec<E>;
    return std::visit(
      [&](const auto &n) -> std::optional<json> {
        using N = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<N, typename Sp::Union>) {
          json kids = json::array();
          for (const auto &p : n.parts) {
            auto t = derive(p, d);
            if (!t)
              return std::nullopt;
            kids.push_back(*t);
          }
          return json{{"node", "union"}, {"children", kids}};
        } else if constexpr (std::is_same_v<N, typename Sp::Intersection>) {
          for (const auto &p : n.parts)
            if (auto t = derive(p, d))
              return t;
          return std::nullopt;
        } else if constexpr (std::is_same_v<N, typename Sp::Difference>) {
          return derive(n.left, d);
        } else if constexpr (std::is_same_v<N, typename Sp::Translate>) {
          bool allowed = n.side == Side::Left ? I_.left_translation : I_.right_translation;
          if (!allowed || d == 0)
            return std::nullopt;
          auto t = derive(n.of, d - 1);
          if (!t)
            return std::nullopt;
          return json{{"node", "translate"},
                      {"g", ctx_.group().to_json(n.by)},
                      {"side", to_string(n.side)},
                      {"child", *t}};
        } else if constexpr (std::is_same_v<N, typename Sp::Product>) {
          if (!I_.group_ideal || d == 0)
            return std::nullopt;
          auto *inv = std::get_if<typename Sp::Inverse>(&n.right->node);
          if (!inv)
            return std::nullopt;
          auto l = derive(n.left, d - 1);
          if (!l)
            return std::nullopt;
          auto r = derive(inv->of, d - 1);
          if (!r)
            return std::nullopt;
          return json{{"node", "product-inverse"}, {"left", *l}, {"right", *r}};
        } else {
          return std::nullopt;
        }
      },
      S->node);
  }

  std::size_t nodes() const { return nodes_; }

private:
  /// U_0 = generators ∪ {e}; U_{k+1} = U_k ∪ U_k U_k^-1 ∪ g U_k ∪ U_k g.
  const json &level(std::size_t k)
  {
    while (levels_.size() <= k) {
      if (levels_.empty()) {
        json kids = json::array();
        for (std::size_t i = 0; i < I_.generators.size(); ++i)
          kids.push_back({{"node", "generator"}, {"index", i}});
        if (I_.finite_sets)
          kids.push_back({{"node", "finite"},
                          {"elements", json::array({ctx_.group().to_json(ctx_.group().identity())})}});
        levels_.push_back({{"node", "union"}, {"children", kids}});
        continue;
      }
      const json prev = levels_.back();
      json kids = json::array({prev});
      if (I_.group_ideal)
        kids.push_back({{"node", "product-inverse"}, {"left", prev}, {"right", prev}});
      auto gs = leading(budget_.fanout);
      for (const auto &g : gs) {
        if (I_.left_translation)
          kids.push_back({{"node", "translate"}, {"g", ctx_.group().to_json(g)}, {"side", "left"}, {"child", prev}});
        if (I_.right_translation)
          kids.push_back({{"node", "translate"}, {"g", ctx_.group().to_json(g)}, {"side", "right"}, {"child", prev}});
      }
      levels_.push_back({{"node", "union"}, {"children", kids}});
    }
    return levels_[k];
  }

  bool grows() const { return I_.group_ideal || I_.left_translation || I_.right_translation; }

  std::vector<E> leading(std::size_t count)
  {
    ctx_.universe->ensure(count + 1);
    std::vector<E> out;
    for (std::size_t k = 1; k <= count; ++k)
      out.push_back(ctx_.universe->at(k));
    return out;
  }

  std::pair<SampleSet<G>, SampleSet<G>> eval(std::size_t k)
  {
    while (evals_.size() <= k) {
      auto s = tree_to_spec(ctx_.group(), I_, level(evals_.size()));
      evals_.emplace_back(materialize(s, ctx_, window_), materialize(s, ctx_, 2 * window_));
    }
    return evals_[k];
  }

  std::optional<json> saturate(const SpecPtr<E> &S, std::size_t d)
  {
    auto sN = materialize(S, ctx_, window_);
    auto s2 = materialize(S, ctx_, 2 * window_);
    const std::size_t top = grows() ? d : 0;
    for (std::size_t k = 0; k <= top; ++k) {
      auto [cN, c2] = eval(k);
      auto restN = missing(sN.indices(), cN.indices());
      auto rest2 = missing(s2.indices(), c2.indices());
      std::vector<std::uint64_t> rest;
      std::set_union(restN.begin(), restN.end(), rest2.begin(), rest2.end(), std::back_inserter(rest));
      if (rest.empty())
        return level(k);
      if (!I_.finite_sets || rest.back() >= window_)
        continue;
      json elems = json::array();
      for (auto i : rest)
        elems.push_back(ctx_.group().to_json(ctx_.universe->at(i)));
      json kids = json::array();
      kids.push_back(level(k));
      kids.push_back({{"node", "finite"}, {"elements", elems}});
      return json{{"node", "union"}, {"children", kids}};
    }
    return std::nullopt;
  }

  const Context<G> &ctx_;
  const IdealSpec<G> &I_;
  std::size_t window_;
  IdealBudget budget_;
  std::size_t nodes_ = 0;
  std::vector<json> levels_;
  std::vector<std::pair<SampleSet<G>, SampleSet<G>>> evals_;
};

} // namespace detail

/// Re-evaluates a certificate: the tree only uses rules the ideal allows and
/// its set covers S on W_N and on W_2N.
template<Group G>
bool replay_certificate(const Context<G> &ctx, const IdealSpec<G> &I, const SpecPtr<element_t<G>> &S,
                        const json &cert)
{
  try {
    I.validate();
    std::size_t N = cert.at("window").get<std::size_t>();
    auto C = detail::tree_to_spec(ctx.group(), I, cert.at("tree"));
    if (detail::tree_depth(cert.at("tree")) != cert.at("depth").get<std::size_t>())
      return false;
    for (std::size_t w : {N, 2 * N})
      if (!detail::missing(materialize(S, ctx, w).indices(), materialize(C, ctx, w).indices()).empty())
        return false;
    return true;
  } catch (const json::exception &) {
    return false;
  } catch (const spec_error &) {
    return false;
  }
}

/// Iterative deepening over derivation depth; the certificate (if any) has
/// the least depth the search reaches.
template<Group G>
CheckReport ideal_member(const Context<G> &ctx, const IdealSpec<G> &I, const SpecPtr<element_t<G>> &S,
                         std::size_t window, IdealBudget budget = {})
{
  I.validate();
  CheckReport r;
  r.property = "ideal-member";
  r.window = window;
  r.thresholds = ctx.thresholds;
  ReportTimer timer(r);
  detail::IdealSearch<G> search(ctx, I, window, budget);
  std::optional<json> tree;
  std::size_t d = 0;
  for (; d <= budget.depth && !tree; ++d)
    tree = search.derive(S, d);
  r.budgets_used = {{"depth", budget.depth}, {"fanout", budget.fanout}, {"nodes", search.nodes()}};
  if (!tree) {
    r.verdict = Verdict::Exhausted;
    r.certificate = {{"reason", "no certificate within budget"}};
    return r;
  }
  r.verdict = Verdict::Holds;
  r.certificate = {{"window", window},
                   {"check_window", 2 * window},
                   {"depth", detail::tree_depth(*tree)},
                   {"tree", *tree},
                   {"query", spec_to_json(ctx.group(), S)}};
  return r;
}

template<Group G>
CheckReport filter_member(const Context<G> &ctx, const FilterSpec<G> &F, const SpecPtr<element_t<G>> &S,
                          std::size_t window, IdealBudget budget = {})
{
  auto r = ideal_member(ctx, F.ideal, spec::window_complement(S), window, budget);
  r.property = "filter-member";
  return r;
}

inline constexpr std::size_t kFiniteIdealMaxUniverse = 12;

/// Exhaustive axiom check on a universe of at most 12 points. Members are
/// bitmasks over the universe; the checked axioms, in order: the family is
/// nonempty, ∅ ∉ I, the full universe ∉ I, A ∪ B ∈ I, and every nonempty
/// C ⊆ A lies in I.
inline CheckReport finite_universe_ideal_check(std::size_t universe_size,
                                               const std::vector<std::uint32_t> &family)
{
  if (universe_size > kFiniteIdealMaxUniverse)
    throw spec_error("finite_universe_ideal_check accepts at most 12 points");
  const std::uint32_t full = (std::uint32_t{1} << universe_size) - 1;
  CheckReport r;
  r.property = "finite-ideal";
  r.window = universe_size;
  ReportTimer timer(r);
  std::vector<bool> in(std::size_t{1} << universe_size, false);
  for (auto a : family) {
    if (a & ~full)
      throw spec_error("family member uses points outside the universe");
    in[a] = true;
  }
  auto mask_json = [&](std::uint32_t m) {
    json pts = json::array();
    for (std::size_t i = 0; i < universe_size; ++i)
      if (m >> i & 1U)
        pts.push_back(i);
    return pts;
  };
  auto fail = [&](const char *axiom, std::optional<std::uint32_t> a, std::optional<std::uint32_t> b) {
    r.verdict = Verdict::Fails;
    r.certificate = {{"axiom", axiom}};
    if (a)
      r.certificate["A"] = mask_json(*a);
    if (b)
      r.certificate["B"] = mask_json(*b);
    return r;
  };
  r.budgets_used = {{"members", family.size()}};
  if (family.empty())
    return fail("nonempty", std::nullopt, std::nullopt);
  for (auto a : family) {
    if (a == 0)
      return fail("empty-set-excluded", a, std::nullopt);
    if (a == full)
      return fail("proper", a, std::nullopt);
  }
  for (auto a : family)
    for (auto b : family)
      if (!in[a | b])
        return fail("union", a, b);
  for (auto a : family)
    for (std::uint32_t c = (a - 1) & a; c != 0; c = (c - 1) & a)
      if (!in[c])
        return fail("downward", a, c);
  r.verdict = Verdict::Holds;
  r.certificate = {{"members", family.size()}};
  return r;
}

/// Same check with the universe and members given as group elements.
template<Group G>
CheckReport finite_universe_ideal_check(const G &group, const std::vector<element_t<G>> &universe,
                                        const std::vector<std::vector<element_t<G>>> &family)
{
  if (universe.size() > kFiniteIdealMaxUniverse)
    throw spec_error("finite_universe_ideal_check accepts at most 12 points");
  if (!all_distinct<G>(universe))
    throw spec_error("universe elements must be distinct");
  std::vector<std::uint32_t> masks;
  for (const auto &member : family) {
    std::uint32_t m = 0;
    for (const auto &e : member) {
      auto it = std::find(universe.begin(), universe.end(), e);
      if (it == universe.end())
        throw spec_error("family member uses points outside the universe");
      m |= std::uint32_t{1} << (it - universe.begin());
    }
    masks.push_back(m);
  }
  auto r = finite_universe_ideal_check(universe.size(), masks);
  for (const char *key : {"A", "B"})
    if (r.certificate.contains(key)) {
      json elems = json::array();
      for (auto i : r.certificate[key])
        elems.push_back(group.to_json(universe[i.template get<std::size_t>()]));
      r.certificate[key] = elems;
    }
  return r;
}

} // namespace subsize

#endif // SUBSIZE_IDEAL_HPP
