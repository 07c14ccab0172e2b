#include <random>
#include <set>

#include <gtest/gtest.h>

#include "subsize/ideal.hpp"
#include "subsize/ramsey.hpp"

using namespace subsize;

namespace {

using Z = IntegerGroup;
using I64 = std::int64_t;

SpecPtr<I64> b(const std::string &name, json params = json::object())
{
  return spec::builtin<I64>(name, std::move(params));
}

IdealSpec<Z> finite_only()
{
  IdealSpec<Z> I;
  I.finite_sets = true;
  return I;
}

// Independent axiom oracle over explicit sets of points.
bool oracle_is_ideal(std::size_t n, const std::vector<std::set<int>> &fam)
{
  std::set<std::set<int>> F(fam.begin(), fam.end());
  if (F.empty())
    return false;
  for (const auto &a : F) {
    if (a.empty() || a.size() == n)
      return false;
    for (const auto &c : F) {
      auto u = a;
      u.insert(c.begin(), c.end());
      if (!F.count(u))
        return false;
    }
    std::vector<int> pts(a.begin(), a.end());
    for (std::uint32_t m = 1; m < (1U << pts.size()); ++m) {
      std::set<int> sub;
      for (std::size_t i = 0; i < pts.size(); ++i)
        if (m >> i & 1U)
          sub.insert(pts[i]);
      if (!F.count(sub))
        return false;
    }
  }
  return true;
}

} // namespace

TEST(IdealSpec, Validation)
{
  IdealSpec<Z> I;
  EXPECT_THROW(I.validate(), spec_error);
  I.generators.push_back(b("evens"));
  I.group_ideal = true;
  EXPECT_THROW(I.validate(), spec_error);
  I.finite_sets = true;
  EXPECT_NO_THROW(I.validate());
  Z z;
  auto j = ideal_to_json(z, I);
  EXPECT_EQ(ideal_to_json(z, ideal_from_json(z, j)), j);
}

TEST(IdealMember, FiniteSetsOnly)
{
  auto ctx = make_context(Z{});
  auto I = finite_only();
  auto S = spec::explicit_set<I64>({3, -7, 12});
  auto r = ideal_member(ctx, I, S, 100);
  ASSERT_EQ(r.verdict, Verdict::Holds);
  EXPECT_EQ(r.certificate["depth"], 0);
  EXPECT_TRUE(replay_certificate(ctx, I, S, r.certificate));
  for (std::size_t d : {0U, 2U, 4U})
    EXPECT_EQ(ideal_member(ctx, I, b("evens"), 100, {d, 10}).verdict, Verdict::Exhausted);
}

TEST(IdealMember, GroupIdealOneStep)
{
  auto ctx = make_context(BooleanSum{});
  IdealSpec<BooleanSum> I;
  I.generators.push_back(spec::builtin<Support>("supt-eq", {{"m", 1}}));
  I.group_ideal = true;
  I.finite_sets = true;
  auto S = spec::builtin<Support>("supt-le", {{"m", 2}});
  auto r = ideal_member(ctx, I, S, 256);
  ASSERT_EQ(r.verdict, Verdict::Holds) << r.certificate.dump();
  EXPECT_EQ(r.certificate["depth"], 1);
  EXPECT_TRUE(replay_certificate(ctx, I, S, r.certificate));
  // supt <= 3 needs more than one step
  EXPECT_EQ(ideal_member(ctx, I, spec::builtin<Support>("supt-le", {{"m", 3}}), 256, {1, 10}).verdict,
            Verdict::Exhausted);

  // a tampered certificate no longer replays
  auto bad = r.certificate;
  bad["tree"] = {{"node", "generator"}, {"index", 0}};
  bad["depth"] = 0;
  EXPECT_FALSE(replay_certificate(ctx, I, S, bad));
  auto no_group = I;
  no_group.group_ideal = false;
  EXPECT_FALSE(replay_certificate(ctx, no_group, S, r.certificate));
}

TEST(IdealMember, GroupIdealMonotone)
{
  auto ctx = make_context(Z{});
  IdealSpec<Z> I;
  I.generators = {b("squares"), b("powers", {{"base", 2}})};
  I.group_ideal = true;
  I.finite_sets = true;
  auto A = spec::unite<I64>({b("squares"), spec::explicit_set<I64>({5, 6})});
  auto B = b("powers", {{"base", 2}});
  IdealBudget budget{1, 10};
  ASSERT_EQ(ideal_member(ctx, I, A, 200, budget).verdict, Verdict::Holds);
  ASSERT_EQ(ideal_member(ctx, I, B, 200, budget).verdict, Verdict::Holds);
  auto AB = spec::product(A, spec::inverse(B));
  auto r = ideal_member(ctx, I, AB, 200, {budget.depth + 1, 10});
  ASSERT_EQ(r.verdict, Verdict::Holds);
  EXPECT_TRUE(replay_certificate(ctx, I, AB, r.certificate));
}

TEST(IdealMember, TranslationsExtendByOneNode)
{
  auto ctx = make_context(Z{});
  IdealSpec<Z> I;
  I.generators = {b("squares")};
  I.left_translation = true;
  I.finite_sets = true;
  auto A = b("squares");
  ASSERT_EQ(ideal_member(ctx, I, A, 300).verdict, Verdict::Holds);
  ctx.universe->ensure(11);
  for (std::size_t k = 1; k <= 10; ++k) {
    auto gA = spec::translate<I64>(ctx.universe->at(k), A);
    auto r = ideal_member(ctx, I, gA, 300);
    ASSERT_EQ(r.verdict, Verdict::Holds) << k;
    EXPECT_LE(r.certificate["depth"].get<std::size_t>(), 1U);
    EXPECT_TRUE(replay_certificate(ctx, I, gA, r.certificate));
  }
  // without the flag a far translate of the squares is out of reach
  auto plain = I;
  plain.left_translation = false;
  EXPECT_EQ(ideal_member(ctx, plain, spec::translate<I64>(7, A), 300).verdict, Verdict::Exhausted);
}

TEST(Filter, DualityOnRandomQueries)
{
  auto ctx = make_context(Z{});
  IdealSpec<Z> I;
  I.generators = {b("evens")};
  I.finite_sets = true;
  auto F = dual_filter(I);
  auto base = materialize(filter_base(F)[0], ctx, 21);
  for (auto x : base.elements())
    EXPECT_NE(x % 2, 0);
  EXPECT_EQ(filter_member(ctx, F, b("odds"), 100).verdict, Verdict::Holds);

  auto cof = dual_filter(finite_only());
  EXPECT_EQ(filter_member(ctx, cof, spec::window_complement(spec::explicit_set<I64>({1, 2})), 100).verdict,
            Verdict::Holds);
  EXPECT_EQ(filter_member(ctx, cof, b("evens"), 100).verdict, Verdict::Exhausted);

  auto back = dual_ideal(dual_filter(I));
  std::mt19937_64 rng(4);
  for (int q = 0; q < 50; ++q) {
    SpecPtr<I64> S;
    switch (rng() % 3) {
    case 0:
      S = b("random", {{"seed", rng() % 1000}, {"density", 0.2}});
      break;
    case 1:
      S = spec::intersect<I64>({b("evens"), b("random", {{"seed", rng() % 1000}, {"density", 0.5}})});
      break;
    default:
      S = spec::explicit_set<I64>({static_cast<I64>(rng() % 50), static_cast<I64>(rng() % 50) - 25});
    }
    auto v1 = ideal_member(ctx, I, S, 100).verdict;
    EXPECT_EQ(ideal_member(ctx, back, S, 100).verdict, v1);
    EXPECT_EQ(filter_member(ctx, F, spec::window_complement(S), 100).verdict, v1);
  }
}

TEST(FiniteIdeal, Examples)
{
  Z z;
  std::vector<I64> U{0, 1, 2, 3, 4, 5};
  std::vector<std::vector<I64>> small;
  for (I64 a = 0; a < 6; ++a) {
    small.push_back({a});
    for (I64 c = a + 1; c < 6; ++c)
      small.push_back({a, c});
  }
  auto r = finite_universe_ideal_check(z, U, small);
  EXPECT_EQ(r.verdict, Verdict::Fails);
  EXPECT_EQ(r.certificate["axiom"], "union");

  EXPECT_EQ(finite_universe_ideal_check(z, U, {{0}, {1}, {0, 1}}).verdict, Verdict::Holds);
  auto full = finite_universe_ideal_check(z, U, {U});
  EXPECT_EQ(full.certificate["axiom"], "proper");
  auto empty = finite_universe_ideal_check(z, U, {{}});
  EXPECT_EQ(empty.certificate["axiom"], "empty-set-excluded");
  auto down = finite_universe_ideal_check(z, U, {{0, 1}});
  EXPECT_EQ(down.certificate["axiom"], "downward");
  EXPECT_EQ(down.certificate["A"], (json{0, 1}));
  EXPECT_THROW(finite_universe_ideal_check(13, {1}), spec_error);
}

TEST(FiniteIdeal, AgreesWithOracle)
{
  std::mt19937_64 rng(21);
  std::size_t holds = 0;
  for (int t = 0; t < 300; ++t) {
    std::vector<std::uint32_t> fam;
    if (t % 2 == 0) {
      // nonempty subsets of a proper subset, possibly perturbed
      std::uint32_t Y = static_cast<std::uint32_t>(rng() % 63);
      for (std::uint32_t c = Y; c != 0; c = (c - 1) & Y)
        fam.push_back(c);
      if (rng() % 3 == 0 && !fam.empty())
        fam.erase(fam.begin() + static_cast<std::ptrdiff_t>(rng() % fam.size()));
      if (rng() % 3 == 0)
        fam.push_back(static_cast<std::uint32_t>(rng() % 64));
    } else {
      for (int k = 0, n = static_cast<int>(rng() % 6); k < n; ++k)
        fam.push_back(static_cast<std::uint32_t>(rng() % 64));
    }
    std::vector<std::set<int>> sets;
    for (auto m : fam) {
      std::set<int> s;
      for (int i = 0; i < 6; ++i)
        if (m >> i & 1U)
          s.insert(i);
      sets.push_back(s);
    }
    bool expect = oracle_is_ideal(6, sets);
    holds += expect;
    EXPECT_EQ(finite_universe_ideal_check(6, fam).holds(), expect) << t;
  }
  EXPECT_GT(holds, 20U);
}

TEST(Ramsey, SmallCases)
{
  auto one = bipartite_ramsey(1, 5);
  EXPECT_EQ(one.certificate["r"], 1);
  auto two = bipartite_ramsey(2, 5);
  ASSERT_EQ(two.verdict, Verdict::Holds);
  EXPECT_EQ(two.certificate["r"], 5);
  auto c = coloring_from_json(two.certificate["extremal"]);
  EXPECT_EQ(c.size, 4U);
  EXPECT_TRUE(verify_avoiding(c, 2));
  auto capped = bipartite_ramsey(2, 3);
  EXPECT_EQ(capped.verdict, Verdict::Exhausted);
  EXPECT_TRUE(verify_avoiding(coloring_from_json(capped.certificate["extremal"]), 2));
  EXPECT_THROW(bipartite_ramsey(0, 3), spec_error);
}

TEST(Ramsey, BruteForceOracle)
{
  // 4x4 avoiding colorings exist; none of the 2^25 colorings of 5x5 avoids
  auto mono22 = [](const std::vector<std::uint32_t> &rows, std::uint32_t full) {
    for (std::size_t i = 0; i < rows.size(); ++i)
      for (std::size_t j = i + 1; j < rows.size(); ++j) {
        if (std::popcount(rows[i] & rows[j]) >= 2)
          return true;
        if (std::popcount(~rows[i] & ~rows[j] & full) >= 2)
          return true;
      }
    return false;
  };
  bool found4 = false;
  for (std::uint32_t m = 0; m < (1U << 16) && !found4; ++m)
    found4 = !mono22({m & 15, m >> 4 & 15, m >> 8 & 15, m >> 12 & 15}, 15);
  EXPECT_TRUE(found4);
  bool found5 = false;
  for (std::uint32_t m = 0; m < (1U << 25) && !found5; ++m)
    found5 = !mono22({m & 31, m >> 5 & 31, m >> 10 & 31, m >> 15 & 31, m >> 20 & 31}, 31);
  EXPECT_FALSE(found5);
}
