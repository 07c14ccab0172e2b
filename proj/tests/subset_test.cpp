#include <set>

#include <gtest/gtest.h>

#include "subsize/subset.hpp"

using namespace subsize;

namespace {

using Z = IntegerGroup;
using ZSpec = SpecPtr<std::int64_t>;

std::set<std::int64_t> as_set(const SampleSet<Z> &s)
{
  return {s.elements().begin(), s.elements().end()};
}

ZSpec b(const std::string &name, json params = json::object())
{
  return spec::builtin<std::int64_t>(name, std::move(params));
}

} // namespace

TEST(Materialize, BuiltinsAndTranslates)
{
  auto ctx = make_context(Z{});
  EXPECT_EQ(as_set(materialize(b("evens"), ctx, 5)), (std::set<std::int64_t>{0, 2, -2}));
  EXPECT_EQ(as_set(materialize(spec::translate<std::int64_t>(1, b("evens")), ctx, 5)),
            (std::set<std::int64_t>{1, -1}));
  EXPECT_EQ(as_set(materialize(spec::translate<std::int64_t>(1, b("evens")), ctx, 7)),
            (std::set<std::int64_t>{1, -1, 3, -3}));
  auto sq = materialize(b("squares"), ctx, 100);
  EXPECT_EQ(as_set(sq), (std::set<std::int64_t>{0, 1, 4, 9, 16, 25, 36, 49}));
  EXPECT_FALSE(sq.truncated());
}

TEST(Materialize, ProductUsesInnerWindow)
{
  auto ctx = make_context(Z{});
  auto p = spec::product(spec::explicit_set<std::int64_t>({0, 1}),
                         spec::explicit_set<std::int64_t>({0, 10}));
  EXPECT_EQ(as_set(materialize(p, ctx, 30)), (std::set<std::int64_t>{0, 1, 10, 11}));

  // 1000 + evens: every factor pair lies outside W_M even when M doubles
  Thresholds t;
  t.product_factor = 1;
  auto tight = make_context(Z{}, t);
  auto big = spec::product(spec::explicit_set<std::int64_t>({1000}), b("evens"));
  auto s = materialize(big, tight, 21);
  EXPECT_TRUE(s.empty());
  EXPECT_FALSE(s.truncated());

  // W_9 = [-4, 4]; 5 + (-3) = 2 needs a factor outside W_9
  auto sum = spec::product(b("range", {{"lo", 5}, {"hi", 6}}), b("range", {{"lo", -3}, {"hi", -2}}));
  auto s2 = materialize(sum, tight, 9);
  EXPECT_TRUE(s2.truncated());
  EXPECT_TRUE(s2.empty());
  auto wide = materialize(sum, ctx, 9);
  EXPECT_FALSE(wide.truncated());
  EXPECT_EQ(as_set(wide), (std::set<std::int64_t>{2, 3, 4}));
}

TEST(Materialize, SetAlgebra)
{
  auto ctx = make_context(Z{});
  auto evens = b("evens");
  auto sq = b("squares");
  EXPECT_EQ(as_set(materialize(spec::intersect<std::int64_t>({evens, sq}), ctx, 200)),
            (std::set<std::int64_t>{0, 4, 16, 36, 64, 100}));
  EXPECT_EQ(as_set(materialize(spec::difference(sq, evens), ctx, 60)),
            (std::set<std::int64_t>{1, 9, 25}));
  EXPECT_EQ(as_set(materialize(spec::inverse(sq), ctx, 20)), (std::set<std::int64_t>{0, -1, -4, -9}));
  auto comp = materialize(spec::window_complement(evens), ctx, 9);
  EXPECT_EQ(as_set(comp), (std::set<std::int64_t>{1, -1, 3, -3}));
  auto u = materialize(spec::unite<std::int64_t>({sq, spec::explicit_set<std::int64_t>({-3})}), ctx, 9);
  EXPECT_EQ(as_set(u), (std::set<std::int64_t>{0, 1, 4, -3}));
}

TEST(Materialize, WindowMonotone)
{
  auto ctx = make_context(Z{});
  auto spec = b("random", {{"seed", 7}, {"density", 0.3}});
  auto small = as_set(materialize(spec, ctx, 500));
  auto large = as_set(materialize(spec, ctx, 1000));
  for (auto x : small)
    EXPECT_TRUE(large.count(x));
}

TEST(FiniteLike, TwoWindowProxy)
{
  auto ctx = make_context(Z{});
  auto fin = spec::explicit_set<std::int64_t>({1, 2, 3});
  EXPECT_TRUE(finite_like(materialize(fin, ctx, 100), materialize(fin, ctx, 200)));
  EXPECT_FALSE(finite_like(materialize(b("evens"), ctx, 100), materialize(b("evens"), ctx, 200)));
  EXPECT_THROW(finite_like(materialize(fin, ctx, 100), materialize(fin, ctx, 300)), spec_error);
  EXPECT_THROW(finite_like(materialize(fin, ctx, 100), materialize(b("evens"), ctx, 200)),
               spec_error);
}

TEST(SpecJson, RoundTrip)
{
  Z z;
  auto s = spec::difference(spec::unite<std::int64_t>({b("evens"), spec::explicit_set<std::int64_t>({3, 5})}),
                            spec::translate<std::int64_t>(4, b("squares"), Side::Right));
  auto j = spec_to_json(z, s);
  EXPECT_EQ(spec_to_json(z, spec_from_json(z, j)), j);

  json named = {{"base", "evens"}};
  SpecRefLookup lookup = [&](const std::string &n) -> const json * {
    return named.contains(n) ? &named[n] : nullptr;
  };
  auto ctx = make_context(z);
  auto r = spec_from_json(z, json{{"kind", "ref"}, {"name", "base"}}, lookup);
  EXPECT_EQ(as_set(materialize(r, ctx, 5)), (std::set<std::int64_t>{0, 2, -2}));
  EXPECT_THROW(spec_from_json(z, json{{"kind", "ref"}, {"name", "nope"}}, lookup), spec_error);
  EXPECT_THROW(spec_from_json(z, json{{"kind", "mystery"}}), spec_error);
  EXPECT_THROW(materialize(spec_from_json(z, json("no-such-builtin")), ctx, 5), spec_error);
}

TEST(Builtins, OtherGroups)
{
  auto bctx = make_context(BooleanSum{});
  auto s = materialize(spec::builtin<Support>("supt-le", {{"m", 1}}), bctx, 16);
  EXPECT_EQ(s.size(), 5U); // e, {0}, {1}, {2}, {3}
  auto pctx = make_context(FinPerm{});
  auto t = materialize(spec::builtin<Perm>("transpositions"), pctx, 24);
  EXPECT_EQ(t.size(), 6U); // all transpositions of {0,1,2,3}
  auto fctx = make_context(FreeGroup{2});
  auto w = materialize(spec::builtin<Word>("length-le", {{"n", 1}}), fctx, 20);
  EXPECT_EQ(w.size(), 5U);
}

TEST(Constructed, NeedsResolver)
{
  auto ctx = make_context(Z{});
  auto c = spec::constructed<std::int64_t>("thing");
  EXPECT_THROW(materialize(c, ctx, 10), spec_error);
  ctx.resolve = [](const std::string &, const json &) { return spec::explicit_set<std::int64_t>({1}); };
  EXPECT_EQ(as_set(materialize(c, ctx, 10)), (std::set<std::int64_t>{1}));
}
