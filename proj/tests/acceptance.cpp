#include <bitset>
#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <set>
#include <string>

#include "random_elements.hpp"
#include "subsize/runner.hpp"

using namespace subsize;

namespace {

using Z = IntegerGroup;
using I64 = std::int64_t;

struct Outcome
{
  bool pass = false;
  std::string detail;
};

int failures = 0;

void criterion(int id, const char *title, double limit_s, const std::function<Outcome()> &body)
{
  auto t0 = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception &e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  bool in_time = secs < limit_s;
  bool pass = o.pass && in_time;
  failures += !pass;
  std::printf("criterion %2d %s  %-38s %7.2fs (limit %.0fs)  %s%s\n", id, pass ? "PASS" : "FAIL", title, secs,
              limit_s, o.detail.c_str(), in_time ? "" : " [over time limit]");
  std::fflush(stdout);
}

// ---------------------------------------------------------------- 1

template<Group G>
std::string group_laws(const G &g, std::mt19937_64 &rng)
{
  for (int t = 0; t < 10000; ++t) {
    auto a = gen::random_element(g, rng), b = gen::random_element(g, rng), c = gen::random_element(g, rng);
    if (!(g.op(g.op(a, b), c) == g.op(a, g.op(b, c))))
      return "associativity";
    if (!(g.op(a, g.identity()) == a) || !(g.op(g.identity(), a) == a))
      return "identity";
    if (!(g.op(a, g.inv(a)) == g.identity()) || !(g.op(g.inv(a), a) == g.identity()))
      return "inverse";
  }
  auto big = g.enumerate(10000);
  auto small = g.enumerate(5000);
  if (big.size() != 10000)
    return "size";
  std::unordered_set<element_t<G>, typename G::hash> seen(big.begin(), big.end());
  if (seen.size() != big.size())
    return "injective";
  if (!std::equal(small.begin(), small.end(), big.begin()))
    return "prefix";
  return "";
}

Outcome c1()
{
  std::mt19937_64 rng(1);
  std::string bad;
  bad += group_laws(IntegerGroup{}, rng);
  bad += group_laws(FreeGroup{2}, rng);
  bad += group_laws(FreeGroup{3}, rng);
  bad += group_laws(BooleanSum{}, rng);
  bad += group_laws(FinPerm{}, rng);
  return {bad.empty(), bad.empty() ? "5 groups, 1e4 triples each, enumeration to 1e4" : "violated: " + bad};
}

// ---------------------------------------------------------------- 2

Outcome c2()
{
  auto ctx = make_context(Z{});
  const double densities[] = {0.002, 0.01, 0.03, 0.05, 0.08, 0.12, 0.2, 0.35, 0.5};
  auto translators = thin_translators(ctx);
  std::size_t agree = 0, thin_holds = 0;
  std::string first_bad;
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    auto A = spec::builtin<I64>("random", {{"seed", seed}, {"density", densities[seed % 9]}});
    auto t = check_thin(ctx, A, 2000);
    auto n1 = check_n_thin(ctx, A, 1, 2000, translators);
    thin_holds += t.holds();
    if (t.verdict == n1.verdict)
      ++agree;
    else if (first_bad.empty())
      first_bad = " first disagreement at seed " + std::to_string(seed);
  }
  return {agree == 200, std::to_string(agree) + "/200 agree (" + std::to_string(thin_holds) + " thin)" + first_bad};
}

// ---------------------------------------------------------------- 3

/// Naive oracle: some n nonzero shifts c_1..c_n with
/// |{y ∈ S : y + c_i ∈ S for all i}| >= need.
bool naive_stripe(const std::set<I64> &S, I64 N, std::size_t n, std::size_t need)
{
  constexpr std::size_t B = 512;
  auto bit = [&](I64 v) { return static_cast<std::size_t>(v + 256); };
  std::bitset<B> s;
  for (auto v : S)
    s.set(bit(v));
  if (n == 0)
    return S.size() >= need;
  std::vector<std::bitset<B>> shifted;
  for (I64 c = -N; c <= N; ++c) {
    if (c == 0)
      continue;
    std::bitset<B> m;
    for (auto y : S)
      if (S.count(y + c))
        m.set(bit(y));
    if (m.count() >= need)
      shifted.push_back(m);
  }
  std::function<bool(std::size_t, std::size_t, const std::bitset<B> &)> rec =
    [&](std::size_t from, std::size_t left, const std::bitset<B> &acc) {
      if (acc.count() < need)
        return false;
      if (left == 0)
        return true;
      for (std::size_t k = from; k < shifted.size(); ++k)
        if (rec(k + 1, left - 1, acc & shifted[k]))
          return true;
      return false;
    };
  return rec(0, n, s);
}

Outcome c3()
{
  auto ctx = make_context(Z{});
  std::mt19937_64 rng(3);
  const std::size_t windows[] = {60, 100, 150, 200};
  const double densities[] = {0.1, 0.2, 0.3, 0.45, 0.6};
  std::size_t agree = 0, stripes = 0;
  std::string first_bad;
  for (int t = 0; t < 100; ++t) {
    std::size_t N = windows[rng() % 4];
    std::size_t n = 1 + rng() % 3;
    auto A = spec::builtin<I64>("random", {{"seed", rng() % 100000}, {"density", densities[rng() % 5]}});
    auto s = materialize(A, ctx, N);
    std::set<I64> S(s.elements().begin(), s.elements().end());
    bool oracle_stripe = naive_stripe(S, static_cast<I64>(N), n, ctx.thresholds.tau_inf);
    auto r = check_n_thin(ctx, A, n, N);
    stripes += oracle_stripe;
    bool ok = oracle_stripe ? r.verdict == Verdict::Fails : r.verdict == Verdict::Holds;
    if (ok)
      ++agree;
    else if (first_bad.empty())
      first_bad = " first disagreement at case " + std::to_string(t) + " (" + to_string(r.verdict) + ")";
  }
  return {agree == 100,
          std::to_string(agree) + "/100 agree (" + std::to_string(stripes) + " with a stripe)" + first_bad};
}

// ---------------------------------------------------------------- 4

Outcome c4()
{
  auto ctx = make_context(Z{});
  auto w = construct_sparse_witness(ctx, 4, 8, 1);
  std::string bad;
  for (std::size_t n = 1; n <= 4; ++n) {
    auto r = find_stripe(ctx, spec::explicit_set<I64>(w.level(ctx.group(), n)), n + 1, 5000);
    if (!r.holds() || r.certificate["Y"].size() < 8)
      bad += " stripe(" + std::to_string(n) + ")";
  }
  auto F = ctx.universe->window(10);
  auto lemma = verify_lemma31(ctx, w, F);
  if (!lemma.holds())
    bad += " lemma";
  std::mt19937_64 rng(4);
  std::vector<SampleSet<Z>> samples;
  for (int s = 0; s < 20; ++s) {
    std::set<std::uint64_t> idx;
    while (idx.size() < 10)
      idx.insert(rng() % 5000);
    samples.emplace_back(ctx.universe, 5000, std::vector<std::uint64_t>(idx.begin(), idx.end()));
  }
  if (!check_sparse(ctx, spec::explicit_set<I64>(w.all(ctx.group())), samples, 5000).holds())
    bad += " sparse";
  if (!verify_sparse_conditions(ctx, w).holds())
    bad += " conditions";
  return {bad.empty(), bad.empty() ? "stripes n=1..4, lemma (least K stage " +
                                       lemma.certificate["least_K_stage"].dump() +
                                       "), 20 samples, conditions (1)-(4)"
                                   : "failed:" + bad};
}

// ---------------------------------------------------------------- 5

Outcome c5()
{
  auto ctx = make_context(Z{});
  auto w = construct_thin_unbounded_rect(ctx, 4, 1);
  auto A = spec::explicit_set<I64>(w.all(ctx.group()));
  std::string bad;
  for (std::size_t n = 1; n <= 4; ++n)
    if (!find_rectangle(ctx, A, n, n, 4000).holds())
      bad += " rect(" + std::to_string(n) + ")";
  if (!check_thin(ctx, A, 4000, 20).holds())
    bad += " thin";
  if (check_bounded_rectangles(ctx, A, 4000, 4).verdict != Verdict::Fails)
    bad += " bounded";
  if (!verify_rect_conditions(ctx, w).holds())
    bad += " conditions";
  return {bad.empty(), bad.empty() ? "(n,n)-rectangles n<=4, thin over 20 translators, BR fails to 4" : "failed:" + bad};
}

// ---------------------------------------------------------------- 6

Outcome c6()
{
  auto f = construct_transposition_family(64, 6);
  FinPerm p;
  bool conj = true;
  for (std::size_t k = 0; k < f.W1.size(); ++k)
    conj = conj && p.op(p.op(f.h, f.T[f.W1[k]]), f.h) == f.T[f.phi[k]];
  bool invol = p.op(f.h, f.h) == p.identity();
  std::mt19937_64 rng(6);
  std::size_t worst = 0, sampled = 0;
  while (sampled < 1000) {
    auto g = gen::random_element(p, rng);
    if (g == p.identity())
      continue;
    ++sampled;
    worst = std::max(worst, translate_overlap(f, g));
  }
  std::size_t pair = translate_overlap(f, p.op(f.T[0], f.T[1]));
  return {conj && invol && worst <= 1,
          "conjugation " + std::string(conj ? "ok" : "BROKEN") + ", h^2=e " + (invol ? "ok" : "BROKEN") +
            ", max |gT∩T| over 1000 samples = " + std::to_string(worst) +
            " (unsampled g=f0*f1 gives " + std::to_string(pair) + ")"};
}

// ---------------------------------------------------------------- 7

Outcome c7()
{
  auto ctx = make_context(BooleanSum{});
  auto m1 = bounded_supt_scatter_demo(ctx, 1, 3, 256);
  auto m2 = bounded_supt_scatter_demo(ctx, 2, 3, 256);
  auto all = find_ps_fp_prefix(ctx, spec::builtin<Support>("all"), 3, 256);
  bool witness_ok = all.holds() &&
                    verify_fp(materialize(spec::builtin<Support>("all"), ctx, 256),
                              fp_from_json(ctx.group(), all.certificate));
  bool ok = m1.verdict == Verdict::Exhausted && m2.verdict == Verdict::Exhausted && witness_ok;
  return {ok, std::string("m=1 ") + to_string(m1.verdict) + ", m=2 " + to_string(m2.verdict) +
                ", unrestricted " + to_string(all.verdict)};
}

// ---------------------------------------------------------------- 8

Outcome c8()
{
  auto ctx = make_context(Z{});
  auto sq = demo_product_not_sparse(ctx, spec::builtin<I64>("squares"), 2000);
  auto ev = demo_product_not_sparse(ctx, spec::builtin<I64>("evens"), 200);
  bool ok = sq.holds() && ev.holds();
  return {ok, "squares (N=2000): " + std::string(to_string(sq.verdict)) + ", evens (N=200): " +
                to_string(ev.verdict) + ", subsets per run " + sq.certificate["subsets_checked"].dump()};
}

// ---------------------------------------------------------------- 9

Outcome c9()
{
  auto one = bipartite_ramsey(1, 5);
  auto two = bipartite_ramsey(2, 5);
  bool ok = one.certificate["r"] == 1 && two.certificate["r"] == 5;
  auto c = coloring_from_json(two.certificate["extremal"]);
  ok = ok && c.size == 4 && verify_avoiding(c, 2);
  return {ok, "r(1)=" + one.certificate["r"].dump() + ", r(2)=" + two.certificate["r"].dump() +
                ", extremal " + std::to_string(c.size) + "x" + std::to_string(c.size) + " verified"};
}

// ---------------------------------------------------------------- 10

bool oracle_is_ideal(const std::vector<std::set<int>> &fam)
{
  std::set<std::set<int>> F(fam.begin(), fam.end());
  if (F.empty())
    return false;
  for (const auto &a : F) {
    if (a.empty() || a.size() == 6)
      return false;
    for (const auto &b : F) {
      auto u = a;
      u.insert(b.begin(), b.end());
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

Outcome c10()
{
  std::mt19937_64 rng(10);
  std::size_t agree = 0, valid = 0;
  for (int t = 0; t < 100; ++t) {
    std::vector<std::uint32_t> fam;
    if (t % 2 == 0) {
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
    bool expect = oracle_is_ideal(sets);
    valid += expect;
    agree += finite_universe_ideal_check(6, fam).holds() == expect;
  }
  auto ctx = make_context(BooleanSum{});
  IdealSpec<BooleanSum> I;
  I.generators.push_back(spec::builtin<Support>("supt-eq", {{"m", 1}}));
  I.group_ideal = true;
  I.finite_sets = true;
  auto S = spec::builtin<Support>("supt-le", {{"m", 2}});
  auto r = ideal_member(ctx, I, S, 256);
  bool cert = r.holds() && r.certificate["depth"] == 1 && replay_certificate(ctx, I, S, r.certificate);
  return {agree == 100 && cert, std::to_string(agree) + "/100 families agree (" + std::to_string(valid) +
                                  " ideals); supt<=2 certificate " + (cert ? "replays at depth 1" : "FAILED")};
}

// ---------------------------------------------------------------- 11

json without_workers(json j)
{
  j = strip_nondeterministic(std::move(j));
  j.erase("thresholds");
  for (auto &e : j["results"])
    e.erase("thresholds");
  return j;
}

Outcome c11()
{
  const std::string dir = SUBSIZE_CONFIG_DIR;
  std::size_t runs = 0;
  std::string bad;
  for (const char *name : {"integers_basic.json", "sparse_witness.json", "boolean_scatter.json"}) {
    auto cfg = read_json_file(dir + "/" + name);
    std::string reference;
    for (std::size_t workers : {1, 2, 4}) {
      cfg["thresholds"]["workers"] = workers;
      for (int rep = 0; rep < 2; ++rep) {
        auto r = run_config(cfg);
        ++runs;
        auto key = without_workers(r.report).dump();
        if (reference.empty())
          reference = key;
        else if (key != reference)
          bad += std::string(" ") + name;
      }
    }
  }
  auto build = read_json_file(dir + "/construct_rect.json");
  if (construct_from_config(build).report.dump() != construct_from_config(build).report.dump())
    bad += " construct_rect.json";
  return {bad.empty(), bad.empty() ? std::to_string(runs) + " config runs identical across repeats and workers 1/2/4"
                                   : "differs:" + bad};
}

} // namespace

int main()
{
  criterion(1, "group laws and enumeration", 10, c1);
  criterion(2, "thin vs n-thin(1) cross-validation", 30, c2);
  criterion(3, "stripe semantics vs naive oracle", 600, c3);
  criterion(4, "sparse, not finitely thin witness", 60, c4);
  criterion(5, "thin witness with unbounded rectangles", 60, c5);
  criterion(6, "transposition family", 10, c6);
  criterion(7, "bounded support has no shifted FP-set", 120, c7);
  criterion(8, "AA is not sparse", 30, c8);
  criterion(9, "bipartite Ramsey oracle", 600, c9);
  criterion(10, "ideal axioms and group-ideal certificate", 10, c10);
  criterion(11, "determinism", 600, c11);
  std::printf("%d of 11 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
