#include <gtest/gtest.h>

#include "subsize/runner.hpp"

using namespace subsize;

namespace {

json trivial_config()
{
  return {{"group", "integers"},
          {"window", 50},
          {"subsets", {{"E", "evens"}}},
          {"checks", json::array({{{"checker", "large"}, {"subset", "E"}, {"expect", "holds"}}})}};
}

json witness_config(std::size_t workers)
{
  return {{"group", "integers"},
          {"seed", 3},
          {"window", 2000},
          {"thresholds", {{"workers", workers}}},
          {"constructions", {{"W", {{"kind", "sparse"}, {"n_max", 3}, {"reps_per_level", 8}}}}},
          {"subsets", {{"A", {{"kind", "constructed"}, {"id", "W"}}}, {"R", {{"kind", "builtin"}, {"name", "random"}, {"params", {{"seed", 5}, {"density", 0.3}}}}}}},
          {"checks", json::array({{{"checker", "witness-conditions"}, {"construction", "W"}, {"expect", "holds"}},
                                  {{"checker", "sparse"}, {"subset", "A"}, {"expect", "holds"}},
                                  {{"checker", "stripe"}, {"subset", "R"}, {"params", {{"n", 3}}}},
                                  {{"checker", "rectangle"}, {"subset", "R"}, {"params", {{"n", 3}, {"m", 3}}}}})}};
}

} // namespace

TEST(Runner, TrivialConfig)
{
  auto r = run_config(trivial_config());
  EXPECT_EQ(r.exit_code, kExitOk) << r.summary;
  EXPECT_EQ(r.report["schema"], kReportSchema);
  ASSERT_EQ(r.report["results"].size(), 1U);
  EXPECT_TRUE(r.report["results"][0]["matched"].get<bool>());
  EXPECT_TRUE(r.report.contains("timestamp"));
}

TEST(Runner, ConfigErrors)
{
  auto cfg = trivial_config();
  cfg["group"] = "Zp";
  EXPECT_EQ(run_config(cfg).exit_code, kExitConfig);
  cfg = trivial_config();
  cfg["checks"][0]["checker"] = "tall";
  EXPECT_EQ(run_config(cfg).exit_code, kExitConfig);
  cfg = trivial_config();
  cfg["subsets"]["E"] = "no-such-builtin";
  EXPECT_EQ(run_config(cfg).exit_code, kExitConfig);
  cfg = trivial_config();
  cfg["checks"][0]["subset"] = "missing";
  EXPECT_EQ(run_config(cfg).exit_code, kExitConfig);
  cfg = trivial_config();
  cfg["checks"][0]["expect"] = "maybe";
  EXPECT_EQ(run_config(cfg).exit_code, kExitConfig);
  cfg = witness_config(1);
  cfg.erase("seed");
  EXPECT_EQ(run_config(cfg).exit_code, kExitConfig);
}

TEST(Runner, MismatchAndStall)
{
  auto cfg = trivial_config();
  cfg["checks"][0]["expect"] = "fails";
  auto r = run_config(cfg);
  EXPECT_EQ(r.exit_code, kExitMismatch);
  EXPECT_FALSE(r.report["results"][0]["matched"].get<bool>());

  auto stall = witness_config(1);
  stall["constructions"]["W"]["scan_budget"] = 3;
  auto s = run_config(stall);
  EXPECT_EQ(s.exit_code, kExitMismatch);
  EXPECT_TRUE(s.report["results"][0].contains("error"));
  EXPECT_TRUE(s.report["constructions"]["W"].contains("error"));
}

TEST(Runner, DeterministicAcrossRunsAndWorkers)
{
  auto a = run_config(witness_config(1));
  auto b = run_config(witness_config(1));
  auto c = run_config(witness_config(4));
  ASSERT_EQ(a.exit_code, kExitOk) << a.summary;
  EXPECT_EQ(strip_nondeterministic(a.report).dump(), strip_nondeterministic(b.report).dump());
  auto ca = strip_nondeterministic(a.report);
  auto cc = strip_nondeterministic(c.report);
  ca.erase("thresholds");
  cc.erase("thresholds");
  for (auto *j : {&ca, &cc})
    for (auto &e : (*j)["results"])
      e.erase("thresholds");
  EXPECT_EQ(ca.dump(), cc.dump());
}

TEST(Runner, ConstructAndVerify)
{
  json cfg = {{"group", "integers"}, {"seed", 1}, {"construct", {{"kind", "sparse"}, {"n_max", 3}, {"reps_per_level", 8}}}};
  auto built = construct_from_config(cfg);
  ASSERT_EQ(built.exit_code, kExitOk) << built.summary;
  auto again = construct_from_config(cfg);
  EXPECT_EQ(built.report.dump(), again.report.dump());

  auto ok = verify_witness(built.report);
  EXPECT_EQ(ok.exit_code, kExitOk) << ok.summary;
  EXPECT_EQ(ok.report["results"][0]["verdict"], "holds");

  // move x_{2,1} next to x_{2,0}: their translate blocks now meet
  auto broken = built.report;
  auto x20 = broken["levels"][2]["x"][0].get<std::int64_t>();
  broken["levels"][2]["x"][1] = x20 + 1;
  auto bad = verify_witness(broken);
  EXPECT_EQ(bad.exit_code, kExitMismatch);
  bool saw4 = false;
  for (const auto &v : bad.report["results"][0]["certificate"]["violations"])
    if (v["condition"] == 4) {
      saw4 = true;
      EXPECT_EQ(v["i"], 0);
      EXPECT_EQ(v["j"], 1);
    }
  EXPECT_TRUE(saw4) << bad.summary;

  auto truncated = built.report;
  truncated.erase("levels");
  EXPECT_EQ(verify_witness(truncated).exit_code, kExitConfig);
  EXPECT_EQ(verify_witness(json::array()).exit_code, kExitConfig);

  json checks = {{"window", 1000},
                 {"checks", json::array({{{"checker", "sparse"}, {"subset", "witness"}, {"expect", "holds"}}})}};
  auto with = verify_witness(built.report, checks, Overrides{std::nullopt, 9});
  EXPECT_EQ(with.exit_code, kExitOk) << with.summary;
  EXPECT_EQ(with.report["results"].size(), 2U);
}

TEST(Runner, TranspositionAndRamseyChecks)
{
  json cfg = {{"group", "fin-perm"},
              {"seed", 2},
              {"window", 24},
              {"constructions", {{"T", {{"kind", "transposition"}, {"m", 8}}}}},
              {"checks", json::array({{{"checker", "transposition-family"}, {"construction", "T"}, {"expect", "holds"}},
                                      {{"checker", "bipartite-ramsey"}, {"params", {{"n", 2}, {"r_max", 3}}}, {"expect", "exhausted"}}})}};
  auto r = run_config(cfg);
  EXPECT_EQ(r.exit_code, kExitOk) << r.summary;
}
