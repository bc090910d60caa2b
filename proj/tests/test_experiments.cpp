#include <gtest/gtest.h>

#include <sstream>

#include "roughiso/errors.hpp"
#include "roughiso/experiments.hpp"
#include "roughiso/verify.hpp"

using namespace roughiso;

namespace {

// Small grids so every experiment runs in well under a second.
std::vector<Json> small_specs() {
  return {
      Json{{"name", "success_curve"}, {"trials", 20}, {"grid", {{"n_list", {512, 4096}}}}},
      Json{{"name", "red_segment_tails"}, {"trials", 400}, {"grid", {{"M", 3}, {"K", 2}}}},
      Json{{"name", "comb_tails"},
           {"trials", 300},
           {"grid", {{"M", 8}, {"m_values", {1, 2}}, {"s_values", {3, 6}}, {"a_values", {1.0, 4.0}}}}},
      Json{{"name", "e0_and_ew"}, {"trials", 2000}, {"grid", {{"L_values", {16, 64}}, {"ew_trials", 500}}}},
      Json{{"name", "baseline_comparison"}, {"trials", 20}, {"grid", {{"n_list", {512}}}}},
      Json{{"name", "optimality_event"}, {"trials", 2000}, {"grid", {{"conditioned", 3}}}},
      Json{{"name", "dominance"}, {"trials", 2000}},
      Json{{"name", "block_laws"}, {"trials", 500}, {"grid", {{"M", 3}, {"K", 2}}}},
      Json{{"name", "coupling_windows"}, {"trials", 50}},
  };
}

std::size_t line_count(const std::string& s) {
  std::size_t n = 0;
  for (char c : s) n += c == '\n';
  return n;
}

}  // namespace

TEST(Experiments, OutputIndependentOfJobs) {
  for (Json spec : small_specs()) {
    spec["seed"] = 9;
    spec["jobs"] = 1;
    const Report one = run_experiment(spec);
    spec["jobs"] = 3;
    const Report three = run_experiment(spec);
    EXPECT_EQ(to_ndjson(one, false), to_ndjson(three, false)) << spec["name"];
    EXPECT_EQ(to_csv(one, false), to_csv(three, false)) << spec["name"];
    EXPECT_EQ(one.pass, three.pass) << spec["name"];
  }
}

TEST(Experiments, CellsAccountForEveryTrial) {
  for (Json spec : small_specs()) {
    const Report rep = run_experiment(spec);
    ASSERT_FALSE(rep.cells.empty()) << spec["name"];
    for (const Cell& c : rep.cells) {
      EXPECT_EQ(c.successes + c.failure_total(), c.trials) << spec["name"];
      EXPECT_LE(c.ci95.lo, c.estimate);
      EXPECT_GE(c.ci95.hi, c.estimate);
    }
    EXPECT_EQ(line_count(to_ndjson(rep, false)), rep.cells.size() + 1) << spec["name"];
    EXPECT_EQ(line_count(to_csv(rep, false)), rep.cells.size() + 1) << spec["name"];
  }
}

TEST(Experiments, SeedChangesTheDraws) {
  Json spec = small_specs()[6];
  spec["seed"] = 1;
  const std::string a = to_ndjson(run_experiment(spec), false);
  spec["seed"] = 2;
  EXPECT_NE(a, to_ndjson(run_experiment(spec), false));
}

TEST(Experiments, WallTimeOnlyWhenRequested) {
  const Report rep = run_experiment(small_specs()[6]);
  EXPECT_EQ(to_ndjson(rep, false).find("wall_ms"), std::string::npos);
  EXPECT_NE(to_ndjson(rep, true).find("wall_ms"), std::string::npos);
  EXPECT_EQ(to_csv(rep, false).find("wall_ms"), std::string::npos);
}

TEST(Experiments, SingleTrialMatchesDirectConstruction) {
  for (std::uint64_t seed : {0u, 1u, 5u, 17u}) {
    SuccessCurveOptions o;
    o.trials = 1;
    o.seed = seed;
    o.n_list = {512};
    const Report rep = run_success_curve(o);
    const Params p = default_params(512);
    const BuildResult r = build_ri(p, trial_seed(seed, 0));
    const bool ok = r.success && verify_markov(r.T, p.markov()).ok();
    EXPECT_EQ(rep.cells.at(0).successes, ok ? 1u : 0u) << "seed " << seed;
  }
}

TEST(Experiments, TrialSeedsAreDistinct) {
  EXPECT_NE(trial_seed(0, 0), trial_seed(0, 1));
  EXPECT_NE(trial_seed(0, 0), trial_seed(1, 0));
  EXPECT_EQ(trial_seed(3, 4), trial_seed(3, 4));
}

TEST(Experiments, SplitTeeth) {
  EXPECT_EQ(split_teeth(7, 3), (std::vector<std::int64_t>{3, 2, 2}));
  EXPECT_EQ(split_teeth(6, 3), (std::vector<std::int64_t>{2, 2, 2}));
  EXPECT_EQ(split_teeth(5, 1), (std::vector<std::int64_t>{5}));
}

TEST(Experiments, BadSpecsAreRejected) {
  EXPECT_THROW(run_experiment(Json{{"name", "no_such_experiment"}}), Error);
  EXPECT_THROW(run_experiment(Json{{"name", "dominance"}, {"trials", 0}}), Error);
  EXPECT_THROW(run_experiment(Json{{"trials", 5}}), std::exception);
}

TEST(Experiments, DominanceAndBlockLawsPassAtDefaults) {
  DominanceOptions d;
  d.trials = 20000;
  EXPECT_TRUE(run_dominance(d).pass);
  BlockLawOptions b;
  b.trials = 5000;
  b.M = 4;
  b.K = 2;
  EXPECT_TRUE(run_block_laws(b).pass);
}
