#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "roughiso/api.hpp"
#include "roughiso/cli.hpp"
#include "roughiso/construct.hpp"
#include "roughiso/experiments.hpp"
#include "roughiso/io.hpp"

using namespace roughiso;
namespace fs = std::filesystem;

namespace {

struct CliRun {
  int code;
  std::string out, err;
};

CliRun cli(std::vector<std::string> args) {
  args.insert(args.begin(), "roughiso");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

class TempDir {
 public:
  TempDir() {
    path_ = fs::temp_directory_path() /
            ("roughiso_cli_" + std::to_string(::testing::UnitTest::GetInstance()->random_seed()) + "_" +
             ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::create_directories(path_);
  }
  ~TempDir() { fs::remove_all(path_); }
  [[nodiscard]] std::string file(const std::string& name) const { return (path_ / name).string(); }
  [[nodiscard]] std::string write(const std::string& name, const std::string& body) const {
    std::ofstream(file(name)) << body;
    return file(name);
  }

 private:
  fs::path path_;
};

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST(Cli, NoArgumentsIsUsageError) { EXPECT_EQ(cli({}).code, kExitUsage); }

TEST(Cli, HelpExitsZero) { EXPECT_EQ(cli({"--help"}).code, kExitOk); }

TEST(Cli, UnknownSubcommandIsUsageError) { EXPECT_EQ(cli({"frobnicate"}).code, kExitUsage); }

TEST(Cli, MissingFileIsUsageError) {
  const CliRun r = cli({"verify", "--kind", "rough", "--instance", "/nonexistent/instance.json"});
  EXPECT_EQ(r.code, kExitUsage);
  EXPECT_NE(r.err.find("error"), std::string::npos);
}

TEST(Cli, MalformedJsonIsUsageError) {
  TempDir dir;
  const std::string p = dir.write("bad.json", "{\"A\": [0, 1");
  EXPECT_EQ(cli({"lattice", "--instance", p, "--M", "2", "--D", "1", "--R", "1"}).code, kExitUsage);
}

TEST(Cli, ConstructMatchesLibrary) {
  const CliRun r = cli({"construct", "--n", "512", "--seed", "7"});
  ASSERT_LE(r.code, kExitDomainFailure) << r.err;
  const Json doc = Json::parse(r.out);
  EXPECT_EQ(doc, api::construct(Json{{"n", 512}, {"seed", 7}}).doc);
  const Params p = default_params(512);
  const BuildResult direct = build_ri(p, trial_seed(7, 0));
  EXPECT_EQ(doc.at("success").get<bool>(), direct.success);
  EXPECT_EQ(r.code == kExitOk, direct.success);
  if (direct.success) EXPECT_EQ(doc.at("T").at("image").get<std::vector<Coord>>(), direct.T.image);
}

TEST(Cli, ConstructIsByteDeterministic) {
  const CliRun a = cli({"construct", "--n", "4096", "--seed", "3"});
  const CliRun b = cli({"construct", "--n", "4096", "--seed", "3"});
  EXPECT_EQ(a.out, b.out);
  EXPECT_NE(a.out, cli({"construct", "--n", "4096", "--seed", "4"}).out);
}

TEST(Cli, ConstructOutWritesMappingAndStages) {
  TempDir dir;
  const std::string path = dir.file("run.json");
  const CliRun r = cli({"construct", "--n", "512", "--seed", "1", "--out", path});
  ASSERT_LE(r.code, kExitDomainFailure) << r.err;
  const Json full = Json::parse(slurp(path));
  const Json summary = Json::parse(r.out);
  EXPECT_FALSE(summary.contains("T"));
  EXPECT_EQ(full.at("stages"), summary.at("stages"));
  std::istringstream stages(slurp(path + ".stages.ndjson"));
  std::string line;
  std::size_t n = 0;
  while (std::getline(stages, line)) {
    EXPECT_EQ(Json::parse(line), full.at("stages").at(n));
    ++n;
  }
  EXPECT_EQ(n, full.at("stages").size());
}

TEST(Cli, VerifyRoundTripsConstructOutput) {
  TempDir dir;
  // Find a seed whose construction succeeds.
  for (int seed = 0; seed < 20; ++seed) {
    const CliRun r = cli({"construct", "--n", "512", "--seed", std::to_string(seed)});
    if (r.code != kExitOk) continue;
    const std::string path = dir.write("run.json", r.out);
    for (const char* kind : {"rough", "rooted", "increasing", "markov"}) {
      const CliRun v = cli({"verify", "--kind", kind, "--instance", path});
      EXPECT_EQ(v.code, kExitOk) << kind << ": " << v.out << v.err;
      EXPECT_TRUE(Json::parse(v.out).at("ok").get<bool>());
    }
    return;
  }
  FAIL() << "no successful construction in 20 seeds";
}

TEST(Cli, VerifyViolationExitsOne) {
  TempDir dir;
  const std::string p = dir.write(
      "inst.json", R"({"A": [0, 1], "B": [0, 5], "T": {"domain": [0, 1], "codomain": [0, 5], "image": [0, 5]}})");
  const CliRun r = cli({"verify", "--kind", "markov", "--instance", p, "--M", "4", "--F", "0", "--R", "0"});
  EXPECT_EQ(r.code, kExitDomainFailure) << r.err;
  const Json doc = Json::parse(r.out);
  EXPECT_EQ(doc.at("schema"), kSchemaVerdict);
  EXPECT_FALSE(doc.at("ok").get<bool>());
  EXPECT_EQ(doc.at("violation").at("kind"), "AdjacencyDistortion");
  EXPECT_EQ(cli({"verify", "--kind", "markov", "--instance", p, "--M", "5", "--F", "0", "--R", "0"}).code, kExitOk);
}

TEST(Cli, VerifyRejectsBothFAndD) {
  TempDir dir;
  const std::string p = dir.write(
      "inst.json", R"({"A": [0, 1], "B": [0, 5], "T": {"domain": [0, 1], "codomain": [0, 5], "image": [0, 5]}})");
  EXPECT_EQ(cli({"verify", "--kind", "rough", "--instance", p, "--M", "5", "--F", "0", "--D", "0", "--R", "0"}).code,
            kExitUsage);
}

TEST(Cli, OracleMatchesLibrary) {
  TempDir dir;
  const std::string p = dir.write("inst.json", R"({"A": [0, 1], "B": [0, 5]})");
  const CliRun hit = cli({"oracle", "exists-markov", "--instance", p, "--M", "5", "--F", "0", "--R", "0"});
  EXPECT_EQ(hit.code, kExitOk);
  const Json req{{"op", "exists-markov"},
                 {"instance", {{"A", {0, 1}}, {"B", {0, 5}}}},
                 {"constants", {{"M", "5"}, {"F", "0"}, {"R", "0"}}}};
  EXPECT_EQ(Json::parse(hit.out), api::oracle(req).doc);
  EXPECT_EQ(cli({"oracle", "exists-markov", "--instance", p, "--M", "4", "--F", "0", "--R", "0"}).code,
            kExitDomainFailure);
  const CliRun m = cli({"oracle", "minimal-M", "--instance", p, "--family", "markov", "--F", "0", "--R", "0"});
  EXPECT_EQ(m.code, kExitOk);
  EXPECT_EQ(Json::parse(m.out).at("M"), "5");
}

TEST(Cli, CounterexampleMatchesGolden) {
  const CliRun r = cli({"oracle", "counterexample", "--L", "2", "--max-value", "64"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  std::ifstream in(std::string(ROUGHISO_SOURCE_DIR) + "/corpus/v1/counterexample_L2.json");
  Json golden = Json::parse(in);
  golden.erase("L");
  golden.erase("generated_by");
  EXPECT_EQ(Json::parse(r.out), golden);
}

TEST(Cli, BudgetExhaustionIsDomainFailure) {
  TempDir dir;
  const std::string p = dir.write("inst.json", R"({"A": [0, 1, 2, 3, 4, 5], "B": [0, 1, 2, 3, 4, 5]})");
  const CliRun r = cli({"oracle", "exists-general", "--instance", p, "--M", "1", "--D", "0", "--R", "0",
                     "--max-nodes", "2"});
  EXPECT_EQ(r.code, kExitDomainFailure);
  EXPECT_EQ(Json::parse(r.out).at("error"), "BudgetExceeded");
}

TEST(Cli, LatticeWithFkg) {
  TempDir dir;
  const std::string p = dir.write("inst.json", R"({"A": [0, 1, 2, 3], "B": [0, 1, 2, 3]})");
  const CliRun r = cli({"lattice", "--instance", p, "--M", "2", "--D", "1", "--R", "1", "--fkg"});
  EXPECT_EQ(r.code, kExitOk) << r.err;
  const Json doc = Json::parse(r.out);
  EXPECT_EQ(doc.at("schema"), kSchemaLattice);
  EXPECT_TRUE(doc.at("fkg_ok").get<bool>());
}

TEST(Cli, SampleAndDecompose) {
  TempDir dir;
  const CliRun s = cli({"sample", "--process", "bernoulli", "--n", "300", "--seed", "2"});
  ASSERT_EQ(s.code, kExitOk) << s.err;
  const Json pts = Json::parse(s.out);
  EXPECT_EQ(pts.at("schema"), kSchemaPointSet);
  EXPECT_EQ(pts.at("points").size(), 300u);
  EXPECT_EQ(s.out, cli({"sample", "--process", "bernoulli", "--n", "300", "--seed", "2"}).out);
  const std::string path = dir.write("pts.json", s.out);
  const CliRun d = cli({"decompose", "--input", path, "--M", "2", "--K", "2"});
  EXPECT_EQ(d.code, kExitOk) << d.err;
  EXPECT_EQ(Json::parse(d.out).at("schema"), kSchemaDecomposition);
}

TEST(Cli, ExperimentFilesAreReproducible) {
  TempDir dir;
  const std::string spec = dir.write("spec.json", R"({"name": "dominance", "trials": 3000, "seed": 4})");
  const CliRun a = cli({"experiment", "run", spec, "--out", dir.file("a"), "--jobs", "1"});
  const CliRun b = cli({"experiment", "run", spec, "--out", dir.file("b"), "--jobs", "2"});
  EXPECT_EQ(a.code, kExitOk) << a.err;
  EXPECT_EQ(a.out, b.out);
  EXPECT_EQ(slurp(dir.file("a.ndjson")), slurp(dir.file("b.ndjson")));
  EXPECT_EQ(slurp(dir.file("a.csv")), slurp(dir.file("b.csv")));
  EXPECT_EQ(a.out, slurp(dir.file("a.ndjson")));
}
