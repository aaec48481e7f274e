#include <gtest/gtest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli.hpp"

namespace mo = multiorder;
namespace fs = std::filesystem;
using multiorder::io::Json;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
  Json json() const { return Json::parse(out); }
};

Result run(std::vector<std::string> args) {
  args.insert(args.begin(), "multiorder");
  std::ostringstream out, err;
  const int code = mo::cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() / ("multiorder_cli_" + std::to_string(::getpid()));
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string write(const std::string& name, const std::string& text) {
    const fs::path p = dir_ / name;
    std::ofstream(p) << text;
    return p.string();
  }

  std::string dense_pair() {
    return write("pair.json", R"({"rank":2,"orders":[
      {"rank":2,"forms":[["1",{"terms":[{"radicand":"2","coeff":"1"}]}]]},
      {"rank":2,"forms":[[{"terms":[{"radicand":"3","coeff":"1"}]},"1"]]}]})");
  }

  fs::path dir_;
};

}  // namespace

TEST_F(Cli, BuildMatrixMatchesTheSqrt2Family) {
  const auto r = run({"build-matrix", "--m", "2", "--seed", "0", "--json"});
  ASSERT_EQ(r.code, 0) << r.err;
  const Json j = r.json();
  EXPECT_EQ(j["schema"], 1);
  EXPECT_EQ(j["verified"], true);
  const auto a = mo::io::matrix_from_json(j);
  const auto root2 = mo::FieldScalar::sqrt_of(std::make_shared<const mo::RadicalBasis>(std::vector<std::uint64_t>{2}), 2);
  EXPECT_EQ(a.rows[0][0], mo::FieldScalar(1));
  EXPECT_EQ(a.rows[0][1], root2);
  EXPECT_EQ(a.rows[1][0], -root2);
  EXPECT_EQ(a.rows[1][1], mo::FieldScalar(1));
}

TEST_F(Cli, RefuteVerifyAndWitnessOnEmptyConstraints) {
  const auto orders = dense_pair();
  const auto r = run({"refute", "--orders", orders});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.json()["lemma"], "SmallVolume");
  const auto cert = write("cert.json", r.out);
  EXPECT_EQ(run({"verify-cert", "--orders", orders, "--cert", cert}).code, 0);
  const auto w = run({"witness", "--multiorder", orders, "--constraints", cert});
  EXPECT_EQ(w.code, 3);
  EXPECT_TRUE(w.json()["point"].is_null());
}

TEST_F(Cli, TamperedCertificateExits4) {
  const auto orders = dense_pair();
  Json cert = run({"refute", "--orders", orders}).json();
  cert["constraints"][0]["upper"] = "+inf";
  const auto v = run({"verify-cert", "--orders", orders, "--cert", write("bad.json", cert.dump())});
  EXPECT_EQ(v.code, 4);
  EXPECT_EQ(v.json()["valid"], false);
  cert["lemma"] = "Nonsense";
  EXPECT_EQ(run({"verify-cert", "--orders", orders, "--cert", write("bad2.json", cert.dump())}).code, 4);
}

TEST_F(Cli, FewerOrdersThanRankIsNotAFailure) {
  const auto one = write("one.json", R"({"rank":2,"orders":[{"rank":2,"forms":[["1",{"terms":[{"radicand":"2","coeff":"1"}]}]]}]})");
  const auto r = run({"refute", "--orders", one});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.json()["status"], "NoCertificateFound");
}

TEST_F(Cli, WitnessOnMatrixUsesLineBackend) {
  const auto m = write("m3.json", run({"build-matrix", "--m", "3"}).out);
  const auto cons = write("cons.json", R"({"constraints":[{"lower":[0,0,0],"upper":"+inf"},{"lower":"-inf","upper":[1,0,0]}]})");
  const auto r = run({"witness", "--multiorder", m, "--constraints", cons});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.json()["backend"], "line");
  const auto mo3 = mo::from_matrix(mo::io::matrix_from_json(mo::io::parse(run({"build-matrix", "--m", "3"}).out)));
  const auto point = mo::io::vector_from_json(r.json()["point"]);
  EXPECT_TRUE(mo::satisfies(mo3, mo::io::constraint_from_json(mo::io::parse(R"([{"lower":[0,0,0],"upper":"+inf"},{"lower":"-inf","upper":[1,0,0]}])")), point));
}

TEST_F(Cli, EmbedPatternAmalgamate) {
  const auto m = write("m3.json", run({"build-matrix", "--m", "3"}).out);
  const auto s = write("s.json", R"({"k":3,"n":2,"orders":[[0,1,2],[1,2,0]]})");
  const auto e = run({"embed", "--structure", s, "--multiorder", m});
  ASSERT_EQ(e.code, 0) << e.err;
  EXPECT_EQ(e.json()["verified"], true);
  EXPECT_EQ(run({"pattern", "--structure", s}).json()["pattern"], Json::parse("[2,3,1]"));
  EXPECT_EQ(run({"pattern", "--permutation", "[2,3,1]"}).json()["orders"], Json::parse("[[0,1,2],[1,2,0]]"));
  const auto a = write("a.json", R"({"k":1,"n":1,"orders":[[0]]})");
  const auto b1 = write("b1.json", R"({"k":2,"n":1,"orders":[[0,1]]})");
  const auto b2 = write("b2.json", R"({"k":2,"n":1,"orders":[[1,0]]})");
  const auto am = run({"amalgamate", "--a", a, "--b1", b1, "--b2", b2, "--f1", "[0]", "--f2", "[0]"});
  ASSERT_EQ(am.code, 0) << am.err;
  EXPECT_EQ(am.json()["c"]["k"], 3);
  EXPECT_EQ(run({"amalgamate", "--a", a, "--b1", b1, "--b2", b2, "--f1", "[5]", "--f2", "[0]"}).code, 2);
}

TEST_F(Cli, UsageErrorsExit2) {
  EXPECT_EQ(run({}).code, 2);
  EXPECT_EQ(run({"frobnicate"}).code, 2);
  EXPECT_EQ(run({"build-matrix"}).code, 2);
  EXPECT_EQ(run({"build-matrix", "--m", "1"}).code, 2);
  EXPECT_EQ(run({"refute", "--orders", (dir_ / "missing.json").string()}).code, 2);
  EXPECT_EQ(run({"refute", "--orders", write("junk.json", "{not json")}).code, 2);
  EXPECT_EQ(run({"selftest", "--level", "medium"}).code, 2);
  EXPECT_EQ(run({"--help"}).code, 0);
}

TEST_F(Cli, BudgetExhaustionExits5) {
  const auto cfg = write("cfg.json", R"({"witness_probe_budget":1,"brute_box_schedule":[1]})");
  const auto m = write("m3.json", run({"build-matrix", "--m", "3"}).out);
  // A narrow interval far from the anchor's first probe.
  const auto mo3 = mo::from_matrix(mo::io::matrix_from_json(mo::io::parse(run({"build-matrix", "--m", "3"}).out)));
  const auto e = mo::embed(mo::from_pattern({1, 2, 3, 4, 5, 6}), mo3);
  Json cons = Json::array();
  cons.push_back(mo::io::to_json(mo::Bound{e.image[3], e.image[4]}));
  cons.push_back(mo::io::to_json(mo::Bound{e.image[3], e.image[4]}));
  const auto c = write("narrow.json", Json{{"constraints", cons}}.dump());
  const auto r = run({"--config", cfg, "witness", "--multiorder", m, "--constraints", c});
  if (r.code == 0) GTEST_SKIP() << "first probe already inside";
  EXPECT_EQ(r.code, 5) << r.err;
}

TEST_F(Cli, OutputIsDeterministic) {
  const auto orders = dense_pair();
  for (const auto& args : std::vector<std::vector<std::string>>{
           {"build-matrix", "--m", "4", "--seed", "2"}, {"refute", "--orders", orders}, {"selftest"}}) {
    const auto a = run(args), b = run(args);
    EXPECT_EQ(a.code, 0);
    EXPECT_EQ(a.out, b.out);
  }
}

TEST_F(Cli, SelftestQuickPasses) {
  const auto r = run({"selftest", "--level", "quick"});
  EXPECT_EQ(r.code, 0) << r.out;
  EXPECT_EQ(r.json()["passed"], true);
}

TEST_F(Cli, PrecisionCapFromEnvironment) {
  setenv("MULTIORDER_PRECISION_CAP", "16", 1);
  EXPECT_EQ(run({"build-matrix", "--m", "2"}).code, 2);
  unsetenv("MULTIORDER_PRECISION_CAP");
  mo::set_precision_cap(mo::kDefaultPrecisionCap);
}
