#include <gtest/gtest.h>

#include <cstdio>
#include <fstream>

#include "tpval/cli/cli.hpp"

using namespace tpval;

namespace {

struct Run {
  int code;
  std::string out, err;
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "tpval");
  std::vector<const char*> argv;
  for (auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string data(const std::string& name) { return std::string(TPVAL_DATA_DIR) + "/" + name; }

std::size_t count_lines(const std::string& s, const std::string& prefix) {
  std::istringstream is(s);
  std::string line;
  std::size_t n = 0;
  while (std::getline(is, line)) n += line.rfind(prefix, 0) == 0;
  return n;
}

}  // namespace

TEST(Cli, Extensions) {
  auto r = run({"--format", "lines", "extensions", data("flat_5_13.struct"), data("gaussian.field")});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(count_lines(r.out, "extension="), 4u);
  EXPECT_NE(r.out.find("count=4 field=Q(i)"), std::string::npos);
  auto id = run({"extensions", data("flat_5_13.struct")});
  EXPECT_EQ(id.code, 0);
  EXPECT_NE(id.out.find("count=1"), std::string::npos);
  EXPECT_EQ(run({"extensions", data("flat_5_13.struct"), "--split", "[1,0,0,0,0,0,0,1]"}).code, 3);
  EXPECT_EQ(run({"extensions", data("flat_5_13.struct"), "--split", "[1,0,0,0,0,0,0,1]", "--degree-bound", "7",
                 "--field-degree-bound", "4"})
                .code,
            3);
}

TEST(Cli, Measure) {
  auto r = run({"measure", data("flat_5_13.struct"), data("golden.formula")});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("value=1/2 extensions=4 true=2"), std::string::npos) << r.out;
  auto z8 = run({"measure", data("flat_5_13.struct"), data("golden.formula"), "--over", data("zeta8.field")});
  EXPECT_NE(z8.out.find("value=1/2 extensions=4 true=2 field=Q(zeta8)"), std::string::npos) << z8.out;
  auto taut = run({"--format", "lines", "measure", data("flat_5_13_gauss.struct"), "-e", "0 = 0"});
  EXPECT_EQ(taut.out, "value=1/1 extensions=1 true=1 field=Q(t)\n");
  auto contra = run({"--format", "lines", "measure", data("single_5.struct"), "-e", "1 = 0"});
  EXPECT_EQ(contra.out.rfind("value=0/1 ", 0), 0u);
  auto bound = run({"--format", "lines", "measure", data("single_5.struct"), "-e", "$p - 2 in m[a]", "--bind", "p=7"});
  EXPECT_EQ(bound.out.rfind("value=1/1 ", 0), 0u);
  EXPECT_EQ(run({"measure", data("single_5.struct"), "-e", "$p in O[a]"}).code, 4);
  EXPECT_EQ(run({"measure", data("single_5.struct"), "-e", "x + in O[a]"}).code, 2);
  EXPECT_EQ(run({"measure", data("single_5.struct"), "-e", "0 = 0", "--bind", "p"}).code, 2);
  EXPECT_EQ(run({"measure", data("flat_5_13.struct"), data("golden.formula"), "--over", data("i_sqrt3.field")}).code, 4);
  EXPECT_EQ(run({"measure", data("missing.struct"), "-e", "0 = 0"}).code, 4);
  EXPECT_EQ(run({"measure", data("single_5.struct")}).code, 1);
}

TEST(Cli, Decide) {
  auto five = run({"decide", data("gaussian_5.sentence")});
  ASSERT_EQ(five.code, 0) << five.err;
  EXPECT_EQ(five.out.rfind("consistent=true", 0), 0u);
  EXPECT_NE(five.out.find("witness:"), std::string::npos);
  auto seven = run({"decide", data("gaussian_7.sentence")});
  EXPECT_EQ(seven.out.rfind("consistent=false", 0), 0u);

  std::string path = ::testing::TempDir() + "witness.struct";
  auto golden = run({"decide", data("golden.sentence"), "--witness", path});
  ASSERT_EQ(golden.code, 0);
  auto w = TP0Structure::parse(cli::read_file(path));
  EXPECT_TRUE(evaluate(parse_formula("exists x root [1,0,1]: x - 2 in m[a] & x - 5 in m[b]"), w));
  std::remove(path.c_str());
}

TEST(Cli, Fibers) {
  auto g = run({"fibers", data("single_5.struct"), data("single_5_gauss.struct"), data("gaussian.field")});
  EXPECT_EQ(g.code, 0);
  EXPECT_EQ(g.out.rfind("fibers=[1,1] uniform=true", 0), 0u) << g.out;
  auto id = run({"fibers", data("single_5.struct"), data("single_5.struct"), data("rationals.field")});
  EXPECT_EQ(id.out.rfind("fibers=[1] uniform=true", 0), 0u) << id.out;
  EXPECT_EQ(run({"fibers", data("flat_5_13.struct"), data("single_5_gauss.struct"), data("gaussian.field")}).code, 4);
}

TEST(Cli, SmoothAndParse) {
  auto s = run({"smooth", data("smooth.system")});
  EXPECT_NE(s.out.find("smooth=true\n"), std::string::npos);
  auto u = run({"smooth", data("uneven.system")});
  EXPECT_NE(u.out.find("element=y smooth=false"), std::string::npos);
  EXPECT_EQ(run({"smooth", data("uneven.system"), "--element", "z"}).code, 4);
  auto p = run({"parse", "-e", "exists x root [1,0,1]:x-2 in m[a]&~x in O[b]"});
  EXPECT_EQ(p.out, "exists x root [1,0,1] : x - 2 in m[a] & ~x in O[b]\n");
  EXPECT_EQ(run({"parse", data("golden.formula")}).out, "exists x root [1,0,1] : x - 2 in m[a] & x - 5 in m[b]\n");
  auto bad = run({"parse", "-e", "x + in O[a]"});
  EXPECT_EQ(bad.code, 2);
  EXPECT_NE(bad.err.find("column"), std::string::npos);
}
