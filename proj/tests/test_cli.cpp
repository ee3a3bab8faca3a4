#include <cstdlib>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>
#include <json.hpp>

#include "cli.hpp"

using entmom::cli::run;

namespace {

struct Result {
  int code;
  std::string out, err;
};

Result invoke(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run(args, out, err);
  return {code, out.str(), err.str()};
}

std::vector<std::string> lines(const std::string& s) {
  std::vector<std::string> v;
  std::istringstream is(s);
  for (std::string l; std::getline(is, l);) v.push_back(l);
  return v;
}

}  // namespace

TEST(Cli, MomentsJson) {
  const auto r = invoke({"moments", "--m", "2", "--n", "2", "--q", "2", "--format", "json"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_DOUBLE_EQ(j["mean"].get<double>(), 0.2);
  EXPECT_DOUBLE_EQ(j["variance"].get<double>(), 3.0 / 175);
  EXPECT_EQ(j["variance_exact"], "3/175");
  EXPECT_EQ(j["method"], "quadratic");
  std::vector<std::string> keys;
  for (auto it = j.begin(); it != j.end(); ++it) keys.push_back(it.key());
  EXPECT_EQ(keys.size(), 11u);
}

TEST(Cli, JsonRoundTrip) {
  for (const char* q : {"2", "1.5", "1", "3"}) {
    const auto r = invoke({"moments", "--m", "3", "--n", "4", "--q", q, "--format", "json"});
    ASSERT_EQ(r.code, 0);
    const auto j = nlohmann::ordered_json::parse(r.out);
    EXPECT_EQ(j.dump() + "\n", r.out) << q;
  }
  const auto s = invoke({"sweep", "--m", "2..3", "--n", "3", "--q", "2,0.5", "--format", "json"});
  EXPECT_EQ(nlohmann::ordered_json::parse(s.out).dump() + "\n", s.out);
}

TEST(Cli, MomentsSeparableAndVonNeumann) {
  auto r = invoke({"moments", "--m", "1", "--n", "9", "--q", "3", "--format", "json"});
  ASSERT_EQ(r.code, 0);
  EXPECT_EQ(nlohmann::json::parse(r.out)["variance"].get<double>(), 0.0);
  r = invoke({"moments", "--m", "2", "--n", "2", "--q", "1", "--format", "json"});
  ASSERT_EQ(r.code, 0);
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["method"], "von_neumann");
  EXPECT_NEAR(j["mean"].get<double>(), 1.0 / 3, 1e-15);
  EXPECT_NEAR(j["variance"].get<double>(), 0.0321, 1e-4);
}

TEST(Cli, ExitCodes) {
  EXPECT_EQ(invoke({"moments", "--m", "2", "--n", "2", "--q", "2"}).code, 0);
  auto r = invoke({"moments", "--m", "3", "--n", "2", "--q", "2"});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("m <= n"), std::string::npos);
  r = invoke({"moments", "--m", "2", "--n", "2", "--q", "0"});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("q = 0"), std::string::npos);
  EXPECT_EQ(invoke({"moments", "--m", "2", "--n", "2", "--q", "-0.7"}).code, 2);
  EXPECT_EQ(invoke({"moments", "--m", "2", "--n", "2", "--q", "1.0002"}).code, 2);
  EXPECT_EQ(invoke({"moments", "--m", "2", "--n", "2", "--q", "2.5", "--mode", "exact"}).code, 2);
  EXPECT_EQ(invoke({"moments", "--m", "x", "--n", "2", "--q", "2"}).code, 2);
  EXPECT_EQ(invoke({"nonsense"}).code, 2);
  EXPECT_EQ(invoke({}).code, 2);
  EXPECT_EQ(invoke({"verify", "--suite", "bogus"}).code, 2);
  EXPECT_EQ(invoke({"sweep", "--m", "3..2", "--n", "2", "--q", "2"}).code, 2);
  EXPECT_EQ(invoke({"--help"}).code, 0);
}

TEST(Cli, VerifySuites) {
  for (const char* suite : {"closed-forms", "appendix", "limit", "degeneracy"}) {
    const auto r = invoke({"verify", "--suite", suite});
    EXPECT_EQ(r.code, 0) << suite << '\n' << r.out;
    EXPECT_NE(r.out.find(" 0 failed"), std::string::npos);
  }
  const auto j = invoke({"verify", "--suite", "appendix", "--format", "json"});
  const auto arr = nlohmann::json::parse(j.out);
  EXPECT_EQ(arr.size(), 68u);
  for (const auto& row : arr) EXPECT_TRUE(row["pass"].get<bool>());
}

TEST(Cli, VerifyMcSmall) {
  const auto r = invoke({"verify", "--suite", "mc", "--m", "2", "--n", "3", "--q", "2", "--samples", "50000",
                         "--seed", "42", "--workers", "2"});
  EXPECT_EQ(r.code, 0) << r.out;
  EXPECT_EQ(lines(r.out).size(), 3u);
  EXPECT_EQ(invoke({"verify", "--suite", "mc", "--samples", "100"}).code, 2);
}

TEST(Cli, SweepCsv) {
  const auto r = invoke({"sweep", "--m", "2..3", "--n", "2..4", "--q", "2"});
  ASSERT_EQ(r.code, 0);
  const auto ls = lines(r.out);
  ASSERT_EQ(ls.size(), 7u);
  EXPECT_EQ(ls[0], "m,n,q,mean,second_moment,variance,method,flags");
  EXPECT_EQ(r.out.find('\r'), std::string::npos);
  // 2(m²-1)(n²-1)/((mn+1)²(mn+2)(mn+3)) for each row, parsed back from 17 digits.
  for (std::size_t i = 1; i < ls.size(); ++i) {
    std::istringstream is(ls[i]);
    std::string f[6];
    for (auto& s : f) std::getline(is, s, ',');
    int m = std::stoi(f[0]), n = std::stoi(f[1]);
    if (m > n) std::swap(m, n);
    const double mn = m * n;
    const double ref = 2.0 * (m * m - 1) * (n * n - 1) / ((mn + 1) * (mn + 1) * (mn + 2) * (mn + 3));
    EXPECT_NEAR(std::stod(f[5]), ref, 1e-16) << ls[i];
  }
}

TEST(Cli, SweepPartialSuccess) {
  const auto r = invoke({"sweep", "--m", "2", "--n", "2", "--q", "0,1,2"});
  ASSERT_EQ(r.code, 0);
  const auto ls = lines(r.out);
  ASSERT_EQ(ls.size(), 4u);
  EXPECT_EQ(ls[1].rfind("2,2,0,,,,error,", 0), 0u);
  EXPECT_NE(ls[2].find(",von_neumann,"), std::string::npos);
  EXPECT_NE(ls[3].find(",quadratic,"), std::string::npos);
}

TEST(Cli, SweepWorkersDoNotChangeOutput) {
  const std::vector<std::string> base{"sweep", "--m", "2..4", "--n", "4..6", "--q", "0.5,1.5,2,3"};
  auto one = base, many = base;
  one.insert(one.end(), {"--workers", "1"});
  many.insert(many.end(), {"--workers", "4"});
  EXPECT_EQ(invoke(one).out, invoke(many).out);
}

TEST(Cli, WorkersEnvironment) {
  setenv(entmom::cli::kWorkersEnv, "3", 1);
  const auto a = invoke({"sweep", "--m", "2", "--n", "2..3", "--q", "2"});
  unsetenv(entmom::cli::kWorkersEnv);
  const auto b = invoke({"sweep", "--m", "2", "--n", "2..3", "--q", "2", "--workers", "1"});
  EXPECT_EQ(a.out, b.out);
}

TEST(Cli, ExactMode) {
  const auto r = invoke({"moments", "--m", "2", "--n", "3", "--q", "2", "--mode", "exact", "--format", "json"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["variance_exact"], "2/147");
  EXPECT_EQ(j["second_moment_exact"], "2/21");
  const auto f = invoke({"moments", "--m", "2", "--n", "3", "--q", "2", "--mode", "float", "--format", "json"});
  EXPECT_FALSE(nlohmann::json::parse(f.out).contains("variance_exact"));
}

TEST(Cli, NumberFormat) {
  EXPECT_EQ(entmom::cli::format_number(0.2), "0.20000000000000001");
  EXPECT_EQ(std::stod(entmom::cli::format_number(3.0 / 175)), 3.0 / 175);
}
