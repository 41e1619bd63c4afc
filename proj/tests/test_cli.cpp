#include <gtest/gtest.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <sys/wait.h>

#include "../vendor/json.hpp"

namespace {

using json = nlohmann::json;

struct Run {
    int code = -1;
    std::string out;
};

Run run(const std::string& args) {
    std::string cmd = std::string(AHMASS_CLI_PATH) + " " + args + " 2>/tmp/ahmass_cli_stderr";
    Run r;
    FILE* f = popen(cmd.c_str(), "r");
    if (!f) return r;
    std::array<char, 4096> buf;
    std::size_t k;
    while ((k = fread(buf.data(), 1, buf.size(), f)) > 0) r.out.append(buf.data(), k);
    int st = pclose(f);
    r.code = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
    return r;
}

std::string last_stderr() {
    std::ifstream in("/tmp/ahmass_cli_stderr");
    return {std::istreambuf_iterator<char>(in), {}};
}

std::string write_tmp(const std::string& name, const std::string& body) {
    auto p = std::filesystem::temp_directory_path() / name;
    std::ofstream(p) << body;
    return p.string();
}

// sigma = delta - x x on S^2, or the flat identity when `flat`
std::string round_aspect(int k, bool flat = false) {
    json e = json::array();
    for (int i = 0; i < 3; ++i)
        for (int j = i; j < 3; ++j) {
            if (i == j) e.push_back({{"i", i}, {"j", j}, {"exponents", {0, 0, 0}}, {"num", 1}, {"den", 1}});
            if (flat) continue;
            std::vector<int> ex(3, 0);
            ++ex[i];
            ++ex[j];
            e.push_back({{"i", i}, {"j", j}, {"exponents", ex}, {"num", -1}, {"den", 1}});
        }
    return json{{"n", 3}, {"k", k}, {"entries", e}}.dump();
}

TEST(Cli, SpacesHarmonicRow) {
    auto r = run("spaces --family harmonic --n 3 --pmax 4");
    ASSERT_EQ(r.code, 0);
    auto j = json::parse(r.out);
    ASSERT_EQ(j["rows"].size(), 5u);
    auto row = j["rows"][1];
    EXPECT_EQ(row["n"], 3);
    EXPECT_EQ(row["p"], 1);
    EXPECT_EQ(row["dim"], 4);
    EXPECT_EQ(row["sig_plus"], 3);
    EXPECT_EQ(row["sig_minus"], 1);
}

TEST(Cli, SpacesCsv) {
    auto r = run("--format csv spaces --family weyl --n 3 --pmax 0");
    ASSERT_EQ(r.code, 0);
    EXPECT_EQ(r.out, "n,p,dim,sig_plus,sig_minus\n3,0,10,5,5\n");
}

TEST(Cli, MassOfRoundAspect) {
    auto r = run("mass --input " + write_tmp("ahmass_round.json", round_aspect(2)) + " --family conformal --n1 0");
    ASSERT_EQ(r.code, 0) << last_stderr();
    auto j = json::parse(r.out);
    ASSERT_EQ(j["values"].size(), 1u);
    EXPECT_EQ(j["values"][0], "2");  // tr sigma = n - 1
}

TEST(Cli, ShippedExampleInput) {
    auto r = run(std::string("mass --input ") + AHMASS_SOURCE_DIR + "/data/round.json --n1 0");
    ASSERT_EQ(r.code, 0) << last_stderr();
    EXPECT_EQ(json::parse(r.out)["values"][0], "2");
}

TEST(Cli, TransversalizeFlag) {
    auto path = write_tmp("ahmass_flat.json", round_aspect(2, true));
    EXPECT_EQ(run("mass --input " + path + " --n1 0").code, 3);
    auto r = run("mass --input " + path + " --n1 0 --transversalize");
    ASSERT_EQ(r.code, 0) << last_stderr();
    // delta -> delta - 2xx + (xx + delta)/k = (3/2) sigma for k = 2
    EXPECT_EQ(json::parse(r.out)["values"][0], "3");
}

TEST(Cli, ParseErrorsArePositionAnnotated) {
    auto r = run("mass --input " + write_tmp("ahmass_bad.json", "{\"n\": 3, \"k\": 2, \"entries\": [") + " --n1 0");
    EXPECT_EQ(r.code, 3);
    EXPECT_NE(last_stderr().find("byte"), std::string::npos);

    std::string body = R"({"n": 3, "k": 2, "entries": [{"i": 0, "j": 0, "exponents": [0, 0], "num": 1}]})";
    r = run("mass --input " + write_tmp("ahmass_bad2.json", body) + " --n1 0");
    EXPECT_EQ(r.code, 3);
    EXPECT_NE(last_stderr().find("/entries/0/exponents"), std::string::npos);

    EXPECT_EQ(run("mass --input /nonexistent/file.json --n1 0").code, 3);
    // wrong decay order for the requested family
    EXPECT_EQ(run("mass --input " + write_tmp("ahmass_round.json", round_aspect(2)) + " --n1 1").code, 3);
}

TEST(Cli, UsageErrors) {
    EXPECT_EQ(run("").code, 2);
    EXPECT_EQ(run("frobnicate").code, 2);
    EXPECT_EQ(run("spaces --family harmonic --n 9 --pmax 1").code, 2);
    EXPECT_EQ(run("spaces --family other --n 3 --pmax 1").code, 2);
    EXPECT_EQ(run("mass --input " + write_tmp("ahmass_round4.json", round_aspect(4)) + " --family weyl --n1 0").code, 2);
}

TEST(Cli, Equivariance) {
    auto r = run("equivariance --input " + write_tmp("ahmass_round.json", round_aspect(2)) + " --boost 5/4,3/4,1 --order 32");
    ASSERT_EQ(r.code, 0) << last_stderr();
    auto j = json::parse(r.out);
    EXPECT_EQ(j["infinitesimal_residual"], "0");
    EXPECT_LT(j["finite"]["residual"].get<double>(), 1e-9);
    EXPECT_EQ(run("equivariance --input " + write_tmp("ahmass_round.json", round_aspect(2)) + " --boost 1,1,1").code, 2);
}

TEST(Cli, HighestWeightVectors) {
    auto r = run("hw --n 4 --p 0");
    ASSERT_EQ(r.code, 0);
    auto j = json::parse(r.out);
    ASSERT_EQ(j["vectors"].size(), 3u);
    for (auto& v : j["vectors"]) EXPECT_EQ(v["constructed"].size(), 1u);
}

TEST(Cli, CurvopsFlagsAndDeterminism) {
    auto a = run("curvops --n 3 --pmax 1");
    ASSERT_EQ(a.code, 0) << last_stderr();
    auto b = run("curvops --n 3 --pmax 1");
    EXPECT_EQ(a.out, b.out);
    auto j = json::parse(a.out);
    for (auto& row : j["rows"]) {
        EXPECT_TRUE(row["second_match"].get<bool>());
        EXPECT_EQ(row["mu_residual_computed"].is_null(), false);
    }
    bool mu_flag = false;
    for (auto& f : j["flags"]) mu_flag |= f.get<std::string>().find("p=0") != std::string::npos;
    EXPECT_TRUE(mu_flag);
}

TEST(Cli, ChargeTable) {
    auto r = run("charge --input " + write_tmp("ahmass_round.json", round_aspect(2)) + " --p 0 --rmax 12");
    ASSERT_EQ(r.code, 0) << last_stderr();
    auto j = json::parse(r.out);
    EXPECT_EQ(j["rows"].size(), 6u);
    EXPECT_EQ(j["phi_c"], "2");
    EXPECT_EQ(j["constant_found"], j["constant_computed"]);
    double lim = -8;  // -(n-1)^2 Phi_c
    EXPECT_EQ(j["exact_limit"], "-8");
    EXPECT_NEAR(j["extrapolated"].get<double>(), lim, 1e-8);
    EXPECT_EQ(run("charge --input " + write_tmp("ahmass_round.json", round_aspect(2)) + " --p 1 --rmax 12").code, 3);
}

}  // namespace
