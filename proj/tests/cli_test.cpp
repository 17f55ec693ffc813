// Copyright (c) cfrkit contributors.
// SPDX-License-Identifier: Apache-2.0
//
// Runs the cfrkit binary and checks exit codes and outputs.
#include <gtest/gtest.h>
#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>
#include <string>

#include "cfrkit/its.hpp"
#include "support/bisim.hpp"
#include "support/fixtures.hpp"

namespace {

using namespace cfrkit;
using namespace cfrkit::testing;
namespace fs = std::filesystem;

struct CliRun {
    int code = -1;
    std::string out;
};

CliRun cli(const std::string& args) {
    const std::string cmd = std::string(CFRKIT_CLI) + " " + args + " 2>/dev/null";
    CliRun r;
    FILE* p = popen(cmd.c_str(), "r");
    if (!p) return r;
    char buf[4096];
    for (std::size_t n; (n = fread(buf, 1, sizeof buf, p)) > 0;) r.out.append(buf, n);
    const int st = pclose(p);
    r.code = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
    return r;
}

std::string data(const std::string& name) { return std::string(CFRKIT_TEST_DATA) + "/" + name; }

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

fs::path scratch(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / ("cfrkit_cli_" + std::to_string(::getpid()));
    fs::create_directories(dir);
    return dir / name;
}

TEST(Cli, ExitCodes) {
    EXPECT_EQ(cli("termin " + data("phases1.its") + " --cfr-base --props c --no-llrf").code, 0);
    EXPECT_EQ(cli("termin " + data("spin.its") + " --cfr-scc 0").code, 1);
    EXPECT_EQ(cli("termin " + data("no_such.its")).code, 2);
    EXPECT_EQ(cli("cfr " + data("phases1.its") + " --props bogus").code, 2);
    EXPECT_EQ(cli("cfr " + data("phases1.its") + " --invariants maybe").code, 2);
    EXPECT_EQ(cli("cfr").code, 2);
    EXPECT_EQ(cli("").code, 2);
    EXPECT_EQ(cli("split " + data("phases2.its")).code, 2);
    EXPECT_EQ(cli("cfr --help").code, 0);
}

TEST(Cli, EmptyIsEchoed) {
    const CliRun r = cli("cfr " + data("empty.its"));
    ASSERT_EQ(r.code, 0);
    EXPECT_EQ(r.out, emit_its(load_its("empty.its")));
}

TEST(Cli, CfrIsDeterministicAndSound) {
    const fs::path in = scratch("phases1_cost.its");
    const Its t = instrument_cost(load_its("phases1.its"));
    std::ofstream(in) << emit_its(t);
    const std::string args = "cfr " + in.string() + " --props dh";
    const CliRun a = cli(args), b = cli(args);
    ASSERT_EQ(a.code, 0);
    EXPECT_EQ(a.out, b.out);
    const Its refined = parse_its(a.out);
    EXPECT_EQ(refined.nodes.size(), 8u);
    const auto rep = compare_traces(t, refined, 8, Box{-2, 2}, Box{-2, 2});
    EXPECT_TRUE(rep.equal) << rep.detail;
}

TEST(Cli, OutputFiles) {
    const fs::path its = scratch("out.its"), dot = scratch("out.dot"), js = scratch("out.json");
    const CliRun r = cli("cfr " + data("phases1.its") + " --props dh --out-its " + its.string() + " --out-dot " +
                      dot.string() + " --out-json " + js.string());
    ASSERT_EQ(r.code, 0);
    EXPECT_EQ(r.out, "");
    EXPECT_EQ(parse_its(slurp(its)).nodes.size(), 8u);
    EXPECT_NE(slurp(dot).find("digraph"), std::string::npos);
    EXPECT_NO_THROW((void)nlohmann::json::parse(slurp(js)));
    EXPECT_EQ(cli("cfr " + data("phases1.its") + " --out-its /nonexistent/dir/x.its").code, 2);
}

TEST(Cli, TerminReport) {
    const fs::path its = scratch("termin.its");
    const CliRun r = cli("termin " + data("phases1.its") + " --cfr-base --props c --no-llrf --out-its " + its.string());
    ASSERT_EQ(r.code, 0);
    const auto j = nlohmann::json::parse(r.out);
    EXPECT_TRUE(j.at("terminating").template get<bool>());
    EXPECT_TRUE(j.at("failed_edges").empty());
    EXPECT_FALSE(j.at("certificates").empty());
    EXPECT_GT(parse_its(slurp(its)).nodes.size(), 4u);

    const CliRun no = cli("termin " + data("phases1.its") + " --cfr-scc 0 --props c --no-llrf");
    EXPECT_EQ(no.code, 1);
    EXPECT_FALSE(nlohmann::json::parse(no.out).at("failed_edges").empty());
}

TEST(Cli, UserProps) {
    const fs::path props = scratch("search.props");
    std::ofstream(props) << "props n1 { h = 0 ; h <= t }\n";
    const CliRun r = cli("termin " + data("search.its") + " --props user:" + props.string() + " --no-llrf");
    EXPECT_EQ(r.code, 0) << r.out;
    EXPECT_EQ(cli("termin " + data("search.its") + " --props user:/nonexistent.props").code, 2);
}

TEST(Cli, Split) {
    const CliRun r = cli("split " + data("phases2.its") + " --mlrf \"n1: z; y; x\"");
    ASSERT_EQ(r.code, 0);
    const Its t = parse_its(r.out);
    EXPECT_EQ(t.nodes.size(), load_its("phases2.its").nodes.size() + 1);
    EXPECT_EQ(t.in_edges("n1").size(), 4u);
    EXPECT_EQ(cli("split " + data("phases2.its") + " --mlrf \"n9: z\"").code, 2);
}

}  // namespace
