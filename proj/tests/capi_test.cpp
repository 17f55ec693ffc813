// Copyright (c) cfrkit contributors.
// SPDX-License-Identifier: Apache-2.0
//
// The C interface, driven only through cfrkit.h.
#include <gtest/gtest.h>

#include <string>
#include <thread>

#include "cfrkit/cfrkit.h"

namespace {

std::string data(const std::string& name) { return std::string(CFRKIT_TEST_DATA) + "/" + name; }

struct Its {
    cfr_its* p = nullptr;
    ~Its() { cfr_its_free(p); }
};

struct Opts {
    cfr_options* p = nullptr;
    Opts() { EXPECT_EQ(cfr_options_new(&p), CFR_OK); }
    ~Opts() { cfr_options_free(p); }
};

struct Report {
    cfr_report* p = nullptr;
    ~Report() { cfr_report_free(p); }
};

std::string emit(const cfr_its* t, cfr_format f = CFR_FMT_ITS) {
    char* s = nullptr;
    EXPECT_EQ(cfr_its_emit(t, f, &s), CFR_OK);
    std::string out = s ? s : "";
    cfr_string_free(s);
    return out;
}

TEST(CApi, ParseEmitRoundTrip) {
    Its t;
    ASSERT_EQ(cfr_its_load(data("phases1.its").c_str(), &t.p), CFR_OK);
    EXPECT_EQ(cfr_its_node_count(t.p), 4);
    EXPECT_EQ(cfr_its_edge_count(t.p), 5);
    const std::string text = emit(t.p);
    Its again;
    ASSERT_EQ(cfr_its_parse(text.c_str(), &again.p), CFR_OK);
    EXPECT_EQ(emit(again.p), text);
    EXPECT_NE(emit(t.p, CFR_FMT_DOT).find("digraph"), std::string::npos);
    EXPECT_NE(emit(t.p, CFR_FMT_JSON).find("\"edges\""), std::string::npos);
}

TEST(CApi, ErrorCodes) {
    Its t;
    EXPECT_EQ(cfr_its_parse("its x { vars a; entry n0; edge n0 -> }", &t.p), CFR_ERR_PARSE);
    EXPECT_EQ(t.p, nullptr);
    EXPECT_STRNE(cfr_last_error(), "");
    EXPECT_EQ(cfr_its_load(data("no_such_file.its").c_str(), &t.p), CFR_ERR_IO);
    EXPECT_EQ(cfr_its_parse(nullptr, &t.p), CFR_ERR_INVALID);

    Opts o;
    EXPECT_EQ(cfr_options_set_props(o.p, "c,bogus"), CFR_ERR_INVALID);
    EXPECT_EQ(cfr_options_set_invariants(o.p, "sometimes"), CFR_ERR_INVALID);
    EXPECT_EQ(cfr_options_set_scheme(o.p, 0, -1, 1), CFR_ERR_INVALID);
    EXPECT_EQ(cfr_options_set_entry_ctx(o.p, "x >"), CFR_ERR_PARSE);
    EXPECT_EQ(cfr_options_set_props(o.p, "h, c"), CFR_OK);
    EXPECT_STREQ(cfr_last_error(), "");
}

TEST(CApi, LastErrorIsPerThread) {
    Its t;
    ASSERT_EQ(cfr_its_parse("garbage", &t.p), CFR_ERR_PARSE);
    std::string other = "unset";
    std::thread([&] { other = cfr_last_error(); }).join();
    EXPECT_EQ(other, "");
    EXPECT_STRNE(cfr_last_error(), "");
}

TEST(CApi, RefineEmptyIsIdentity) {
    Its t, r;
    ASSERT_EQ(cfr_its_load(data("empty.its").c_str(), &t.p), CFR_OK);
    Opts o;
    ASSERT_EQ(cfr_refine(t.p, o.p, &r.p), CFR_OK);
    EXPECT_EQ(emit(r.p), emit(t.p));
}

TEST(CApi, RefinePhases1IsDeterministic) {
    Its t, a, b;
    ASSERT_EQ(cfr_its_load(data("phases1.its").c_str(), &t.p), CFR_OK);
    Opts o;
    ASSERT_EQ(cfr_options_set_props(o.p, "dh"), CFR_OK);
    ASSERT_EQ(cfr_refine(t.p, o.p, &a.p), CFR_OK);
    ASSERT_EQ(cfr_refine(t.p, o.p, &b.p), CFR_OK);
    EXPECT_EQ(emit(a.p), emit(b.p));
    EXPECT_EQ(cfr_its_node_count(a.p), 8);
}

TEST(CApi, UserPropsCheckNodes) {
    Its t;
    ASSERT_EQ(cfr_its_load(data("search.its").c_str(), &t.p), CFR_OK);
    Opts o;
    EXPECT_EQ(cfr_options_add_user_props(o.p, t.p, "props n1 { h = 0 ; h <= t }"), CFR_OK);
    EXPECT_EQ(cfr_options_add_user_props(o.p, t.p, "props n1 { h' = 0 }"), CFR_ERR_PARSE);
    EXPECT_EQ(cfr_options_add_user_props(o.p, t.p, "props nowhere { x >= 0 }\n"), CFR_ERR_INVALID);
}

TEST(CApi, TerminPhases1) {
    Its t;
    ASSERT_EQ(cfr_its_load(data("phases1.its").c_str(), &t.p), CFR_OK);
    Opts o;
    ASSERT_EQ(cfr_options_set_props(o.p, "c"), CFR_OK);
    cfr_options_set_llrf(o.p, 0);
    ASSERT_EQ(cfr_options_set_scheme(o.p, 1, 0, 0), CFR_OK);
    Report r;
    ASSERT_EQ(cfr_termin(t.p, o.p, &r.p), CFR_OK);
    EXPECT_EQ(cfr_report_terminating(r.p), 1);
    EXPECT_EQ(cfr_report_failed_count(r.p), 0);
    char* js = nullptr;
    ASSERT_EQ(cfr_report_json(r.p, &js), CFR_OK);
    const std::string json = js;
    cfr_string_free(js);
    EXPECT_NE(json.find("\"terminating\": true"), std::string::npos) << json;
    Its refined;
    ASSERT_EQ(cfr_report_refined(r.p, &refined.p), CFR_OK);
    EXPECT_GT(cfr_its_node_count(refined.p), cfr_its_node_count(t.p));

    ASSERT_EQ(cfr_options_set_scheme(o.p, 0, 0, 0), CFR_OK);
    Report plain;
    ASSERT_EQ(cfr_termin(t.p, o.p, &plain.p), CFR_OK);
    EXPECT_EQ(cfr_report_terminating(plain.p), 0);
    EXPECT_GT(cfr_report_failed_count(plain.p), 0);
    Its same;
    ASSERT_EQ(cfr_report_refined(plain.p, &same.p), CFR_OK);
    EXPECT_EQ(emit(same.p), emit(t.p));
}

TEST(CApi, TimeoutIsReported) {
    Its t;
    ASSERT_EQ(cfr_its_load(data("randomwalk.its").c_str(), &t.p), CFR_OK);
    Opts o;
    cfr_options_set_timeout(o.p, 1e-9);
    Report r;
    ASSERT_EQ(cfr_termin(t.p, o.p, &r.p), CFR_OK);
    EXPECT_EQ(cfr_report_timed_out(r.p), 1);
    EXPECT_EQ(cfr_report_terminating(r.p), 0);
}

TEST(CApi, MlrfSplit) {
    Its t, s;
    ASSERT_EQ(cfr_its_load(data("phases2.its").c_str(), &t.p), CFR_OK);
    ASSERT_EQ(cfr_mlrf_split(t.p, "n1: z; y; x", &s.p), CFR_OK);
    EXPECT_EQ(cfr_its_node_count(s.p), cfr_its_node_count(t.p) + 1);
    EXPECT_NE(emit(s.p).find("n1a"), std::string::npos);
    Its bad;
    EXPECT_EQ(cfr_mlrf_split(t.p, "z; y", &bad.p), CFR_ERR_PARSE);
    EXPECT_EQ(cfr_mlrf_split(t.p, "nowhere: z", &bad.p), CFR_ERR_INVALID);
    EXPECT_EQ(bad.p, nullptr);
}

TEST(CApi, NullHandles) {
    EXPECT_EQ(cfr_its_node_count(nullptr), 0);
    EXPECT_EQ(cfr_report_terminating(nullptr), 0);
    cfr_its_free(nullptr);
    cfr_options_free(nullptr);
    cfr_report_free(nullptr);
    cfr_string_free(nullptr);
    EXPECT_STRNE(cfr_version(), "");
}

}  // namespace
