// Copyright (c) cfrkit contributors.
// SPDX-License-Identifier: Apache-2.0
//
// cfrkit command line: cfr, termin and split over .its files.
#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "cfrkit/cfrkit.h"

namespace {

constexpr int kOk = 0;
constexpr int kNotProved = 1;
constexpr int kInputError = 2;

struct Config {
    std::string input;
    std::string props = "dh,c";
    bool cfr_base = false;
    int cfr_after = 0;
    int cfr_scc = 1;
    std::string invariants = "both";
    bool llrf = true;
    std::string entry_ctx;
    std::string out_its, out_dot, out_json;
    double timeout = 0;
    bool int_tighten = false;
    std::string mlrf;
};

struct Failure {
    std::string msg;
};

void check(cfr_status s, const std::string& what) {
    if (s != CFR_OK) throw Failure{what + ": " + cfr_last_error()};
}

using ItsPtr = std::unique_ptr<cfr_its, decltype(&cfr_its_free)>;
using OptPtr = std::unique_ptr<cfr_options, decltype(&cfr_options_free)>;
using ReportPtr = std::unique_ptr<cfr_report, decltype(&cfr_report_free)>;

std::string take(char* s) {
    std::string out = s;
    cfr_string_free(s);
    return out;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Failure{"cannot read " + path};
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    if (!out || !(out << text)) throw Failure{"cannot write " + path};
}

std::string emit(const cfr_its* t, cfr_format fmt) {
    char* s = nullptr;
    check(cfr_its_emit(t, fmt, &s), "emit");
    return take(s);
}

ItsPtr load(const Config& c) {
    cfr_its* t = nullptr;
    check(cfr_its_load(c.input.c_str(), &t), c.input);
    return ItsPtr(t, cfr_its_free);
}

OptPtr options(const Config& c, const cfr_its* t) {
    cfr_options* o = nullptr;
    check(cfr_options_new(&o), "options");
    OptPtr opts(o, cfr_options_free);
    std::string builtin;
    std::stringstream ss(c.props);
    for (std::string item; std::getline(ss, item, ',');) {
        if (item.rfind("user:", 0) == 0) {
            check(cfr_options_add_user_props(o, t, read_file(item.substr(5)).c_str()), item);
            continue;
        }
        builtin += (builtin.empty() ? "" : ",") + item;
    }
    check(cfr_options_set_props(o, builtin.c_str()), "--props");
    check(cfr_options_set_invariants(o, c.invariants.c_str()), "--invariants");
    if (!c.entry_ctx.empty()) check(cfr_options_set_entry_ctx(o, c.entry_ctx.c_str()), "--entry-ctx");
    cfr_options_set_int_tighten(o, c.int_tighten);
    check(cfr_options_set_scheme(o, c.cfr_base, c.cfr_after, c.cfr_scc), "scheme");
    cfr_options_set_llrf(o, c.llrf);
    cfr_options_set_timeout(o, c.timeout);
    return opts;
}

// Refined ITS goes to --out-its (stdout when no output is named) and --out-dot.
void write_its(const Config& c, const cfr_its* t) {
    if (!c.out_its.empty()) write_file(c.out_its, emit(t, CFR_FMT_ITS));
    if (!c.out_dot.empty()) write_file(c.out_dot, emit(t, CFR_FMT_DOT));
    if (!c.out_json.empty()) write_file(c.out_json, emit(t, CFR_FMT_JSON));
    if (c.out_its.empty() && c.out_dot.empty() && c.out_json.empty()) std::cout << emit(t, CFR_FMT_ITS);
}

int run_cfr(const Config& c) {
    ItsPtr t = load(c);
    OptPtr o = options(c, t.get());
    cfr_its* r = nullptr;
    check(cfr_refine(t.get(), o.get(), &r), "cfr");
    ItsPtr out(r, cfr_its_free);
    write_its(c, out.get());
    return kOk;
}

int run_termin(const Config& c) {
    ItsPtr t = load(c);
    OptPtr o = options(c, t.get());
    cfr_report* r = nullptr;
    check(cfr_termin(t.get(), o.get(), &r), "termin");
    ReportPtr rep(r, cfr_report_free);
    char* js = nullptr;
    check(cfr_report_json(rep.get(), &js), "report");
    const std::string json = take(js) + "\n";
    if (!c.out_json.empty()) write_file(c.out_json, json);
    else std::cout << json;
    if (!c.out_its.empty() || !c.out_dot.empty()) {
        cfr_its* refined = nullptr;
        check(cfr_report_refined(rep.get(), &refined), "report");
        ItsPtr keep(refined, cfr_its_free);
        if (!c.out_its.empty()) write_file(c.out_its, emit(refined, CFR_FMT_ITS));
        if (!c.out_dot.empty()) write_file(c.out_dot, emit(refined, CFR_FMT_DOT));
    }
    return cfr_report_terminating(rep.get()) ? kOk : kNotProved;
}

// split, then refine the result when --cfr-base is given
int run_split(const Config& c) {
    if (c.mlrf.empty()) throw Failure{"split needs --mlrf \"node: f1; f2; ...\""};
    ItsPtr t = load(c);
    cfr_its* s = nullptr;
    check(cfr_mlrf_split(t.get(), c.mlrf.c_str(), &s), "--mlrf");
    ItsPtr split(s, cfr_its_free);
    if (!c.cfr_base) {
        write_its(c, split.get());
        return kOk;
    }
    OptPtr o = options(c, split.get());
    cfr_its* r = nullptr;
    check(cfr_refine(split.get(), o.get(), &r), "cfr");
    ItsPtr out(r, cfr_its_free);
    write_its(c, out.get());
    return kOk;
}

void add_common(CLI::App* app, Config& c) {
    app->add_option("input", c.input, "input .its file")->required();
    app->add_option("--props", c.props, "property heuristics: h,hv,c,cv,dh,user:<path>");
    app->add_flag("--cfr-base", c.cfr_base, "refine the whole input first");
    app->add_option("--cfr-after", c.cfr_after, "refinement rounds over the failing part")->check(CLI::NonNegativeNumber);
    app->add_option("--cfr-scc", c.cfr_scc, "refinement depth for failing SCCs")->check(CLI::NonNegativeNumber);
    app->add_option("--invariants", c.invariants, "pre, post, both or off")
        ->check(CLI::IsMember({"pre", "post", "both", "off"}));
    app->add_flag("--llrf,!--no-llrf", c.llrf, "allow lexicographic ranking functions");
    app->add_option("--entry-ctx", c.entry_ctx, "constraint on the initial state");
    app->add_option("--out-its", c.out_its, "write the ITS here");
    app->add_option("--out-dot", c.out_dot, "write Graphviz output here");
    app->add_option("--out-json", c.out_json, "write JSON output here");
    app->add_option("--timeout", c.timeout, "wall-clock budget in seconds")->check(CLI::NonNegativeNumber);
    app->add_flag("--int-tighten", c.int_tighten, "tighten strict integer constraints");
    app->add_option("--mlrf", c.mlrf, "multiphase split \"node: f1; f2; ...\"");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"control-flow refinement and termination of integer transition systems"};
    app.require_subcommand(1);
    Config c;
    CLI::App* cfr = app.add_subcommand("cfr", "refine an ITS");
    CLI::App* termin = app.add_subcommand("termin", "prove termination");
    CLI::App* split = app.add_subcommand("split", "split a node by a multiphase function");
    for (CLI::App* sub : {cfr, termin, split}) add_common(sub, c);
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kInputError;
    }
    try {
        if (cfr->parsed()) return run_cfr(c);
        if (termin->parsed()) return run_termin(c);
        return run_split(c);
    } catch (const Failure& f) {
        std::cerr << "cfrkit: " << f.msg << "\n";
        return kInputError;
    }
}
