// Copyright (c) cfrkit contributors.
// SPDX-License-Identifier: Apache-2.0
#include "cfrkit/cfrkit.h"

#include <cstring>
#include <fstream>
#include <sstream>

#include "cfrkit/properties.hpp"
#include "cfrkit/termination.hpp"

struct cfr_its {
    cfrkit::Its its;
};

struct cfr_options {
    cfrkit::TerminOptions termin;
    double timeout = 0;
};

struct cfr_report {
    cfrkit::TerminReport report;
    cfrkit::Its input;
};

namespace {

thread_local std::string last_error;

cfr_status fail(cfr_status s, const std::string& msg) {
    last_error = msg;
    return s;
}

// Runs fn and maps exceptions to status codes.
template <class Fn>
cfr_status guard(Fn&& fn) {
    try {
        last_error.clear();
        return fn();
    } catch (const cfrkit::ParseError& e) {
        return fail(CFR_ERR_PARSE, e.what());
    } catch (const cfrkit::InvalidArgument& e) {
        return fail(CFR_ERR_INVALID, e.what());
    } catch (const std::exception& e) {
        return fail(CFR_ERR_INTERNAL, e.what());
    }
}

char* dup(const std::string& s) {
    char* p = new char[s.size() + 1];
    std::memcpy(p, s.c_str(), s.size() + 1);
    return p;
}

std::string trim(std::string s) {
    const auto b = s.find_first_not_of(" \t\n");
    const auto e = s.find_last_not_of(" \t\n");
    return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
}

}  // namespace

extern "C" {

const char* cfr_last_error(void) { return last_error.c_str(); }

const char* cfr_version(void) { return "0.1.0"; }

void cfr_string_free(char* s) { delete[] s; }

cfr_status cfr_its_parse(const char* text, cfr_its** out) {
    if (!text || !out) return fail(CFR_ERR_INVALID, "null argument");
    return guard([&] {
        *out = new cfr_its{cfrkit::parse_its(text)};
        return CFR_OK;
    });
}

cfr_status cfr_its_load(const char* path, cfr_its** out) {
    if (!path || !out) return fail(CFR_ERR_INVALID, "null argument");
    std::ifstream in(path);
    if (!in) return fail(CFR_ERR_IO, std::string("cannot read ") + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return cfr_its_parse(ss.str().c_str(), out);
}

cfr_status cfr_its_emit(const cfr_its* t, cfr_format fmt, char** out) {
    if (!t || !out) return fail(CFR_ERR_INVALID, "null argument");
    return guard([&] {
        switch (fmt) {
            case CFR_FMT_ITS: *out = dup(cfrkit::emit_its(t->its)); break;
            case CFR_FMT_DOT: *out = dup(cfrkit::emit_dot(t->its)); break;
            case CFR_FMT_JSON: *out = dup(cfrkit::emit_json(t->its)); break;
            default: return fail(CFR_ERR_INVALID, "unknown format");
        }
        return CFR_OK;
    });
}

int cfr_its_node_count(const cfr_its* t) { return t ? static_cast<int>(t->its.nodes.size()) : 0; }

int cfr_its_edge_count(const cfr_its* t) { return t ? static_cast<int>(t->its.edges.size()) : 0; }

void cfr_its_free(cfr_its* t) { delete t; }

cfr_status cfr_options_new(cfr_options** out) {
    if (!out) return fail(CFR_ERR_INVALID, "null argument");
    *out = new cfr_options();
    return CFR_OK;
}

void cfr_options_free(cfr_options* o) { delete o; }

cfr_status cfr_options_set_props(cfr_options* o, const char* list) {
    if (!o || !list) return fail(CFR_ERR_INVALID, "null argument");
    return guard([&] {
        std::set<cfrkit::Heuristic> hs;
        std::stringstream ss(list);
        for (std::string item; std::getline(ss, item, ',');) {
            item = trim(item);
            if (!item.empty()) hs.insert(cfrkit::parse_heuristic(item));
        }
        o->termin.cfr.heuristics = std::move(hs);
        return CFR_OK;
    });
}

cfr_status cfr_options_add_user_props(cfr_options* o, const cfr_its* t, const char* text) {
    if (!o || !t || !text) return fail(CFR_ERR_INVALID, "null argument");
    return guard([&] {
        const std::set<cfrkit::PredId> known(t->its.nodes.begin(), t->its.nodes.end());
        for (auto& [q, ps] : cfrkit::parse_user_props(text, known))
            for (auto& p : ps) cfrkit::add_property(o->termin.cfr.user_props[q], p);
        return CFR_OK;
    });
}

cfr_status cfr_options_set_invariants(cfr_options* o, const char* mode) {
    if (!o || !mode) return fail(CFR_ERR_INVALID, "null argument");
    const std::string m = mode;
    auto& c = o->termin.cfr;
    if (m == "pre") c.invariants_pre = true, c.invariants_post = false;
    else if (m == "post") c.invariants_pre = false, c.invariants_post = true;
    else if (m == "both") c.invariants_pre = c.invariants_post = true;
    else if (m == "off") c.invariants_pre = c.invariants_post = false;
    else return fail(CFR_ERR_INVALID, "invariant mode must be pre, post, both or off: " + m);
    return CFR_OK;
}

cfr_status cfr_options_set_entry_ctx(cfr_options* o, const char* atoms) {
    if (!o || !atoms) return fail(CFR_ERR_INVALID, "null argument");
    return guard([&] {
        o->termin.cfr.entry_ctx = cfrkit::parse_conj(atoms);
        return CFR_OK;
    });
}

void cfr_options_set_int_tighten(cfr_options* o, int on) {
    if (o) o->termin.cfr.int_tighten = on != 0;
}

cfr_status cfr_options_set_scheme(cfr_options* o, int cfr_base, int cfr_after, int cfr_scc) {
    if (!o) return fail(CFR_ERR_INVALID, "null argument");
    if (cfr_after < 0 || cfr_scc < 0) return fail(CFR_ERR_INVALID, "budgets must be non-negative");
    o->termin.cfr_base = cfr_base != 0;
    o->termin.cfr_after = cfr_after;
    o->termin.cfr_scc = cfr_scc;
    return CFR_OK;
}

void cfr_options_set_llrf(cfr_options* o, int on) {
    if (o) o->termin.use_llrf = on != 0;
}

void cfr_options_set_timeout(cfr_options* o, double seconds) {
    if (o) o->timeout = seconds;
}

cfr_status cfr_refine(const cfr_its* t, const cfr_options* o, cfr_its** out) {
    if (!t || !out) return fail(CFR_ERR_INVALID, "null argument");
    return guard([&] {
        const cfrkit::CfrOptions opts = o ? o->termin.cfr : cfrkit::CfrOptions();
        *out = new cfr_its{cfrkit::pe_pipeline(t->its, opts)};
        return CFR_OK;
    });
}

cfr_status cfr_termin(const cfr_its* t, const cfr_options* o, cfr_report** out) {
    if (!t || !out) return fail(CFR_ERR_INVALID, "null argument");
    return guard([&] {
        cfrkit::TerminOptions opts = o ? o->termin : cfrkit::TerminOptions();
        if (o && o->timeout > 0)
            opts.deadline = std::chrono::steady_clock::now() +
                            std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                                std::chrono::duration<double>(o->timeout));
        *out = new cfr_report{cfrkit::termin(t->its, opts), t->its};
        return CFR_OK;
    });
}

cfr_status cfr_mlrf_split(const cfr_its* t, const char* split, cfr_its** out) {
    if (!t || !split || !out) return fail(CFR_ERR_INVALID, "null argument");
    return guard([&] {
        const std::string s = split;
        const auto colon = s.find(':');
        if (colon == std::string::npos) throw cfrkit::ParseError("expected `node: f1; f2; ...`", 1, 1);
        const std::string node = trim(s.substr(0, colon));
        std::vector<cfrkit::AffineFn> fns;
        std::stringstream ss(s.substr(colon + 1));
        for (std::string item; std::getline(ss, item, ';');)
            if (!trim(item).empty()) fns.push_back(cfrkit::parse_affine(item));
        *out = new cfr_its{cfrkit::mlrf_split(t->its, node, fns)};
        return CFR_OK;
    });
}

int cfr_report_terminating(const cfr_report* r) { return r && r->report.terminating ? 1 : 0; }

int cfr_report_timed_out(const cfr_report* r) { return r && r->report.timed_out ? 1 : 0; }

int cfr_report_failed_count(const cfr_report* r) { return r ? static_cast<int>(r->report.failed_edges.size()) : 0; }

cfr_status cfr_report_json(const cfr_report* r, char** out) {
    if (!r || !out) return fail(CFR_ERR_INVALID, "null argument");
    return guard([&] {
        *out = dup(cfrkit::report_json(r->report));
        return CFR_OK;
    });
}

cfr_status cfr_report_refined(const cfr_report* r, cfr_its** out) {
    if (!r || !out) return fail(CFR_ERR_INVALID, "null argument");
    const auto& trace = r->report.cfr_trace;
    *out = new cfr_its{trace.empty() ? r->input : trace.back().result};
    return CFR_OK;
}

void cfr_report_free(cfr_report* r) { delete r; }

}  // extern "C"
