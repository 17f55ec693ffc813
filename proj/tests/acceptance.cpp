// Copyright (c) cfrkit contributors.
// SPDX-License-Identifier: Apache-2.0
//
// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.
#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "cfrkit/invariants.hpp"
#include "cfrkit/pe.hpp"
#include "cfrkit/properties.hpp"
#include "cfrkit/termination.hpp"
#include "support/bisim.hpp"
#include "support/fixtures.hpp"
#include "support/grid_oracle.hpp"
#include "support/iso.hpp"
#include "support/rank_oracle.hpp"

using namespace cfrkit;
using namespace cfrkit::testing;

namespace {

// pinned limits
constexpr double kPhases1Seconds = 1.0;
constexpr double kConstraintSeconds = 60.0;
constexpr double kBisimSeconds = 120.0;
constexpr int kConstraintInstances = 1000;
constexpr int kConstraintCoeff = 5;
constexpr long kGridLo = -6, kGridHi = 6;
constexpr int kBisimInstances = 200;
constexpr long kBisimDepth = 8;
constexpr int kMutants = 100;

struct Outcome {
    bool ok = true;
    std::string detail;
    void fail(const std::string& why) {
        if (ok) detail = why;
        ok = false;
    }
};

using Clock = std::chrono::steady_clock;

double since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

Conj C(const char* s) { return parse_conj(s); }
AffineFn F(const char* s) { return parse_affine(s); }

std::vector<SccPart> cyclic(const Its& t) {
    std::vector<SccPart> out;
    for (auto& p : sccs(t))
        if (!p.trivial) out.push_back(std::move(p));
    return out;
}

// every terminating report seen here, checked again by criterion 11
std::vector<TerminReport> g_verdicts;

TerminReport run_termin(const Its& t, const TerminOptions& o) {
    TerminReport r = termin(t, o);
    if (r.terminating) g_verdicts.push_back(r);
    return r;
}

// CLI defaults for termin
TerminOptions cli_defaults() {
    TerminOptions o;
    o.cfr_scc = 1;
    return o;
}

// Every node function of a one-component certificate is a positive multiple
// of g up to a per-node constant.
bool ranks_by(const RankCertificate& c, const AffineFn& g) {
    bool any = false;
    for (const auto& [n, fs] : c.per_node) {
        if (fs.size() != 1 || fs[0].coeffs.empty()) continue;
        if (!proportional(fs[0], g)) return false;
        any = true;
    }
    return any;
}

// The SCC still terminates when its edges only see v and v', so a ranking
// function over v alone (plus per-node constants) exists.
bool ranked_by_var(const SccCertificate& c, const std::string& v) {
    Its t = c.its;
    const VarSet keep{Var(v), Var(v, true)};
    for (auto i : c.scc.edges) t.edges[i].formula = project(t.edges[i].formula, keep);
    return termin_scc(t, c.scc, false).failed.empty();
}

Outcome phases1_refinement() {
    Outcome o;
    const auto t0 = Clock::now();
    CfrOptions opts;
    opts.heuristics = {Heuristic::C};
    const Its pe = pe_pipeline(load_its("phases1.its"), opts);
    const double secs = since(t0);
    const Its want = load_its("phases1_pe.its");
    if (pe.nodes.size() != 8) o.fail(std::to_string(pe.nodes.size()) + " nodes, expected 8");
    if (nontrivial_sccs(pe) != 2) o.fail(std::to_string(nontrivial_sccs(pe)) + " nontrivial SCCs");
    if (!isomorphic(want, pe)) o.fail("not isomorphic to the expected refinement");
    if (secs >= kPhases1Seconds) o.fail("took " + std::to_string(secs) + " s");
    return o;
}

Outcome phases1_termination() {
    Outcome o;
    TerminOptions opts = cli_defaults();
    opts.cfr_base = true;
    opts.use_llrf = false;
    opts.cfr.heuristics = {Heuristic::C};
    const TerminReport r = run_termin(load_its("phases1.its"), opts);
    if (!r.terminating) o.fail("not proved with --cfr-base");
    if (r.certificates.size() != 2) o.fail(std::to_string(r.certificates.size()) + " certificates");
    std::set<std::string> seen;
    for (const auto& c : r.certificates) {
        if (!check_certificate(c.its, c.scc, c.cert)) o.fail("certificate rejected");
        for (const char* g : {"x", "z - y"})
            if (ranks_by(c.cert, F(g))) seen.insert(g);
    }
    if (seen.size() != 2) o.fail("x and z - y do not both certify an SCC");

    TerminOptions plain = opts;
    plain.cfr_base = false;
    plain.cfr_scc = 0;
    if (run_termin(load_its("phases1.its"), plain).terminating) o.fail("proved without refinement");
    return o;
}

Outcome search_termination() {
    Outcome o;
    TerminOptions opts = cli_defaults();
    opts.use_llrf = false;
    opts.cfr.heuristics = {Heuristic::C, Heuristic::CV};
    const TerminReport r = run_termin(load_its("search.its"), opts);
    if (!r.terminating) o.fail("not proved, " + std::to_string(r.failed_edges.size()) + " failed edges");
    bool shaped = false;
    for (const auto& s : r.cfr_trace) {
        if (s.scheme != "scc") continue;
        const auto parts = cyclic(s.result);
        bool cycles = parts.size() == 2;
        for (const auto& p : parts) cycles = cycles && p.nodes.size() == 2 && p.edges.size() == 2;
        shaped = shaped || cycles;
    }
    if (!shaped) o.fail("no refined sub-ITS with two 2-node cycles");
    return o;
}

Outcome randomwalk_termination() {
    Outcome o;
    TerminOptions opts = cli_defaults();
    opts.use_llrf = false;
    opts.cfr.heuristics = {Heuristic::CV, Heuristic::DH};
    const TerminReport r = run_termin(load_its("randomwalk.its"), opts);
    if (!r.terminating) o.fail("not proved, " + std::to_string(r.failed_edges.size()) + " failed edges");
    for (const auto& c : r.certificates) {
        if (c.cert.kind != RankKind::Lrf) o.fail("non-LRF certificate");
        if (!ranked_by_var(c, "z")) o.fail("an SCC is not ranked by z alone");
    }
    return o;
}

Outcome phases2_split() {
    Outcome o;
    const Its s = mlrf_split(load_its("phases2.its"), "n1", {F("z"), F("y"), F("x")});
    const Its pe = pe_pipeline(s, CfrOptions{});
    const auto parts = cyclic(pe);
    if (parts.size() != 3) o.fail(std::to_string(parts.size()) + " cyclic SCCs, expected 3");
    const Its a = annotate(pe, compute_invariants(pe));
    for (const auto& p : parts) {
        if (p.edges.size() != p.nodes.size()) o.fail("an SCC is not a single cycle");
        if (!synth_lrf(a, p, LrfMode::StrictAll)) o.fail("an SCC has no LRF");
    }
    TerminOptions opts;
    opts.cfr_scc = 0;
    opts.use_llrf = false;
    if (!run_termin(pe, opts).terminating) o.fail("LRF-only termination fails");
    return o;
}

Outcome invariant_propagation() {
    Outcome o;
    TerminOptions opts = cli_defaults();
    opts.cfr_after = 1;
    const TerminReport r = run_termin(load_its("search_w.its"), opts);
    if (!r.terminating) o.fail("not proved with --cfr-after 1");
    bool checked = false;
    for (const auto& s : r.cfr_trace) {
        if (s.scheme != "after") continue;
        const InvariantMap inv = compute_invariants(s.result);
        for (const auto& [n, c] : inv) {
            if (!derived_from(n, "n3")) continue;
            checked = true;
            if (!entails(c, C("w >= 1"))) o.fail("invariant at " + n + " is " + c.str());
        }
    }
    if (!checked) o.fail("no refined copy of the second loop head");
    TerminOptions zero = opts;
    zero.cfr_after = 0;
    zero.cfr_scc = 0;
    if (run_termin(load_its("search_w.its"), zero).terminating) o.fail("proved with all budgets 0");
    return o;
}

bool same_versions(const std::vector<Version>& got, const std::vector<std::pair<std::string, Conj>>& want) {
    if (got.size() != want.size()) return false;
    for (const auto& [q, c] : want) {
        bool hit = false;
        for (const auto& v : got) hit = hit || (v.pred == q && equivalent(v.ctx, c));
        if (!hit) return false;
    }
    return true;
}

Outcome version_trace() {
    Outcome o;
    const ChcProgram p = its_to_chc(load_its("phases1.its"));
    const PropSet psi{C("x > 0"), C("y < z"), C("y >= z")};
    if (!equivalent(abstract_ctx(C("x > -1, y >= z"), psi), C("y >= z"))) o.fail("alpha(x > -1, y >= z)");
    PeConfig cfg;
    cfg.props["n1"] = psi;
    const PeResult r = partial_evaluate(p, cfg);
    const std::vector<std::vector<std::pair<std::string, Conj>>> want{
        {{"n1", Conj()}},
        {{"n2", C("x > 0")}, {"n3", C("x <= 0")}},
        {{"n1", C("x > 0")}, {"n1", C("y >= z")}},
        {{"n2", C("x > 0, y >= z")}, {"n3", C("x <= 0, y >= z")}},
        {},
    };
    if (r.rounds.size() != want.size()) o.fail(std::to_string(r.rounds.size()) + " rounds");
    for (std::size_t i = 0; i < std::min(r.rounds.size(), want.size()); ++i)
        if (!same_versions(r.rounds[i], want[i])) o.fail("round " + std::to_string(i + 1) + " differs");
    return o;
}

bool same_props(const PropSet& got, const std::vector<Conj>& want) {
    if (got.size() != want.size()) return false;
    for (const auto& w : want) {
        bool hit = false;
        for (const auto& g : got) hit = hit || equivalent(tighten(g), tighten(w));
        if (!hit) return false;
    }
    return true;
}

Outcome property_goldens() {
    Outcome o;
    const ChcProgram p = its_to_chc(load_its("phases1.its"));
    if (!same_props(props_h(p, "n1"), {C("x >= 1"), C("x <= 0")})) o.fail("props_h");
    if (!same_props(props_c(p, "n1"), {C("y <= z"), C("y >= z")})) o.fail("props_c");
    if (!props_cv(p, "n1").empty()) o.fail("props_cv");
    const PropertyMap dh = props_dh(its_to_chc(load_its("phases1_w.its")));
    if (!dh.count("n1") || !same_props(dh.at("n1"), {C("y < z"), C("y >= z"), C("x > 0")})) o.fail("props_dh");
    return o;
}

// Grid points of the box restricted to keep that extend to a solution of f.
bool grid_sat_with(const Conj& f, const std::vector<Var>& vars, const Valuation& fixed) {
    bool found = false;
    for_each_point(vars, kGridLo, kGridHi, [&](const Valuation& s) {
        Valuation all = s;
        for (const auto& [v, k] : fixed) all[v] = k;
        if (f.holds(all)) found = true;
        return !found;
    });
    return found;
}

Outcome constraint_oracle() {
    Outcome o;
    const auto t0 = Clock::now();
    std::mt19937_64 rng(seed_from_env(2024));
    const std::vector<Var> all{Var("x"), Var("y"), Var("z")};
    std::uniform_int_distribution<int> nvars(1, 3);
    int violations = 0;
    std::string first;
    auto note = [&](const std::string& s) {
        if (violations++ == 0) first = s;
    };
    for (int i = 0; i < kConstraintInstances; ++i) {
        const std::vector<Var> vs(all.begin(), all.begin() + nvars(rng));
        const Conj f = random_conj(rng, vs, 3, kConstraintCoeff);
        const Conj g = random_conj(rng, vs, 2, kConstraintCoeff);
        std::set<Var> keep;
        std::vector<Var> kept, dropped;
        for (const auto& v : vs) (rng() % 2 ? keep.insert(v), kept.push_back(v) : dropped.push_back(v));

        const bool sat = is_sat(f);
        if (!sat && grid_has_solution(f, vs, kGridLo, kGridHi)) note("is_sat: " + f.str());

        if (entails(f, g)) {
            for_each_point(vs, kGridLo, kGridHi, [&](const Valuation& s) {
                if (f.holds(s) && !g.holds(s)) {
                    note("entails: " + f.str() + " |= " + g.str());
                    return false;
                }
                return true;
            });
        }

        const Conj p = project(f, keep);
        for (const auto& v : p.vars())
            if (!keep.count(v)) note("project kept " + v.str());
        if (!entails(f, p)) note("f does not entail its projection: " + f.str());
        // sound: grid solutions of f survive; complete: kept points of p
        // extend to rational solutions of f
        for_each_point(kept, kGridLo, kGridHi, [&](const Valuation& s) {
            const bool in_p = p.holds(s);
            if (!in_p && grid_sat_with(f, dropped, s)) {
                note("project lost a point of " + f.str());
                return false;
            }
            if (in_p && sat) {
                Conj fixed = f;
                for (const auto& [v, k] : s) fixed.add(Atom({{v, 1}}, -Rational(k), Rel::Eq));
                if (!is_sat(fixed)) {
                    note("project added a point to " + f.str() + " -> " + p.str());
                    return false;
                }
            }
            return true;
        });
    }
    const double secs = since(t0);
    if (violations) o.fail(std::to_string(violations) + " violations, first: " + first);
    if (secs >= kConstraintSeconds) o.fail("took " + std::to_string(secs) + " s");
    return o;
}

Outcome pe_bisimulation() {
    Outcome o;
    const auto t0 = Clock::now();
    std::mt19937_64 rng(seed_from_env(4242));
    int violations = 0;
    for (int i = 0; i < kBisimInstances; ++i) {
        const Its t = instrument_cost(random_its(rng, 2, 4, 6));
        CfrOptions opts;
        opts.heuristics = {Heuristic::H, Heuristic::HV, Heuristic::C, Heuristic::CV, Heuristic::DH};
        const Its pe = pe_pipeline(t, opts);
        const auto rep = compare_traces(t, pe, kBisimDepth, Box{-2, 2}, Box{-2, 2});
        if (!rep.equal) {
            if (!violations) o.detail = rep.detail;
            ++violations;
        }
    }
    const double secs = since(t0);
    if (violations) o.fail(std::to_string(violations) + " violations, first: " + o.detail);
    if (secs >= kBisimSeconds) o.fail("took " + std::to_string(secs) + " s");
    return o;
}

Outcome certificate_soundness() {
    Outcome o;
    // more verdicts from random systems
    std::mt19937_64 rng(seed_from_env(77));
    for (int i = 0; i < 40; ++i) run_termin(random_its(rng, 2, 3, 5), TerminOptions{});
    std::size_t certs = 0;
    for (const auto& r : g_verdicts)
        for (const auto& c : r.certificates) {
            ++certs;
            if (!check_certificate(c.its, c.scc, c.cert)) o.fail("a certificate does not re-validate");
        }
    if (certs == 0) o.fail("no certificates collected");

    // single-function certificates, mutated until the grid confirms them invalid
    std::vector<const SccCertificate*> pool;
    for (const auto& r : g_verdicts)
        for (const auto& c : r.certificates)
            if (c.cert.strict_edges.size() == 1 && !c.scc.edges.empty()) pool.push_back(&c);
    if (pool.empty()) {
        o.fail("no LRF certificates to mutate");
        return o;
    }
    std::uniform_int_distribution<int> delta(-3, 3);
    int mutants = 0, accepted = 0;
    for (int it = 0; it < 100 * kMutants && mutants < kMutants; ++it) {
        const SccCertificate& base = *pool[it % pool.size()];
        RankCertificate c = base.cert;
        auto node = c.per_node.begin();
        std::advance(node, rng() % c.per_node.size());
        if (node->second.empty()) node->second.push_back(AffineFn{});
        AffineFn& f = node->second[0];
        const std::string v = base.its.vars[rng() % base.its.vars.size()];
        if (rng() % 2) f.coeffs[v] += delta(rng);
        else f.constant += delta(rng);
        if (f.coeffs.count(v) && f.coeffs[v] == 0) f.coeffs.erase(v);
        if (!lrf_violation(base.its, base.scc, c, Box{-3, 3})) continue;
        ++mutants;
        if (check_certificate(base.its, base.scc, c)) ++accepted;
    }
    if (mutants < kMutants) o.fail("only " + std::to_string(mutants) + " confirmed mutants");
    if (accepted) o.fail(std::to_string(accepted) + " invalid certificates accepted");
    if (o.ok) o.detail = std::to_string(certs) + " certificates, " + std::to_string(mutants) + " mutants";
    return o;
}

}  // namespace

int main() {
    const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
        {"1 phases1 refinement with props c", phases1_refinement},
        {"2 phases1 termination with LRFs after base refinement", phases1_termination},
        {"3 search termination with cfr-scc 1, props c,cv", search_termination},
        {"4 randomwalk termination with cfr-scc 1, props cv,dh", randomwalk_termination},
        {"5 phases2 multiphase split and refinement", phases2_split},
        {"6 invariant propagation with cfr-after 1", invariant_propagation},
        {"7 version rounds of phases1 under {x > 0, y < z, y >= z}", version_trace},
        {"8 property heuristic goldens", property_goldens},
        {"9 constraint core against grid oracles", constraint_oracle},
        {"10 PE bisimulation on random systems", pe_bisimulation},
        {"11 certificate soundness", certificate_soundness},
    };
    int failed = 0;
    for (const auto& [name, fn] : criteria) {
        const auto t0 = Clock::now();
        Outcome r;
        try {
            r = fn();
        } catch (const std::exception& e) {
            r.fail(std::string("exception: ") + e.what());
        }
        failed += !r.ok;
        std::printf("%s criterion %s (%.2f s)%s%s\n", r.ok ? "PASS" : "FAIL", name, since(t0),
                    r.detail.empty() ? "" : ": ", r.detail.c_str());
        std::fflush(stdout);
    }
    return failed ? 1 : 0;
}
