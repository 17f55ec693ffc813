// Copyright (c) cfrkit contributors.
// SPDX-License-Identifier: Apache-2.0
#include "cfrkit/pe.hpp"

#include <deque>
#include <map>

namespace cfrkit {

Conj abstract_ctx(const Conj& ctx, const PropSet& props) {
    Conj out;
    for (const auto& p : props)
        if (entails(ctx, p)) out = out & p;
    return out;
}

std::vector<Clause> unfold(const Version& v, const ChcProgram& p, const std::set<PredId>& heads, int unfold_limit) {
    VarSet keep = p.args(false);
    for (const auto& x : p.args(true)) keep.insert(x);

    std::vector<Clause> out;
    for (auto i : p.defining(v.pred)) {
        const Clause& c = p.clauses[i];
        Conj f = v.ctx & c.constraint;
        if (!is_sat(f)) continue;
        std::optional<PredId> call = c.call;
        bool dead = false;
        for (int depth = 0; call && !heads.count(*call) && depth < unfold_limit; ++depth) {
            const auto defs = p.defining(*call);
            if (defs.size() != 1) break;
            const Clause& d = p.clauses[defs[0]];
            std::map<Var, Var> to_mid_f, to_mid_d;
            for (const auto& x : p.vars) {
                const Var mid(x + "#" + std::to_string(depth));
                to_mid_f[Var(x, true)] = mid;
                to_mid_d[Var(x)] = mid;
            }
            const Conj g = rename(f, to_mid_f) & rename(d.constraint, to_mid_d);
            if (!is_sat(g)) {
                dead = true;
                break;
            }
            f = project(g, keep);
            call = d.call;
        }
        if (!dead) out.push_back({v.pred, f, call});
    }
    return out;
}

PeResult partial_evaluate(const ChcProgram& p, const PeConfig& cfg) {
    if (cfg.unfold_limit < 1) throw InvalidArgument("unfold limit must be positive");
    const auto heads = loop_heads(p);
    const VarSet xp = p.args(true);

    PeResult res;
    std::vector<Version>& versions = res.versions;
    std::map<PredId, std::vector<std::size_t>> by_pred;

    struct Pending {
        std::size_t head;
        Clause clause;
        std::optional<std::size_t> callee;
    };
    std::vector<Pending> emitted;

    versions.push_back({p.entry, cfg.entry_ctx, p.entry});
    by_pred[p.entry].push_back(0);

    std::vector<std::size_t> current{0};
    while (!current.empty()) {
        std::vector<std::size_t> next;
        for (std::size_t vi : current) {
            const Version v = versions[vi];
            for (auto& c : unfold(v, p, heads, cfg.unfold_limit)) {
                std::optional<std::size_t> callee;
                if (c.call) {
                    const PredId& q = *c.call;
                    Conj ctx = unprime_all(project(c.constraint, xp));
                    if (heads.count(q) || cfg.abstract_non_loop_heads) {
                        auto it = cfg.props.find(q);
                        ctx = abstract_ctx(ctx, it == cfg.props.end() ? PropSet{} : it->second);
                    }
                    for (auto k : by_pred[q])
                        if (equivalent(versions[k].ctx, ctx)) {
                            callee = k;
                            break;
                        }
                    if (!callee) {
                        callee = versions.size();
                        versions.push_back({q, ctx, q});
                        by_pred[q].push_back(*callee);
                        next.push_back(*callee);
                    }
                }
                emitted.push_back({vi, std::move(c), callee});
            }
        }
        std::vector<Version> round;
        for (auto k : next) round.push_back(versions[k]);
        res.rounds.push_back(std::move(round));
        current = std::move(next);
    }

    // n__j with j counted backwards from the last discovered version
    for (const auto& [q, ids] : by_pred)
        for (std::size_t pos = 0; pos < ids.size(); ++pos) {
            Version& v = versions[ids[pos]];
            if (ids[pos] == 0) continue;
            v.tag = q + "__" + std::to_string(ids.size() - pos);
        }
    for (auto& r : res.rounds)
        for (auto& v : r)
            for (const auto& w : versions)
                if (w.pred == v.pred && equivalent(w.ctx, v.ctx)) v.tag = w.tag;

    ChcProgram& out = res.program;
    out.vars = p.vars;
    out.entry = p.entry;
    for (const auto& v : versions) out.preds.push_back(v.tag);
    for (auto& e : emitted) {
        Clause c = e.clause;
        c.head = versions[e.head].tag;
        if (e.callee) c.call = versions[*e.callee].tag;
        out.clauses.push_back(std::move(c));
    }
    return res;
}

Its pe_pipeline(const Its& t, const CfrOptions& opts, CfrTrace* trace) {
    Its cur = t;
    if (opts.int_tighten)
        for (auto& e : cur.edges) e.formula = tighten(e.formula);
    if (opts.invariants_pre) cur = annotate(cur, compute_invariants(cur, opts.entry_ctx));

    const ChcProgram chc = its_to_chc(cur);
    std::set<PredId> only;
    if (opts.nodes) only.insert(opts.nodes->begin(), opts.nodes->end());
    PropertyMap props = infer_properties(chc, opts.heuristics, opts.nodes ? &only : nullptr);
    const auto heads = loop_heads(chc);
    for (const auto& [q, s] : opts.user_props) {
        if (!heads.count(q) || (opts.nodes && !only.count(q))) continue;
        for (const auto& c : s) add_property(props[q], c);
    }
    if (opts.int_tighten)
        for (auto& [q, s] : props) {
            PropSet tight;
            for (const auto& c : s) add_property(tight, tighten(c));
            s = std::move(tight);
        }

    PeConfig cfg;
    cfg.props = props;
    cfg.entry_ctx = opts.entry_ctx;
    cfg.unfold_limit = opts.unfold_limit;
    PeResult res = partial_evaluate(chc, cfg);
    Its out = chc_to_its(res.program, t.name);
    if (opts.invariants_post) out = prune_unreachable(out, compute_invariants(out, opts.entry_ctx));
    if (trace) {
        trace->props = std::move(props);
        trace->pe = std::move(res);
    }
    return out;
}

}  // namespace cfrkit
