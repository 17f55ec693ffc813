// Copyright (c) cfrkit contributors.
// SPDX-License-Identifier: Apache-2.0
#include "cfrkit/invariants.hpp"

#include <algorithm>
#include <deque>

namespace cfrkit {

Conj post(const Its& t, const Conj& inv, const Edge& e) {
    const Conj f = inv & e.formula;
    if (!is_sat(f)) return Conj::bottom();
    return unprime_all(project(f, t.var_set(true)));
}

namespace {

bool is_bottom(const Conj& c) { return !is_sat(c); }

// Atoms over unprimed variables only, taken from the edge guards.
std::vector<Atom> thresholds(const Its& t) {
    std::vector<Atom> out;
    for (const auto& e : t.edges)
        for (const auto& a : e.formula.atoms()) {
            bool plain = true;
            for (const auto& v : a.vars()) plain = plain && !v.primed;
            if (plain && std::find(out.begin(), out.end(), a) == out.end()) out.push_back(a);
        }
    return out;
}

}  // namespace

InvariantMap compute_invariants(const Its& t, const Conj& entry_ctx, const InvariantOptions& opts,
                                InvariantStats* stats) {
    InvariantMap inv;
    for (const auto& n : t.nodes) inv[n] = Conj::bottom();
    inv[t.entry] = is_sat(entry_ctx) ? simplify(entry_ctx) : Conj::bottom();

    std::set<NodeId> cyclic;
    for (const auto& part : sccs(t))
        if (!part.trivial) cyclic.insert(part.nodes.begin(), part.nodes.end());
    const auto limits = thresholds(t);

    std::map<NodeId, int> updates;
    auto incoming = [&](const NodeId& n) {
        Conj acc = Conj::bottom();
        bool any = false;
        for (auto i : t.in_edges(n)) {
            const Edge& e = t.edges[i];
            if (is_bottom(inv[e.src])) continue;
            const Conj p = post(t, inv[e.src], e);
            if (is_bottom(p)) continue;
            acc = any ? hull(acc, p) : p;
            any = true;
        }
        return acc;
    };

    std::deque<NodeId> work;
    std::set<NodeId> queued;
    auto push_succs = [&](const NodeId& n) {
        for (auto i : t.out_edges(n)) {
            const NodeId& d = t.edges[i].dst;
            if (queued.insert(d).second) work.push_back(d);
        }
    };
    push_succs(t.entry);
    while (!work.empty()) {
        const NodeId n = work.front();
        work.pop_front();
        queued.erase(n);
        if (n == t.entry) continue;
        const Conj in = incoming(n);
        const Conj& old = inv[n];
        if (is_bottom(in) || entails(in, old)) continue;
        Conj next = is_bottom(old) ? in : hull(old, in);
        if (cyclic.count(n) && ++updates[n] > opts.widening_delay) {
            Conj w = widen(old, next);
            for (const auto& a : limits)
                if (entails(old, a) && entails(next, a)) w.add(a);
            next = simplify(w);
        }
        inv[n] = simplify(next);
        if (stats) ++stats->updates;
        push_succs(n);
    }

    if (opts.narrowing) {
        InvariantMap down = inv;
        for (const auto& n : t.nodes) {
            if (n == t.entry || is_bottom(inv[n])) continue;
            const Conj in = incoming(n);
            down[n] = is_bottom(in) ? Conj::bottom() : simplify(in & inv[n]);
        }
        inv = std::move(down);
    }
    return inv;
}

Its annotate(const Its& t, const InvariantMap& m) {
    Its r = t;
    for (auto& e : r.edges) {
        auto it = m.find(e.src);
        if (it == m.end()) continue;
        e.formula = e.formula & it->second;
    }
    return r;
}

Its prune_unreachable(const Its& t, const InvariantMap& m) {
    NodeSet keep;
    const NodeSet reach = reachable_from(t, t.entry);
    for (const auto& n : t.nodes) {
        auto it = m.find(n);
        const bool live = it == m.end() || is_sat(it->second);
        if (reach.count(n) && live) keep.insert(n);
    }
    return induced(t, keep);
}

}  // namespace cfrkit
