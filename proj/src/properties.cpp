// Copyright (c) cfrkit contributors.
// SPDX-License-Identifier: Apache-2.0
#include "cfrkit/properties.hpp"

#include <algorithm>
#include <functional>
#include <stdexcept>

#include "lexer.hpp"

namespace cfrkit {

bool add_property(PropSet& s, const Conj& p) {
    if (p.empty()) return false;
    for (const auto& q : s)
        if (equivalent(p, q)) return false;
    s.push_back(p);
    return true;
}

namespace {

// Tightest v <= c and v >= c entailed by f, strict when the bound is not attained.
void add_bounds(PropSet& out, const Conj& f, const Var& v, const Var& as) {
    for (BoundDir d : {BoundDir::Upper, BoundDir::Lower}) {
        auto c = var_bound(f, v, d);
        if (!c) continue;
        const Atom eq = Atom({{v, 1}}, -*c, Rel::Eq);
        const bool attained = is_sat(f & Conj({eq}));
        Rel rel;
        if (d == BoundDir::Upper) rel = attained ? Rel::Le : Rel::Lt;
        else rel = attained ? Rel::Ge : Rel::Gt;
        add_property(out, Conj({Atom::compare({{as, 1}}, 0, rel, {}, *c)}));
    }
}

}  // namespace

PropSet props_h(const ChcProgram& p, const PredId& q) {
    PropSet out;
    const VarSet x = p.args();
    for (auto i : p.defining(q)) {
        const Conj& f = p.clauses[i].constraint;
        if (!is_sat(f)) continue;
        add_property(out, project(f, x));
    }
    return out;
}

PropSet props_hv(const ChcProgram& p, const PredId& q) {
    PropSet out;
    for (auto i : p.defining(q)) {
        const Conj& f = p.clauses[i].constraint;
        if (!is_sat(f)) continue;
        for (const auto& v : p.vars) add_bounds(out, f, Var(v), Var(v));
    }
    return out;
}

PropSet props_c(const ChcProgram& p, const PredId& q) {
    PropSet out;
    const VarSet xp = p.args(true);
    for (auto i : p.callers(q)) {
        const Conj& f = p.clauses[i].constraint;
        if (!is_sat(f)) continue;
        add_property(out, unprime_all(project(f, xp)));
    }
    return out;
}

PropSet props_cv(const ChcProgram& p, const PredId& q) {
    PropSet out;
    for (auto i : p.callers(q)) {
        const Conj& f = p.clauses[i].constraint;
        if (!is_sat(f)) continue;
        for (const auto& v : p.vars) add_bounds(out, f, Var(v, true), Var(v));
    }
    return out;
}

namespace {

std::size_t atom_distance(const Conj& a, const Conj& b) {
    std::size_t d = 0;
    for (const auto& x : a.atoms())
        if (std::find(b.atoms().begin(), b.atoms().end(), x) == b.atoms().end()) ++d;
    for (const auto& x : b.atoms())
        if (std::find(a.atoms().begin(), a.atoms().end(), x) == a.atoms().end()) ++d;
    return d;
}

void enforce_cap(PropSet& s, std::size_t cap) {
    while (s.size() > cap && s.size() >= 2) {
        std::size_t bi = 0, bj = 1, best = SIZE_MAX;
        for (std::size_t i = 0; i < s.size(); ++i)
            for (std::size_t j = i + 1; j < s.size(); ++j)
                if (auto d = atom_distance(s[i], s[j]); d < best) {
                    best = d;
                    bi = i;
                    bj = j;
                }
        Conj h = hull(s[bi], s[bj]);
        s.erase(s.begin() + static_cast<long>(bj));
        s.erase(s.begin() + static_cast<long>(bi));
        // answers are kept even when they are `true`
        bool dup = false;
        for (const auto& q : s) dup = dup || equivalent(q, h);
        if (!dup) s.push_back(h);
    }
}

}  // namespace

std::map<PredId, PropSet> dh_answers(const ChcProgram& p, std::size_t cap) {
    const auto heads = loop_heads(p);
    const VarSet x = p.args();
    std::map<PredId, PropSet> memo;
    std::map<PredId, int> state;
    std::function<const PropSet&(const PredId&)> answers = [&](const PredId& q) -> const PropSet& {
        if (state[q] == 2) return memo[q];
        if (state[q] == 1) throw std::logic_error("recursion left after cutting back edges at " + q);
        state[q] = 1;
        PropSet out;
        auto keep = [&](const Conj& f) {
            if (!is_sat(f)) return;
            const Conj a = project(f, x);
            for (const auto& o : out)
                if (equivalent(o, a)) return;
            out.push_back(a);
        };
        for (auto i : p.defining(q)) {
            const Clause& c = p.clauses[i];
            if (!c.call || heads.count(*c.call)) {
                keep(c.constraint);
                continue;
            }
            for (const auto& psi : answers(*c.call)) keep(c.constraint & prime_all(psi));
        }
        enforce_cap(out, cap);
        memo[q] = std::move(out);
        state[q] = 2;
        return memo[q];
    };
    // A cycle away from the entry is not cut by the entry DFS, so only
    // predicates reachable from the entry take part.
    std::set<PredId> reach{p.entry};
    for (bool grew = true; grew;) {
        grew = false;
        for (const auto& c : p.clauses)
            if (reach.count(c.head) && c.call && reach.insert(*c.call).second) grew = true;
    }
    for (const auto& q : p.preds)
        if (reach.count(q)) answers(q);
    return memo;
}

PropertyMap props_dh(const ChcProgram& p, std::size_t cap) {
    const auto ans = dh_answers(p, cap);
    PropertyMap out;
    for (const auto& q : loop_heads(p)) {
        PropSet& s = out[q];
        for (const auto& a : ans.at(q))
            for (const auto& atom : a.atoms()) add_property(s, Conj({atom}));
    }
    return out;
}

PropertyMap merge(const std::vector<PropertyMap>& maps) {
    PropertyMap out;
    for (const auto& m : maps)
        for (const auto& [q, s] : m) {
            PropSet& dst = out[q];
            for (const auto& prop : s) add_property(dst, prop);
        }
    return out;
}

PropertyMap parse_user_props(std::string_view text, const std::set<PredId>& known) {
    detail::Lexer lx(text);
    PropertyMap out;
    while (!lx.at_end()) {
        lx.expect_keyword("props");
        const auto at = lx.peek();
        const PredId q = lx.expect_ident();
        if (!known.count(q)) throw InvalidArgument("unknown node '" + q + "' at line " + std::to_string(at.line));
        lx.expect_sym("{");
        PropSet& s = out[q];
        for (;;) {
            const Conj c = detail::parse_conj(lx);
            for (const auto& v : c.vars())
                if (v.primed) lx.fail("properties may not mention primed variables");
            add_property(s, c);
            if (!lx.at_sym(";")) break;
            lx.next();
        }
        lx.expect_sym("}");
    }
    return out;
}

Heuristic parse_heuristic(std::string_view s) {
    if (s == "h") return Heuristic::H;
    if (s == "hv") return Heuristic::HV;
    if (s == "c") return Heuristic::C;
    if (s == "cv") return Heuristic::CV;
    if (s == "dh") return Heuristic::DH;
    throw InvalidArgument("unknown property heuristic '" + std::string(s) + "'");
}

const char* heuristic_name(Heuristic h) {
    switch (h) {
    case Heuristic::H: return "h";
    case Heuristic::HV: return "hv";
    case Heuristic::C: return "c";
    case Heuristic::CV: return "cv";
    case Heuristic::DH: return "dh";
    }
    return "?";
}

PropertyMap infer_properties(const ChcProgram& p, const std::set<Heuristic>& hs, const std::set<PredId>* only) {
    PropertyMap out;
    PropertyMap dh;
    if (hs.count(Heuristic::DH)) dh = props_dh(p);
    const auto heads = loop_heads(p);
    for (const auto& q : p.preds) {
        if (!heads.count(q)) continue;
        if (only && !only->count(q)) continue;
        PropSet& s = out[q];
        auto take = [&](const PropSet& src) {
            for (const auto& c : src) add_property(s, c);
        };
        if (hs.count(Heuristic::H)) take(props_h(p, q));
        if (hs.count(Heuristic::HV)) take(props_hv(p, q));
        if (hs.count(Heuristic::C)) take(props_c(p, q));
        if (hs.count(Heuristic::CV)) take(props_cv(p, q));
        if (hs.count(Heuristic::DH) && dh.count(q)) take(dh.at(q));
    }
    return out;
}

}  // namespace cfrkit
