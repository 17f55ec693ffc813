// Copyright (c) cfrkit contributors.
// SPDX-License-Identifier: Apache-2.0
#include "cfrkit/chc.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <sstream>

namespace cfrkit {

std::vector<std::size_t> ChcProgram::defining(const PredId& q) const {
    std::vector<std::size_t> r;
    for (std::size_t i = 0; i < clauses.size(); ++i)
        if (clauses[i].head == q) r.push_back(i);
    return r;
}

std::vector<std::size_t> ChcProgram::callers(const PredId& q) const {
    std::vector<std::size_t> r;
    for (std::size_t i = 0; i < clauses.size(); ++i)
        if (clauses[i].call == q) r.push_back(i);
    return r;
}

VarSet ChcProgram::args(bool primed) const {
    VarSet s;
    for (const auto& v : vars) s.insert(Var(v, primed));
    return s;
}

bool ChcProgram::has_pred(const PredId& q) const { return std::find(preds.begin(), preds.end(), q) != preds.end(); }

ChcProgram its_to_chc(const Its& t) {
    ChcProgram p;
    p.vars = t.vars;
    p.entry = t.entry;
    p.preds = t.nodes;
    for (const auto& e : t.edges) p.clauses.push_back({e.src, e.formula, e.dst});
    return p;
}

Its chc_to_its(const ChcProgram& p, const std::string& name) {
    for (const auto& c : p.clauses)
        if (c.call && !p.has_pred(*c.call)) throw InvalidArgument("call to undeclared predicate " + *c.call);

    std::set<PredId> reach{p.entry};
    for (bool grew = true; grew;) {
        grew = false;
        for (const auto& c : p.clauses)
            if (reach.count(c.head) && c.call && reach.insert(*c.call).second) grew = true;
    }

    Its t;
    t.name = name;
    t.vars = p.vars;
    t.entry = p.entry;
    t.add_node(p.entry);
    for (const auto& q : p.preds)
        if (reach.count(q)) t.add_node(q);
    NodeId sink;
    for (const auto& c : p.clauses) {
        if (!reach.count(c.head)) continue;
        if (c.call) {
            t.edges.push_back({c.head, *c.call, c.constraint});
        } else {
            if (sink.empty()) {
                sink = t.fresh_node(kSinkNode);
                t.add_node(sink);
            }
            t.edges.push_back({c.head, sink, c.constraint});
        }
    }
    return t;
}

std::set<PredId> loop_heads(const ChcProgram& p) {
    std::map<PredId, std::vector<PredId>> succ;
    for (const auto& c : p.clauses)
        if (c.call) succ[c.head].push_back(*c.call);
    std::set<PredId> heads;
    std::map<PredId, int> state;  // 0 new, 1 on stack, 2 done
    std::function<void(const PredId&)> dfs = [&](const PredId& q) {
        state[q] = 1;
        for (const auto& r : succ[q]) {
            if (state[r] == 1) heads.insert(r);
            else if (state[r] == 0) dfs(r);
        }
        state[q] = 2;
    };
    dfs(p.entry);
    return heads;
}

std::string emit_chc(const ChcProgram& p) {
    auto args = [&](bool primed) {
        std::string s;
        for (std::size_t i = 0; i < p.vars.size(); ++i) s += (i ? ", " : "") + Var(p.vars[i], primed).str();
        return s;
    };
    std::ostringstream os;
    os << "% entry " << p.entry << "\n";
    for (const auto& c : p.clauses) {
        os << c.head << "(" << args(false) << ") :- " << c.constraint.str();
        if (c.call) os << ", " << *c.call << "(" << args(true) << ")";
        os << ".\n";
    }
    return os.str();
}

}  // namespace cfrkit
