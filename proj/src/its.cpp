// Copyright (c) cfrkit contributors.
// SPDX-License-Identifier: Apache-2.0
#include "cfrkit/its.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <sstream>

#include <json.hpp>

#include "lexer.hpp"

namespace cfrkit {

bool Its::has_node(const NodeId& n) const { return std::find(nodes.begin(), nodes.end(), n) != nodes.end(); }

void Its::add_node(const NodeId& n) {
    if (!has_node(n)) nodes.push_back(n);
}

VarSet Its::var_set(bool primed) const {
    VarSet s;
    for (const auto& v : vars) s.insert(Var(v, primed));
    return s;
}

std::vector<std::size_t> Its::out_edges(const NodeId& n) const {
    std::vector<std::size_t> r;
    for (std::size_t i = 0; i < edges.size(); ++i)
        if (edges[i].src == n) r.push_back(i);
    return r;
}

std::vector<std::size_t> Its::in_edges(const NodeId& n) const {
    std::vector<std::size_t> r;
    for (std::size_t i = 0; i < edges.size(); ++i)
        if (edges[i].dst == n) r.push_back(i);
    return r;
}

void Its::validate() const {
    if (!has_node(entry)) throw InvalidArgument("entry '" + entry + "' is not a node");
    const std::set<std::string> declared(vars.begin(), vars.end());
    for (const auto& e : edges) {
        if (!has_node(e.src) || !has_node(e.dst))
            throw InvalidArgument("edge " + e.src + " -> " + e.dst + " has an unknown endpoint");
        if (e.dst == entry) throw InvalidArgument("entry '" + entry + "' has an incoming edge");
        for (const auto& v : e.formula.vars())
            if (!declared.count(v.name))
                throw InvalidArgument("edge " + e.src + " -> " + e.dst + " uses undeclared variable " + v.str());
    }
}

NodeId Its::fresh_node(const std::string& base) const {
    if (!has_node(base)) return base;
    for (int i = 1;; ++i) {
        NodeId n = base + "_" + std::to_string(i);
        if (!has_node(n)) return n;
    }
}

// ---- text ------------------------------------------------------------------

Its parse_its(std::string_view text) {
    detail::Lexer lx(text);
    Its t;
    lx.expect_keyword("its");
    t.name = lx.expect_ident();
    lx.expect_sym("{");
    lx.expect_keyword("vars");
    while (lx.peek().kind == detail::Tok::Ident) {
        std::string v = lx.expect_ident();
        if (v.back() == '\'') lx.fail("variable declarations must be unprimed");
        if (std::find(t.vars.begin(), t.vars.end(), v) != t.vars.end()) lx.fail("duplicate variable " + v);
        t.vars.push_back(v);
    }
    lx.expect_sym(";");
    lx.expect_keyword("entry");
    t.entry = lx.expect_ident();
    t.add_node(t.entry);
    lx.expect_sym(";");
    const std::set<std::string> declared(t.vars.begin(), t.vars.end());
    while (lx.at_ident("edge")) {
        const auto at = lx.peek();
        lx.next();
        Edge e;
        e.src = lx.expect_ident();
        lx.expect_sym("->");
        e.dst = lx.expect_ident();
        lx.expect_sym("{");
        if (!lx.at_sym("}")) e.formula = detail::parse_conj(lx);
        lx.expect_sym("}");
        lx.expect_sym(";");
        for (const auto& v : e.formula.vars())
            if (!declared.count(v.name))
                throw ParseError("undeclared variable " + v.str(), at.line, at.column);
        if (e.dst == t.entry) throw ParseError("edge into entry " + t.entry, at.line, at.column);
        t.add_node(e.src);
        t.add_node(e.dst);
        t.edges.push_back(std::move(e));
    }
    lx.expect_sym("}");
    if (!lx.at_end()) lx.fail("trailing input '" + lx.peek().text + "'");
    return t;
}

std::string emit_its(const Its& t) {
    std::ostringstream os;
    os << "its " << t.name << " {\n  vars";
    for (const auto& v : t.vars) os << ' ' << v;
    os << ";\n  entry " << t.entry << ";\n";
    for (const auto& e : t.edges) {
        os << "  edge " << e.src << " -> " << e.dst << " { ";
        if (!e.formula.empty()) os << e.formula.str() << ' ';
        os << "};\n";
    }
    os << "}\n";
    return os.str();
}

namespace {

std::string dot_escape(const std::string& s) {
    std::string r;
    for (char c : s) {
        if (c == '"' || c == '\\') r += '\\';
        r += c;
    }
    return r;
}

}  // namespace

std::string emit_dot(const Its& t) {
    std::ostringstream os;
    os << "digraph \"" << dot_escape(t.name) << "\" {\n";
    for (const auto& n : t.nodes)
        os << "  \"" << dot_escape(n) << "\" [shape=" << (n == t.entry ? "doublecircle" : "circle") << "];\n";
    for (const auto& e : t.edges)
        os << "  \"" << dot_escape(e.src) << "\" -> \"" << dot_escape(e.dst) << "\" [label=\""
           << dot_escape(e.formula.str()) << "\"];\n";
    os << "}\n";
    return os.str();
}

std::string emit_json(const Its& t) {
    nlohmann::ordered_json j;
    j["name"] = t.name;
    j["vars"] = t.vars;
    j["entry"] = t.entry;
    j["nodes"] = t.nodes;
    auto edges = nlohmann::ordered_json::array();
    for (const auto& e : t.edges) {
        nlohmann::ordered_json je;
        je["src"] = e.src;
        je["dst"] = e.dst;
        auto atoms = nlohmann::ordered_json::array();
        for (const auto& a : e.formula.atoms()) atoms.push_back(a.str());
        je["atoms"] = atoms;
        edges.push_back(je);
    }
    j["edges"] = edges;
    return j.dump(2) + "\n";
}

// ---- graph -----------------------------------------------------------------

std::vector<SccPart> sccs(const Its& t) {
    std::map<NodeId, int> index, low;
    std::map<NodeId, bool> on_stack;
    std::vector<NodeId> stack;
    std::vector<SccPart> out;
    int counter = 0;

    std::map<NodeId, std::vector<NodeId>> succ;
    for (const auto& e : t.edges) succ[e.src].push_back(e.dst);

    std::function<void(const NodeId&)> visit = [&](const NodeId& v) {
        index[v] = low[v] = counter++;
        stack.push_back(v);
        on_stack[v] = true;
        for (const auto& w : succ[v]) {
            if (!index.count(w)) {
                visit(w);
                low[v] = std::min(low[v], low[w]);
            } else if (on_stack[w]) {
                low[v] = std::min(low[v], index[w]);
            }
        }
        if (low[v] == index[v]) {
            SccPart part;
            std::set<NodeId> members;
            for (;;) {
                NodeId w = stack.back();
                stack.pop_back();
                on_stack[w] = false;
                members.insert(w);
                if (w == v) break;
            }
            for (const auto& n : t.nodes)
                if (members.count(n)) part.nodes.push_back(n);
            for (std::size_t i = 0; i < t.edges.size(); ++i)
                if (members.count(t.edges[i].src) && members.count(t.edges[i].dst)) part.edges.push_back(i);
            part.trivial = part.edges.empty();
            out.push_back(std::move(part));
        }
    };
    for (const auto& n : t.nodes)
        if (!index.count(n)) visit(n);
    return out;
}

NodeSet reachable_from(const Its& t, const NodeId& from) {
    NodeSet seen{from};
    std::vector<NodeId> work{from};
    while (!work.empty()) {
        NodeId n = work.back();
        work.pop_back();
        for (const auto& e : t.edges)
            if (e.src == n && seen.insert(e.dst).second) work.push_back(e.dst);
    }
    return seen;
}

Its induced(const Its& t, const NodeSet& keep) {
    Its r;
    r.name = t.name;
    r.vars = t.vars;
    r.entry = t.entry;
    for (const auto& n : t.nodes)
        if (n == t.entry || keep.count(n)) r.nodes.push_back(n);
    for (const auto& e : t.edges)
        if (r.has_node(e.src) && r.has_node(e.dst)) r.edges.push_back(e);
    return r;
}

Its remove_non_reaching(const Its& t, const NodeSet& keep) {
    // backward reachability from keep
    NodeSet alive;
    std::vector<NodeId> work;
    for (const auto& n : keep)
        if (t.has_node(n) && alive.insert(n).second) work.push_back(n);
    while (!work.empty()) {
        NodeId n = work.back();
        work.pop_back();
        for (const auto& e : t.edges)
            if (e.dst == n && alive.insert(e.src).second) work.push_back(e.src);
    }
    return induced(t, alive);
}

Its remove_terminating(const Its& t, const NodeSet& keep) { return induced(t, keep); }

Its instrument_cost(const Its& t) {
    if (std::find(t.vars.begin(), t.vars.end(), kCostVar) != t.vars.end())
        throw InvalidArgument("variable " + std::string(kCostVar) + " already present");
    Its r = t;
    r.vars.push_back(kCostVar);
    const Var c(kCostVar), cp(kCostVar, true);
    const Atom tick = Atom::compare({{cp, 1}}, 0, Rel::Eq, {{c, 1}}, 1);
    const Atom zero = Atom({{c, 1}}, 0, Rel::Eq);
    for (auto& e : r.edges) {
        e.formula.add(tick);
        if (e.src == r.entry) e.formula.add(zero);
    }
    return r;
}

}  // namespace cfrkit
