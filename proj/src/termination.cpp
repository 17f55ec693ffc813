// Copyright (c) cfrkit contributors.
// SPDX-License-Identifier: Apache-2.0
#include "cfrkit/termination.hpp"

#include <algorithm>
#include <deque>
#include <sstream>

#include <json.hpp>

#include "lexer.hpp"
#include "simplex.hpp"

namespace cfrkit {

// ---- affine functions --------------------------------------------------------

bool AffineFn::is_zero() const {
    if (sgn(constant) != 0) return false;
    for (const auto& [v, c] : coeffs)
        if (sgn(c) != 0) return false;
    return true;
}

Rational AffineFn::eval(const Valuation& sigma) const {
    Rational r = constant;
    for (const auto& [v, c] : coeffs) r += c * Rational(sigma.at(Var(v)));
    return r;
}

std::map<Var, Rational> AffineFn::form(bool primed) const {
    std::map<Var, Rational> out;
    for (const auto& [v, c] : coeffs)
        if (sgn(c) != 0) out.emplace(Var(v, primed), c);
    return out;
}

std::string AffineFn::str() const {
    std::ostringstream os;
    bool first = true;
    for (const auto& [v, c] : coeffs) {
        if (sgn(c) == 0) continue;
        const Rational mag = abs(c);
        if (first) {
            if (sgn(c) < 0) os << "-";
        } else {
            os << (sgn(c) < 0 ? " - " : " + ");
        }
        if (mag != 1) os << mag << "*";
        os << v;
        first = false;
    }
    if (first) {
        os << constant;
    } else if (sgn(constant) != 0) {
        os << (sgn(constant) < 0 ? " - " : " + ") << abs(constant);
    }
    return os.str();
}

AffineFn parse_affine(std::string_view text) {
    detail::Lexer lx(text);
    std::map<Var, Rational> coeffs;
    Rational k = 0;
    detail::parse_expr(lx, coeffs, k);
    if (!lx.at_end()) lx.fail("trailing input '" + lx.peek().text + "'");
    AffineFn f;
    f.constant = k;
    for (const auto& [v, c] : coeffs) {
        if (v.primed) lx.fail("primed variable " + v.str() + " in a ranking function");
        if (sgn(c) != 0) f.coeffs[v.name] = c;
    }
    return f;
}

const char* rank_kind_name(RankKind k) {
    switch (k) {
    case RankKind::Lrf: return "lrf";
    case RankKind::Llrf: return "llrf";
    case RankKind::Mlrf: return "mlrf";
    }
    return "?";
}

bool derived_from(const NodeId& m, const NodeId& n) {
    if (m == n) return true;
    return m.size() > n.size() + 2 && m.compare(0, n.size(), n) == 0 && m.compare(n.size(), 2, "__") == 0;
}

namespace {

// ---- Farkas encoding ---------------------------------------------------------

// Affine expression over LP columns.
struct Lin {
    std::map<std::size_t, Rational> terms;
    Rational k = 0;

    Lin& add(const Lin& o, const Rational& s = 1) {
        for (const auto& [c, v] : o.terms) terms[c] += s * v;
        k += s * o.k;
        return *this;
    }
};

Lin constant(const Rational& k) {
    Lin l;
    l.k = k;
    return l;
}

// Template functions: for each node and component, one column per variable
// plus one for the constant.
class Template {
public:
    Template(lp::Problem& p, const Its& t, const std::vector<NodeId>& nodes, int depth) : vars_(t.vars) {
        for (const auto& n : nodes)
            for (int i = 0; i < depth; ++i) {
                std::vector<std::size_t> cols;
                for (std::size_t v = 0; v <= vars_.size(); ++v) cols.push_back(p.add_var(false));
                cols_[{n, i}] = std::move(cols);
            }
    }

    Lin coeff(const NodeId& n, int i, std::size_t v) const {
        Lin l;
        l.terms[cols_.at({n, i})[v]] = 1;
        return l;
    }
    Lin konst(const NodeId& n, int i) const { return coeff(n, i, vars_.size()); }
    std::size_t num_vars() const { return vars_.size(); }
    const std::string& var(std::size_t v) const { return vars_[v]; }

    AffineFn value(const NodeId& n, int i, const std::vector<Rational>& point) const {
        AffineFn f;
        const auto& cols = cols_.at({n, i});
        for (std::size_t v = 0; v < vars_.size(); ++v)
            if (sgn(point[cols[v]]) != 0) f.coeffs[vars_[v]] = point[cols[v]];
        f.constant = point[cols[vars_.size()]];
        return f;
    }

private:
    std::vector<std::string> vars_;
    std::map<std::pair<NodeId, int>, std::vector<std::size_t>> cols_;
};

// A target `sum(coeffs[v] * v) + k >= 0` whose coefficients are affine in the
// template columns.
struct Target {
    std::map<Var, Lin> coeffs;
    Lin k;
};

// Adds rows forcing phi |= target, with fresh Farkas multipliers.
void require(lp::Problem& p, const Conj& phi, const Target& tgt) {
    std::vector<std::size_t> lambda;
    for (const Atom& a : phi.atoms()) lambda.push_back(p.add_var(a.rel() != Rel::Eq));
    VarSet universe = phi.vars();
    for (const auto& [v, l] : tgt.coeffs) universe.insert(v);
    for (const Var& u : universe) {
        lp::Row row;
        for (std::size_t i = 0; i < phi.size(); ++i) {
            auto it = phi.atoms()[i].coeffs().find(u);
            if (it != phi.atoms()[i].coeffs().end()) row.terms.emplace_back(lambda[i], it->second);
        }
        Rational rhs = 0;
        if (auto it = tgt.coeffs.find(u); it != tgt.coeffs.end()) {
            for (const auto& [c, v] : it->second.terms) row.terms.emplace_back(c, -v);
            rhs = it->second.k;
        }
        if (row.terms.empty() && sgn(rhs) == 0) continue;
        row.sense = lp::Sense::Eq;
        row.rhs = rhs;
        p.add_row(std::move(row));
    }
    // k - sum(lambda_i * const_i) >= 0
    lp::Row row;
    for (const auto& [c, v] : tgt.k.terms) row.terms.emplace_back(c, v);
    for (std::size_t i = 0; i < phi.size(); ++i)
        if (sgn(phi.atoms()[i].constant()) != 0) row.terms.emplace_back(lambda[i], -phi.atoms()[i].constant());
    row.sense = lp::Sense::Ge;
    row.rhs = -tgt.k.k;
    p.add_row(std::move(row));
}

// f_i at src over x.
void add_fn(Target& t, const Template& tp, const NodeId& n, int i, bool primed, const Rational& s) {
    for (std::size_t v = 0; v < tp.num_vars(); ++v) t.coeffs[Var(tp.var(v), primed)].add(tp.coeff(n, i, v), s);
    t.k.add(tp.konst(n, i), s);
}

// f_i(src, x) - f_i(dst, x') - delta >= 0
Target decrease(const Template& tp, const Edge& e, int i, const Lin& delta) {
    Target t;
    add_fn(t, tp, e.src, i, false, 1);
    add_fn(t, tp, e.dst, i, true, -1);
    t.k.add(delta, -1);
    return t;
}

Target bounded(const Template& tp, const Edge& e, int i) {
    Target t;
    add_fn(t, tp, e.src, i, false, 1);
    return t;
}

// Edge formulas read over the integers; unsatisfiable edges are vacuous.
struct LiveEdge {
    std::size_t index;
    Conj phi;
};

std::vector<LiveEdge> live_edges(const Its& t, const std::vector<std::size_t>& edges) {
    std::vector<LiveEdge> out;
    for (auto i : edges) {
        Conj phi = tighten(t.edges[i].formula);
        if (is_sat(phi)) out.push_back({i, std::move(phi)});
    }
    return out;
}

std::optional<std::vector<Rational>> solve(const lp::Problem& p, const std::vector<std::pair<std::size_t, Rational>>& obj = {}) {
    lp::Result r = lp::maximize(p, obj);
    if (r.status == lp::Status::Infeasible) return std::nullopt;
    if (r.status == lp::Status::Unbounded) {
        r = lp::maximize(p, {});
        if (r.status != lp::Status::Optimal) return std::nullopt;
    }
    return r.point;
}

// Quasi-LRF with a fixed strict set; bounded only on strict edges.
std::optional<LrfResult> quasi_with(const Its& t, const SccPart& s, const std::vector<LiveEdge>& live,
                                    const std::set<std::size_t>& strict) {
    lp::Problem p;
    Template tp(p, t, s.nodes, 1);
    for (const auto& le : live) {
        const Edge& e = t.edges[le.index];
        const bool st = strict.count(le.index) > 0;
        require(p, le.phi, decrease(tp, e, 0, constant(st ? 1 : 0)));
        if (st) require(p, le.phi, bounded(tp, e, 0));
    }
    auto pt = solve(p);
    if (!pt) return std::nullopt;
    LrfResult r;
    for (const auto& n : s.nodes) r.fns[n] = tp.value(n, 0, *pt);
    r.strict = strict;
    return r;
}

}  // namespace

std::optional<LrfResult> synth_lrf(const Its& t, const SccPart& s, LrfMode mode) {
    const auto live = live_edges(t, s.edges);
    if (mode == LrfMode::StrictAll) {
        lp::Problem p;
        Template tp(p, t, s.nodes, 1);
        for (const auto& le : live) {
            require(p, le.phi, decrease(tp, t.edges[le.index], 0, constant(1)));
            require(p, le.phi, bounded(tp, t.edges[le.index], 0));
        }
        auto pt = solve(p);
        if (!pt) return std::nullopt;
        LrfResult r;
        for (const auto& n : s.nodes) r.fns[n] = tp.value(n, 0, *pt);
        r.strict.insert(s.edges.begin(), s.edges.end());
        return r;
    }

    // One LP with a decrease slack per edge and boundedness everywhere gives a
    // first strict set; the rest is grown greedily with boundedness on strict
    // edges only.
    std::set<std::size_t> strict;
    for (auto i : s.edges) {
        bool vacuous = true;
        for (const auto& le : live) vacuous = vacuous && le.index != i;
        if (vacuous) strict.insert(i);
    }
    {
        lp::Problem p;
        Template tp(p, t, s.nodes, 1);
        std::vector<std::pair<std::size_t, Rational>> obj;
        std::vector<std::size_t> slack;
        for (const auto& le : live) {
            const std::size_t d = p.add_var(true);
            lp::Row cap;
            cap.terms.emplace_back(d, 1);
            cap.sense = lp::Sense::Le;
            cap.rhs = 1;
            p.add_row(std::move(cap));
            Lin delta;
            delta.terms[d] = 1;
            require(p, le.phi, decrease(tp, t.edges[le.index], 0, delta));
            require(p, le.phi, bounded(tp, t.edges[le.index], 0));
            obj.emplace_back(d, 1);
            slack.push_back(d);
        }
        if (auto pt = solve(p, obj))
            for (std::size_t j = 0; j < live.size(); ++j)
                if (sgn((*pt)[slack[j]]) > 0) strict.insert(live[j].index);
    }
    std::optional<LrfResult> best = quasi_with(t, s, live, strict);
    for (const auto& le : live) {
        if (strict.count(le.index)) continue;
        auto trial = strict;
        trial.insert(le.index);
        if (auto r = quasi_with(t, s, live, trial)) {
            strict = std::move(trial);
            best = std::move(r);
        }
    }
    if (!best || best->strict.empty()) return std::nullopt;
    return best;
}

std::optional<RankCertificate> synth_mlrf(const Its& t, const SccPart& s, int max_depth) {
    const auto live = live_edges(t, s.edges);
    for (int d = 1; d <= max_depth; ++d) {
        lp::Problem p;
        Template tp(p, t, s.nodes, d);
        for (const auto& le : live) {
            const Edge& e = t.edges[le.index];
            require(p, le.phi, decrease(tp, e, 0, constant(1)));
            for (int i = 1; i < d; ++i) {
                Target tg = decrease(tp, e, i, constant(1));
                add_fn(tg, tp, e.src, i - 1, false, 1);
                require(p, le.phi, tg);
            }
            require(p, le.phi, bounded(tp, e, d - 1));
        }
        auto pt = solve(p);
        if (!pt) continue;
        RankCertificate c;
        c.kind = d == 1 ? RankKind::Lrf : RankKind::Mlrf;
        for (const auto& n : s.nodes)
            for (int i = 0; i < d; ++i) c.per_node[n].push_back(tp.value(n, i, *pt));
        c.strict_edges.push_back(std::set<std::size_t>(s.edges.begin(), s.edges.end()));
        return c;
    }
    return std::nullopt;
}

// ---- checking ------------------------------------------------------------------

namespace {

// Edges of `edges` that lie on a cycle of the subgraph they form.
std::vector<std::size_t> cyclic_edges(const Its& t, const std::vector<NodeId>& nodes,
                                      const std::vector<std::size_t>& edges) {
    Its sub;
    sub.vars = t.vars;
    sub.nodes = nodes;
    sub.entry = nodes.empty() ? NodeId() : nodes.front();
    for (auto i : edges) sub.edges.push_back(t.edges[i]);
    std::vector<std::size_t> out;
    for (const auto& part : sccs(sub)) {
        if (part.trivial) continue;
        for (auto j : part.edges) out.push_back(edges[j]);
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<SccPart> cyclic_parts(const Its& t, const std::vector<NodeId>& nodes, const std::vector<std::size_t>& edges) {
    Its sub;
    sub.vars = t.vars;
    sub.nodes = nodes;
    sub.entry = nodes.empty() ? NodeId() : nodes.front();
    for (auto i : edges) sub.edges.push_back(t.edges[i]);
    std::vector<SccPart> out;
    for (auto part : sccs(sub)) {
        if (part.trivial) continue;
        for (auto& j : part.edges) j = edges[j];
        out.push_back(std::move(part));
    }
    return out;
}

const AffineFn* component(const RankCertificate& c, const NodeId& n, std::size_t i) {
    auto it = c.per_node.find(n);
    if (it == c.per_node.end() || it->second.size() <= i) return nullptr;
    return &it->second[i];
}

Atom ge_atom(std::map<Var, Rational> coeffs, const Rational& k) { return Atom(std::move(coeffs), k, Rel::Ge); }

// f(src, x) - g(dst, x') + extra(src, x) - delta >= 0
Atom step_atom(const AffineFn& f, const AffineFn& g, const AffineFn* extra, const Rational& delta) {
    std::map<Var, Rational> c = f.form(false);
    for (const auto& [v, k] : g.form(true)) c[v] -= k;
    Rational k = f.constant - g.constant - delta;
    if (extra) {
        for (const auto& [v, x] : extra->form(false)) c[v] += x;
        k += extra->constant;
    }
    return ge_atom(std::move(c), k);
}

bool check_mlrf(const Its& t, const SccPart& s, const RankCertificate& c) {
    std::size_t d = 0;
    for (const auto& n : s.nodes) {
        auto it = c.per_node.find(n);
        if (it == c.per_node.end() || it->second.empty()) return false;
        if (d == 0) d = it->second.size();
        if (it->second.size() != d) return false;
    }
    for (const auto& le : live_edges(t, s.edges)) {
        const Edge& e = t.edges[le.index];
        for (std::size_t i = 0; i < d; ++i) {
            const AffineFn* prev = i > 0 ? component(c, e.src, i - 1) : nullptr;
            if (!entails(le.phi, step_atom(*component(c, e.src, i), *component(c, e.dst, i), prev, 1))) return false;
        }
        const AffineFn& last = *component(c, e.src, d - 1);
        if (!entails(le.phi, ge_atom(last.form(), last.constant))) return false;
    }
    return true;
}

}  // namespace

bool check_certificate(const Its& t, const SccPart& s, const RankCertificate& c) {
    if (c.kind == RankKind::Mlrf) return check_mlrf(t, s, c);
    std::vector<std::size_t> rest = s.edges;
    std::sort(rest.begin(), rest.end());
    for (std::size_t k = 0; k < c.strict_edges.size(); ++k) {
        const auto cyc = cyclic_edges(t, s.nodes, rest);
        const auto& strict = c.strict_edges[k];
        if (strict.empty()) return false;
        for (auto i : strict)
            if (!std::binary_search(cyc.begin(), cyc.end(), i)) return false;
        for (auto i : cyc) {
            const Edge& e = t.edges[i];
            const Conj phi = tighten(e.formula);
            if (!is_sat(phi)) continue;
            const AffineFn* f = component(c, e.src, k);
            const AffineFn* g = component(c, e.dst, k);
            if (!f || !g) return false;
            const bool st = strict.count(i) > 0;
            if (!entails(phi, step_atom(*f, *g, nullptr, st ? 1 : 0))) return false;
            if (st && !entails(phi, ge_atom(f->form(), f->constant))) return false;
        }
        rest.clear();
        for (auto i : cyc)
            if (!strict.count(i)) rest.push_back(i);
    }
    return cyclic_edges(t, s.nodes, rest).empty();
}

// ---- TERMIN_SCC ------------------------------------------------------------------

SccOutcome termin_scc(const Its& t, const SccPart& s, bool use_llrf) {
    SccOutcome out;
    if (s.trivial) return out;
    if (!use_llrf) {
        if (auto r = synth_lrf(t, s, LrfMode::StrictAll)) {
            RankCertificate c;
            c.kind = RankKind::Lrf;
            for (const auto& [n, f] : r->fns) c.per_node[n].push_back(f);
            c.strict_edges.push_back(r->strict);
            out.cert = std::move(c);
            return out;
        }
        // one function, strict on a set of edges that breaks every cycle
        if (auto r = synth_lrf(t, s, LrfMode::Quasi)) {
            std::vector<std::size_t> rest;
            for (auto i : s.edges)
                if (!r->strict.count(i)) rest.push_back(i);
            if (cyclic_parts(t, s.nodes, rest).empty()) {
                RankCertificate c;
                c.kind = RankKind::Lrf;
                for (const auto& n : s.nodes) c.per_node[n].push_back(r->fns.count(n) ? r->fns.at(n) : AffineFn{});
                c.strict_edges.push_back(r->strict);
                out.cert = std::move(c);
                return out;
            }
        }
        out.failed = s.edges;
        return out;
    }

    RankCertificate c;
    c.kind = RankKind::Llrf;
    for (const auto& n : s.nodes) c.per_node[n];
    std::vector<std::size_t> rest = s.edges;
    std::sort(rest.begin(), rest.end());
    for (;;) {
        const auto parts = cyclic_parts(t, s.nodes, rest);
        if (parts.empty()) break;
        std::set<std::size_t> strict;
        std::map<NodeId, AffineFn> fns;
        for (const auto& part : parts)
            if (auto r = synth_lrf(t, part, LrfMode::Quasi)) {
                strict.insert(r->strict.begin(), r->strict.end());
                for (auto& [n, f] : r->fns) fns[n] = std::move(f);
            }
        if (strict.empty()) {
            for (const auto& part : parts) out.failed.insert(out.failed.end(), part.edges.begin(), part.edges.end());
            std::sort(out.failed.begin(), out.failed.end());
            return out;
        }
        for (auto& [n, list] : c.per_node) list.push_back(fns.count(n) ? fns[n] : AffineFn{});
        c.strict_edges.push_back(strict);
        std::vector<std::size_t> next;
        for (const auto& part : parts)
            for (auto i : part.edges)
                if (!strict.count(i)) next.push_back(i);
        std::sort(next.begin(), next.end());
        rest = std::move(next);
    }
    if (c.strict_edges.size() == 1) c.kind = RankKind::Lrf;
    out.cert = std::move(c);
    return out;
}

// ---- refinement driver -------------------------------------------------------

Its build_its(const Its& t, const std::vector<std::size_t>& fs, const InvariantMap* inv) {
    if (fs.empty()) throw InvalidArgument("build_its needs at least one edge");
    const std::set<std::size_t> in(fs.begin(), fs.end());
    NodeSet members;
    for (auto i : fs) {
        members.insert(t.edges[i].src);
        members.insert(t.edges[i].dst);
    }
    Its r;
    r.name = t.name;
    r.vars = t.vars;
    r.entry = t.fresh_node("start");
    r.nodes.push_back(r.entry);
    for (const auto& n : t.nodes)
        if (members.count(n)) r.nodes.push_back(n);
    // every way into the part: the entering edge itself, strengthened with
    // the invariant of its source
    for (const auto& n : r.nodes) {
        if (n == r.entry) continue;
        if (n == t.entry) r.edges.push_back({r.entry, n, unchanged(t.vars)});
        for (auto i : t.in_edges(n)) {
            if (in.count(i)) continue;
            Conj f = t.edges[i].formula;
            if (inv)
                if (auto it = inv->find(t.edges[i].src); it != inv->end()) f = f & it->second;
            const bool dup = std::any_of(r.edges.begin(), r.edges.end(),
                                         [&](const Edge& e) { return e.dst == n && e.formula == f; });
            if (!dup) r.edges.push_back({r.entry, n, f});
        }
    }
    if (r.edges.empty()) r.edges.push_back({r.entry, r.nodes[1], unchanged(t.vars)});
    for (auto i : fs) r.edges.push_back(t.edges[i]);
    return r;
}

namespace {

bool expired(const TerminOptions& o) { return o.deadline && std::chrono::steady_clock::now() > *o.deadline; }

bool use_invariants(const TerminOptions& o) { return o.cfr.invariants_pre || o.cfr.invariants_post; }

// Ranking is over the integers, so refinement always works on tightened formulas.
CfrOptions refine_opts(const TerminOptions& o) {
    CfrOptions c = o.cfr;
    c.int_tighten = true;
    return c;
}

std::vector<NodeId> nodes_of(const Its& t, const std::vector<std::size_t>& edges) {
    NodeSet s;
    for (auto i : edges) {
        s.insert(t.edges[i].src);
        s.insert(t.edges[i].dst);
    }
    std::vector<NodeId> out;
    for (const auto& n : t.nodes)
        if (s.count(n)) out.push_back(n);
    return out;
}

}  // namespace

std::vector<FailedEdge> termin_cfg(const Its& t, int cfr_scc, const TerminOptions& opts, TerminReport* report) {
    std::vector<FailedEdge> failed;
    std::deque<std::pair<Its, int>> queue{{t, cfr_scc}};
    while (!queue.empty()) {
        auto [cur, budget] = std::move(queue.front());
        queue.pop_front();
        InvariantMap inv;
        Its an = cur;
        if (use_invariants(opts)) {
            inv = compute_invariants(cur, opts.cfr.entry_ctx);
            an = annotate(cur, inv);
        }
        for (const auto& part : sccs(an)) {
            if (part.trivial) continue;
            SccOutcome res;
            if (expired(opts)) {
                if (report) report->timed_out = true;
                res.failed = part.edges;
            } else {
                res = termin_scc(an, part, opts.use_llrf);
            }
            if (res.failed.empty()) {
                if (report && res.cert) report->certificates.push_back({an, part, *res.cert});
                continue;
            }
            if (budget > 0 && !expired(opts)) {
                const Its built = build_its(an, res.failed, use_invariants(opts) ? &inv : nullptr);
                Its refined = pe_pipeline(built, refine_opts(opts));
                if (report)
                    report->cfr_trace.push_back({"scc", nodes_of(an, res.failed), opts.cfr.heuristics, refined});
                queue.emplace_back(std::move(refined), budget - 1);
            } else {
                for (auto i : res.failed) failed.push_back({cur.edges[i].src, cur.edges[i].dst, cur.edges[i].formula});
            }
        }
    }
    return failed;
}

TerminReport termin(const Its& t, const TerminOptions& opts) {
    TerminReport rep;
    Its cur = t;
    if (opts.cfr_base) {
        cur = pe_pipeline(cur, refine_opts(opts));
        rep.cfr_trace.push_back({"base", cur.nodes, opts.cfr.heuristics, cur});
    }
    std::vector<FailedEdge> f = termin_cfg(cur, opts.cfr_scc, opts, &rep);
    for (int after = opts.cfr_after; !f.empty() && after > 0 && !expired(opts); --after) {
        NodeSet n;
        for (const auto& m : cur.nodes)
            for (const auto& e : f)
                if (derived_from(e.src, m) || derived_from(e.dst, m)) n.insert(m);
        cur = remove_non_reaching(cur, n);
        CfrOptions o = refine_opts(opts);
        o.nodes = n;
        cur = pe_pipeline(cur, o);
        NodeSet keep;
        for (const auto& m : cur.nodes)
            for (const auto& x : n)
                if (derived_from(m, x)) keep.insert(m);
        const Its pruned = remove_terminating(cur, keep);
        rep.cfr_trace.push_back({"after", std::vector<NodeId>(n.begin(), n.end()), opts.cfr.heuristics, pruned});
        f = termin_cfg(pruned, opts.cfr_scc, opts, &rep);
    }
    if (expired(opts)) rep.timed_out = true;
    rep.failed_edges = std::move(f);
    rep.terminating = rep.failed_edges.empty() && !rep.timed_out;
    return rep;
}

// ---- multiphase splitting ----------------------------------------------------

Its mlrf_split(const Its& t, const NodeId& n, const std::vector<AffineFn>& fns) {
    if (!t.has_node(n)) throw InvalidArgument("unknown node " + n);
    if (n == t.entry) throw InvalidArgument("cannot split the entry node " + n);
    if (fns.empty()) throw InvalidArgument("mlrf_split needs at least one function");
    for (const auto& f : fns)
        for (const auto& [v, c] : f.coeffs)
            if (std::find(t.vars.begin(), t.vars.end(), v) == t.vars.end())
                throw InvalidArgument("undeclared variable " + v + " in ranking function");
    Its r = t;
    const NodeId na = t.fresh_node(n + "a");
    auto pos = std::find(r.nodes.begin(), r.nodes.end(), n);
    r.nodes.insert(pos, na);
    for (auto& e : r.edges)
        if (e.dst == n) e.dst = na;
    const Conj id = unchanged(t.vars);
    for (std::size_t i = 0; i <= fns.size(); ++i) {
        Conj g = id;
        for (std::size_t j = 0; j < i && j < fns.size(); ++j) g.add(Atom(fns[j].form(), fns[j].constant, Rel::Lt));
        if (i < fns.size()) g.add(Atom(fns[i].form(), fns[i].constant, Rel::Ge));
        r.edges.push_back({na, n, g});
    }
    return r;
}

// ---- report ----------------------------------------------------------------------

std::string report_json(const TerminReport& r) {
    using json = nlohmann::ordered_json;
    json j;
    j["terminating"] = r.terminating;
    if (r.timed_out) j["timed_out"] = true;
    j["failed_edges"] = json::array();
    for (const auto& e : r.failed_edges) {
        json atoms = json::array();
        for (const auto& a : e.formula.atoms()) atoms.push_back(a.str());
        j["failed_edges"].push_back({{"src", e.src}, {"dst", e.dst}, {"atoms", atoms}});
    }
    j["certificates"] = json::array();
    for (const auto& c : r.certificates) {
        json per = json::array();
        for (const auto& n : c.scc.nodes) {
            json fns = json::array();
            if (auto it = c.cert.per_node.find(n); it != c.cert.per_node.end())
                for (const auto& f : it->second) fns.push_back(f.str());
            per.push_back({{"node", n}, {"fns", fns}});
        }
        j["certificates"].push_back({{"scc", c.scc.nodes}, {"kind", rank_kind_name(c.cert.kind)}, {"per_node", per}});
    }
    j["cfr_trace"] = json::array();
    for (const auto& s : r.cfr_trace) {
        json props = json::array();
        for (auto h : s.heuristics) props.push_back(heuristic_name(h));
        j["cfr_trace"].push_back({{"scheme", s.scheme}, {"nodes", s.nodes}, {"props", props}});
    }
    return j.dump(2) + "\n";
}

}  // namespace cfrkit
