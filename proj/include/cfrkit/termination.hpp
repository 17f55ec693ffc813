// Copyright (c) cfrkit contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <chrono>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "cfrkit/its.hpp"
#include "cfrkit/pe.hpp"

namespace cfrkit {

/// f(x) = constant + sum(coeffs[v] * v) over unprimed variables.
struct AffineFn {
    std::map<std::string, Rational> coeffs;
    Rational constant = 0;

    bool is_zero() const;
    Rational eval(const Valuation& sigma) const;
    /// Linear form of f over x, or over x' when primed is set.
    std::map<Var, Rational> form(bool primed = false) const;
    std::string str() const;

    bool operator==(const AffineFn&) const = default;
};

/// Parses `2*x - y + 1`.
AffineFn parse_affine(std::string_view text);

enum class RankKind { Lrf, Llrf, Mlrf };

const char* rank_kind_name(RankKind k);

/// Ranking certificate of one SCC. Component k of per_node is checked on the
/// edges still cyclic after the strict edges of the earlier components are
/// gone; a Mlrf uses its components together on every edge.
struct RankCertificate {
    RankKind kind = RankKind::Lrf;
    std::map<NodeId, std::vector<AffineFn>> per_node;
    std::vector<std::set<std::size_t>> strict_edges;  // indices into Its::edges
};

enum class LrfMode { StrictAll, Quasi };

struct LrfResult {
    std::map<NodeId, AffineFn> fns;
    std::set<std::size_t> strict;
};

/// Farkas-based synthesis over the SCC edges. StrictAll asks for decrease and
/// boundedness on every edge; Quasi asks for non-increase everywhere and picks
/// a maximal set of strictly decreasing, bounded edges (possibly empty).
std::optional<LrfResult> synth_lrf(const Its& t, const SccPart& s, LrfMode mode);

/// Multiphase function of depth at most max_depth, shallowest first.
std::optional<RankCertificate> synth_mlrf(const Its& t, const SccPart& s, int max_depth = 4);

bool check_certificate(const Its& t, const SccPart& s, const RankCertificate& c);

struct SccOutcome {
    std::vector<std::size_t> failed;  // edge indices, empty on success
    std::optional<RankCertificate> cert;
};

SccOutcome termin_scc(const Its& t, const SccPart& s, bool use_llrf);

/// The edges fs of t with a fresh entry. Each edge of t entering an fs node
/// from outside fs is copied to start at the entry, conjoined with the
/// invariant of its source when inv is given.
Its build_its(const Its& t, const std::vector<std::size_t>& fs, const InvariantMap* inv = nullptr);

struct FailedEdge {
    NodeId src;
    NodeId dst;
    Conj formula;
    bool operator==(const FailedEdge&) const = default;
};

struct SccCertificate {
    Its its;  // system the SCC lives in
    SccPart scc;
    RankCertificate cert;
};

struct CfrStep {
    std::string scheme;  // "base", "scc" or "after"
    std::vector<NodeId> nodes;
    std::set<Heuristic> heuristics;
    Its result;
};

struct TerminOptions {
    bool cfr_base = false;
    int cfr_after = 0;
    int cfr_scc = 1;
    bool use_llrf = true;
    CfrOptions cfr;  // heuristics and invariants for every CFR call; tightening is always on
    std::optional<std::chrono::steady_clock::time_point> deadline;
};

struct TerminReport {
    bool terminating = false;
    bool timed_out = false;
    std::vector<FailedEdge> failed_edges;
    std::vector<SccCertificate> certificates;
    std::vector<CfrStep> cfr_trace;
};

/// Per-SCC analysis with the cfr_scc queue. Certificates and CFR steps are
/// appended to report when given.
std::vector<FailedEdge> termin_cfg(const Its& t, int cfr_scc, const TerminOptions& opts,
                                   TerminReport* report = nullptr);

TerminReport termin(const Its& t, const TerminOptions& opts = {});

/// Reroutes the incoming edges of n through a fresh node that splits on the
/// signs of fns.
Its mlrf_split(const Its& t, const NodeId& n, const std::vector<AffineFn>& fns);

/// True when m is n or a version of it (`n__2`, `n__2__1`, ...).
bool derived_from(const NodeId& m, const NodeId& n);

std::string report_json(const TerminReport& r);

}  // namespace cfrkit
