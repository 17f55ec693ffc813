// Copyright (c) cfrkit contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <set>
#include <vector>

#include "cfrkit/chc.hpp"
#include "cfrkit/invariants.hpp"
#include "cfrkit/properties.hpp"

namespace cfrkit {

struct Version {
    PredId pred;
    Conj ctx;
    PredId tag;  // name in the output program
};

struct PeConfig {
    PropertyMap props;  // per loop head; missing entries mean no properties
    Conj entry_ctx;
    int unfold_limit = 50;
    bool abstract_non_loop_heads = false;
};

struct PeResult {
    ChcProgram program;
    std::vector<Version> versions;            // discovery order, seed first
    std::vector<std::vector<Version>> rounds;  // new versions per iteration; the last one is empty
};

/// Conjunction of the properties entailed by ctx, in the order of props.
Conj abstract_ctx(const Conj& ctx, const PropSet& props);

/// Clauses of v.pred specialized to v.ctx, with deterministic calls to
/// non-loop-heads inlined. Heads and calls keep the original predicate names.
std::vector<Clause> unfold(const Version& v, const ChcProgram& p, const std::set<PredId>& heads, int unfold_limit = 50);

PeResult partial_evaluate(const ChcProgram& p, const PeConfig& cfg);

struct CfrOptions {
    std::set<Heuristic> heuristics{Heuristic::DH, Heuristic::C};
    PropertyMap user_props;
    bool invariants_pre = true;
    bool invariants_post = true;
    Conj entry_ctx;
    /// Refine only loop heads in this set (all when absent).
    std::optional<NodeSet> nodes;
    int unfold_limit = 50;
    bool int_tighten = false;
};

struct CfrTrace {
    PropertyMap props;
    PeResult pe;
};

/// Control-flow refinement of t by partial evaluation.
Its pe_pipeline(const Its& t, const CfrOptions& opts = {}, CfrTrace* trace = nullptr);

}  // namespace cfrkit
