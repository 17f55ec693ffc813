// Copyright (c) cfrkit contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <map>

#include "cfrkit/its.hpp"

namespace cfrkit {

/// Node invariants over the unprimed variables. Unreachable nodes map to an
/// unsatisfiable conjunction.
using InvariantMap = std::map<NodeId, Conj>;

struct InvariantOptions {
    int widening_delay = 3;
    bool narrowing = true;
};

struct InvariantStats {
    int updates = 0;  // node updates during the ascending phase
};

InvariantMap compute_invariants(const Its& t, const Conj& entry_ctx = Conj(), const InvariantOptions& opts = {},
                                InvariantStats* stats = nullptr);

/// Conjoins inv(src) to every edge.
Its annotate(const Its& t, const InvariantMap& m);

/// Drops nodes with an unsatisfiable invariant and nodes the graph cannot reach.
Its prune_unreachable(const Its& t, const InvariantMap& m);

/// post of one edge: states reachable in one step from inv, unprimed.
Conj post(const Its& t, const Conj& inv, const Edge& e);

}  // namespace cfrkit
