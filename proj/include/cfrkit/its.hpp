// Copyright (c) cfrkit contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "cfrkit/constraint.hpp"

namespace cfrkit {

using NodeId = std::string;
using NodeSet = std::set<NodeId>;

struct Edge {
    NodeId src;
    NodeId dst;
    Conj formula;  // over V and V'
};

/// Integer transition system. Nodes and edges keep declaration order, and
/// every traversal in the library walks them in that order.
struct Its {
    std::string name = "its";
    std::vector<std::string> vars;  // unprimed names
    std::vector<NodeId> nodes;
    NodeId entry;
    std::vector<Edge> edges;

    bool has_node(const NodeId& n) const;
    /// Appends n unless already present.
    void add_node(const NodeId& n);
    VarSet var_set(bool primed = false) const;

    std::vector<std::size_t> out_edges(const NodeId& n) const;
    std::vector<std::size_t> in_edges(const NodeId& n) const;

    /// Throws InvalidArgument when the entry has incoming edges, an endpoint
    /// is not a node, or a formula mentions an undeclared variable.
    void validate() const;

    /// A node id not yet used, built from base.
    NodeId fresh_node(const std::string& base) const;
};

struct SccPart {
    std::vector<NodeId> nodes;
    std::vector<std::size_t> edges;  // indices into Its::edges
    bool trivial = true;             // single node without a self edge
};

Its parse_its(std::string_view text);
std::string emit_its(const Its& t);
std::string emit_dot(const Its& t);
std::string emit_json(const Its& t);

/// Tarjan's decomposition, reverse topological order.
std::vector<SccPart> sccs(const Its& t);

/// Nodes reachable from `from` following edges forward.
NodeSet reachable_from(const Its& t, const NodeId& from);

Its remove_non_reaching(const Its& t, const NodeSet& keep);
Its remove_terminating(const Its& t, const NodeSet& keep);

/// Restriction to a node set; the entry always survives.
Its induced(const Its& t, const NodeSet& keep);

inline constexpr const char* kCostVar = "__cost";
Its instrument_cost(const Its& t);

}  // namespace cfrkit
