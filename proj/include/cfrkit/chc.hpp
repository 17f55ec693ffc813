// Copyright (c) cfrkit contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "cfrkit/its.hpp"

namespace cfrkit {

using PredId = std::string;

/// head(x) <- constraint, call(x'). Arguments are implicit: the head takes the
/// program variables unprimed and the call takes them primed.
struct Clause {
    PredId head;
    Conj constraint;
    std::optional<PredId> call;
};

struct ChcProgram {
    std::vector<std::string> vars;
    PredId entry;
    std::vector<PredId> preds;  // includes predicates without clauses
    std::vector<Clause> clauses;

    std::vector<std::size_t> defining(const PredId& q) const;
    std::vector<std::size_t> callers(const PredId& q) const;
    VarSet args(bool primed = false) const;
    bool has_pred(const PredId& q) const;
};

ChcProgram its_to_chc(const Its& t);

inline constexpr const char* kSinkNode = "__sink";
/// Clauses without a call become edges into a sink node. Predicates not
/// reachable from the entry are dropped.
Its chc_to_its(const ChcProgram& p, const std::string& name = "its");

/// Targets of DFS back edges, DFS from the entry in clause order.
std::set<PredId> loop_heads(const ChcProgram& p);

/// Prolog-like dump for debugging.
std::string emit_chc(const ChcProgram& p);

}  // namespace cfrkit
