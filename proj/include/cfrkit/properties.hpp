// Copyright (c) cfrkit contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <map>
#include <set>
#include <string_view>
#include <vector>

#include "cfrkit/chc.hpp"

namespace cfrkit {

/// Properties over the unprimed arguments, deduplicated modulo mutual
/// entailment. `true` is never stored.
using PropSet = std::vector<Conj>;
using PropertyMap = std::map<PredId, PropSet>;

/// Returns false when p is true or already present.
bool add_property(PropSet& s, const Conj& p);

PropSet props_h(const ChcProgram& p, const PredId& q);
PropSet props_hv(const ChcProgram& p, const PredId& q);
PropSet props_c(const ChcProgram& p, const PredId& q);
PropSet props_cv(const ChcProgram& p, const PredId& q);

/// Answers of the program with back edges cut, for every predicate.
/// More than `cap` answers for one predicate are merged pairwise by hull.
std::map<PredId, PropSet> dh_answers(const ChcProgram& p, std::size_t cap = 16);
/// Loop heads only; each answer contributes its atoms as single properties.
PropertyMap props_dh(const ChcProgram& p, std::size_t cap = 16);

PropertyMap merge(const std::vector<PropertyMap>& maps);

/// `props <node> { conj ; conj ... }` blocks. Unknown nodes are an error.
PropertyMap parse_user_props(std::string_view text, const std::set<PredId>& known);

enum class Heuristic { H, HV, C, CV, DH };
/// "h", "hv", "c", "cv", "dh"; throws InvalidArgument otherwise.
Heuristic parse_heuristic(std::string_view s);
const char* heuristic_name(Heuristic h);

/// Selected heuristics for every loop head (restricted to `only` when given).
PropertyMap infer_properties(const ChcProgram& p, const std::set<Heuristic>& hs,
                             const std::set<PredId>* only = nullptr);

}  // namespace cfrkit
