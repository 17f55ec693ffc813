// Copyright (c) cfrkit contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <vector>

#include <gmpxx.h>

namespace cfrkit::lp {

using Rational = mpq_class;

enum class Sense { Le, Ge, Eq };

struct Row {
    std::vector<std::pair<std::size_t, Rational>> terms;  // sparse, column -> coefficient
    Sense sense = Sense::Le;
    Rational rhs = 0;
};

/// Linear program over `num_vars` columns. Columns are free unless listed in
/// `nonneg`.
struct Problem {
    std::size_t num_vars = 0;
    std::vector<bool> nonneg;
    std::vector<Row> rows;

    std::size_t add_var(bool is_nonneg = false);
    void add_row(Row r) { rows.push_back(std::move(r)); }
};

enum class Status { Optimal, Infeasible, Unbounded };

struct Result {
    Status status = Status::Infeasible;
    Rational value = 0;
    std::vector<Rational> point;
};

/// Exact two-phase tableau simplex with Bland's rule.
Result maximize(const Problem& p, const std::vector<std::pair<std::size_t, Rational>>& objective);

bool feasible(const Problem& p);

}  // namespace cfrkit::lp
