// Copyright (c) cfrkit contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <vector>

#include <gmpxx.h>

namespace cfrkit::dd {

using Vec = std::vector<mpz_class>;

/// Generators of a polyhedral cone: every point is a combination of lines
/// with any sign plus rays with nonnegative weights.
struct Cone {
    std::vector<Vec> lines;
    std::vector<Vec> rays;
};

/// Double description: generators of {y | e.y = 0 for e in eqs, a.y >= 0 for a in ges}.
Cone generators(std::size_t dim, const std::vector<Vec>& ges, const std::vector<Vec>& eqs);

}  // namespace cfrkit::dd
