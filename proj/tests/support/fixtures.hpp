// Copyright (c) cfrkit contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <fstream>
#include <random>
#include <sstream>
#include <string>

#include "cfrkit/its.hpp"

#ifndef CFRKIT_TEST_DATA
#error "CFRKIT_TEST_DATA must point at tests/data"
#endif

namespace cfrkit::testing {

inline std::string read_fixture(const std::string& name) {
    std::ifstream in(std::string(CFRKIT_TEST_DATA) + "/" + name);
    if (!in) throw std::runtime_error("missing fixture " + name);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline Its load_its(const std::string& name) { return parse_its(read_fixture(name)); }

/// Small random ITS: guards over unprimed variables, deterministic affine
/// updates, an entry edge into n1, coefficients in [-k, k].
inline Its random_its(std::mt19937_64& rng, int nvars, int nnodes, int nedges, int k = 3) {
    static const char* names[] = {"a", "b", "c", "d"};
    Its t;
    t.name = "rnd";
    for (int i = 0; i < nvars; ++i) t.vars.push_back(names[i]);
    t.entry = "n0";
    for (int i = 0; i < nnodes; ++i) t.nodes.push_back("n" + std::to_string(i));
    std::uniform_int_distribution<int> coef(-k, k), node(1, nnodes - 1), small(0, 2), pick(0, 3);

    auto var = [&](int i, bool p = false) { return Var(t.vars[i], p); };
    auto edge = [&](const NodeId& s, const NodeId& d) {
        Edge e{s, d, {}};
        const int guards = small(rng);
        for (int g = 0; g < guards; ++g) {
            std::map<Var, Rational> c;
            for (int i = 0; i < nvars; ++i)
                if (pick(rng) < 2) c[var(i)] = coef(rng);
            e.formula.add(Atom(c, coef(rng), pick(rng) == 0 ? Rel::Gt : Rel::Ge));
        }
        for (int i = 0; i < nvars; ++i) {
            std::map<Var, Rational> rhs;
            Rational k0 = 0;
            switch (pick(rng)) {
                case 0:
                case 1: rhs[var(i)] = 1; break;
                case 2:
                    rhs[var(i)] = 1;
                    k0 = coef(rng);
                    break;
                default:
                    rhs[var(small(rng) % nvars)] += coef(rng);
                    k0 = coef(rng);
            }
            e.formula.add(Atom::compare({{var(i, true), 1}}, 0, Rel::Eq, rhs, k0));
        }
        return e;
    };
    t.edges.push_back(edge("n0", "n1"));
    for (int i = 1; i < nedges; ++i) t.edges.push_back(edge("n" + std::to_string(node(rng)), "n" + std::to_string(node(rng))));
    return t;
}

}  // namespace cfrkit::testing
