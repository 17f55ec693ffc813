// Copyright (c) cfrkit contributors.
// SPDX-License-Identifier: Apache-2.0
#include "simplex.hpp"

#include <limits>
#include <optional>

namespace cfrkit::lp {

std::size_t Problem::add_var(bool is_nonneg) {
    nonneg.resize(num_vars, false);
    nonneg.push_back(is_nonneg);
    return num_vars++;
}

namespace {

constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();

// Dense tableau in standard form: maximize c.x, A x = b, x >= 0, b >= 0.
// Column `cols` of every row holds the right-hand side.
class Tableau {
public:
    Tableau(std::size_t rows, std::size_t cols) : cols_(cols), a_(rows, std::vector<Rational>(cols + 1)), basis_(rows, kNone) {}

    std::size_t rows() const { return a_.size(); }
    std::size_t cols() const { return cols_; }
    Rational& at(std::size_t r, std::size_t c) { return a_[r][c]; }
    Rational& rhs(std::size_t r) { return a_[r][cols_]; }
    std::size_t& basis(std::size_t r) { return basis_[r]; }

    void pivot(std::size_t pr, std::size_t pc, std::vector<Rational>& obj) {
        auto& prow = a_[pr];
        const Rational inv = 1 / prow[pc];
        for (auto& v : prow) {
            if (sgn(v) != 0) v *= inv;
        }
        std::vector<std::size_t> nz;
        for (std::size_t c = 0; c <= cols_; ++c) {
            if (sgn(prow[c]) != 0) nz.push_back(c);
        }
        auto eliminate = [&](std::vector<Rational>& row) {
            if (sgn(row[pc]) == 0) return;
            const Rational f = row[pc];
            for (std::size_t c : nz) row[c] -= f * prow[c];
        };
        for (std::size_t r = 0; r < a_.size(); ++r) {
            if (r != pr) eliminate(a_[r]);
        }
        eliminate(obj);
        basis_[pr] = pc;
    }

    // Runs the simplex loop on objective row `obj` (reduced costs, obj[cols]
    // holds minus the objective value). Only columns with allowed[c] enter.
    // Returns false if unbounded.
    bool optimize(std::vector<Rational>& obj, const std::vector<bool>& allowed) {
        for (;;) {
            std::size_t enter = kNone;
            for (std::size_t c = 0; c < cols_; ++c) {
                if (allowed[c] && sgn(obj[c]) > 0) {
                    enter = c;
                    break;
                }
            }
            if (enter == kNone) return true;
            std::size_t leave = kNone;
            Rational best;
            for (std::size_t r = 0; r < a_.size(); ++r) {
                if (sgn(a_[r][enter]) <= 0) continue;
                Rational ratio = a_[r][cols_] / a_[r][enter];
                if (leave == kNone || ratio < best || (ratio == best && basis_[r] < basis_[leave])) {
                    leave = r;
                    best = ratio;
                }
            }
            if (leave == kNone) return false;
            pivot(leave, enter, obj);
        }
    }

    void drop_row(std::size_t r) {
        a_.erase(a_.begin() + static_cast<std::ptrdiff_t>(r));
        basis_.erase(basis_.begin() + static_cast<std::ptrdiff_t>(r));
    }

private:
    std::size_t cols_;
    std::vector<std::vector<Rational>> a_;
    std::vector<std::size_t> basis_;
};

struct Standardized {
    // column layout: [0, n_struct) structural, then slacks, then artificials
    std::size_t n_struct = 0;
    std::size_t first_art = 0;
    std::size_t total = 0;
    std::vector<std::size_t> pos_col;  // original var -> positive part column
    std::vector<std::size_t> neg_col;  // original var -> negative part column or kNone
};

}  // namespace

Result maximize(const Problem& p, const std::vector<std::pair<std::size_t, Rational>>& objective) {
    Standardized s;
    s.pos_col.resize(p.num_vars);
    s.neg_col.assign(p.num_vars, kNone);
    std::size_t col = 0;
    for (std::size_t v = 0; v < p.num_vars; ++v) {
        s.pos_col[v] = col++;
        const bool nn = v < p.nonneg.size() && p.nonneg[v];
        if (!nn) s.neg_col[v] = col++;
    }
    s.n_struct = col;

    // Normalize rows so that rhs >= 0.
    struct NRow {
        const Row* row;
        bool flip;
        Sense sense;
    };
    std::vector<NRow> nrows;
    nrows.reserve(p.rows.size());
    std::size_t n_slack = 0, n_art = 0;
    for (const Row& r : p.rows) {
        bool flip = sgn(r.rhs) < 0;
        Sense sense = r.sense;
        if (flip && sense == Sense::Le) sense = Sense::Ge;
        else if (flip && sense == Sense::Ge) sense = Sense::Le;
        nrows.push_back({&r, flip, sense});
        if (sense != Sense::Eq) ++n_slack;
        if (sense != Sense::Le) ++n_art;
    }
    s.first_art = s.n_struct + n_slack;
    s.total = s.first_art + n_art;

    Tableau t(nrows.size(), s.total);
    std::size_t slack = s.n_struct, art = s.first_art;
    for (std::size_t i = 0; i < nrows.size(); ++i) {
        const auto& nr = nrows[i];
        const int sign = nr.flip ? -1 : 1;
        for (const auto& [v, c] : nr.row->terms) {
            if (sgn(c) == 0) continue;
            t.at(i, s.pos_col[v]) += sign * c;
            if (s.neg_col[v] != kNone) t.at(i, s.neg_col[v]) -= sign * c;
        }
        t.rhs(i) = sign * nr.row->rhs;
        switch (nr.sense) {
        case Sense::Le:
            t.at(i, slack) = 1;
            t.basis(i) = slack++;
            break;
        case Sense::Ge:
            t.at(i, slack++) = -1;
            t.at(i, art) = 1;
            t.basis(i) = art++;
            break;
        case Sense::Eq:
            t.at(i, art) = 1;
            t.basis(i) = art++;
            break;
        }
    }

    std::vector<bool> allowed(s.total, true);
    Result res;

    // Phase 1: maximize -sum(artificials).
    if (n_art > 0) {
        std::vector<Rational> obj(s.total + 1);
        for (std::size_t c = s.first_art; c < s.total; ++c) obj[c] = -1;
        // Express in terms of non-basic columns.
        for (std::size_t r = 0; r < t.rows(); ++r) {
            if (t.basis(r) >= s.first_art) {
                for (std::size_t c = 0; c <= s.total; ++c) {
                    if (sgn(t.at(r, c)) != 0) obj[c] += t.at(r, c);
                }
            }
        }
        t.optimize(obj, allowed);
        if (sgn(obj[s.total]) != 0) {
            res.status = Status::Infeasible;
            return res;
        }
        // Drive artificials out of the basis.
        for (std::size_t r = 0; r < t.rows();) {
            if (t.basis(r) < s.first_art) {
                ++r;
                continue;
            }
            std::size_t pc = kNone;
            for (std::size_t c = 0; c < s.first_art; ++c) {
                if (sgn(t.at(r, c)) != 0) {
                    pc = c;
                    break;
                }
            }
            if (pc == kNone) {
                t.drop_row(r);
                continue;
            }
            std::vector<Rational> dummy(s.total + 1);
            t.pivot(r, pc, dummy);
            ++r;
        }
        for (std::size_t c = s.first_art; c < s.total; ++c) allowed[c] = false;
    }

    // Phase 2.
    std::vector<Rational> obj(s.total + 1);
    for (const auto& [v, c] : objective) {
        obj[s.pos_col[v]] += c;
        if (s.neg_col[v] != kNone) obj[s.neg_col[v]] -= c;
    }
    for (std::size_t r = 0; r < t.rows(); ++r) {
        const std::size_t b = t.basis(r);
        if (sgn(obj[b]) == 0) continue;
        const Rational f = obj[b];
        for (std::size_t c = 0; c <= s.total; ++c) {
            if (sgn(t.at(r, c)) != 0) obj[c] -= f * t.at(r, c);
        }
    }
    if (!t.optimize(obj, allowed)) {
        res.status = Status::Unbounded;
        return res;
    }
    res.status = Status::Optimal;
    res.value = -obj[s.total];
    std::vector<Rational> colval(s.total);
    for (std::size_t r = 0; r < t.rows(); ++r) colval[t.basis(r)] = t.rhs(r);
    res.point.resize(p.num_vars);
    for (std::size_t v = 0; v < p.num_vars; ++v) {
        res.point[v] = colval[s.pos_col[v]];
        if (s.neg_col[v] != kNone) res.point[v] -= colval[s.neg_col[v]];
    }
    return res;
}

bool feasible(const Problem& p) { return maximize(p, {}).status == Status::Optimal; }

}  // namespace cfrkit::lp
