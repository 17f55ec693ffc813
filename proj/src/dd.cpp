// Copyright (c) cfrkit contributors.
// SPDX-License-Identifier: Apache-2.0
#include "dd.hpp"

#include <algorithm>

namespace cfrkit::dd {

namespace {

mpz_class dot(const Vec& a, const Vec& b) {
    mpz_class s = 0;
    for (std::size_t i = 0; i < a.size(); ++i)
        if (sgn(a[i]) != 0 && sgn(b[i]) != 0) s += a[i] * b[i];
    return s;
}

void normalize(Vec& v) {
    mpz_class g = 0;
    for (const auto& x : v) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), x.get_mpz_t());
    if (g > 1)
        for (auto& x : v) mpz_divexact(x.get_mpz_t(), x.get_mpz_t(), g.get_mpz_t());
}

// ka * a + kb * b
Vec combine(const mpz_class& ka, const Vec& a, const mpz_class& kb, const Vec& b) {
    Vec r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = ka * a[i] + kb * b[i];
    normalize(r);
    return r;
}

struct Ray {
    Vec v;
    std::vector<bool> sat;  // constraints seen so far that hold with equality
};

bool subset(const std::vector<bool>& a, const std::vector<bool>& b) {
    for (std::size_t i = 0; i < a.size(); ++i)
        if (a[i] && !b[i]) return false;
    return true;
}

class Builder {
public:
    Builder(std::size_t dim, std::size_t ncons) : ncons_(ncons) {
        for (std::size_t i = 0; i < dim; ++i) {
            Vec e(dim, 0);
            e[i] = 1;
            lines_.push_back(std::move(e));
        }
    }

    void add(const Vec& a, bool equality) {
        const std::size_t k = next_++;
        // a line not orthogonal to a absorbs the constraint
        for (std::size_t li = 0; li < lines_.size(); ++li) {
            mpz_class al = dot(a, lines_[li]);
            if (sgn(al) == 0) continue;
            Vec l = std::move(lines_[li]);
            lines_.erase(lines_.begin() + static_cast<std::ptrdiff_t>(li));
            if (sgn(al) < 0) {
                for (auto& x : l) x = -x;
                al = -al;
            }
            for (auto& m : lines_) {
                const mpz_class am = dot(a, m);
                if (sgn(am) != 0) m = combine(al, m, -am, l);
            }
            for (auto& r : rays_) {
                const mpz_class ar = dot(a, r.v);
                if (sgn(ar) != 0) r.v = combine(al, r.v, -ar, l);
                r.sat[k] = true;
            }
            if (!equality) {
                Ray nr{l, std::vector<bool>(ncons_, false)};
                for (std::size_t j = 0; j < k; ++j) nr.sat[j] = true;
                rays_.push_back(std::move(nr));
            }
            return;
        }

        std::vector<std::size_t> pos, neg, zero;
        std::vector<mpz_class> val(rays_.size());
        for (std::size_t i = 0; i < rays_.size(); ++i) {
            val[i] = dot(a, rays_[i].v);
            const int s = sgn(val[i]);
            (s > 0 ? pos : s < 0 ? neg : zero).push_back(i);
        }
        std::vector<Ray> next;
        for (auto i : zero) {
            Ray r = rays_[i];
            r.sat[k] = true;
            next.push_back(std::move(r));
        }
        if (!equality)
            for (auto i : pos) next.push_back(rays_[i]);
        for (auto p : pos)
            for (auto n : neg) {
                std::vector<bool> common(ncons_);
                for (std::size_t j = 0; j < ncons_; ++j) common[j] = rays_[p].sat[j] && rays_[n].sat[j];
                bool adjacent = true;
                for (std::size_t r = 0; r < rays_.size() && adjacent; ++r)
                    if (r != p && r != n && subset(common, rays_[r].sat)) adjacent = false;
                if (!adjacent) continue;
                Ray nr{combine(val[p], rays_[n].v, -val[n], rays_[p].v), std::move(common)};
                nr.sat[k] = true;
                next.push_back(std::move(nr));
            }
        rays_ = std::move(next);
    }

    Cone result() const {
        Cone c;
        c.lines = lines_;
        for (const auto& r : rays_) c.rays.push_back(r.v);
        return c;
    }

private:
    std::size_t ncons_;
    std::size_t next_ = 0;
    std::vector<Vec> lines_;
    std::vector<Ray> rays_;
};

}  // namespace

Cone generators(std::size_t dim, const std::vector<Vec>& ges, const std::vector<Vec>& eqs) {
    Builder b(dim, ges.size() + eqs.size());
    for (const auto& e : eqs) b.add(e, true);
    for (const auto& a : ges) b.add(a, false);
    return b.result();
}

}  // namespace cfrkit::dd
