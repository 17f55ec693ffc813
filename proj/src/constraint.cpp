// Copyright (c) cfrkit contributors.
// SPDX-License-Identifier: Apache-2.0
#include "cfrkit/constraint.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

#include "dd.hpp"
#include "lexer.hpp"
#include "simplex.hpp"

namespace cfrkit {

ParseError::ParseError(const std::string& msg, int line, int column)
    : Error(std::to_string(line) + ":" + std::to_string(column) + ": " + msg), line_(line), column_(column) {}

// =============================================================================
// Atom
// =============================================================================

namespace {

Integer lcm_of_denominators(const std::map<Var, Rational>& coeffs, const Rational& constant) {
    Integer l = constant.get_den();
    for (const auto& [v, c] : coeffs) {
        mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), c.get_den_mpz_t());
    }
    return l;
}

Integer gcd_of_numerators(const std::map<Var, Rational>& coeffs, const Rational& constant, bool with_constant) {
    Integer g = 0;
    for (const auto& [v, c] : coeffs) {
        mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), c.get_num_mpz_t());
    }
    if (with_constant) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), constant.get_num_mpz_t());
    return g;
}

}  // namespace

Atom::Atom(std::map<Var, Rational> coeffs, Rational constant, Rel rel) : constant_(std::move(constant)), rel_(rel) {
    for (auto& [v, c] : coeffs) {
        if (sgn(c) != 0) coeffs_.emplace(v, std::move(c));
    }
    if (rel_ == Rel::Lt || rel_ == Rel::Le) {
        for (auto& [v, c] : coeffs_) c = -c;
        constant_ = -constant_;
        rel_ = rel_ == Rel::Lt ? Rel::Gt : Rel::Ge;
    }
    if (coeffs_.empty()) {
        // Trivial atoms are kept as 0 <> 0 (true) or -1 <> 0 (false).
        bool ok = trivially_true();
        constant_ = ok ? 0 : -1;
        if (!ok && rel_ == Rel::Eq) rel_ = Rel::Ge;
        if (ok) rel_ = Rel::Ge;
        return;
    }
    const Integer l = lcm_of_denominators(coeffs_, constant_);
    if (l != 1) {
        for (auto& [v, c] : coeffs_) c *= l;
        constant_ *= l;
    }
    Integer g = gcd_of_numerators(coeffs_, constant_, true);
    if (g != 1 && g != 0) {
        for (auto& [v, c] : coeffs_) c /= g;
        constant_ /= g;
    }
    if (rel_ == Rel::Eq && sgn(coeffs_.begin()->second) < 0) {
        for (auto& [v, c] : coeffs_) c = -c;
        constant_ = -constant_;
    }
}

Atom Atom::compare(const std::map<Var, Rational>& lhs, const Rational& lhs_const, Rel rel,
                   const std::map<Var, Rational>& rhs, const Rational& rhs_const) {
    std::map<Var, Rational> diff = lhs;
    for (const auto& [v, c] : rhs) diff[v] -= c;
    return Atom(std::move(diff), lhs_const - rhs_const, rel);
}

bool Atom::trivially_true() const {
    switch (rel_) {
    case Rel::Gt: return sgn(constant_) > 0;
    case Rel::Ge: return sgn(constant_) >= 0;
    case Rel::Eq: return sgn(constant_) == 0;
    case Rel::Lt: return sgn(constant_) < 0;
    case Rel::Le: return sgn(constant_) <= 0;
    }
    return false;
}

Rational Atom::eval_lhs(const std::map<Var, Rational>& sigma) const {
    Rational s = constant_;
    for (const auto& [v, c] : coeffs_) {
        auto it = sigma.find(v);
        if (it == sigma.end()) throw InvalidArgument("valuation misses variable " + v.str());
        s += c * it->second;
    }
    return s;
}

bool Atom::holds(const Valuation& sigma) const {
    Integer s = constant_.get_num();
    for (const auto& [v, c] : coeffs_) {
        auto it = sigma.find(v);
        if (it == sigma.end()) throw InvalidArgument("valuation misses variable " + v.str());
        s += c.get_num() * it->second;
    }
    switch (rel_) {
    case Rel::Gt: return sgn(s) > 0;
    case Rel::Ge: return sgn(s) >= 0;
    case Rel::Eq: return sgn(s) == 0;
    default: return false;
    }
}

VarSet Atom::vars() const {
    VarSet out;
    for (const auto& [v, c] : coeffs_) out.insert(v);
    return out;
}

Atom Atom::negated_strict() const {
    std::map<Var, Rational> neg;
    for (const auto& [v, c] : coeffs_) neg.emplace(v, -c);
    return Atom(std::move(neg), -constant_, rel_ == Rel::Gt ? Rel::Ge : Rel::Gt);
}

Atom Atom::closure() const {
    if (rel_ != Rel::Gt) return *this;
    Atom a = *this;
    a.rel_ = Rel::Ge;
    return a;
}

namespace {

void append_term(std::ostringstream& os, bool first, const Rational& c, const std::string& name) {
    // c is positive here
    if (!first) os << " + ";
    if (c != 1) os << c << "*";
    os << name;
}

std::string side(const std::vector<std::pair<std::string, Rational>>& terms, const Rational& k) {
    std::ostringstream os;
    bool first = true;
    for (const auto& [name, c] : terms) {
        append_term(os, first, c, name);
        first = false;
    }
    if (sgn(k) != 0) {
        if (first) {
            os << k;
        } else if (sgn(k) > 0) {
            os << " + " << k;
        } else {
            os << " - " << Rational(-k);
        }
        first = false;
    }
    if (first) os << "0";
    return os.str();
}

const char* rel_str(Rel r, bool flipped) {
    switch (r) {
    case Rel::Gt: return flipped ? "<" : ">";
    case Rel::Ge: return flipped ? "<=" : ">=";
    case Rel::Eq: return "=";
    case Rel::Lt: return flipped ? ">" : "<";
    case Rel::Le: return flipped ? ">=" : "<=";
    }
    return "?";
}

}  // namespace

std::string Atom::str() const {
    std::vector<std::pair<std::string, Rational>> pos, neg;
    // equalities read better with the post-state on the left
    int flip = 1;
    if (rel_ == Rel::Eq) {
        for (const auto& [v, c] : coeffs_)
            if (v.primed) {
                flip = sgn(c);
                break;
            }
    }
    if (flip < 0) {
        Atom n(*this);
        for (auto& [v, c] : n.coeffs_) c = -c;
        n.constant_ = -n.constant_;
        n.rel_ = Rel::Eq;
        return n.str_raw();
    }
    return str_raw();
}

std::string Atom::str_raw() const {
    // pos - neg + c rel 0  ==>  pos rel neg - c
    std::vector<std::pair<std::string, Rational>> pos, neg;
    for (const auto& [v, c] : coeffs_) {
        if (sgn(c) > 0) pos.emplace_back(v.str(), c);
        else neg.emplace_back(v.str(), Rational(-c));
    }
    if (pos.empty() && neg.empty()) return "0 " + std::string(rel_str(rel_, false)) + " " + side({}, Rational(-constant_));
    if (pos.empty()) {
        // rel flips when the sides are swapped: neg rel' c
        return side(neg, 0) + " " + rel_str(rel_, true) + " " + side({}, constant_);
    }
    return side(pos, 0) + " " + rel_str(rel_, false) + " " + side(neg, Rational(-constant_));
}

std::strong_ordering Atom::operator<=>(const Atom& o) const {
    if (auto c = static_cast<int>(rel_) <=> static_cast<int>(o.rel_); c != 0) return c;
    if (coeffs_.size() != o.coeffs_.size()) return coeffs_.size() <=> o.coeffs_.size();
    auto it = coeffs_.begin();
    auto jt = o.coeffs_.begin();
    for (; it != coeffs_.end(); ++it, ++jt) {
        if (auto c = it->first <=> jt->first; c != 0) return c;
        int k = cmp(it->second, jt->second);
        if (k != 0) return k <=> 0;
    }
    return cmp(constant_, o.constant_) <=> 0;
}

bool Atom::operator==(const Atom& o) const { return (*this <=> o) == 0; }

// =============================================================================
// Conj
// =============================================================================

Conj::Conj(std::vector<Atom> atoms) {
    for (auto& a : atoms) add(a);
}

Conj Conj::bottom() {
    Conj c;
    c.atoms_.push_back(Atom({}, -1, Rel::Ge));
    return c;
}

void Conj::add(const Atom& a) {
    if (a.is_trivial() && a.trivially_true()) return;
    if (std::find(atoms_.begin(), atoms_.end(), a) != atoms_.end()) return;
    atoms_.push_back(a);
}

Conj Conj::operator&(const Conj& o) const {
    Conj r = *this;
    for (const auto& a : o.atoms_) r.add(a);
    return r;
}

VarSet Conj::vars() const {
    VarSet out;
    for (const auto& a : atoms_) {
        for (const auto& [v, c] : a.coeffs()) out.insert(v);
    }
    return out;
}

bool Conj::holds(const Valuation& sigma) const {
    return std::all_of(atoms_.begin(), atoms_.end(), [&](const Atom& a) { return a.holds(sigma); });
}

bool Conj::syntactically_false() const {
    return std::any_of(atoms_.begin(), atoms_.end(), [](const Atom& a) { return a.is_trivial() && !a.trivially_true(); });
}

std::string Conj::str() const {
    if (atoms_.empty()) return "true";
    std::string out;
    for (std::size_t i = 0; i < atoms_.size(); ++i) {
        if (i) out += ", ";
        out += atoms_[i].str();
    }
    return out;
}

// =============================================================================
// Parsing
// =============================================================================

namespace detail {

void Lexer::fail(const std::string& msg) const { throw ParseError(msg, cur_.line, cur_.column); }

void Lexer::advance() {
    for (;;) {
        while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) {
            if (src_[pos_] == '\n') {
                ++line_;
                col_ = 1;
            } else {
                ++col_;
            }
            ++pos_;
        }
        if (pos_ < src_.size() && src_[pos_] == '#') {
            while (pos_ < src_.size() && src_[pos_] != '\n') {
                ++pos_;
                ++col_;
            }
            continue;
        }
        break;
    }
    cur_ = Token{};
    cur_.line = line_;
    cur_.column = col_;
    if (pos_ >= src_.size()) {
        cur_.kind = Tok::End;
        return;
    }
    auto take = [&](std::size_t n) {
        cur_.text = std::string(src_.substr(pos_, n));
        pos_ += n;
        col_ += static_cast<int>(n);
    };
    const char c = src_[pos_];
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
        std::size_t n = 1;
        while (pos_ + n < src_.size() &&
               (std::isalnum(static_cast<unsigned char>(src_[pos_ + n])) || src_[pos_ + n] == '_' || src_[pos_ + n] == '.')) {
            ++n;
        }
        if (pos_ + n < src_.size() && src_[pos_ + n] == '\'') ++n;
        cur_.kind = Tok::Ident;
        take(n);
        return;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
        std::size_t n = 1;
        while (pos_ + n < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_ + n]))) ++n;
        cur_.kind = Tok::Int;
        take(n);
        return;
    }
    cur_.kind = Tok::Sym;
    const std::string_view rest = src_.substr(pos_);
    for (std::string_view two : {"<=", ">=", "->", "==", ":-"}) {
        if (rest.substr(0, 2) == two) {
            take(2);
            return;
        }
    }
    if (std::string_view("+-*<>=,;{}():").find(c) != std::string_view::npos) {
        take(1);
        return;
    }
    take(1);
    fail("unexpected character '" + cur_.text + "'");
}

void Lexer::expect_sym(std::string_view s) {
    if (!at_sym(s)) fail("expected '" + std::string(s) + "', found '" + cur_.text + "'");
    advance();
}

void Lexer::expect_keyword(std::string_view s) {
    if (!at_ident(s)) fail("expected '" + std::string(s) + "', found '" + cur_.text + "'");
    advance();
}

std::string Lexer::expect_ident() {
    if (cur_.kind != Tok::Ident) fail("expected identifier, found '" + cur_.text + "'");
    return next().text;
}

namespace {

Var var_of(const std::string& ident) {
    if (!ident.empty() && ident.back() == '\'') return Var(ident.substr(0, ident.size() - 1), true);
    return Var(ident);
}

}  // namespace

void parse_expr(Lexer& lx, std::map<Var, Rational>& coeffs, Rational& constant) {
    int sign = 1;
    if (lx.at_sym("-")) {
        lx.next();
        sign = -1;
    } else if (lx.at_sym("+")) {
        lx.next();
    }
    for (;;) {
        const Token t = lx.peek();
        if (t.kind == Tok::Int) {
            lx.next();
            Rational k(Integer(t.text));
            if (lx.at_sym("*")) {
                lx.next();
                coeffs[var_of(lx.expect_ident())] += sign * k;
            } else {
                constant += sign * k;
            }
        } else if (t.kind == Tok::Ident) {
            lx.next();
            coeffs[var_of(t.text)] += sign;
        } else {
            lx.fail("expected a term, found '" + t.text + "'");
        }
        if (lx.at_sym("+")) {
            sign = 1;
        } else if (lx.at_sym("-")) {
            sign = -1;
        } else {
            return;
        }
        lx.next();
    }
}

Atom parse_atom(Lexer& lx) {
    std::map<Var, Rational> lc, rc;
    Rational lk = 0, rk = 0;
    parse_expr(lx, lc, lk);
    Rel rel;
    if (lx.at_sym("<")) rel = Rel::Lt;
    else if (lx.at_sym(">")) rel = Rel::Gt;
    else if (lx.at_sym("<=")) rel = Rel::Le;
    else if (lx.at_sym(">=")) rel = Rel::Ge;
    else if (lx.at_sym("=") || lx.at_sym("==")) rel = Rel::Eq;
    else lx.fail("expected a relation, found '" + lx.peek().text + "'");
    lx.next();
    parse_expr(lx, rc, rk);
    return Atom::compare(lc, lk, rel, rc, rk);
}

Conj parse_conj(Lexer& lx) {
    Conj c;
    if (lx.at_ident("true")) {
        lx.next();
        return c;
    }
    c.add(parse_atom(lx));
    while (lx.at_sym(",")) {
        lx.next();
        c.add(parse_atom(lx));
    }
    return c;
}

}  // namespace detail

Atom parse_atom(std::string_view text) {
    detail::Lexer lx(text);
    Atom a = detail::parse_atom(lx);
    if (!lx.at_end()) lx.fail("trailing input '" + lx.peek().text + "'");
    return a;
}

Conj parse_conj(std::string_view text) {
    detail::Lexer lx(text);
    if (lx.at_end()) return Conj();
    Conj c = detail::parse_conj(lx);
    if (!lx.at_end()) lx.fail("trailing input '" + lx.peek().text + "'");
    return c;
}

// =============================================================================
// LP-backed decision procedures
// =============================================================================

namespace {

struct LpEncoding {
    lp::Problem problem;
    std::map<Var, std::size_t> column;
    std::size_t eps = 0;
    bool has_strict = false;
};

std::size_t column_of(LpEncoding& enc, const Var& v) {
    auto it = enc.column.find(v);
    if (it != enc.column.end()) return it->second;
    std::size_t c = enc.problem.add_var(false);
    enc.column.emplace(v, c);
    return c;
}

// Strict atoms become e - eps >= 0; the caller maximizes eps when
// `keep_strict` is set, otherwise strict atoms are relaxed to their closure.
void encode(LpEncoding& enc, const std::vector<const Atom*>& atoms, bool keep_strict) {
    for (const Atom* a : atoms) {
        lp::Row row;
        for (const auto& [v, c] : a->coeffs()) row.terms.emplace_back(column_of(enc, v), c);
        row.rhs = -a->constant();
        switch (a->rel()) {
        case Rel::Eq: row.sense = lp::Sense::Eq; break;
        case Rel::Gt:
            row.sense = lp::Sense::Ge;
            if (keep_strict) {
                if (!enc.has_strict) {
                    enc.has_strict = true;
                    enc.eps = enc.problem.add_var(true);
                    lp::Row cap;
                    cap.terms.emplace_back(enc.eps, 1);
                    cap.sense = lp::Sense::Le;
                    cap.rhs = 1;
                    enc.problem.add_row(std::move(cap));
                }
                row.terms.emplace_back(enc.eps, -1);
            }
            break;
        default: row.sense = lp::Sense::Ge; break;
        }
        enc.problem.add_row(std::move(row));
    }
}

std::vector<const Atom*> pointers_of(const std::vector<Atom>& atoms) {
    std::vector<const Atom*> out;
    out.reserve(atoms.size());
    for (const auto& a : atoms) out.push_back(&a);
    return out;
}

Atom combine(const Atom& a, const Rational& ka, const Atom& b, const Rational& kb, Rel rel);
Rational coeff_of(const Atom& a, const Var& v);

bool lp_sat(const std::vector<const Atom*>& atoms) {
    LpEncoding enc;
    encode(enc, atoms, true);
    if (!enc.has_strict) return lp::feasible(enc.problem);
    lp::Result r = lp::maximize(enc.problem, {{enc.eps, Rational(1)}});
    return r.status == lp::Status::Optimal && sgn(r.value) > 0;
}

// Substitutes equalities away, then drops variable-free atoms. Returns false
// when a contradiction shows up on the way.
bool presolve(std::vector<Atom>& atoms) {
    for (std::size_t i = 0; i < atoms.size();) {
        const Atom& a = atoms[i];
        if (a.is_trivial()) {
            if (!a.trivially_true()) return false;
            atoms.erase(atoms.begin() + static_cast<std::ptrdiff_t>(i));
            continue;
        }
        if (a.rel() != Rel::Eq) {
            ++i;
            continue;
        }
        const Atom pivot = a;
        const Var v = pivot.coeffs().begin()->first;
        const Rational pv = pivot.coeffs().begin()->second;
        atoms.erase(atoms.begin() + static_cast<std::ptrdiff_t>(i));
        for (Atom& b : atoms) {
            const Rational bv = coeff_of(b, v);
            if (sgn(bv) != 0) b = combine(b, 1, pivot, -bv / pv, b.rel());
        }
        i = 0;
    }
    return true;
}

struct AtomsLess {
    bool operator()(const std::vector<Atom>& a, const std::vector<Atom>& b) const {
        return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end(),
                                            [](const Atom& x, const Atom& y) { return (x <=> y) < 0; });
    }
};

bool sat_atoms(const std::vector<const Atom*>& ptrs) {
    std::vector<Atom> atoms;
    atoms.reserve(ptrs.size());
    for (const Atom* a : ptrs) atoms.push_back(*a);
    std::sort(atoms.begin(), atoms.end(), [](const Atom& x, const Atom& y) { return (x <=> y) < 0; });
    atoms.erase(std::unique(atoms.begin(), atoms.end()), atoms.end());

    thread_local std::map<std::vector<Atom>, bool, AtomsLess> memo;
    if (auto it = memo.find(atoms); it != memo.end()) return it->second;
    std::vector<Atom> work = atoms;
    bool sat = presolve(work);
    if (sat && !work.empty()) sat = lp_sat(pointers_of(work));
    if (memo.size() > 200000) memo.clear();
    memo.emplace(std::move(atoms), sat);
    return sat;
}

std::vector<const Atom*> pointers(const std::vector<Atom>& atoms) { return pointers_of(atoms); }

bool entails_atoms(const std::vector<const Atom*>& f, const Atom& a) {
    if (a.is_trivial()) return a.trivially_true() || !sat_atoms(f);
    auto refuted_by = [&](const Atom& neg) {
        std::vector<const Atom*> sys = f;
        sys.push_back(&neg);
        return !sat_atoms(sys);
    };
    if (a.rel() == Rel::Eq) {
        Atom ge(a.coeffs(), a.constant(), Rel::Ge);
        Atom le(a.coeffs(), a.constant(), Rel::Le);
        return refuted_by(ge.negated_strict()) && refuted_by(le.negated_strict());
    }
    return refuted_by(a.negated_strict());
}

// Removes duplicates, trivially true atoms and atoms implied by the others.
std::vector<Atom> remove_redundant(std::vector<Atom> atoms) {
    Conj dedup(std::move(atoms));
    if (dedup.syntactically_false()) return Conj::bottom().atoms();
    std::vector<Atom> cur = dedup.atoms();
    for (std::size_t i = cur.size(); i-- > 0;) {
        std::vector<const Atom*> rest;
        for (std::size_t j = 0; j < cur.size(); ++j) {
            if (j != i) rest.push_back(&cur[j]);
        }
        if (entails_atoms(rest, cur[i])) cur.erase(cur.begin() + static_cast<std::ptrdiff_t>(i));
    }
    return cur;
}

// a + k * b, where both are linear forms; relation taken from `rel`.
Atom combine(const Atom& a, const Rational& ka, const Atom& b, const Rational& kb, Rel rel) {
    std::map<Var, Rational> coeffs;
    for (const auto& [v, c] : a.coeffs()) coeffs[v] += ka * c;
    for (const auto& [v, c] : b.coeffs()) coeffs[v] += kb * c;
    return Atom(std::move(coeffs), ka * a.constant() + kb * b.constant(), rel);
}

Rational coeff_of(const Atom& a, const Var& v) {
    auto it = a.coeffs().find(v);
    return it == a.coeffs().end() ? Rational(0) : it->second;
}

}  // namespace

bool is_sat(const Conj& f) { return sat_atoms(pointers(f.atoms())); }

bool entails(const Conj& f, const Atom& a) { return entails_atoms(pointers(f.atoms()), a); }

bool entails(const Conj& f, const Conj& g) {
    if (g.empty()) return true;
    auto fp = pointers(f.atoms());
    if (!sat_atoms(fp)) return true;
    return std::all_of(g.atoms().begin(), g.atoms().end(), [&](const Atom& a) { return entails_atoms(fp, a); });
}

bool equivalent(const Conj& f, const Conj& g) { return entails(f, g) && entails(g, f); }

Conj simplify(const Conj& f) {
    if (!is_sat(f)) return Conj::bottom();
    return Conj(remove_redundant(f.atoms()));
}

Conj project(const Conj& f, const VarSet& keep) {
    if (!is_sat(f)) return Conj::bottom();
    std::vector<Atom> atoms = f.atoms();
    std::vector<Var> elim;
    for (const Var& v : f.vars()) {
        if (!keep.count(v)) elim.push_back(v);
    }

    // Gaussian elimination through equalities first.
    for (auto vit = elim.begin(); vit != elim.end();) {
        const Var v = *vit;
        auto eq = std::find_if(atoms.begin(), atoms.end(),
                               [&](const Atom& a) { return a.rel() == Rel::Eq && sgn(coeff_of(a, v)) != 0; });
        if (eq == atoms.end()) {
            ++vit;
            continue;
        }
        const Atom pivot = *eq;
        atoms.erase(eq);
        const Rational pv = coeff_of(pivot, v);
        for (Atom& a : atoms) {
            const Rational av = coeff_of(a, v);
            if (sgn(av) != 0) a = combine(a, 1, pivot, -av / pv, a.rel());
        }
        vit = elim.erase(vit);
    }
    atoms = remove_redundant(std::move(atoms));

    // Fourier-Motzkin on the remaining variables. Each atom remembers which
    // inputs it was built from; after k eliminations an atom built from more
    // than k + 1 inputs is redundant (Kohler's rule).
    struct Tracked {
        Atom atom;
        std::vector<std::size_t> from;
    };
    std::vector<Tracked> rows;
    for (std::size_t i = 0; i < atoms.size(); ++i) rows.push_back({atoms[i], {i}});
    std::size_t eliminated = 0;
    while (!elim.empty()) {
        std::size_t best = 0;
        long best_cost = -1;
        for (std::size_t i = 0; i < elim.size(); ++i) {
            long pos = 0, neg = 0;
            for (const auto& r : rows) {
                int s = sgn(coeff_of(r.atom, elim[i]));
                pos += s > 0;
                neg += s < 0;
            }
            long cost = pos * neg - pos - neg;
            if (best_cost == -1 || cost < best_cost) {
                best = i;
                best_cost = cost;
            }
        }
        const Var v = elim[best];
        elim.erase(elim.begin() + static_cast<std::ptrdiff_t>(best));
        ++eliminated;
        std::vector<Tracked> pos, neg, next;
        for (auto& r : rows) {
            int s = sgn(coeff_of(r.atom, v));
            if (s > 0) pos.push_back(std::move(r));
            else if (s < 0) neg.push_back(std::move(r));
            else next.push_back(std::move(r));
        }
        for (const auto& p : pos) {
            for (const auto& n : neg) {
                std::vector<std::size_t> from;
                std::set_union(p.from.begin(), p.from.end(), n.from.begin(), n.from.end(), std::back_inserter(from));
                if (from.size() > eliminated + 1) continue;
                const Rational a = coeff_of(p.atom, v);
                const Rational b = -coeff_of(n.atom, v);
                const Rel rel = (p.atom.strict() || n.atom.strict()) ? Rel::Gt : Rel::Ge;
                Atom c = combine(p.atom, b, n.atom, a, rel);
                if (c.is_trivial()) {
                    if (c.trivially_true()) continue;
                    return Conj::bottom();
                }
                next.push_back({std::move(c), std::move(from)});
            }
        }
        // drop duplicates and weaker parallel atoms
        std::map<std::map<Var, Rational>, std::size_t> tightest;
        std::vector<bool> drop(next.size(), false);
        for (std::size_t i = 0; i < next.size(); ++i) {
            const Atom& x = next[i].atom;
            if (x.rel() == Rel::Eq) continue;
            auto [it, fresh] = tightest.emplace(x.coeffs(), i);
            if (fresh) continue;
            const Atom& y = next[it->second].atom;
            const bool tighter = x.constant() < y.constant() || (x.constant() == y.constant() && x.strict() && !y.strict());
            const bool same = x.constant() == y.constant() && x.strict() == y.strict();
            if (tighter || (same && next[i].from.size() < next[it->second].from.size())) {
                drop[it->second] = true;
                it->second = i;
            } else {
                drop[i] = true;
            }
        }
        rows.clear();
        for (std::size_t i = 0; i < next.size(); ++i)
            if (!drop[i]) rows.push_back(std::move(next[i]));
    }
    atoms.clear();
    for (auto& r : rows) atoms.push_back(std::move(r.atom));
    return Conj(remove_redundant(std::move(atoms)));
}

Conj rename(const Conj& f, const std::map<Var, Var>& m) {
    const VarSet vs = f.vars();
    std::map<Var, Var> seen;
    for (const auto& [from, to] : m) {
        if (!vs.count(from)) continue;
        auto [it, fresh] = seen.emplace(to, from);
        if (!fresh && it->second != from) {
            throw InvalidArgument("renaming maps both " + it->second.str() + " and " + from.str() + " to " + to.str());
        }
    }
    std::vector<Atom> out;
    for (const Atom& a : f.atoms()) {
        std::map<Var, Rational> coeffs;
        for (const auto& [v, c] : a.coeffs()) {
            auto it = m.find(v);
            coeffs[it == m.end() ? v : it->second] += c;
        }
        out.emplace_back(std::move(coeffs), a.constant(), a.rel());
    }
    Conj r;
    for (const auto& a : out) r.add(a);
    return r;
}

std::optional<Rational> var_bound(const Conj& f, const Var& v, BoundDir dir) {
    if (!is_sat(f)) throw InvalidArgument("var_bound on an unsatisfiable formula");
    LpEncoding enc;
    encode(enc, pointers(f.atoms()), false);
    const std::size_t col = column_of(enc, v);
    const Rational sign = dir == BoundDir::Upper ? 1 : -1;
    lp::Result r = lp::maximize(enc.problem, {{col, sign}});
    if (r.status != lp::Status::Optimal) return std::nullopt;
    return Rational(sign * r.value);
}

namespace {

// Generators of the homogenized closure {(t, x) | t >= 0, t * c + a.x rel 0}.
dd::Cone homogenized(const Conj& f, const std::vector<Var>& order) {
    const std::size_t dim = order.size() + 1;
    std::vector<dd::Vec> ges, eqs;
    dd::Vec t(dim, 0);
    t[0] = 1;
    ges.push_back(t);
    for (const Atom& a : f.atoms()) {
        const Integer m = lcm_of_denominators(a.coeffs(), a.constant());
        dd::Vec row(dim, 0);
        row[0] = Rational(a.constant() * m).get_num();
        for (const auto& [v, c] : a.coeffs()) {
            const auto idx = static_cast<std::size_t>(std::lower_bound(order.begin(), order.end(), v) - order.begin());
            row[idx + 1] = Rational(c * m).get_num();
        }
        (a.rel() == Rel::Eq ? eqs : ges).push_back(std::move(row));
    }
    return dd::generators(dim, ges, eqs);
}

Atom atom_of(const dd::Vec& row, const std::vector<Var>& order, Rel rel) {
    std::map<Var, Rational> coeffs;
    for (std::size_t i = 0; i < order.size(); ++i)
        if (sgn(row[i + 1]) != 0) coeffs.emplace(order[i], Rational(row[i + 1]));
    return Atom(std::move(coeffs), Rational(row[0]), rel);
}

}  // namespace

Conj hull(const Conj& f, const Conj& g) {
    if (!is_sat(f)) return g;
    if (!is_sat(g)) return f;
    if (entails(f, g)) return simplify(g);
    if (entails(g, f)) return simplify(f);
    VarSet all = f.vars();
    for (const Var& v : g.vars()) all.insert(v);
    const std::vector<Var> order(all.begin(), all.end());

    // union of generators, then the constraints of the cone they span
    dd::Cone cf = homogenized(f, order), cg = homogenized(g, order);
    std::vector<dd::Vec> lines = cf.lines, rays = cf.rays;
    lines.insert(lines.end(), cg.lines.begin(), cg.lines.end());
    rays.insert(rays.end(), cg.rays.begin(), cg.rays.end());
    const dd::Cone dual = dd::generators(order.size() + 1, rays, lines);
    std::vector<Atom> closed;
    for (const auto& l : dual.lines) closed.push_back(atom_of(l, order, Rel::Eq));
    for (const auto& r : dual.rays) {
        Atom a = atom_of(r, order, Rel::Ge);
        if (!a.is_trivial()) closed.push_back(std::move(a));
    }

    std::vector<Atom> out;
    for (const Atom& a : closed) {
        if (a.rel() == Rel::Ge) {
            Atom s(a.coeffs(), a.constant(), Rel::Gt);
            if (entails(f, s) && entails(g, s)) {
                out.push_back(s);
                continue;
            }
        }
        out.push_back(a);
    }
    return Conj(remove_redundant(std::move(out)));
}

Conj widen(const Conj& f, const Conj& g) {
    if (!is_sat(f)) return g;
    if (!is_sat(g)) return f;
    Conj out;
    for (const Atom& a : f.atoms()) {
        if (a.rel() == Rel::Eq) {
            Atom ge(a.coeffs(), a.constant(), Rel::Ge);
            Atom le(a.coeffs(), a.constant(), Rel::Le);
            if (entails(g, ge) && entails(g, le)) {
                out.add(a);
            } else if (entails(g, ge)) {
                out.add(ge);
            } else if (entails(g, le)) {
                out.add(le);
            }
        } else if (entails(g, a)) {
            out.add(a);
        }
    }
    return out;
}

Atom tighten(const Atom& a) {
    if (a.is_trivial()) return a;
    Rational k = a.constant();
    Rel rel = a.rel();
    if (rel == Rel::Gt) {
        k -= 1;
        rel = Rel::Ge;
    }
    const Integer g = gcd_of_numerators(a.coeffs(), 0, false);
    std::map<Var, Rational> coeffs;
    for (const auto& [v, c] : a.coeffs()) coeffs.emplace(v, c / g);
    if (rel == Rel::Eq) {
        if (!mpz_divisible_p(k.get_num_mpz_t(), g.get_mpz_t())) return Atom({}, -1, Rel::Ge);
        return Atom(std::move(coeffs), k / g, Rel::Eq);
    }
    Integer fl;
    mpz_fdiv_q(fl.get_mpz_t(), k.get_num_mpz_t(), g.get_mpz_t());
    return Atom(std::move(coeffs), Rational(fl), Rel::Ge);
}

Conj tighten(const Conj& f) {
    Conj out;
    for (const Atom& a : f.atoms()) out.add(tighten(a));
    return out;
}

Conj unchanged(const std::vector<std::string>& names) {
    Conj c;
    for (const auto& n : names) c.add(Atom({{Var(n, true), 1}, {Var(n), -1}}, 0, Rel::Eq));
    return c;
}

Conj unprime_all(const Conj& f) {
    Conj r;
    for (const Atom& a : f.atoms()) {
        std::map<Var, Rational> coeffs;
        for (const auto& [v, c] : a.coeffs()) coeffs[v.primed ? v.unprime() : v] += c;
        r.add(Atom(std::move(coeffs), a.constant(), a.rel()));
    }
    return r;
}

Conj prime_all(const Conj& f) {
    Conj r;
    for (const Atom& a : f.atoms()) {
        std::map<Var, Rational> coeffs;
        for (const auto& [v, c] : a.coeffs()) coeffs[v.prime()] += c;
        r.add(Atom(std::move(coeffs), a.constant(), a.rel()));
    }
    return r;
}

}  // namespace cfrkit
