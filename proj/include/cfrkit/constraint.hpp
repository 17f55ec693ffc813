// Copyright (c) cfrkit contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <compare>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <gmpxx.h>

namespace cfrkit {

using Rational = mpq_class;
using Integer = mpz_class;

// Base class for every error the library reports. The C API maps the
// subclasses to status codes.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ParseError : public Error {
public:
    ParseError(const std::string& msg, int line, int column);
    int line() const { return line_; }
    int column() const { return column_; }

private:
    int line_;
    int column_;
};

// Raised when an operation's precondition is violated by its input
// (unsat formula for a bound query, non-injective renaming, ...).
class InvalidArgument : public Error {
public:
    using Error::Error;
};

/// A program variable or its post-state copy (`x'`).
struct Var {
    std::string name;
    bool primed = false;

    Var() = default;
    Var(std::string n, bool p = false) : name(std::move(n)), primed(p) {}

    Var prime() const { return Var(name, true); }
    Var unprime() const { return Var(name, false); }
    std::string str() const { return primed ? name + "'" : name; }

    auto operator<=>(const Var&) const = default;
    bool operator==(const Var&) const = default;
};

using VarSet = std::set<Var>;
using Valuation = std::map<Var, Integer>;

enum class Rel { Gt, Lt, Ge, Le, Eq };

/// Linear constraint `constant + sum(coeffs[v] * v) rel 0`.
///
/// Atoms are kept normalized: integer coefficients with gcd 1, `<`/`<=` are
/// flipped into `>`/`>=`, and equalities have a positive leading coefficient.
/// Two atoms with the same solution set and the same strictness compare equal.
class Atom {
public:
    Atom() = default;
    Atom(std::map<Var, Rational> coeffs, Rational constant, Rel rel);

    /// lhs rel rhs, both given as linear expressions.
    static Atom compare(const std::map<Var, Rational>& lhs, const Rational& lhs_const, Rel rel,
                        const std::map<Var, Rational>& rhs, const Rational& rhs_const);

    const std::map<Var, Rational>& coeffs() const { return coeffs_; }
    const Rational& constant() const { return constant_; }
    Rel rel() const { return rel_; }

    bool is_trivial() const { return coeffs_.empty(); }
    // Only meaningful when is_trivial().
    bool trivially_true() const;

    bool strict() const { return rel_ == Rel::Gt; }
    bool holds(const Valuation& sigma) const;
    Rational eval_lhs(const std::map<Var, Rational>& sigma) const;
    VarSet vars() const;

    Atom negated_strict() const;  // the complement of a >= or > atom
    Atom closure() const;         // > relaxed to >=

    std::string str() const;

    std::strong_ordering operator<=>(const Atom& o) const;
    bool operator==(const Atom& o) const;

private:
    std::string str_raw() const;

    std::map<Var, Rational> coeffs_;
    Rational constant_ = 0;
    Rel rel_ = Rel::Ge;
};

/// A conjunction of atoms. The empty conjunction is `true`.
class Conj {
public:
    Conj() = default;
    explicit Conj(std::vector<Atom> atoms);

    static Conj top() { return Conj(); }
    static Conj bottom();

    const std::vector<Atom>& atoms() const { return atoms_; }
    bool empty() const { return atoms_.empty(); }
    std::size_t size() const { return atoms_.size(); }

    void add(const Atom& a);
    Conj operator&(const Conj& o) const;

    VarSet vars() const;
    bool holds(const Valuation& sigma) const;
    bool syntactically_false() const;

    std::string str() const;

    bool operator==(const Conj&) const = default;

private:
    std::vector<Atom> atoms_;
};

// ---- textual form --------------------------------------------------------

Atom parse_atom(std::string_view text);
/// Comma separated atoms; an empty string or `true` is the empty conjunction.
Conj parse_conj(std::string_view text);

// ---- decision procedures (rational relaxation) ---------------------------

bool is_sat(const Conj& f);
bool entails(const Conj& f, const Conj& g);
bool entails(const Conj& f, const Atom& a);
/// Mutual entailment.
bool equivalent(const Conj& f, const Conj& g);

Conj project(const Conj& f, const VarSet& keep);
Conj rename(const Conj& f, const std::map<Var, Var>& m);

enum class BoundDir { Upper, Lower };
std::optional<Rational> var_bound(const Conj& f, const Var& v, BoundDir dir);

Conj hull(const Conj& f, const Conj& g);
Conj widen(const Conj& f, const Conj& g);

/// Drops atoms entailed by the remaining ones.
Conj simplify(const Conj& f);

/// Integer tightening: `e > 0` becomes `e - 1 >= 0`, then coefficients are
/// divided by their gcd with the constant rounded down. Valid only over Z.
Atom tighten(const Atom& a);
Conj tighten(const Conj& f);

// ---- helpers --------------------------------------------------------------

/// x1' = x1 /\ ... for the given names.
Conj unchanged(const std::vector<std::string>& names);
/// Maps every primed variable to its unprimed counterpart.
Conj unprime_all(const Conj& f);
Conj prime_all(const Conj& f);

}  // namespace cfrkit
