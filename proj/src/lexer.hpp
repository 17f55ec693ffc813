// Copyright (c) cfrkit contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <string_view>

#include "cfrkit/constraint.hpp"

namespace cfrkit::detail {

enum class Tok { Ident, Int, Sym, End };

struct Token {
    Tok kind = Tok::End;
    std::string text;
    int line = 1;
    int column = 1;
};

/// Tokenizer shared by the constraint, ITS and property-file grammars.
/// `#` starts a comment running to the end of the line. Identifiers may carry
/// a trailing `'`.
class Lexer {
public:
    explicit Lexer(std::string_view src) : src_(src) { advance(); }

    const Token& peek() const { return cur_; }
    Token next() {
        Token t = cur_;
        advance();
        return t;
    }

    bool at_sym(std::string_view s) const { return cur_.kind == Tok::Sym && cur_.text == s; }
    bool at_ident(std::string_view s) const { return cur_.kind == Tok::Ident && cur_.text == s; }
    bool at_end() const { return cur_.kind == Tok::End; }

    void expect_sym(std::string_view s);
    void expect_keyword(std::string_view s);
    std::string expect_ident();

    [[noreturn]] void fail(const std::string& msg) const;

private:
    void advance();

    std::string_view src_;
    std::size_t pos_ = 0;
    int line_ = 1;
    int col_ = 1;
    Token cur_;
};

Atom parse_atom(Lexer& lx);
/// Atoms separated by `,`; stops at the first token that does not continue the list.
Conj parse_conj(Lexer& lx);
/// `expr` as a coefficient map plus constant.
void parse_expr(Lexer& lx, std::map<Var, Rational>& coeffs, Rational& constant);

}  // namespace cfrkit::detail
