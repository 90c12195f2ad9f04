// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <vector>

#include "chipforge/verilog/ast.hpp"

namespace chipforge::verilog {

enum class Tok {
    End,
    Ident,
    Number,
    KwModule,
    KwEndmodule,
    KwInput,
    KwOutput,
    KwWire,
    KwAssign,
    LParen,
    RParen,
    LBracket,
    RBracket,
    LBrace,
    RBrace,
    Comma,
    Semi,
    Colon,
    Question,
    Assign, // =
    Tilde,
    Amp,
    Pipe,
    Caret,
    Plus,
    Minus,
    Star,
    Shl,
    Shr,
    EqEq,
    NotEq,
    Lt,
    Gt,
    Le,
    Ge,
};

struct Token {
    Tok kind = Tok::End;
    SourceLoc loc;
    std::string text; // identifier spelling or literal spelling
    BitVec value;     // Number only
};

Expected<std::vector<Token>, SyntaxError> lex(const std::string& source);

} // namespace chipforge::verilog
