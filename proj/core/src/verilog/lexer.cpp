// SPDX-License-Identifier: Apache-2.0
#include "chipforge/verilog/lexer.hpp"

#include <cctype>

namespace chipforge::verilog {

namespace {

struct Cursor {
    const std::string& src;
    std::size_t pos = 0;
    std::size_t line = 1;
    std::size_t col = 1;

    bool done() const { return pos >= src.size(); }
    char peek(std::size_t ahead = 0) const {
        return pos + ahead < src.size() ? src[pos + ahead] : '\0';
    }
    char advance() {
        const char c = src[pos++];
        if (c == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
        return c;
    }
    SourceLoc loc() const { return {line, col}; }
};

bool ident_start(char c) { return std::isalpha((unsigned char)c) || c == '_'; }
bool ident_char(char c) { return std::isalnum((unsigned char)c) || c == '_' || c == '$'; }

Tok keyword_kind(const std::string& s) {
    if (s == "module") return Tok::KwModule;
    if (s == "endmodule") return Tok::KwEndmodule;
    if (s == "input") return Tok::KwInput;
    if (s == "output") return Tok::KwOutput;
    if (s == "wire") return Tok::KwWire;
    if (s == "assign") return Tok::KwAssign;
    return Tok::Ident;
}

int hex_digit(char c) {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    return -1;
}

// Sized literal body after the quote: base letter then digits. The value is
// truncated to the declared size, as Verilog does.
Expected<BitVec, SyntaxError> lex_sized_literal(Cursor& cur, std::uint64_t size, SourceLoc start) {
    if (size == 0 || size > 1u << 20)
        return SyntaxError{start, "literal size must be between 1 and 1048576"};
    if (cur.done()) return SyntaxError{cur.loc(), "expected base after ' in literal"};
    const SourceLoc base_loc = cur.loc();
    const char base = cur.advance();
    std::string digits;
    while (!cur.done() && (std::isalnum((unsigned char)cur.peek()) || cur.peek() == '_' ||
                           cur.peek() == '?')) {
        digits.push_back(cur.advance());
    }
    BitVec value((std::size_t)size);
    std::size_t bit = 0;
    switch (base) {
    case 'b':
    case 'B':
        for (auto it = digits.rbegin(); it != digits.rend(); ++it) {
            if (*it == '_') continue;
            if (*it != '0' && *it != '1') {
                if (*it == 'x' || *it == 'X' || *it == 'z' || *it == 'Z' || *it == '?')
                    return SyntaxError{base_loc, "x/z literal values are outside the subset"};
                return SyntaxError{base_loc, std::string("bad binary digit '") + *it + "'"};
            }
            if (bit < value.width()) value.set_bit(bit, *it == '1');
            ++bit;
        }
        break;
    case 'h':
    case 'H':
        for (auto it = digits.rbegin(); it != digits.rend(); ++it) {
            if (*it == '_') continue;
            const int v = hex_digit(*it);
            if (v < 0) {
                if (*it == 'x' || *it == 'X' || *it == 'z' || *it == 'Z' || *it == '?')
                    return SyntaxError{base_loc, "x/z literal values are outside the subset"};
                return SyntaxError{base_loc, std::string("bad hex digit '") + *it + "'"};
            }
            for (int k = 0; k < 4; ++k) {
                if (bit < value.width()) value.set_bit(bit, (v >> k) & 1);
                ++bit;
            }
        }
        break;
    case 'd':
    case 'D':
    case 'o':
    case 'O':
        return SyntaxError{base_loc, "only sized binary ('b) and hex ('h) literals are supported"};
    default:
        return SyntaxError{base_loc, std::string("unknown literal base '") + base + "'"};
    }
    if (digits.empty()) return SyntaxError{base_loc, "literal has no digits"};
    return value;
}

} // namespace

Expected<std::vector<Token>, SyntaxError> lex(const std::string& source) {
    Cursor cur{source};
    std::vector<Token> out;

    while (!cur.done()) {
        const char c = cur.peek();
        if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
            cur.advance();
            continue;
        }
        if (c == '/' && cur.peek(1) == '/') {
            while (!cur.done() && cur.peek() != '\n') cur.advance();
            continue;
        }
        if (c == '/' && cur.peek(1) == '*') {
            const SourceLoc open = cur.loc();
            cur.advance();
            cur.advance();
            bool closed = false;
            while (!cur.done()) {
                if (cur.peek() == '*' && cur.peek(1) == '/') {
                    cur.advance();
                    cur.advance();
                    closed = true;
                    break;
                }
                cur.advance();
            }
            if (!closed) return SyntaxError{open, "unterminated block comment"};
            continue;
        }

        Token tok;
        tok.loc = cur.loc();

        if (ident_start(c)) {
            std::string s;
            while (!cur.done() && ident_char(cur.peek())) s.push_back(cur.advance());
            tok.kind = keyword_kind(s);
            tok.text = std::move(s);
            out.push_back(std::move(tok));
            continue;
        }

        if (std::isdigit((unsigned char)c)) {
            std::string digits;
            while (!cur.done() &&
                   (std::isdigit((unsigned char)cur.peek()) || cur.peek() == '_')) {
                if (cur.peek() != '_') digits.push_back(cur.peek());
                cur.advance();
            }
            if (cur.peek() == '\'') {
                cur.advance();
                std::uint64_t size = 0;
                for (char d : digits) {
                    size = size * 10 + std::uint64_t(d - '0');
                    if (size > (std::uint64_t(1) << 40)) break;
                }
                auto lit = lex_sized_literal(cur, size, tok.loc);
                if (!lit.ok()) return lit.error();
                tok.kind = Tok::Number;
                tok.value = std::move(lit.value());
                tok.text = digits + "'...";
                out.push_back(std::move(tok));
                continue;
            }
            tok.kind = Tok::Number;
            tok.value = BitVec::from_decimal(digits);
            tok.text = std::move(digits);
            out.push_back(std::move(tok));
            continue;
        }

        if (c == '\'') return SyntaxError{tok.loc, "literal requires an explicit size before '"};

        auto two = [&](char second) { return cur.peek(1) == second; };
        switch (c) {
        case '(': tok.kind = Tok::LParen; break;
        case ')': tok.kind = Tok::RParen; break;
        case '[': tok.kind = Tok::LBracket; break;
        case ']': tok.kind = Tok::RBracket; break;
        case '{': tok.kind = Tok::LBrace; break;
        case '}': tok.kind = Tok::RBrace; break;
        case ',': tok.kind = Tok::Comma; break;
        case ';': tok.kind = Tok::Semi; break;
        case ':': tok.kind = Tok::Colon; break;
        case '?': tok.kind = Tok::Question; break;
        case '~': tok.kind = Tok::Tilde; break;
        case '&':
            if (two('&')) return SyntaxError{tok.loc, "logical && is outside the subset; use &"};
            tok.kind = Tok::Amp;
            break;
        case '|':
            if (two('|')) return SyntaxError{tok.loc, "logical || is outside the subset; use |"};
            tok.kind = Tok::Pipe;
            break;
        case '^': tok.kind = Tok::Caret; break;
        case '+': tok.kind = Tok::Plus; break;
        case '-': tok.kind = Tok::Minus; break;
        case '*': tok.kind = Tok::Star; break;
        case '=':
            if (two('=')) {
                tok.kind = Tok::EqEq;
                cur.advance();
            } else {
                tok.kind = Tok::Assign;
            }
            break;
        case '!':
            if (two('=')) {
                tok.kind = Tok::NotEq;
                cur.advance();
            } else {
                return SyntaxError{tok.loc, "logical ! is outside the subset; use ~ or =="};
            }
            break;
        case '<':
            if (two('<')) {
                tok.kind = Tok::Shl;
                cur.advance();
            } else if (two('=')) {
                tok.kind = Tok::Le;
                cur.advance();
            } else {
                tok.kind = Tok::Lt;
            }
            break;
        case '>':
            if (two('>')) {
                tok.kind = Tok::Shr;
                cur.advance();
            } else if (two('=')) {
                tok.kind = Tok::Ge;
                cur.advance();
            } else {
                tok.kind = Tok::Gt;
            }
            break;
        default:
            return SyntaxError{tok.loc, std::string("unexpected character '") + c + "'"};
        }
        cur.advance();
        out.push_back(std::move(tok));
    }

    Token end;
    end.kind = Tok::End;
    end.loc = cur.loc();
    out.push_back(std::move(end));
    return out;
}

} // namespace chipforge::verilog
