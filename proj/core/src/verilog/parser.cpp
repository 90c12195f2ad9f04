// SPDX-License-Identifier: Apache-2.0
#include "chipforge/verilog/parser.hpp"

#include <unordered_set>

#include "chipforge/verilog/lexer.hpp"

namespace chipforge::verilog {

namespace {

const std::unordered_set<std::string>& blocked_keywords() {
    static const std::unordered_set<std::string> kw = {
        "always",   "initial",   "reg",       "posedge",    "negedge", "if",
        "else",     "case",      "casez",     "casex",      "begin",   "end",
        "for",      "while",     "repeat",    "forever",    "function", "task",
        "generate", "genvar",    "parameter", "localparam", "integer", "real",
        "specify",  "primitive", "defparam",  "inout",      "tri",     "signed",
    };
    return kw;
}

class Parser {
public:
    explicit Parser(std::vector<Token> toks) : toks_(std::move(toks)) {}

    Expected<MiniModule, SyntaxError> run() {
        MiniModule m;
        if (auto err = parse_module(m)) return *err;
        if (!at(Tok::End))
            return fail("extra input after endmodule; expected a single module");
        if (auto err = validate_module(m)) return *err;
        return m;
    }

private:
    std::vector<Token> toks_;
    std::size_t i_ = 0;

    const Token& cur() const { return toks_[i_]; }
    bool at(Tok k) const { return cur().kind == k; }
    const Token& take() { return toks_[i_++]; }
    bool accept(Tok k) {
        if (!at(k)) return false;
        ++i_;
        return true;
    }

    SyntaxError fail(const std::string& msg) const { return SyntaxError{cur().loc, msg}; }

    std::optional<SyntaxError> expect(Tok k, const std::string& what) {
        if (accept(k)) return std::nullopt;
        return fail("expected " + what);
    }

    std::optional<SyntaxError> subset_check(const std::string& context) {
        if (at(Tok::Ident) && blocked_keywords().count(cur().text)) {
            return SyntaxError{cur().loc, "'" + cur().text +
                                              "' is outside the supported combinational subset (" +
                                              context + ")"};
        }
        return std::nullopt;
    }

    // range := '[' Number ':' Number ']'  with msb >= lsb; width = msb-lsb+1
    Expected<std::size_t, SyntaxError> parse_range() {
        const SourceLoc open = cur().loc;
        take(); // '['
        if (!at(Tok::Number)) return fail("expected msb constant in range");
        const BitVec msb_v = take().value;
        if (auto err = expect(Tok::Colon, "':' in range")) return *err;
        if (!at(Tok::Number)) return fail("expected lsb constant in range");
        const BitVec lsb_v = take().value;
        if (auto err = expect(Tok::RBracket, "']' after range")) return *err;
        if (msb_v.width() > 64 || lsb_v.width() > 64)
            return SyntaxError{open, "range bound too large"};
        const std::uint64_t msb = msb_v.to_uint64();
        const std::uint64_t lsb = lsb_v.to_uint64();
        if (msb < lsb) return SyntaxError{open, "range msb must not be below lsb"};
        if (msb > (1u << 20)) return SyntaxError{open, "range bound too large"};
        return std::size_t(msb - lsb + 1);
    }

    std::optional<SyntaxError> parse_module(MiniModule& m) {
        if (auto err = subset_check("module header")) return err;
        if (auto err = expect(Tok::KwModule, "'module'")) return err;
        if (auto err = subset_check("module name")) return err;
        if (!at(Tok::Ident)) return fail("expected module name");
        m.name = take().text;
        if (auto err = expect(Tok::LParen, "'(' after module name")) return err;
        if (!accept(Tok::RParen)) {
            while (true) {
                if (auto err = parse_port(m)) return err;
                if (accept(Tok::Comma)) continue;
                if (auto err = expect(Tok::RParen, "')' after port list")) return err;
                break;
            }
        }
        if (auto err = expect(Tok::Semi, "';' after module header")) return err;

        while (!at(Tok::KwEndmodule)) {
            if (at(Tok::End)) return fail("expected 'endmodule'");
            if (auto err = subset_check("module body")) return err;
            if (at(Tok::KwWire)) {
                if (auto err = parse_wire_decl(m)) return err;
            } else if (at(Tok::KwAssign)) {
                if (auto err = parse_assign(m)) return err;
            } else {
                return fail("expected 'wire', 'assign', or 'endmodule'");
            }
        }
        take(); // endmodule
        return std::nullopt;
    }

    std::optional<SyntaxError> parse_port(MiniModule& m) {
        if (auto err = subset_check("port declaration")) return err;
        Port p;
        p.loc = cur().loc;
        if (accept(Tok::KwInput)) {
            p.is_input = true;
        } else if (accept(Tok::KwOutput)) {
            p.is_input = false;
        } else {
            return fail("expected 'input' or 'output' port declaration");
        }
        accept(Tok::KwWire); // optional net type
        if (auto err = subset_check("port declaration")) return err;
        if (at(Tok::LBracket)) {
            auto w = parse_range();
            if (!w.ok()) return w.error();
            p.width = w.value();
        }
        if (!at(Tok::Ident)) return fail("expected port name");
        p.name = take().text;
        m.ports.push_back(std::move(p));
        return std::nullopt;
    }

    std::optional<SyntaxError> parse_wire_decl(MiniModule& m) {
        take(); // wire
        std::size_t width = 1;
        if (at(Tok::LBracket)) {
            auto w = parse_range();
            if (!w.ok()) return w.error();
            width = w.value();
        }
        while (true) {
            if (auto err = subset_check("wire declaration")) return err;
            if (!at(Tok::Ident)) return fail("expected wire name");
            Net n;
            n.loc = cur().loc;
            n.name = take().text;
            n.width = width;
            m.nets.push_back(std::move(n));
            if (accept(Tok::Comma)) continue;
            break;
        }
        return expect(Tok::Semi, "';' after wire declaration");
    }

    std::optional<SyntaxError> parse_assign(MiniModule& m) {
        Assign a;
        a.loc = cur().loc;
        take(); // assign
        if (auto err = parse_lvalue(a.target)) return err;
        if (auto err = expect(Tok::Assign, "'=' in assign")) return err;
        auto e = parse_expr();
        if (!e.ok()) return e.error();
        a.expr = std::move(e.value());
        if (auto err = expect(Tok::Semi, "';' after assign")) return err;
        m.assigns.push_back(std::move(a));
        return std::nullopt;
    }

    std::optional<SyntaxError> parse_lvalue(Lvalue& lv) {
        lv.loc = cur().loc;
        if (accept(Tok::LBrace)) {
            lv.is_concat = true;
            while (true) {
                if (auto err = subset_check("assignment target")) return err;
                if (!at(Tok::Ident)) return fail("expected signal name in concatenation target");
                lv.names.push_back(take().text);
                if (accept(Tok::Comma)) continue;
                if (auto err = expect(Tok::RBrace, "'}' after concatenation target")) return err;
                break;
            }
            if (at(Tok::LBracket))
                return fail("bit selects are outside the subset");
            return std::nullopt;
        }
        if (auto err = subset_check("assignment target")) return err;
        if (!at(Tok::Ident)) return fail("expected assignment target");
        lv.names.push_back(take().text);
        if (at(Tok::LBracket)) return fail("bit selects are outside the subset");
        return std::nullopt;
    }

    // Precedence, lowest to highest:
    //   ?:  |  ^  &  ==/!=  </<=/>/>=  <</>>  +/-  *  unary ~ -  primary
    Expected<ExprPtr, SyntaxError> parse_expr() { return parse_ternary(); }

    Expected<ExprPtr, SyntaxError> parse_ternary() {
        auto cond = parse_bitor();
        if (!cond.ok()) return cond;
        if (!at(Tok::Question)) return cond;
        auto node = std::make_unique<Expr>();
        node->kind = Expr::Kind::Ternary;
        node->loc = cur().loc;
        take(); // ?
        node->a = std::move(cond.value());
        auto then_e = parse_expr();
        if (!then_e.ok()) return then_e;
        node->b = std::move(then_e.value());
        if (auto err = expect(Tok::Colon, "':' in conditional expression")) return *err;
        auto else_e = parse_ternary();
        if (!else_e.ok()) return else_e;
        node->c = std::move(else_e.value());
        return ExprPtr(std::move(node));
    }

    template <typename Sub>
    Expected<ExprPtr, SyntaxError> parse_binary_chain(Sub sub,
                                                      std::initializer_list<std::pair<Tok, BinaryOp>> ops) {
        auto lhs = (this->*sub)();
        if (!lhs.ok()) return lhs;
        while (true) {
            const Tok k = cur().kind;
            const BinaryOp* matched = nullptr;
            for (const auto& [t, op] : ops) {
                if (t == k) {
                    matched = &op;
                    break;
                }
            }
            if (!matched) return lhs;
            auto node = std::make_unique<Expr>();
            node->kind = Expr::Kind::Binary;
            node->loc = cur().loc;
            node->bin_op = *matched;
            take();
            auto rhs = (this->*sub)();
            if (!rhs.ok()) return rhs;
            node->a = std::move(lhs.value());
            node->b = std::move(rhs.value());
            lhs = ExprPtr(std::move(node));
        }
    }

    using SubParser = Expected<ExprPtr, SyntaxError> (Parser::*)();

    Expected<ExprPtr, SyntaxError> parse_bitor() {
        return parse_binary_chain<SubParser>(&Parser::parse_bitxor, {{Tok::Pipe, BinaryOp::Or}});
    }
    Expected<ExprPtr, SyntaxError> parse_bitxor() {
        return parse_binary_chain<SubParser>(&Parser::parse_bitand, {{Tok::Caret, BinaryOp::Xor}});
    }
    Expected<ExprPtr, SyntaxError> parse_bitand() {
        return parse_binary_chain<SubParser>(&Parser::parse_equality, {{Tok::Amp, BinaryOp::And}});
    }
    Expected<ExprPtr, SyntaxError> parse_equality() {
        return parse_binary_chain<SubParser>(
            &Parser::parse_relational, {{Tok::EqEq, BinaryOp::Eq}, {Tok::NotEq, BinaryOp::Ne}});
    }
    Expected<ExprPtr, SyntaxError> parse_relational() {
        return parse_binary_chain<SubParser>(&Parser::parse_shift, {{Tok::Lt, BinaryOp::Lt},
                                                                    {Tok::Le, BinaryOp::Le},
                                                                    {Tok::Gt, BinaryOp::Gt},
                                                                    {Tok::Ge, BinaryOp::Ge}});
    }
    Expected<ExprPtr, SyntaxError> parse_shift() {
        return parse_binary_chain<SubParser>(
            &Parser::parse_additive, {{Tok::Shl, BinaryOp::Shl}, {Tok::Shr, BinaryOp::Shr}});
    }
    Expected<ExprPtr, SyntaxError> parse_additive() {
        return parse_binary_chain<SubParser>(
            &Parser::parse_multiplicative, {{Tok::Plus, BinaryOp::Add}, {Tok::Minus, BinaryOp::Sub}});
    }
    Expected<ExprPtr, SyntaxError> parse_multiplicative() {
        return parse_binary_chain<SubParser>(&Parser::parse_unary, {{Tok::Star, BinaryOp::Mul}});
    }

    Expected<ExprPtr, SyntaxError> parse_unary() {
        if (at(Tok::Tilde) || at(Tok::Minus)) {
            auto node = std::make_unique<Expr>();
            node->kind = Expr::Kind::Unary;
            node->loc = cur().loc;
            node->un_op = at(Tok::Tilde) ? UnaryOp::Not : UnaryOp::Neg;
            take();
            auto operand = parse_unary();
            if (!operand.ok()) return operand;
            node->a = std::move(operand.value());
            return ExprPtr(std::move(node));
        }
        return parse_primary();
    }

    Expected<ExprPtr, SyntaxError> parse_primary() {
        if (auto err = subset_check("expression")) return *err;
        if (at(Tok::Ident)) {
            auto node = std::make_unique<Expr>();
            node->kind = Expr::Kind::Ident;
            node->loc = cur().loc;
            node->ident = take().text;
            if (at(Tok::LBracket))
                return SyntaxError{cur().loc, "bit selects are outside the subset"};
            return ExprPtr(std::move(node));
        }
        if (at(Tok::Number)) {
            auto node = std::make_unique<Expr>();
            node->kind = Expr::Kind::Literal;
            node->loc = cur().loc;
            node->literal = take().value;
            return ExprPtr(std::move(node));
        }
        if (accept(Tok::LParen)) {
            auto inner = parse_expr();
            if (!inner.ok()) return inner;
            if (auto err = expect(Tok::RParen, "')'")) return *err;
            return inner;
        }
        if (at(Tok::LBrace)) {
            auto node = std::make_unique<Expr>();
            node->kind = Expr::Kind::Concat;
            node->loc = cur().loc;
            take(); // {
            while (true) {
                auto part = parse_expr();
                if (!part.ok()) return part;
                node->parts.push_back(std::move(part.value()));
                if (accept(Tok::Comma)) continue;
                if (auto err = expect(Tok::RBrace, "'}' after concatenation")) return *err;
                break;
            }
            return ExprPtr(std::move(node));
        }
        return fail("expected an expression");
    }
};

} // namespace

Expected<MiniModule, SyntaxError> parse_mini(const std::string& source) {
    auto toks = lex(source);
    if (!toks.ok()) return toks.error();
    return Parser(std::move(toks.value())).run();
}

} // namespace chipforge::verilog
