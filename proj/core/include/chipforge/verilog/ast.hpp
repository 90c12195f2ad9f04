// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "chipforge/bitvec.hpp"
#include "chipforge/expected.hpp"

namespace chipforge::verilog {

struct SourceLoc {
    std::size_t line = 0; // 1-based; 0 means unknown
    std::size_t col = 0;
};

struct SyntaxError {
    SourceLoc loc;
    std::string message;

    std::string str() const {
        return "line " + std::to_string(loc.line) + ", col " + std::to_string(loc.col) + ": " +
               message;
    }
};

enum class UnaryOp { Not, Neg };

enum class BinaryOp { And, Or, Xor, Add, Sub, Mul, Shl, Shr, Eq, Ne, Lt, Gt, Le, Ge };

struct Expr;
using ExprPtr = std::unique_ptr<Expr>;

/// One expression node. `kind` selects which fields are meaningful:
/// Ident uses `ident`; Literal uses `literal`; Unary uses `un_op` + `a`;
/// Binary uses `bin_op` + `a` + `b`; Ternary uses `a` (cond), `b`, `c`;
/// Concat uses `parts`, most significant part first.
struct Expr {
    enum class Kind { Ident, Literal, Unary, Binary, Ternary, Concat };

    Kind kind;
    SourceLoc loc;

    std::string ident;
    BitVec literal;
    UnaryOp un_op = UnaryOp::Not;
    BinaryOp bin_op = BinaryOp::And;
    ExprPtr a, b, c;
    std::vector<ExprPtr> parts;
};

struct Port {
    std::string name;
    bool is_input = true;
    std::size_t width = 1;
    SourceLoc loc;
};

struct Net {
    std::string name;
    std::size_t width = 1;
    SourceLoc loc;
};

/// Assignment target: a single declared signal, or a concatenation of
/// declared signals (most significant first). Bit selects are outside
/// the subset, so targets are always whole signals.
struct Lvalue {
    std::vector<std::string> names;
    bool is_concat = false;
    SourceLoc loc;
};

struct Assign {
    Lvalue target;
    ExprPtr expr;
    SourceLoc loc;
};

struct MiniModule {
    std::string name;
    std::vector<Port> ports;
    std::vector<Net> nets;
    std::vector<Assign> assigns;

    const Port* find_port(const std::string& signal) const {
        for (const auto& p : ports)
            if (p.name == signal) return &p;
        return nullptr;
    }

    /// Declared width of a port or net; 0 when the name is unknown.
    std::size_t width_of(const std::string& signal) const {
        if (const Port* p = find_port(signal)) return p->width;
        for (const auto& n : nets)
            if (n.name == signal) return n.width;
        return 0;
    }

    std::unordered_map<std::string, std::size_t> width_table() const {
        std::unordered_map<std::string, std::size_t> t;
        for (const auto& p : ports) t.emplace(p.name, p.width);
        for (const auto& n : nets) t.emplace(n.name, n.width);
        return t;
    }
};

/// Result width of an expression under the declared signal widths.
/// Width rules (shared by the gate lowering and the direct evaluator):
/// bitwise and/or/xor extend to max(wa, wb); ~ and unary - keep the operand
/// width; + and - yield max(wa, wb) + 1 (carry / borrow bit kept); * yields
/// wa + wb; shifts keep the left operand's width; comparisons yield 1 bit;
/// ?: yields max of the arm widths; concat sums part widths.
std::size_t expr_width(const Expr& e, const std::unordered_map<std::string, std::size_t>& widths);

/// Semantic validation: declared identifiers, single drivers, driven
/// outputs, no assignment to inputs, read wires driven, acyclic assigns.
std::optional<SyntaxError> validate_module(const MiniModule& m);

/// Assign indices in dependency order (drivers before readers), stable by
/// source order among independent assigns. Fails on a combinational cycle.
Expected<std::vector<std::size_t>, SyntaxError> topo_order(const MiniModule& m);

} // namespace chipforge::verilog
