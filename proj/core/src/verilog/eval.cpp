// SPDX-License-Identifier: Apache-2.0
#include "chipforge/verilog/eval.hpp"

#include <algorithm>

namespace chipforge::verilog {

namespace {

std::uint64_t shift_amount_capped(const BitVec& v, std::size_t cap) {
    std::uint64_t amt = 0;
    for (std::size_t i = 0; i < v.width(); ++i) {
        if (!v.bit(i)) continue;
        if (i >= 63) return cap;
        amt |= std::uint64_t(1) << i;
        if (amt >= cap) return cap;
    }
    return amt;
}

} // namespace

BitVec eval_expr(const Expr& e, const std::unordered_map<std::string, BitVec>& env) {
    switch (e.kind) {
    case Expr::Kind::Ident:
        return env.at(e.ident);
    case Expr::Kind::Literal:
        return e.literal;
    case Expr::Kind::Unary: {
        const BitVec x = eval_expr(*e.a, env);
        return e.un_op == UnaryOp::Not ? BitVec::bit_not(x) : BitVec::negate(x);
    }
    case Expr::Kind::Binary: {
        const BitVec x = eval_expr(*e.a, env);
        const BitVec y = eval_expr(*e.b, env);
        switch (e.bin_op) {
        case BinaryOp::And: return BitVec::bit_and(x, y);
        case BinaryOp::Or: return BitVec::bit_or(x, y);
        case BinaryOp::Xor: return BitVec::bit_xor(x, y);
        case BinaryOp::Add: return BitVec::add(x, y);
        case BinaryOp::Sub: return BitVec::sub(x, y);
        case BinaryOp::Mul: return BitVec::mul(x, y);
        case BinaryOp::Shl: return BitVec::shl(x, shift_amount_capped(y, x.width()));
        case BinaryOp::Shr: return BitVec::shr(x, shift_amount_capped(y, x.width()));
        case BinaryOp::Eq: return BitVec(1, BitVec::eq(x, y) ? 1 : 0);
        case BinaryOp::Ne: return BitVec(1, BitVec::eq(x, y) ? 0 : 1);
        case BinaryOp::Lt: return BitVec(1, BitVec::lt(x, y) ? 1 : 0);
        case BinaryOp::Gt: return BitVec(1, BitVec::lt(y, x) ? 1 : 0);
        case BinaryOp::Le: return BitVec(1, BitVec::lt(y, x) ? 0 : 1);
        case BinaryOp::Ge: return BitVec(1, BitVec::lt(x, y) ? 0 : 1);
        }
        return BitVec();
    }
    case Expr::Kind::Ternary: {
        const BitVec c = eval_expr(*e.a, env);
        const BitVec t = eval_expr(*e.b, env);
        const BitVec f = eval_expr(*e.c, env);
        const std::size_t w = std::max(t.width(), f.width());
        return (c.is_zero() ? f : t).resized(w);
    }
    case Expr::Kind::Concat: {
        BitVec acc = eval_expr(*e.parts.front(), env);
        for (std::size_t i = 1; i < e.parts.size(); ++i)
            acc = BitVec::concat(acc, eval_expr(*e.parts[i], env));
        return acc;
    }
    }
    return BitVec();
}

Expected<std::unordered_map<std::string, BitVec>, EvalError>
eval_module(const MiniModule& m, const std::unordered_map<std::string, BitVec>& inputs) {
    std::unordered_map<std::string, BitVec> env;
    for (const auto& p : m.ports) {
        if (!p.is_input) continue;
        auto it = inputs.find(p.name);
        if (it == inputs.end()) return EvalError{"missing value for input port '" + p.name + "'"};
        if (it->second.width() != p.width)
            return EvalError{"input port '" + p.name + "' expects " + std::to_string(p.width) +
                             " bits"};
        env.emplace(p.name, it->second);
    }

    auto order = topo_order(m);
    if (!order.ok()) return EvalError{order.error().message};

    const auto widths = m.width_table();
    for (std::size_t idx : order.value()) {
        const Assign& a = m.assigns[idx];
        BitVec v = eval_expr(*a.expr, env);
        if (!a.target.is_concat) {
            const std::string& name = a.target.names.front();
            env[name] = v.resized(widths.at(name));
            continue;
        }
        std::size_t total = 0;
        for (const auto& name : a.target.names) total += widths.at(name);
        v = v.resized(total);
        std::size_t off = 0;
        for (auto it = a.target.names.rbegin(); it != a.target.names.rend(); ++it) {
            const std::size_t w = widths.at(*it);
            env[*it] = BitVec::shr(v, off).resized(w);
            off += w;
        }
    }
    return env;
}

} // namespace chipforge::verilog
