// SPDX-License-Identifier: Apache-2.0
#include <algorithm>
#include <functional>
#include <queue>
#include <unordered_set>

#include "chipforge/verilog/ast.hpp"

namespace chipforge::verilog {

std::size_t expr_width(const Expr& e, const std::unordered_map<std::string, std::size_t>& widths) {
    switch (e.kind) {
    case Expr::Kind::Ident: {
        auto it = widths.find(e.ident);
        return it == widths.end() ? 0 : it->second;
    }
    case Expr::Kind::Literal:
        return e.literal.width();
    case Expr::Kind::Unary:
        return expr_width(*e.a, widths);
    case Expr::Kind::Binary: {
        const std::size_t wa = expr_width(*e.a, widths);
        const std::size_t wb = expr_width(*e.b, widths);
        switch (e.bin_op) {
        case BinaryOp::And:
        case BinaryOp::Or:
        case BinaryOp::Xor:
            return std::max(wa, wb);
        case BinaryOp::Add:
        case BinaryOp::Sub:
            return std::max(wa, wb) + 1;
        case BinaryOp::Mul:
            return wa + wb;
        case BinaryOp::Shl:
        case BinaryOp::Shr:
            return wa;
        case BinaryOp::Eq:
        case BinaryOp::Ne:
        case BinaryOp::Lt:
        case BinaryOp::Gt:
        case BinaryOp::Le:
        case BinaryOp::Ge:
            return 1;
        }
        return 0;
    }
    case Expr::Kind::Ternary:
        return std::max(expr_width(*e.b, widths), expr_width(*e.c, widths));
    case Expr::Kind::Concat: {
        std::size_t total = 0;
        for (const auto& p : e.parts) total += expr_width(*p, widths);
        return total;
    }
    }
    return 0;
}

namespace {

void collect_idents(const Expr& e, std::vector<const Expr*>& out) {
    switch (e.kind) {
    case Expr::Kind::Ident:
        out.push_back(&e);
        break;
    case Expr::Kind::Literal:
        break;
    case Expr::Kind::Unary:
        collect_idents(*e.a, out);
        break;
    case Expr::Kind::Binary:
        collect_idents(*e.a, out);
        collect_idents(*e.b, out);
        break;
    case Expr::Kind::Ternary:
        collect_idents(*e.a, out);
        collect_idents(*e.b, out);
        collect_idents(*e.c, out);
        break;
    case Expr::Kind::Concat:
        for (const auto& p : e.parts) collect_idents(*p, out);
        break;
    }
}

} // namespace

std::optional<SyntaxError> validate_module(const MiniModule& m) {
    std::unordered_map<std::string, std::size_t> widths;
    for (const auto& p : m.ports) {
        if (!widths.emplace(p.name, p.width).second)
            return SyntaxError{p.loc, "duplicate declaration of '" + p.name + "'"};
    }
    for (const auto& n : m.nets) {
        if (!widths.emplace(n.name, n.width).second)
            return SyntaxError{n.loc, "duplicate declaration of '" + n.name + "'"};
    }

    // driver[name] = assign index; inputs may never appear as targets.
    std::unordered_map<std::string, std::size_t> driver;
    for (std::size_t ai = 0; ai < m.assigns.size(); ++ai) {
        const Assign& a = m.assigns[ai];
        for (const auto& name : a.target.names) {
            if (!widths.count(name))
                return SyntaxError{a.target.loc, "assignment to undeclared signal '" + name + "'"};
            if (const Port* p = m.find_port(name); p && p->is_input)
                return SyntaxError{a.target.loc, "cannot drive input port '" + name + "'"};
            if (!driver.emplace(name, ai).second)
                return SyntaxError{a.target.loc, "signal '" + name + "' is driven more than once"};
        }
        std::vector<const Expr*> idents;
        collect_idents(*a.expr, idents);
        for (const Expr* id : idents) {
            if (!widths.count(id->ident))
                return SyntaxError{id->loc, "use of undeclared signal '" + id->ident + "'"};
        }
    }

    for (const auto& p : m.ports) {
        if (!p.is_input && !driver.count(p.name))
            return SyntaxError{p.loc, "output port '" + p.name + "' is never driven"};
    }

    // A wire that some expression reads must have a driver.
    for (std::size_t ai = 0; ai < m.assigns.size(); ++ai) {
        std::vector<const Expr*> idents;
        collect_idents(*m.assigns[ai].expr, idents);
        for (const Expr* id : idents) {
            const Port* p = m.find_port(id->ident);
            const bool is_input = p && p->is_input;
            if (!is_input && !driver.count(id->ident))
                return SyntaxError{id->loc, "signal '" + id->ident + "' is read but never driven"};
        }
    }

    auto order = topo_order(m);
    if (!order.ok()) return order.error();
    return std::nullopt;
}

Expected<std::vector<std::size_t>, SyntaxError> topo_order(const MiniModule& m) {
    const std::size_t n = m.assigns.size();
    std::unordered_map<std::string, std::size_t> driver;
    for (std::size_t ai = 0; ai < n; ++ai)
        for (const auto& name : m.assigns[ai].target.names) driver.emplace(name, ai);

    std::vector<std::vector<std::size_t>> readers(n); // edge driver -> reader
    std::vector<std::size_t> indegree(n, 0);
    for (std::size_t ai = 0; ai < n; ++ai) {
        std::vector<const Expr*> idents;
        collect_idents(*m.assigns[ai].expr, idents);
        std::unordered_set<std::size_t> deps;
        for (const Expr* id : idents) {
            auto it = driver.find(id->ident);
            if (it != driver.end() && it->second != ai) deps.insert(it->second);
            if (it != driver.end() && it->second == ai)
                return SyntaxError{id->loc,
                                   "combinational cycle: '" + id->ident + "' drives itself"};
        }
        for (std::size_t d : deps) {
            readers[d].push_back(ai);
            ++indegree[ai];
        }
    }

    std::priority_queue<std::size_t, std::vector<std::size_t>, std::greater<>> ready;
    for (std::size_t ai = 0; ai < n; ++ai)
        if (indegree[ai] == 0) ready.push(ai);

    std::vector<std::size_t> order;
    order.reserve(n);
    while (!ready.empty()) {
        const std::size_t ai = ready.top();
        ready.pop();
        order.push_back(ai);
        for (std::size_t r : readers[ai])
            if (--indegree[r] == 0) ready.push(r);
    }
    if (order.size() != n) {
        for (std::size_t ai = 0; ai < n; ++ai) {
            if (indegree[ai] > 0)
                return SyntaxError{m.assigns[ai].loc,
                                   "combinational cycle involving '" +
                                       m.assigns[ai].target.names.front() + "'"};
        }
    }
    return order;
}

} // namespace chipforge::verilog
