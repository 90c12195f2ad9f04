// SPDX-License-Identifier: Apache-2.0
//
// Deterministic random generator for combinational-subset modules, used to
// cross-check the gate-level route against the direct evaluator. Generated
// text stays inside the parser subset by construction.
#pragma once

#include <algorithm>
#include <cstdio>
#include <random>
#include <string>
#include <vector>

namespace chipforge::testgen {

struct GenPort {
    std::string name;
    std::size_t width;
};

struct GeneratedModule {
    std::string source;
    std::vector<GenPort> inputs; // declared order; widths sum to <= 10
};

namespace detail {

inline std::size_t pick(std::mt19937_64& rng, std::size_t lo, std::size_t hi) {
    return lo + static_cast<std::size_t>(rng() % (hi - lo + 1));
}

/// Random expression over the named signals. Depth bounds the tree; every
/// operator of the subset can appear, including wide ternary conditions
/// and out-of-range shift amounts, which both lowering routes must agree on.
inline std::string gen_expr(std::mt19937_64& rng, const std::vector<GenPort>& signals,
                            int depth) {
    const std::size_t leaf = depth <= 0 ? 2 : 12;
    switch (pick(rng, 0, leaf - 1)) {
    case 0: {
        const auto& s = signals[pick(rng, 0, signals.size() - 1)];
        return s.name;
    }
    case 1: {
        const std::size_t width = pick(rng, 1, 6);
        const std::size_t value = rng() & ((std::size_t(1) << width) - 1);
        char hex[24];
        std::snprintf(hex, sizeof(hex), "%zu'h%zx", width, value);
        return hex;
    }
    case 2: return "(~" + gen_expr(rng, signals, depth - 1) + ")";
    case 3: return "(-" + gen_expr(rng, signals, depth - 1) + ")";
    case 4: {
        static const char* ops[] = {"&", "|", "^", "+", "-"};
        const std::string op = ops[pick(rng, 0, 4)];
        return "(" + gen_expr(rng, signals, depth - 1) + " " + op + " " +
               gen_expr(rng, signals, depth - 1) + ")";
    }
    case 5: return "(" + gen_expr(rng, signals, depth - 1) + " * " +
                   gen_expr(rng, signals, depth - 2) + ")";
    case 6: {
        static const char* ops[] = {"<<", ">>"};
        return "(" + gen_expr(rng, signals, depth - 1) + " " + ops[pick(rng, 0, 1)] + " " +
               gen_expr(rng, signals, depth - 1) + ")";
    }
    case 7: {
        static const char* ops[] = {"==", "!=", "<", ">", "<=", ">="};
        return "(" + gen_expr(rng, signals, depth - 1) + " " + ops[pick(rng, 0, 5)] + " " +
               gen_expr(rng, signals, depth - 1) + ")";
    }
    case 8:
    case 9:
        return "(" + gen_expr(rng, signals, depth - 1) + " ? " +
               gen_expr(rng, signals, depth - 1) + " : " + gen_expr(rng, signals, depth - 1) +
               ")";
    case 10: {
        std::string out = "{" + gen_expr(rng, signals, depth - 1);
        const std::size_t extra = pick(rng, 1, 2);
        for (std::size_t i = 0; i < extra; ++i)
            out += ", " + gen_expr(rng, signals, depth - 1);
        return out + "}";
    }
    default: {
        const auto& s = signals[pick(rng, 0, signals.size() - 1)];
        return s.name;
    }
    }
}

} // namespace detail

/// One random module with <= 10 total input bits. Wires are assigned in
/// declaration order reading only earlier signals, so the result is acyclic
/// and every wire is driven before use.
inline GeneratedModule generate_module(std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    GeneratedModule m;

    const std::size_t n_inputs = detail::pick(rng, 1, 3);
    std::size_t budget = 10;
    for (std::size_t i = 0; i < n_inputs; ++i) {
        const std::size_t reserve = n_inputs - i - 1; // one bit per later port
        const std::size_t width = detail::pick(rng, 1, std::min<std::size_t>(4, budget - reserve));
        budget -= width;
        m.inputs.push_back({"i" + std::to_string(i), width});
    }

    const std::size_t n_wires = detail::pick(rng, 0, 2);
    const std::size_t n_outputs = detail::pick(rng, 1, 2);
    std::vector<GenPort> wires;
    std::vector<GenPort> outputs;
    for (std::size_t i = 0; i < n_wires; ++i)
        wires.push_back({"w" + std::to_string(i), detail::pick(rng, 1, 8)});
    for (std::size_t i = 0; i < n_outputs; ++i)
        outputs.push_back({"o" + std::to_string(i), detail::pick(rng, 1, 8)});

    std::string src = "module rnd" + std::to_string(seed) + "(";
    for (std::size_t i = 0; i < m.inputs.size(); ++i) {
        if (i) src += ", ";
        src += "input ";
        if (m.inputs[i].width > 1)
            src += "[" + std::to_string(m.inputs[i].width - 1) + ":0] ";
        src += m.inputs[i].name;
    }
    for (const auto& o : outputs) {
        src += ", output ";
        if (o.width > 1) src += "[" + std::to_string(o.width - 1) + ":0] ";
        src += o.name;
    }
    src += ");\n";
    for (const auto& w : wires) {
        src += "  wire ";
        if (w.width > 1) src += "[" + std::to_string(w.width - 1) + ":0] ";
        src += w.name + ";\n";
    }

    std::vector<GenPort> visible = m.inputs;
    for (const auto& w : wires) {
        src += "  assign " + w.name + " = " + detail::gen_expr(rng, visible, 3) + ";\n";
        visible.push_back(w);
    }
    // Occasionally drive both outputs through one concat target to cover
    // the truncate-or-extend assignment path.
    if (n_outputs == 2 && detail::pick(rng, 0, 3) == 0) {
        src += "  assign {" + outputs[0].name + ", " + outputs[1].name + "} = " +
               detail::gen_expr(rng, visible, 3) + ";\n";
    } else {
        for (const auto& o : outputs)
            src += "  assign " + o.name + " = " + detail::gen_expr(rng, visible, 3) + ";\n";
    }
    src += "endmodule\n";
    m.source = std::move(src);
    return m;
}

} // namespace chipforge::testgen
