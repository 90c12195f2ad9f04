// SPDX-License-Identifier: Apache-2.0
#include "chipforge/verilog/elaborate.hpp"

#include <algorithm>
#include <cassert>
#include <unordered_map>

namespace chipforge::verilog {

namespace {

using Bits = std::vector<BitRef>; // LSB first

class GateBuilder {
public:
    GateBuilder(std::size_t n_input_bits, std::size_t max_gates)
        : base_(2 + n_input_bits), max_gates_(max_gates) {}

    void begin_assign() { cons_.clear(); }
    bool over_budget() const { return over_; }
    std::vector<Gate> take() { return std::move(gates_); }

    BitRef not_(BitRef a) {
        if (a == kConst0) return kConst1;
        if (a == kConst1) return kConst0;
        if (const Gate* g = gate_of(a); g && g->kind == GateKind::Not) return g->a;
        return emit(GateKind::Not, a, kConst0);
    }

    BitRef and_(BitRef a, BitRef b) {
        if (a == b) return a;
        if (a == kConst0 || b == kConst0) return kConst0;
        if (a == kConst1) return b;
        if (b == kConst1) return a;
        if (complements(a, b)) return kConst0;
        if (a > b) std::swap(a, b);
        return emit(GateKind::And2, a, b);
    }

    BitRef or_(BitRef a, BitRef b) {
        if (a == b) return a;
        if (a == kConst1 || b == kConst1) return kConst1;
        if (a == kConst0) return b;
        if (b == kConst0) return a;
        if (complements(a, b)) return kConst1;
        if (a > b) std::swap(a, b);
        return emit(GateKind::Or2, a, b);
    }

    BitRef xor_(BitRef a, BitRef b) {
        if (a == b) return kConst0;
        if (a == kConst0) return b;
        if (b == kConst0) return a;
        if (a == kConst1) return not_(b);
        if (b == kConst1) return not_(a);
        if (complements(a, b)) return kConst1;
        if (a > b) std::swap(a, b);
        return emit(GateKind::Xor2, a, b);
    }

private:
    const Gate* gate_of(BitRef r) const {
        return r >= base_ ? &gates_[r - base_] : nullptr;
    }

    bool complements(BitRef a, BitRef b) const {
        if (const Gate* g = gate_of(a); g && g->kind == GateKind::Not && g->a == b) return true;
        if (const Gate* g = gate_of(b); g && g->kind == GateKind::Not && g->a == a) return true;
        return false;
    }

    BitRef emit(GateKind k, BitRef a, BitRef b) {
        const std::uint64_t key =
            (std::uint64_t(k) << 62) | (std::uint64_t(a) << 31) | std::uint64_t(b);
        auto it = cons_.find(key);
        if (it != cons_.end()) return it->second;
        if (over_ || gates_.size() >= max_gates_) {
            over_ = true;
            return kConst0;
        }
        gates_.push_back(Gate{k, a, b});
        const BitRef ref = BitRef(base_ + gates_.size() - 1);
        cons_.emplace(key, ref);
        return ref;
    }

    std::size_t base_;
    std::size_t max_gates_;
    bool over_ = false;
    std::vector<Gate> gates_;
    std::unordered_map<std::uint64_t, BitRef> cons_;
};

Bits fit(Bits bits, std::size_t w) {
    bits.resize(w, kConst0);
    return bits;
}

class Elaborator {
public:
    Elaborator(const MiniModule& m, const ElaborateOptions& opts)
        : m_(m), widths_(m.width_table()), gb_(count_input_bits(m), opts.max_gates) {}

    Expected<GateNetlist, ElaborationError> run() {
        seed_inputs();
        auto order = topo_order(m_);
        if (!order.ok())
            return ElaborationError{order.error().loc, order.error().message};
        for (std::size_t idx : order.value()) {
            if (auto err = lower_assign(m_.assigns[idx])) return *err;
        }
        return finish();
    }

private:
    static std::size_t count_input_bits(const MiniModule& m) {
        std::size_t n = 0;
        for (const auto& p : m.ports)
            if (p.is_input) n += p.width;
        return n;
    }

    void seed_inputs() {
        BitRef next = 2;
        for (const auto& p : m_.ports) {
            if (!p.is_input) continue;
            netlist_.inputs.push_back({p.name, p.width});
            Bits bits(p.width);
            for (std::size_t b = 0; b < p.width; ++b) bits[b] = next++;
            env_.emplace(p.name, std::move(bits));
        }
    }

    std::optional<ElaborationError> lower_assign(const Assign& a) {
        gb_.begin_assign();
        Bits bits = lower(*a.expr);
        if (gb_.over_budget())
            return ElaborationError{a.loc, "gate budget exceeded during elaboration"};
        if (!a.target.is_concat) {
            const std::string& name = a.target.names.front();
            env_[name] = fit(std::move(bits), widths_.at(name));
            return std::nullopt;
        }
        std::size_t total = 0;
        for (const auto& name : a.target.names) total += widths_.at(name);
        bits = fit(std::move(bits), total);
        std::size_t off = 0;
        for (auto it = a.target.names.rbegin(); it != a.target.names.rend(); ++it) {
            const std::size_t w = widths_.at(*it);
            env_[*it] = Bits(bits.begin() + off, bits.begin() + off + w);
            off += w;
        }
        return std::nullopt;
    }

    Expected<GateNetlist, ElaborationError> finish() {
        for (const auto& p : m_.ports) {
            if (p.is_input) continue;
            netlist_.outputs.push_back({p.name, p.width});
            const Bits& bits = env_.at(p.name);
            netlist_.output_bits.insert(netlist_.output_bits.end(), bits.begin(), bits.end());
        }
        netlist_.gates = gb_.take();
        return std::move(netlist_);
    }

    // --- expression lowering -------------------------------------------

    Bits lower(const Expr& e) {
        switch (e.kind) {
        case Expr::Kind::Ident:
            return env_.at(e.ident);
        case Expr::Kind::Literal: {
            Bits bits(e.literal.width());
            for (std::size_t b = 0; b < bits.size(); ++b)
                bits[b] = e.literal.bit(b) ? kConst1 : kConst0;
            return bits;
        }
        case Expr::Kind::Unary: {
            Bits x = lower(*e.a);
            if (e.un_op == UnaryOp::Not) {
                for (auto& r : x) r = gb_.not_(r);
                return x;
            }
            for (auto& r : x) r = gb_.not_(r);
            return increment(std::move(x));
        }
        case Expr::Kind::Binary:
            return lower_binary(e);
        case Expr::Kind::Ternary: {
            const BitRef c = or_tree(lower(*e.a));
            Bits t = lower(*e.b);
            Bits f = lower(*e.c);
            const std::size_t w = std::max(t.size(), f.size());
            return mux_vec(c, fit(std::move(t), w), fit(std::move(f), w));
        }
        case Expr::Kind::Concat: {
            Bits out;
            for (auto it = e.parts.rbegin(); it != e.parts.rend(); ++it) {
                Bits part = lower(**it);
                out.insert(out.end(), part.begin(), part.end());
            }
            return out;
        }
        }
        return {};
    }

    Bits lower_binary(const Expr& e) {
        switch (e.bin_op) {
        case BinaryOp::And:
        case BinaryOp::Or:
        case BinaryOp::Xor: {
            Bits x = lower(*e.a);
            Bits y = lower(*e.b);
            const std::size_t w = std::max(x.size(), y.size());
            x = fit(std::move(x), w);
            y = fit(std::move(y), w);
            Bits out(w);
            for (std::size_t i = 0; i < w; ++i) {
                switch (e.bin_op) {
                case BinaryOp::And: out[i] = gb_.and_(x[i], y[i]); break;
                case BinaryOp::Or: out[i] = gb_.or_(x[i], y[i]); break;
                default: out[i] = gb_.xor_(x[i], y[i]); break;
                }
            }
            return out;
        }
        case BinaryOp::Add: {
            std::vector<const Expr*> term_exprs;
            flatten_add(e, term_exprs);
            std::vector<Bits> terms;
            terms.reserve(term_exprs.size());
            for (const Expr* t : term_exprs) terms.push_back(lower(*t));
            Bits sum = add_terms(std::move(terms));
            return fit(std::move(sum), expr_width(e, widths_));
        }
        case BinaryOp::Sub: {
            Bits x = lower(*e.a);
            Bits y = lower(*e.b);
            const std::size_t w0 = std::max(x.size(), y.size());
            x = fit(std::move(x), w0);
            y = fit(std::move(y), w0);
            for (auto& r : y) r = gb_.not_(r);
            return ripple_add(x, y, kConst1);
        }
        case BinaryOp::Mul:
            return lower_mul(e);
        case BinaryOp::Shl:
        case BinaryOp::Shr:
            return lower_shift(e);
        case BinaryOp::Eq:
        case BinaryOp::Ne:
        case BinaryOp::Lt:
        case BinaryOp::Gt:
        case BinaryOp::Le:
        case BinaryOp::Ge:
            return {lower_compare(e)};
        }
        return {};
    }

    static void flatten_add(const Expr& e, std::vector<const Expr*>& out) {
        if (e.kind == Expr::Kind::Binary && e.bin_op == BinaryOp::Add) {
            flatten_add(*e.a, out);
            flatten_add(*e.b, out);
            return;
        }
        out.push_back(&e);
    }

    /// Exact sum of the terms. One 1-bit term, when present, rides the
    /// carry-in of the first ripple stage, so `a + b + cin` costs the same
    /// 5 gates per bit as a bare full-adder chain.
    Bits add_terms(std::vector<Bits> terms) {
        assert(!terms.empty());
        BitRef cin = kConst0;
        for (std::size_t i = 0; i < terms.size(); ++i) {
            if (terms[i].size() == 1 && terms.size() > 1) {
                cin = terms[i][0];
                terms.erase(terms.begin() + std::ptrdiff_t(i));
                break;
            }
        }
        if (terms.size() == 1) {
            Bits zero(terms[0].size(), kConst0);
            return ripple_add(terms[0], zero, cin);
        }
        Bits acc = ripple_add(terms[0], terms[1], cin);
        for (std::size_t i = 2; i < terms.size(); ++i) acc = ripple_add(acc, terms[i], kConst0);
        return acc;
    }

    /// x + y + cin over max(|x|, |y|) + 1 bits (exact, carry kept).
    Bits ripple_add(Bits x, Bits y, BitRef cin) {
        const std::size_t w0 = std::max(x.size(), y.size());
        x = fit(std::move(x), w0);
        y = fit(std::move(y), w0);
        Bits out(w0 + 1);
        BitRef c = cin;
        for (std::size_t i = 0; i < w0; ++i) {
            const BitRef axb = gb_.xor_(x[i], y[i]);
            out[i] = gb_.xor_(axb, c);
            c = gb_.or_(gb_.and_(x[i], y[i]), gb_.and_(c, axb));
        }
        out[w0] = c;
        return out;
    }

    /// x + 1 at |x| bits (final carry dropped).
    Bits increment(Bits x) {
        Bits out(x.size());
        BitRef c = kConst1;
        for (std::size_t i = 0; i < x.size(); ++i) {
            out[i] = gb_.xor_(x[i], c);
            c = gb_.and_(x[i], c);
        }
        return out;
    }

    Bits lower_mul(const Expr& e) {
        Bits x = lower(*e.a);
        Bits y = lower(*e.b);
        const std::size_t m = x.size();
        auto row = [&](std::size_t j) {
            Bits r(m);
            for (std::size_t i = 0; i < m; ++i) r[i] = gb_.and_(x[i], y[j]);
            return r;
        };
        Bits acc = row(0);
        for (std::size_t j = 1; j < y.size(); ++j) {
            Bits hi(acc.begin() + std::ptrdiff_t(j), acc.end());
            Bits sum = ripple_add(std::move(hi), row(j), kConst0);
            acc.resize(j);
            acc.insert(acc.end(), sum.begin(), sum.end());
        }
        return fit(std::move(acc), m + y.size());
    }

    Bits lower_shift(const Expr& e) {
        Bits x = lower(*e.a);
        Bits amt = lower(*e.b);
        const bool left = e.bin_op == BinaryOp::Shl;
        const auto shifted_by = [&](const Bits& v, std::size_t k) {
            Bits out(v.size(), kConst0);
            const bool wipes = k >= 63 || (std::size_t(1) << k) >= v.size();
            if (wipes) return out;
            const std::size_t s = std::size_t(1) << k;
            if (left) {
                for (std::size_t i = s; i < v.size(); ++i) out[i] = v[i - s];
            } else {
                for (std::size_t i = 0; i + s < v.size(); ++i) out[i] = v[i + s];
            }
            return out;
        };
        Bits result = std::move(x);
        for (std::size_t k = 0; k < amt.size(); ++k) {
            if (amt[k] == kConst0) continue;
            Bits moved = shifted_by(result, k);
            if (amt[k] == kConst1) {
                result = std::move(moved);
            } else {
                result = mux_vec(amt[k], moved, result);
            }
        }
        return result;
    }

    /// Borrow chain of x - y; returns the final carry, i.e. (x >= y).
    BitRef carry_ge(Bits x, Bits y) {
        const std::size_t w0 = std::max(x.size(), y.size());
        x = fit(std::move(x), w0);
        y = fit(std::move(y), w0);
        BitRef c = kConst1;
        for (std::size_t i = 0; i < w0; ++i) {
            const BitRef ny = gb_.not_(y[i]);
            const BitRef axb = gb_.xor_(x[i], ny);
            c = gb_.or_(gb_.and_(x[i], ny), gb_.and_(c, axb));
        }
        return c;
    }

    BitRef lower_compare(const Expr& e) {
        Bits x = lower(*e.a);
        Bits y = lower(*e.b);
        switch (e.bin_op) {
        case BinaryOp::Ge: return carry_ge(std::move(x), std::move(y));
        case BinaryOp::Lt: return gb_.not_(carry_ge(std::move(x), std::move(y)));
        case BinaryOp::Le: return carry_ge(std::move(y), std::move(x));
        case BinaryOp::Gt: return gb_.not_(carry_ge(std::move(y), std::move(x)));
        case BinaryOp::Eq:
        case BinaryOp::Ne: {
            const std::size_t w0 = std::max(x.size(), y.size());
            x = fit(std::move(x), w0);
            y = fit(std::move(y), w0);
            Bits diffs(w0);
            for (std::size_t i = 0; i < w0; ++i) diffs[i] = gb_.xor_(x[i], y[i]);
            if (e.bin_op == BinaryOp::Ne) return or_tree(diffs);
            for (auto& d : diffs) d = gb_.not_(d);
            return and_tree(diffs);
        }
        default:
            break;
        }
        return kConst0;
    }

    Bits mux_vec(BitRef sel, const Bits& when_set, const Bits& when_clear) {
        assert(when_set.size() == when_clear.size());
        const BitRef nsel = gb_.not_(sel);
        Bits out(when_set.size());
        for (std::size_t i = 0; i < out.size(); ++i)
            out[i] = gb_.or_(gb_.and_(when_set[i], sel), gb_.and_(when_clear[i], nsel));
        return out;
    }

    BitRef or_tree(Bits v) { return reduce_tree(std::move(v), false); }
    BitRef and_tree(Bits v) { return reduce_tree(std::move(v), true); }

    BitRef reduce_tree(Bits v, bool use_and) {
        assert(!v.empty());
        while (v.size() > 1) {
            Bits next;
            next.reserve((v.size() + 1) / 2);
            for (std::size_t i = 0; i + 1 < v.size(); i += 2)
                next.push_back(use_and ? gb_.and_(v[i], v[i + 1]) : gb_.or_(v[i], v[i + 1]));
            if (v.size() % 2) next.push_back(v.back());
            v = std::move(next);
        }
        return v[0];
    }

    const MiniModule& m_;
    std::unordered_map<std::string, std::size_t> widths_;
    GateBuilder gb_;
    GateNetlist netlist_;
    std::unordered_map<std::string, Bits> env_;
};

} // namespace

Expected<GateNetlist, ElaborationError> elaborate(const MiniModule& m,
                                                  const ElaborateOptions& opts) {
    return Elaborator(m, opts).run();
}

} // namespace chipforge::verilog
