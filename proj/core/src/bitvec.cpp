// SPDX-License-Identifier: Apache-2.0
#include "chipforge/bitvec.hpp"

#include <algorithm>

namespace chipforge {

namespace {

// Adds y*2^0 into x in place over x's words; returns the final carry.
std::uint64_t add_words(std::vector<std::uint64_t>& x, const std::vector<std::uint64_t>& y) {
    std::uint64_t carry = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const std::uint64_t yi = i < y.size() ? y[i] : 0;
        const std::uint64_t s1 = x[i] + yi;
        const std::uint64_t c1 = s1 < x[i] ? 1 : 0;
        const std::uint64_t s2 = s1 + carry;
        const std::uint64_t c2 = s2 < s1 ? 1 : 0;
        x[i] = s2;
        carry = c1 + c2;
    }
    return carry;
}

} // namespace

void BitVec::mask_top() {
    const std::size_t rem = width_ & 63;
    if (rem) words_.back() &= (std::uint64_t(1) << rem) - 1;
}

BitVec BitVec::from_decimal(const std::string& digits) {
    // value = value * 10 + digit, on a growing word array.
    std::vector<std::uint64_t> acc(1, 0);
    for (char c : digits) {
        assert(c >= '0' && c <= '9');
        std::uint64_t carry = std::uint64_t(c - '0');
        for (auto& w : acc) {
            const unsigned __int128 t = (unsigned __int128)w * 10 + carry;
            w = (std::uint64_t)t;
            carry = (std::uint64_t)(t >> 64);
        }
        if (carry) acc.push_back(carry);
    }
    // Minimum width >= 1.
    std::size_t bits = 0;
    for (std::size_t i = acc.size(); i-- > 0;) {
        if (acc[i]) {
            bits = i * 64 + (64 - std::size_t(__builtin_clzll(acc[i])));
            break;
        }
    }
    if (bits == 0) bits = 1;
    BitVec out(bits);
    out.words_.assign(word_count(bits), 0);
    for (std::size_t i = 0; i < out.words_.size(); ++i) out.words_[i] = i < acc.size() ? acc[i] : 0;
    out.mask_top();
    return out;
}

std::string BitVec::to_hex() const {
    static const char* hexd = "0123456789abcdef";
    std::string out;
    const std::size_t nibbles = (width_ + 3) / 4;
    for (std::size_t i = nibbles; i-- > 0;) {
        unsigned v = 0;
        for (std::size_t b = 0; b < 4; ++b) {
            const std::size_t bit_i = i * 4 + b;
            if (bit_i < width_ && bit(bit_i)) v |= 1u << b;
        }
        out.push_back(hexd[v]);
    }
    return out;
}

std::string BitVec::to_binary() const {
    std::string out;
    for (std::size_t i = width_; i-- > 0;) out.push_back(bit(i) ? '1' : '0');
    return out;
}

BitVec BitVec::resized(std::size_t new_width) const {
    BitVec out(new_width);
    for (std::size_t i = 0; i < out.words_.size(); ++i)
        out.words_[i] = i < words_.size() ? words_[i] : 0;
    out.mask_top();
    return out;
}

BitVec BitVec::add_with_carry(const BitVec& x, const BitVec& y, bool cin) {
    const std::size_t w = std::max(x.width_, y.width_) + 1;
    BitVec out = x.resized(w);
    BitVec ye = y.resized(w);
    add_words(out.words_, ye.words_);
    if (cin) {
        std::vector<std::uint64_t> one(out.words_.size(), 0);
        one[0] = 1;
        add_words(out.words_, one);
    }
    out.mask_top();
    return out;
}

BitVec BitVec::add(const BitVec& x, const BitVec& y) { return add_with_carry(x, y, false); }

BitVec BitVec::sub(const BitVec& x, const BitVec& y) {
    const std::size_t w0 = std::max(x.width_, y.width_);
    // x + ~y + 1 over w0 bits, keeping the carry as bit w0.
    BitVec out = x.resized(w0 + 1);
    BitVec yc = bit_not(y.resized(w0)).resized(w0 + 1);
    add_words(out.words_, yc.words_);
    std::vector<std::uint64_t> one(out.words_.size(), 0);
    one[0] = 1;
    add_words(out.words_, one);
    out.mask_top();
    return out;
}

BitVec BitVec::mul(const BitVec& x, const BitVec& y) {
    const std::size_t w = x.width_ + y.width_;
    BitVec out(w);
    std::vector<std::uint64_t> acc(out.words_.size(), 0);
    for (std::size_t i = 0; i < x.words_.size(); ++i) {
        std::uint64_t carry = 0;
        for (std::size_t j = 0; j < y.words_.size() && i + j < acc.size(); ++j) {
            const unsigned __int128 t =
                (unsigned __int128)x.words_[i] * y.words_[j] + acc[i + j] + carry;
            acc[i + j] = (std::uint64_t)t;
            carry = (std::uint64_t)(t >> 64);
        }
        if (i + y.words_.size() < acc.size()) acc[i + y.words_.size()] += carry;
    }
    out.words_ = std::move(acc);
    out.mask_top();
    return out;
}

BitVec BitVec::negate(const BitVec& x) {
    BitVec out = bit_not(x);
    std::vector<std::uint64_t> one(out.words_.size(), 0);
    one[0] = 1;
    add_words(out.words_, one);
    out.mask_top();
    return out;
}

BitVec BitVec::shl(const BitVec& x, std::uint64_t amount) {
    BitVec out(x.width_);
    if (amount >= x.width_) return out;
    for (std::size_t i = x.width_; i-- > amount;)
        out.set_bit(i, x.bit(i - amount));
    return out;
}

BitVec BitVec::shr(const BitVec& x, std::uint64_t amount) {
    BitVec out(x.width_);
    if (amount >= x.width_) return out;
    for (std::size_t i = 0; i + amount < x.width_; ++i) out.set_bit(i, x.bit(i + amount));
    return out;
}

BitVec BitVec::bit_and(const BitVec& x, const BitVec& y) {
    const std::size_t w = std::max(x.width_, y.width_);
    BitVec a = x.resized(w), b = y.resized(w);
    for (std::size_t i = 0; i < a.words_.size(); ++i) a.words_[i] &= b.words_[i];
    return a;
}

BitVec BitVec::bit_or(const BitVec& x, const BitVec& y) {
    const std::size_t w = std::max(x.width_, y.width_);
    BitVec a = x.resized(w), b = y.resized(w);
    for (std::size_t i = 0; i < a.words_.size(); ++i) a.words_[i] |= b.words_[i];
    return a;
}

BitVec BitVec::bit_xor(const BitVec& x, const BitVec& y) {
    const std::size_t w = std::max(x.width_, y.width_);
    BitVec a = x.resized(w), b = y.resized(w);
    for (std::size_t i = 0; i < a.words_.size(); ++i) a.words_[i] ^= b.words_[i];
    return a;
}

BitVec BitVec::bit_not(const BitVec& x) {
    BitVec a = x;
    for (auto& w : a.words_) w = ~w;
    a.mask_top();
    return a;
}

bool BitVec::eq(const BitVec& x, const BitVec& y) {
    const std::size_t w = std::max(x.width_, y.width_);
    return x.resized(w).words_ == y.resized(w).words_;
}

bool BitVec::lt(const BitVec& x, const BitVec& y) {
    const std::size_t w = std::max(x.width_, y.width_);
    BitVec a = x.resized(w), b = y.resized(w);
    for (std::size_t i = a.words_.size(); i-- > 0;) {
        if (a.words_[i] != b.words_[i]) return a.words_[i] < b.words_[i];
    }
    return false;
}

BitVec BitVec::concat(const BitVec& hi, const BitVec& lo) {
    BitVec out(hi.width_ + lo.width_);
    for (std::size_t i = 0; i < lo.width_; ++i) out.set_bit(i, lo.bit(i));
    for (std::size_t i = 0; i < hi.width_; ++i) out.set_bit(lo.width_ + i, hi.bit(i));
    return out;
}

} // namespace chipforge
