// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cassert>
#include <cstdint>
#include <string>
#include <vector>

namespace chipforge {

/// Fixed-width unsigned bit vector with schoolbook multi-word arithmetic.
/// Widths may exceed 64 bits (concatenations and full-width products do).
/// All operations are unsigned; results carry the width stated per method.
class BitVec {
public:
    BitVec() : width_(1), words_(1, 0) {}
    explicit BitVec(std::size_t width) : width_(width ? width : 1), words_(word_count(width_), 0) {}
    BitVec(std::size_t width, std::uint64_t value) : BitVec(width) {
        words_[0] = value;
        mask_top();
    }

    /// Parse an unsigned decimal string of arbitrary length; width is the
    /// minimum number of bits needed (at least 1).
    static BitVec from_decimal(const std::string& digits);

    std::size_t width() const { return width_; }

    bool bit(std::size_t i) const {
        assert(i < width_);
        return (words_[i >> 6] >> (i & 63)) & 1u;
    }
    void set_bit(std::size_t i, bool v) {
        assert(i < width_);
        const std::uint64_t m = std::uint64_t(1) << (i & 63);
        if (v)
            words_[i >> 6] |= m;
        else
            words_[i >> 6] &= ~m;
    }

    bool is_zero() const {
        for (auto w : words_)
            if (w) return false;
        return true;
    }

    /// Value as uint64_t; asserts that the value fits.
    std::uint64_t to_uint64() const {
        for (std::size_t i = 1; i < words_.size(); ++i) assert(words_[i] == 0);
        return words_[0];
    }

    std::string to_hex() const;
    std::string to_binary() const;

    /// Zero-extends or truncates to the given width.
    BitVec resized(std::size_t new_width) const;

    /// x + y at width max(wx, wy) + 1 (carry kept).
    static BitVec add(const BitVec& x, const BitVec& y);
    /// x + y + cin at width max(wx, wy) + 1.
    static BitVec add_with_carry(const BitVec& x, const BitVec& y, bool cin);
    /// x - y at width max(wx, wy) + 1; value is x - y + 2^max(wx, wy).
    /// The top bit is 1 iff x >= y (no borrow).
    static BitVec sub(const BitVec& x, const BitVec& y);
    /// Full product at width wx + wy.
    static BitVec mul(const BitVec& x, const BitVec& y);
    /// Two's complement negate, width preserved.
    static BitVec negate(const BitVec& x);

    /// Logical shifts; result keeps the width of x.
    static BitVec shl(const BitVec& x, std::uint64_t amount);
    static BitVec shr(const BitVec& x, std::uint64_t amount);

    /// Bitwise ops at width max(wx, wy), zero-extending the narrower side.
    static BitVec bit_and(const BitVec& x, const BitVec& y);
    static BitVec bit_or(const BitVec& x, const BitVec& y);
    static BitVec bit_xor(const BitVec& x, const BitVec& y);
    static BitVec bit_not(const BitVec& x);

    /// Unsigned comparisons after zero-extension to a common width.
    static bool eq(const BitVec& x, const BitVec& y);
    static bool lt(const BitVec& x, const BitVec& y);

    /// {hi, lo}: hi occupies the most significant bits.
    static BitVec concat(const BitVec& hi, const BitVec& lo);

    bool operator==(const BitVec& other) const {
        return width_ == other.width_ && words_ == other.words_;
    }

private:
    static std::size_t word_count(std::size_t bits) { return (bits + 63) / 64; }
    void mask_top();

    std::size_t width_;
    std::vector<std::uint64_t> words_;
};

} // namespace chipforge
