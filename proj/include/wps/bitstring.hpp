#pragma once

#include <bit>
#include <cassert>
#include <compare>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "wps/errors.hpp"

namespace wps {

// ceil(log2(n+1)), i.e. the number of bits needed to write n in binary.
inline uint64_t bitlength(uint64_t n) { return std::bit_width(n); }

// The unique number in (x..y] whose binary representation has the most
// trailing zeros; 0 for the empty interval x == y.
inline uint64_t two_fattest(uint64_t x, uint64_t y) {
    assert(x <= y);
    if (x == y) return 0;
    unsigned flog = static_cast<unsigned>(std::bit_width(x ^ y)) - 1;
    return y & (~uint64_t{0} << flog);
}

// Immutable packed bit sequence. Bit 0 of the string is the most significant
// bit of word 0. Unused trailing bits of the last word are kept zero, so
// equality is plain word-wise comparison.
class BitString {
public:
    BitString() = default;

    static BitString from_text(std::string_view text) {
        BitString s;
        s.len_ = text.size();
        s.words_.assign(word_count(text.size()), 0);
        for (size_t i = 0; i < text.size(); ++i) {
            char c = text[i];
            if (c == '1')
                s.words_[i >> 6] |= uint64_t{1} << (63 - (i & 63));
            else if (c != '0')
                throw InputError("BitString::from_text: character is not '0' or '1'");
        }
        return s;
    }

    static BitString from_bools(const std::vector<bool>& bits) {
        BitString s;
        s.len_ = bits.size();
        s.words_.assign(word_count(bits.size()), 0);
        for (size_t i = 0; i < bits.size(); ++i)
            if (bits[i]) s.words_[i >> 6] |= uint64_t{1} << (63 - (i & 63));
        return s;
    }

    // Each byte contributes 8 bits, most significant bit first.
    static BitString from_bytes(std::string_view bytes) {
        BitString s;
        s.len_ = bytes.size() * 8;
        s.words_.assign(word_count(s.len_), 0);
        for (size_t i = 0; i < bytes.size(); ++i) {
            uint64_t b = static_cast<uint8_t>(bytes[i]);
            s.words_[i >> 3] |= b << (56 - 8 * (i & 7));
        }
        return s;
    }

    static BitString from_words(std::vector<uint64_t> words, size_t len_bits) {
        BitString s;
        s.len_ = len_bits;
        s.words_ = std::move(words);
        s.words_.resize(word_count(len_bits), 0);
        s.mask_tail();
        return s;
    }

    size_t size() const { return len_; }
    bool empty() const { return len_ == 0; }

    bool bit(size_t i) const {
        assert(i < len_);
        return (words_[i >> 6] >> (63 - (i & 63))) & 1;
    }

    const std::vector<uint64_t>& words() const { return words_; }

    BitString prefix(size_t k) const {
        assert(k <= len_);
        BitString s;
        s.len_ = k;
        s.words_.assign(words_.begin(), words_.begin() + word_count(k));
        s.mask_tail();
        return s;
    }

    BitString substr(size_t pos, size_t len) const {
        assert(pos + len <= len_);
        BitString s;
        s.len_ = len;
        s.words_.assign(word_count(len), 0);
        size_t q = pos >> 6, r = pos & 63;
        for (size_t k = 0; k < s.words_.size(); ++k) {
            uint64_t w = words_[q + k] << r;
            if (r && q + k + 1 < words_.size()) w |= words_[q + k + 1] >> (64 - r);
            s.words_[k] = w;
        }
        s.mask_tail();
        return s;
    }

    BitString with_appended(bool b) const {
        BitString s;
        s.len_ = len_ + 1;
        s.words_ = words_;
        s.words_.resize(word_count(s.len_), 0);
        if (b) s.words_[len_ >> 6] |= uint64_t{1} << (63 - (len_ & 63));
        return s;
    }

    bool is_all_ones() const {
        size_t full = len_ >> 6, r = len_ & 63;
        for (size_t i = 0; i < full; ++i)
            if (words_[i] != ~uint64_t{0}) return false;
        if (r && words_[full] != (~uint64_t{0} << (64 - r))) return false;
        return true;
    }

    bool is_all_zeros() const {
        for (uint64_t w : words_)
            if (w) return false;
        return true;
    }

    // True when *this is a prefix of other.
    bool is_prefix_of(const BitString& other) const {
        if (len_ > other.len_) return false;
        size_t full = len_ >> 6, r = len_ & 63;
        for (size_t i = 0; i < full; ++i)
            if (words_[i] != other.words_[i]) return false;
        if (r && words_[full] != (other.words_[full] & (~uint64_t{0} << (64 - r))))
            return false;
        return true;
    }

    friend bool operator==(const BitString& a, const BitString& b) {
        return a.len_ == b.len_ && a.words_ == b.words_;
    }

    // Lexicographic order on bit sequences, shorter-is-smaller on equal
    // prefixes. Comparing zero-padded words realizes exactly that.
    friend std::strong_ordering operator<=>(const BitString& a, const BitString& b) {
        size_t common = std::min(a.words_.size(), b.words_.size());
        for (size_t i = 0; i < common; ++i) {
            if (a.words_[i] != b.words_[i])
                return a.words_[i] < b.words_[i] ? std::strong_ordering::less
                                                 : std::strong_ordering::greater;
        }
        const auto& longer = a.words_.size() > b.words_.size() ? a.words_ : b.words_;
        for (size_t i = common; i < longer.size(); ++i)
            if (longer[i])
                return &longer == &a.words_ ? std::strong_ordering::greater
                                            : std::strong_ordering::less;
        return a.len_ <=> b.len_;
    }

    std::string to_text() const {
        std::string out(len_, '0');
        for (size_t i = 0; i < len_; ++i)
            if (bit(i)) out[i] = '1';
        return out;
    }

    std::string to_bytes() const {
        assert(len_ % 8 == 0);
        std::string out(len_ / 8, '\0');
        for (size_t i = 0; i < out.size(); ++i)
            out[i] = static_cast<char>((words_[i >> 3] >> (56 - 8 * (i & 7))) & 0xff);
        return out;
    }

private:
    static size_t word_count(size_t bits) { return (bits + 63) / 64; }

    void mask_tail() {
        size_t r = len_ & 63;
        if (r && !words_.empty()) words_.back() &= ~uint64_t{0} << (64 - r);
    }

    size_t len_ = 0;
    std::vector<uint64_t> words_;

    friend class BitBuilder;
};

// Length in bits of the longest common prefix.
inline size_t lcp(const BitString& a, const BitString& b) {
    size_t minlen = std::min(a.size(), b.size());
    size_t common_words = (minlen + 63) / 64;
    for (size_t i = 0; i < common_words; ++i) {
        uint64_t x = a.words()[i] ^ b.words()[i];
        if (x) {
            size_t d = i * 64 + static_cast<size_t>(std::countl_zero(x));
            return std::min(d, minlen);
        }
    }
    return minlen;
}

// Longest prefix ending in 1, or the empty string for all-zero input (x^<-).
inline BitString strip_trailing_zeros(const BitString& x) {
    const auto& w = x.words();
    for (size_t i = w.size(); i-- > 0;) {
        if (w[i]) {
            size_t last_one = i * 64 + 63 - static_cast<size_t>(std::countr_zero(w[i]));
            return x.prefix(last_one + 1);
        }
    }
    return BitString{};
}

// The length-|x| lexicographic successor of x (numerically x + 1).
inline BitString successor_same_length(const BitString& x) {
    if (x.empty()) throw InputError("successor_same_length: empty input");
    if (x.is_all_ones()) throw InputError("successor_same_length: input is all ones");
    std::vector<uint64_t> w = x.words();
    size_t len = x.size(), r = len & 63;
    uint64_t valid_last = r ? (~uint64_t{0} << (64 - r)) : ~uint64_t{0};
    // Find the last 0 bit: the least significant set bit of ~word within the
    // valid range, scanning words from the end.
    for (size_t i = w.size(); i-- > 0;) {
        uint64_t mask = (i + 1 == w.size()) ? valid_last : ~uint64_t{0};
        uint64_t zeros = ~w[i] & mask;
        if (zeros) {
            size_t z = i * 64 + 63 - static_cast<size_t>(std::countr_zero(zeros));
            w[i] |= uint64_t{1} << (63 - (z & 63));
            // Clear everything after z.
            w[i] &= ~uint64_t{0} << (63 - (z & 63));
            for (size_t j = i + 1; j < w.size(); ++j) w[j] = 0;
            return BitString::from_words(std::move(w), len);
        }
    }
    throw InputError("successor_same_length: unreachable"); // all-ones caught above
}

// Mutable accumulator for building a BitString incrementally.
class BitBuilder {
public:
    void append(bool b) {
        if ((len_ & 63) == 0) words_.push_back(0);
        if (b) words_.back() |= uint64_t{1} << (63 - (len_ & 63));
        ++len_;
    }

    void append(const BitString& s) {
        for (size_t i = 0; i < s.size(); ++i) append(s.bit(i)); // TODO: word-at-a-time append
    }

    size_t size() const { return len_; }

    BitString take() {
        BitString s;
        s.len_ = len_;
        s.words_ = std::move(words_);
        words_.clear();
        len_ = 0;
        return s;
    }

private:
    size_t len_ = 0;
    std::vector<uint64_t> words_;
};

} // namespace wps
