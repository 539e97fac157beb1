#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "wps/bitstring.hpp"

namespace wps {

inline uint64_t splitmix64(uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

// Incremental prefix hasher: one preprocessing pass over the string, then a
// constant-time seeded hash of any prefix. Polynomial over GF(2^61 - 1) on
// 64-bit chunks, finalized with the prefix length so that "0" and "00" hash
// differently.
class PrefixHasher {
public:
    PrefixHasher(const BitString& x, uint64_t seed)
        : len_(x.size()), words_(x.words()) {
        mult_ = splitmix64(seed) % (kPrime - 512) + 256;
        init_ = splitmix64(seed ^ 0x5851f42d4c957f2dull) % kPrime;
        fin_ = splitmix64(seed ^ 0x14057b7ef767814full);
        acc_.resize(words_.size() + 1);
        acc_[0] = init_;
        for (size_t q = 0; q < words_.size(); ++q)
            acc_[q + 1] = add(mul(acc_[q], mult_), fold(words_[q]));
    }

    uint64_t base_length() const { return len_; }

    // Hash of the first k bits; equals the same computation on a fresh hasher
    // built over the truncated string.
    uint64_t hash_prefix(uint64_t k) const {
        if (k > len_) throw std::out_of_range("PrefixHasher::hash_prefix: k > length");
        uint64_t q = k >> 6, r = k & 63;
        uint64_t h = acc_[q];
        if (r) {
            uint64_t partial = words_[q] & (~uint64_t{0} << (64 - r));
            h = add(mul(h, mult_), fold(partial));
        }
        return splitmix64(h ^ (k * 0x2545f4914f6cdd1dull) ^ fin_);
    }

private:
    static constexpr uint64_t kPrime = (uint64_t{1} << 61) - 1;

    static uint64_t fold(uint64_t w) {
        w = (w >> 61) + (w & kPrime);
        return w >= kPrime ? w - kPrime : w;
    }

    static uint64_t add(uint64_t a, uint64_t b) {
        uint64_t s = a + b;
        return s >= kPrime ? s - kPrime : s;
    }

    static uint64_t mul(uint64_t a, uint64_t b) {
        unsigned __int128 p = static_cast<unsigned __int128>(a) * b;
        uint64_t lo = static_cast<uint64_t>(p & kPrime);
        uint64_t hi = static_cast<uint64_t>(p >> 61);
        uint64_t s = lo + hi;
        return s >= kPrime ? s - kPrime : s;
    }

    uint64_t len_;
    std::vector<uint64_t> words_;
    uint64_t mult_, init_, fin_;
    std::vector<uint64_t> acc_; // acc_[q] = running hash of the first q words
};

// Hash of the whole string; shorthand used by builders.
inline uint64_t fingerprint(const BitString& x, uint64_t seed) {
    return PrefixHasher(x, seed).hash_prefix(x.size());
}

} // namespace wps
