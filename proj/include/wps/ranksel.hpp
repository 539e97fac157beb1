#pragma once

#include <bit>
#include <cassert>
#include <cstdint>
#include <vector>

#include "wps/bitstring.hpp"
#include "wps/serial.hpp"

namespace wps {

// Static bitvector with rank/select support. Bits are MSB-first within each
// word, matching BitString. Rank directory: absolute counts every 8 words
// (512 bits), plus popcount over at most 8 words per query. Select: sampled
// one positions, then a directory + word scan.
class RankSelectBits {
public:
    RankSelectBits() = default;

    RankSelectBits(std::vector<uint64_t> words, uint64_t nbits)
        : words_(std::move(words)), n_(nbits) {
        words_.resize((nbits + 63) / 64, 0);
        uint64_t r = nbits & 63;
        if (r && !words_.empty()) words_.back() &= ~uint64_t{0} << (64 - r);
        build_directory();
    }

    static RankSelectBits from_bools(const std::vector<bool>& bits) {
        std::vector<uint64_t> w((bits.size() + 63) / 64, 0);
        for (size_t i = 0; i < bits.size(); ++i)
            if (bits[i]) w[i >> 6] |= uint64_t{1} << (63 - (i & 63));
        return RankSelectBits(std::move(w), bits.size());
    }

    static RankSelectBits from_bitstring(const BitString& s) {
        return RankSelectBits(s.words(), s.size());
    }

    uint64_t size() const { return n_; }
    uint64_t ones() const { return ones_; }

    bool bit(uint64_t i) const {
        assert(i < n_);
        return (words_[i >> 6] >> (63 - (i & 63))) & 1;
    }

    // Number of ones in [0..p).
    uint64_t rank(uint64_t p) const {
        if (p > n_) throw InputError("RankSelectBits::rank: position out of range");
        uint64_t q = p >> 6, r = p & 63;
        uint64_t acc = super_[q >> 3];
        for (uint64_t w = (q >> 3) << 3; w < q; ++w)
            acc += static_cast<uint64_t>(std::popcount(words_[w]));
        if (r) acc += static_cast<uint64_t>(std::popcount(words_[q] & (~uint64_t{0} << (64 - r))));
        return acc;
    }

    // Position of the r-th one, r in [0..ones()).
    uint64_t select(uint64_t r) const {
        if (r >= ones_) throw InputError("RankSelectBits::select: rank out of range");
        // Start from the sampled superblock, then scan.
        uint64_t sb = sample_.empty() ? 0 : sample_[r >> kSampleShift];
        while (sb + 1 < super_.size() && super_[sb + 1] <= r) ++sb;
        uint64_t acc = super_[sb];
        uint64_t w = sb << 3;
        for (;; ++w) {
            uint64_t pc = static_cast<uint64_t>(std::popcount(words_[w]));
            if (acc + pc > r) break;
            acc += pc;
        }
        uint64_t word = words_[w];
        uint64_t need = r - acc; // index of the wanted one inside `word`
        for (uint64_t b = 0;; ++b) {
            if ((word >> (63 - b)) & 1) {
                if (need == 0) return (w << 6) + b;
                --need;
            }
        }
    }

    uint64_t payload_bits() const { return n_; }
    uint64_t overhead_bits() const {
        return 64 * (super_.size() + sample_.size());
    }
    uint64_t size_in_bits() const { return payload_bits() + overhead_bits(); }

    const std::vector<uint64_t>& words() const { return words_; }

    void save(ByteWriter& w) const {
        w.u64(n_);
        w.u64vec(words_);
    }

    static RankSelectBits load(ByteReader& r) {
        uint64_t n = r.u64();
        auto words = r.u64vec();
        if (words.size() != (n + 63) / 64)
            throw ContainerError(ContainerError::Tag::SectionCorrupt,
                                 "RankSelectBits size mismatch");
        return RankSelectBits(std::move(words), n);
    }

private:
    static constexpr unsigned kSampleShift = 9; // sample every 512 ones

    void build_directory() {
        size_t nsuper = words_.size() / 8 + 1;
        super_.assign(nsuper, 0);
        uint64_t acc = 0;
        for (size_t w = 0; w < words_.size(); ++w) {
            if (w % 8 == 0) super_[w / 8] = acc;
            acc += static_cast<uint64_t>(std::popcount(words_[w]));
        }
        if (words_.size() % 8 == 0) super_[words_.size() / 8] = acc;
        ones_ = acc;
        // Superblock index of every 512th one (a lower bound; select() walks
        // forward from it).
        sample_.clear();
        uint64_t next = 0;
        for (size_t sb = 0; sb < super_.size() && next < ones_; ++sb) {
            uint64_t hi = (sb + 1 < super_.size()) ? super_[sb + 1] : ones_;
            while (next < hi) {
                sample_.push_back(sb);
                next += uint64_t{1} << kSampleShift;
            }
        }
    }

    std::vector<uint64_t> words_;
    uint64_t n_ = 0;
    uint64_t ones_ = 0;
    std::vector<uint64_t> super_;  // absolute rank at each 8-word boundary
    std::vector<uint64_t> sample_; // superblock of every 512th one
};

} // namespace wps
