#pragma once

#include <algorithm>
#include <cstdint>
#include <vector>

#include "wps/hash.hpp"
#include "wps/ranksel.hpp"
#include "wps/retrieval.hpp"
#include "wps/trie.hpp"

namespace wps {

enum class MmphVariant : uint8_t { Baseline, LengthSplit };

// The derived key set P and its leaf marks: for each internal extent e, P
// gets e with trailing zeros stripped, e1, and the stripped same-length
// successor of e1 (unless e1 is all ones); position k is marked when some
// leaf name stripped of trailing zeros sorts at k.
struct PSet {
    std::vector<BitString> keys; // sorted, deduplicated
    std::vector<bool> marks;
};

inline PSet build_P(const CompactedTrie& trie) {
    std::vector<BitString> raw;
    for (uint32_t v = 0; v < trie.nodes().size(); ++v) {
        if (trie.nodes()[v].is_leaf) continue;
        BitString e = trie.extent(v);
        raw.push_back(strip_trailing_zeros(e));
        BitString e1 = e.with_appended(true);
        raw.push_back(e1);
        if (!e1.is_all_ones())
            raw.push_back(strip_trailing_zeros(successor_same_length(e1)));
    }
    std::sort(raw.begin(), raw.end());
    raw.erase(std::unique(raw.begin(), raw.end()), raw.end());
    PSet p;
    p.keys = std::move(raw);
    p.marks.assign(p.keys.size(), false);
    for (uint32_t v = 0; v < trie.nodes().size(); ++v) {
        if (!trie.nodes()[v].is_leaf) continue;
        BitString stripped = strip_trailing_zeros(trie.name(v));
        auto it = std::lower_bound(p.keys.begin(), p.keys.end(), stripped);
        if (it == p.keys.end() || !(*it == stripped))
            throw BuildError("build_P: stripped leaf name missing from P");
        p.marks[static_cast<size_t>(it - p.keys.begin())] = true;
    }
    return p;
}

// Monotone minimal perfect hash: key -> lexicographic rank, exact on the
// build keys. Baseline stores explicit ranks; LengthSplit splits keys at
// length avg_len * ceil(log2 n): short keys go through a select-translated
// baseline over the short subset, long keys get explicit ranks.
class MonotoneHash {
public:
    MonotoneHash() = default;

    static MonotoneHash build(const std::vector<BitString>& sorted_keys,
                              MmphVariant variant, uint64_t fp_seed, uint64_t seed) {
        MonotoneHash m;
        m.variant_ = variant;
        m.n_ = sorted_keys.size();
        if (m.n_ <= 1) return m; // single key hashes to the constant 0
        std::vector<uint64_t> fps(m.n_);
        uint64_t total_len = 0;
        for (size_t i = 0; i < m.n_; ++i) {
            fps[i] = fingerprint(sorted_keys[i], fp_seed);
            total_len += sorted_keys[i].size();
        }
        unsigned rank_width = static_cast<unsigned>(bitlength(m.n_ - 1));
        if (variant == MmphVariant::Baseline) {
            std::vector<uint64_t> ranks(m.n_);
            for (size_t i = 0; i < m.n_; ++i) ranks[i] = i;
            m.ranks_ = StaticFunction::build(fps, ranks, rank_width,
                                             splitmix64(seed ^ 0x9fb21c651e98df25ull));
            return m;
        }
        // len is short iff len * n < total_len * ceil(log2 n).
        m.threshold_num_ = total_len * bitlength(m.n_ - 1);
        std::vector<bool> short_marks(m.n_);
        std::vector<uint64_t> short_fps, short_ranks, long_fps, long_ranks;
        for (size_t i = 0; i < m.n_; ++i) {
            short_marks[i] = sorted_keys[i].size() * m.n_ < m.threshold_num_;
            if (short_marks[i]) {
                short_ranks.push_back(short_fps.size());
                short_fps.push_back(fps[i]);
            } else {
                long_fps.push_back(fps[i]);
                long_ranks.push_back(i);
            }
        }
        m.short_marks_ = RankSelectBits::from_bools(short_marks);
        if (!short_fps.empty())
            m.short_ranks_ = StaticFunction::build(
                short_fps, short_ranks,
                std::max(1u, static_cast<unsigned>(bitlength(short_fps.size() - 1))),
                splitmix64(seed ^ 0x27d4eb2f165667c5ull));
        if (!long_fps.empty())
            m.ranks_ = StaticFunction::build(long_fps, long_ranks, rank_width,
                                             splitmix64(seed ^ 0x9fb21c651e98df25ull));
        return m;
    }

    // Rank of a key given its fingerprint and bit length; garbage off keys.
    uint64_t eval(uint64_t fp, uint64_t len) const {
        if (n_ <= 1) return 0;
        if (variant_ == MmphVariant::Baseline) return clamp(ranks_.get(fp));
        if (len * n_ < threshold_num_ && short_marks_.ones() > 0) {
            uint64_t r = short_ranks_.get(fp);
            if (r >= short_marks_.ones()) r = short_marks_.ones() - 1;
            return short_marks_.select(r);
        }
        return clamp(ranks_.get(fp));
    }

    MmphVariant variant() const { return variant_; }
    uint64_t size() const { return n_; }
    uint64_t size_in_bits() const {
        return ranks_.size_in_bits() + short_ranks_.size_in_bits() +
               (variant_ == MmphVariant::LengthSplit ? short_marks_.size_in_bits() : 0);
    }

    void save(ByteWriter& w) const {
        w.u8(static_cast<uint8_t>(variant_));
        w.u64(n_);
        w.u64(threshold_num_);
        ranks_.save(w);
        short_ranks_.save(w);
        short_marks_.save(w);
    }

    static MonotoneHash load(ByteReader& r) {
        MonotoneHash m;
        m.variant_ = static_cast<MmphVariant>(r.u8());
        m.n_ = r.u64();
        m.threshold_num_ = r.u64();
        m.ranks_ = StaticFunction::load(r);
        m.short_ranks_ = StaticFunction::load(r);
        m.short_marks_ = RankSelectBits::load(r);
        return m;
    }

private:
    uint64_t clamp(uint64_t r) const { return r < n_ ? r : n_ - 1; }

    MmphVariant variant_ = MmphVariant::Baseline;
    uint64_t n_ = 0;
    uint64_t threshold_num_ = 0;
    StaticFunction ranks_;       // Baseline ranks, or long-key ranks in LengthSplit
    StaticFunction short_ranks_; // LengthSplit only: rank within the short subset
    RankSelectBits short_marks_; // LengthSplit only
};

struct RangeLocatorSizeReport {
    uint64_t mmph_bits = 0;
    uint64_t b_bits = 0;
    MmphVariant variant = MmphVariant::Baseline;
};

// From a node name to the rank interval of the leaves below it.
class RangeLocator {
public:
    RangeLocator() = default;

    static RangeLocator build(const CompactedTrie& trie, MmphVariant variant,
                              uint64_t fp_seed, uint64_t seed) {
        if (trie.n() < 2)
            throw InputError("RangeLocator: needs n >= 2 (n = 1 is a caller shortcut)");
        RangeLocator rl;
        rl.n_ = trie.n();
        rl.fp_seed_ = fp_seed;
        PSet p = build_P(trie);
        rl.h_ = MonotoneHash::build(p.keys, variant, fp_seed, seed);
        rl.b_ = RankSelectBits::from_bools(p.marks);
        return rl;
    }

    // The interval [i..j) of leaf ranks below the node named x; unspecified
    // (but in-range and crash-free) when x names no node.
    std::pair<uint64_t, uint64_t> locate(const BitString& x) const {
        uint64_t i = 0, j = n_;
        if (!x.empty()) {
            BitString left = strip_trailing_zeros(x);
            i = rank_b(left);
            if (!x.is_all_ones())
                j = rank_b(strip_trailing_zeros(successor_same_length(x)));
        }
        if (i > j) i = j;
        return {i, j};
    }

    uint64_t n() const { return n_; }

    RangeLocatorSizeReport size_report() const {
        return {h_.size_in_bits(), b_.size_in_bits(), h_.variant()};
    }
    uint64_t size_in_bits() const { return h_.size_in_bits() + b_.size_in_bits(); }

    void save(ByteWriter& w) const {
        w.u64(n_);
        w.u64(fp_seed_);
        h_.save(w);
        b_.save(w);
    }

    static RangeLocator load(ByteReader& r) {
        RangeLocator rl;
        rl.n_ = r.u64();
        rl.fp_seed_ = r.u64();
        rl.h_ = MonotoneHash::load(r);
        rl.b_ = RankSelectBits::load(r);
        return rl;
    }

private:
    uint64_t rank_b(const BitString& key) const {
        uint64_t pos = h_.eval(fingerprint(key, fp_seed_), key.size());
        if (pos > b_.size()) pos = b_.size();
        return b_.rank(pos);
    }

    uint64_t n_ = 0;
    uint64_t fp_seed_ = 0;
    MonotoneHash h_;
    RankSelectBits b_;
};

} // namespace wps
