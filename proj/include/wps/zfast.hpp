#pragma once

#include <cstdint>
#include <vector>

#include "wps/hash.hpp"
#include "wps/retrieval.hpp"
#include "wps/trie.hpp"

namespace wps {

inline constexpr uint64_t kInfinity = ~uint64_t{0};

// Per-query trace for the bound/invariant checks: one entry per loop pass,
// recorded before the pass runs.
struct ZfastStep {
    int i;
    uint64_t lo;
    uint64_t hi;
};

struct ZfastInstr {
    uint64_t iterations = 0;
    std::vector<ZfastStep> steps;
};

struct ZfastSizeReport {
    uint64_t relative_dict_bits = 0;
    uint64_t delta_payload_bits = 0;
    uint64_t delta_overhead_bits = 0;
};

// Hollow z-fast prefix trie: map T from handles to extent lengths, answering
// infinity on leaf handles and pseudohandles. Realized as a relative
// dictionary (internal handles vs. everything else) plus a compressed
// function storing |e| - |h| per internal handle.
class HollowZFastPrefixTrie {
public:
    HollowZFastPrefixTrie() = default;

    static HollowZFastPrefixTrie build(const CompactedTrie& trie, uint64_t fp_seed,
                                       uint64_t seed) {
        HollowZFastPrefixTrie z;
        z.fp_seed_ = fp_seed;
        // Final lo = 0 means "the exit node's parent extent has length 0":
        // that is the root itself unless the root extent is empty, in which
        // case the exit node is the depth-one child named p[0..1).
        z.empty_root_extent_ = trie.nodes()[trie.root()].extent_len == 0;
        std::vector<uint64_t> internal_fps, all_fps, deltas;
        for (uint32_t v = 0; v < trie.nodes().size(); ++v) {
            NodeAttributes a = trie.node_attributes(v);
            uint64_t hfp = fingerprint(a.handle, fp_seed);
            all_fps.push_back(hfp);
            if (!trie.nodes()[v].is_leaf) {
                internal_fps.push_back(hfp);
                deltas.push_back(a.extent.size() - a.handle.size());
            }
            for (const auto& ph : a.pseudohandles)
                all_fps.push_back(fingerprint(ph, fp_seed));
        }
        z.internal_ = RelativeDictionary::build(internal_fps, all_fps, seed);
        z.delta_ = CompressedFunction::build(internal_fps, deltas,
                                             splitmix64(seed ^ 0x632be59bd9b4e019ull));
        return z;
    }

    // T over hashed prefixes: extent length for internal handles, infinity
    // for leaf handles and pseudohandles. Garbage off the key universe is the
    // caller's contract.
    uint64_t lookup(const PrefixHasher& h, uint64_t len) const {
        uint64_t fp = h.hash_prefix(len);
        if (!internal_.contains(fp)) return kInfinity;
        return len + delta_.get(fp);
    }

    // Algorithm: binary search on the prefix length driven by T, returning
    // the name of the exit node of p.
    BitString find_exit_name(const BitString& p, ZfastInstr* instr = nullptr) const {
        if (p.empty()) return BitString{};
        PrefixHasher h(p, fp_seed_);
        int i = static_cast<int>(bitlength(p.size())) - 1; // floor(log2 |p|)
        uint64_t lo = 0, hi = p.size();
        while (hi - lo > 1) {
            if (i < 0) break; // out-of-contract input; stay bounded
            if (instr) {
                ++instr->iterations;
                instr->steps.push_back({i, lo, hi});
            }
            uint64_t m = ((lo >> i) + 1) << i; // the multiple of 2^i in (lo..hi), if any
            if (m < hi) {
                uint64_t g = lookup(h, m);
                if (g >= p.size())
                    hi = m;
                else
                    lo = g;
            }
            --i;
        }
        if (lo == 0 && !empty_root_extent_) return BitString{};
        return p.prefix(lo + 1);
    }

    uint64_t fp_seed() const { return fp_seed_; }

    ZfastSizeReport size_report() const {
        return {internal_.size_in_bits(), delta_.payload_bits(), delta_.overhead_bits()};
    }
    uint64_t size_in_bits() const {
        return internal_.size_in_bits() + delta_.size_in_bits();
    }

    // Test hook: corrupt one delta payload bit (falls back to a dictionary
    // signature when no payload exists).
    bool corrupt() {
        if (delta_.corrupt_payload_bit(0)) return true;
        return internal_.corrupt_signature_bit();
    }

    void save(ByteWriter& w) const {
        w.u64(fp_seed_);
        w.u8(empty_root_extent_ ? 1 : 0);
        internal_.save(w);
        delta_.save(w);
    }

    static HollowZFastPrefixTrie load(ByteReader& r) {
        HollowZFastPrefixTrie z;
        z.fp_seed_ = r.u64();
        z.empty_root_extent_ = r.u8() != 0;
        z.internal_ = RelativeDictionary::load(r);
        z.delta_ = CompressedFunction::load(r);
        return z;
    }

private:
    uint64_t fp_seed_ = 0;
    bool empty_root_extent_ = false;
    RelativeDictionary internal_;
    CompressedFunction delta_;
};

} // namespace wps
