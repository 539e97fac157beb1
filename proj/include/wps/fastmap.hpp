#pragma once

#include <cstdint>
#include <vector>

#include "wps/hash.hpp"
#include "wps/retrieval.hpp"
#include "wps/trie.hpp"

namespace wps {

struct FastmapStats {
    uint64_t f_lookups = 0;
    uint64_t g_lookups = 0;
    uint64_t name_checks = 0;
};

struct FastmapSizeReport {
    uint64_t f_bits = 0;
    uint64_t g_bits = 0;
    uint64_t names_bits = 0;
    uint64_t key_count = 0;
    unsigned c = 0;
    uint64_t t = 0;
};

// Constant-time prefix -> exit-node map. F maps a cut-set of extent prefixes
// to (length - name length); G maps node names to compacted-path lengths.
// A query truncates p at a fixed ladder of granularities and asks F, then
// confirms via G that the candidate's extent is long enough.
//
// A candidate produced by an off-key F lookup can be garbage, so before the
// G check the candidate name is verified against a relative dictionary of
// node names (relative to all prefixes of strings in S). A verified name
// that passes the G check is necessarily the exit node's name: among nodes
// whose name prefixes p, only the exit node has extent length >= |p|.
class ConstTimeMap {
public:
    ConstTimeMap() = default;

    static ConstTimeMap build(const CompactedTrie& trie, unsigned c, uint64_t fp_seed,
                              uint64_t seed) {
        if (c < 2) throw InputError("ConstTimeMap: c must be at least 2");
        ConstTimeMap m;
        m.c_ = c;
        m.fp_seed_ = fp_seed;
        uint64_t ell = trie.avg_len_ceil();
        m.t_ = 1;
        while (ipow(m.t_, c) < ell) ++m.t_;

        std::vector<uint64_t> f_fps, f_vals;
        std::vector<uint64_t> g_fps, g_vals;
        std::vector<uint64_t> name_fps;
        for (uint32_t v = 0; v < trie.nodes().size(); ++v) {
            const TrieNode& nd = trie.nodes()[v];
            PrefixHasher h(trie.extent(v), fp_seed);
            for (uint64_t len : m.cut_lengths(nd.skip_lo, nd.skip_hi)) {
                f_fps.push_back(h.hash_prefix(len));
                f_vals.push_back(len - nd.name_len);
            }
            uint64_t nfp = h.hash_prefix(nd.name_len);
            g_fps.push_back(nfp);
            g_vals.push_back(nd.extent_len - nd.name_len);
            name_fps.push_back(nfp);
        }
        unsigned width = static_cast<unsigned>(bitlength(trie.max_len()));
        m.f_ = StaticFunction::build(f_fps, f_vals, std::max(width, 1u),
                                     splitmix64(seed ^ 0x8cb92ba72f3d8dd7ull));
        m.g_ = CompressedFunction::build(g_fps, g_vals,
                                         splitmix64(seed ^ 0x52dce729d9f8b3a9ull));
        std::vector<uint64_t> all_prefix_fps;
        for (const auto& s : trie.strings()) {
            PrefixHasher h(s, fp_seed);
            for (uint64_t k = 0; k <= s.size(); ++k)
                all_prefix_fps.push_back(h.hash_prefix(k));
        }
        m.names_ = RelativeDictionary::build(name_fps, all_prefix_fps,
                                             splitmix64(seed ^ 0x3c79ac492ba7b653ull));
        m.key_count_ = f_fps.size();
        return m;
    }

    BitString find_exit_name(const BitString& p, FastmapStats* stats = nullptr) const {
        if (p.empty()) return BitString{};
        PrefixHasher h(p, fp_seed_);
        uint64_t plen = p.size();
        for (unsigned u = c_ - 1; u >= 1; --u) {
            uint64_t grain = ipow(t_, u);
            uint64_t qlen = plen - plen % grain;
            if (qlen == 0) continue;
            if (stats) ++stats->f_lookups;
            uint64_t off = f_.get(h.hash_prefix(qlen));
            if (off > qlen) continue;
            uint64_t name_len = qlen - off;
            if (stats) ++stats->name_checks;
            uint64_t nfp = h.hash_prefix(name_len);
            if (!names_.contains(nfp)) continue;
            if (stats) ++stats->g_lookups;
            if (name_len + g_.get(nfp) >= plen) return p.prefix(name_len);
        }
        // All ladder levels failed, so |p| lies in the always-stored initial
        // cut of its exit node and F(p) itself is exact.
        if (stats) ++stats->f_lookups;
        uint64_t off = f_.get(h.hash_prefix(plen));
        if (off > plen) off = plen; // out-of-contract input; stay in range
        return p.prefix(plen - off);
    }

    unsigned c() const { return c_; }
    uint64_t t() const { return t_; }

    FastmapSizeReport size_report() const {
        return {f_.size_in_bits(), g_.size_in_bits(), names_.size_in_bits(),
                key_count_, c_, t_};
    }
    uint64_t size_in_bits() const {
        return f_.size_in_bits() + g_.size_in_bits() + names_.size_in_bits();
    }

    void save(ByteWriter& w) const {
        w.u32(c_);
        w.u64(t_);
        w.u64(fp_seed_);
        w.u64(key_count_);
        f_.save(w);
        g_.save(w);
        names_.save(w);
    }

    static ConstTimeMap load(ByteReader& r) {
        ConstTimeMap m;
        m.c_ = r.u32();
        m.t_ = r.u64();
        m.fp_seed_ = r.u64();
        m.key_count_ = r.u64();
        m.f_ = StaticFunction::load(r);
        m.g_ = CompressedFunction::load(r);
        m.names_ = RelativeDictionary::load(r);
        return m;
    }

private:
    static uint64_t ipow(uint64_t b, unsigned e) {
        uint64_t r = 1;
        while (e--) r *= b;
        return r;
    }

    // Cut lengths for a node with skip interval [i..j): a ramp from i+1 to
    // the first multiple of t, then multiples of t up to a multiple of t^2,
    // and so on; the coarsest level runs by s = t^(c-1) through j.
    std::vector<uint64_t> cut_lengths(uint64_t i, uint64_t j) const {
        std::vector<uint64_t> out;
        if (i >= j) return out;
        uint64_t kbar = i / t_ + 1;
        uint64_t ramp_end = std::min(kbar * t_, j);
        for (uint64_t v = i + 1; v <= ramp_end; ++v) out.push_back(v);
        uint64_t pos = kbar * t_;
        if (pos > j) return out;
        for (unsigned u = 1; u < c_; ++u) {
            uint64_t step = ipow(t_, u);
            if (u + 1 == c_) {
                while (pos + step <= j) {
                    pos += step;
                    out.push_back(pos);
                }
                break;
            }
            uint64_t align = step * t_;
            while (pos % align != 0 && pos + step <= j) {
                pos += step;
                out.push_back(pos);
            }
            if (pos % align != 0) break; // ran out of room before aligning
        }
        return out;
    }

    unsigned c_ = 0;
    uint64_t t_ = 0;
    uint64_t fp_seed_ = 0;
    uint64_t key_count_ = 0;
    StaticFunction f_;
    CompressedFunction g_;
    RelativeDictionary names_;
};

} // namespace wps
