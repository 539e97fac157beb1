#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <span>
#include <unordered_set>
#include <vector>

#include "wps/eliasfano.hpp"
#include "wps/errors.hpp"
#include "wps/hash.hpp"
#include "wps/packed.hpp"
#include "wps/ranksel.hpp"

namespace wps {

// Keys are addressed by their 64-bit fingerprints (see wps::fingerprint);
// a build-wide fingerprint seed is fixed so that prefix hashers can feed
// every structure in constant time per query.

namespace detail {

inline constexpr unsigned kRetryBudget = 64;

// Three distinct vertices in [0..m), m >= 3, derived from a fingerprint.
inline std::array<uint64_t, 3> edge_vertices(uint64_t fp, uint64_t mix_seed, uint64_t m) {
    uint64_t a = splitmix64(fp ^ mix_seed);
    uint64_t b = splitmix64(a ^ 0x9e3779b97f4a7c15ull);
    uint64_t c = splitmix64(b ^ 0xc2b2ae3d27d4eb4full);
    uint64_t v0 = a % m;
    uint64_t v1 = b % (m - 1);
    if (v1 >= v0) ++v1;
    uint64_t lo = std::min(v0, v1), hi = std::max(v0, v1);
    uint64_t v2 = c % (m - 2);
    if (v2 >= lo) ++v2;
    if (v2 >= hi) ++v2;
    return {v0, v1, v2};
}

struct PeelStep {
    uint32_t edge;
    uint32_t vertex_slot; // which of the edge's three vertices was free
};

// Peel the random 3-hypergraph. Returns the removal order, or an empty
// vector on failure (a nonempty 2-core).
inline std::vector<PeelStep> peel(const std::vector<std::array<uint64_t, 3>>& edges,
                                  uint64_t m) {
    std::vector<uint32_t> deg(m, 0);
    std::vector<uint32_t> exor(m, 0);
    for (uint32_t e = 0; e < edges.size(); ++e)
        for (uint64_t v : edges[e]) {
            ++deg[v];
            exor[v] ^= e;
        }
    std::vector<uint64_t> stack;
    for (uint64_t v = 0; v < m; ++v)
        if (deg[v] == 1) stack.push_back(v);
    std::vector<PeelStep> order;
    order.reserve(edges.size());
    std::vector<bool> removed(edges.size(), false);
    while (!stack.empty()) {
        uint64_t v = stack.back();
        stack.pop_back();
        if (deg[v] != 1) continue;
        uint32_t e = exor[v];
        if (removed[e]) continue;
        removed[e] = true;
        uint32_t slot = 0;
        for (uint32_t s = 0; s < 3; ++s)
            if (edges[e][s] == v) slot = s;
        order.push_back({e, slot});
        for (uint64_t u : edges[e]) {
            --deg[u];
            exor[u] ^= e;
            if (deg[u] == 1) stack.push_back(u);
        }
    }
    if (order.size() != edges.size()) order.clear();
    return order;
}

inline uint64_t table_cells(uint64_t n) {
    uint64_t m = (123 * n + 99) / 100 + 2; // ceil(1.23 n) + 2
    return std::max<uint64_t>(m, 3);
}

inline void check_distinct(std::span<const uint64_t> fps, const char* who) {
    std::vector<uint64_t> s(fps.begin(), fps.end());
    std::sort(s.begin(), s.end());
    if (std::adjacent_find(s.begin(), s.end()) != s.end())
        throw BuildError(std::string(who) + ": duplicate key fingerprint");
}

} // namespace detail

// Static r-bit retrieval function: exact on build keys, arbitrary (crash-free)
// elsewhere. XOR of three cells addressed by the key fingerprint.
class StaticFunction {
public:
    StaticFunction() = default;

    static StaticFunction build(std::span<const uint64_t> fps,
                                std::span<const uint64_t> values,
                                unsigned width, uint64_t seed) {
        detail::check_distinct(fps, "StaticFunction");
        StaticFunction f;
        f.n_ = fps.size();
        f.width_ = width;
        if (f.n_ == 0) return f;
        f.m_ = detail::table_cells(f.n_);
        for (unsigned attempt = 0; attempt < detail::kRetryBudget; ++attempt) {
            uint64_t mix = splitmix64(seed + attempt * 0x1000193ull);
            std::vector<std::array<uint64_t, 3>> edges(f.n_);
            for (size_t i = 0; i < f.n_; ++i)
                edges[i] = detail::edge_vertices(fps[i], mix, f.m_);
            auto order = detail::peel(edges, f.m_);
            if (order.empty()) continue;
            f.mix_seed_ = mix;
            f.cells_ = PackedArray(f.m_, width);
            for (auto it = order.rbegin(); it != order.rend(); ++it) {
                const auto& e = edges[it->edge];
                uint64_t x = values[it->edge];
                for (uint32_t s = 0; s < 3; ++s)
                    if (s != it->vertex_slot) x ^= f.cells_.get(e[s]);
                f.cells_.set(e[it->vertex_slot], x);
            }
            return f;
        }
        throw BuildError("StaticFunction: seed retries exhausted");
    }

    uint64_t get(uint64_t fp) const {
        if (n_ == 0 || width_ == 0) return 0;
        auto v = detail::edge_vertices(fp, mix_seed_, m_);
        return cells_.get(v[0]) ^ cells_.get(v[1]) ^ cells_.get(v[2]);
    }

    uint64_t size() const { return n_; }
    unsigned width() const { return width_; }
    uint64_t size_in_bits() const { return cells_.bits(); }

    void save(ByteWriter& w) const {
        w.u64(n_);
        w.u64(m_);
        w.u32(width_);
        w.u64(mix_seed_);
        cells_.save(w);
    }

    static StaticFunction load(ByteReader& r) {
        StaticFunction f;
        f.n_ = r.u64();
        f.m_ = r.u64();
        f.width_ = r.u32();
        f.mix_seed_ = r.u64();
        f.cells_ = PackedArray::load(r);
        return f;
    }

private:
    uint64_t n_ = 0;
    uint64_t m_ = 0;
    unsigned width_ = 0;
    uint64_t mix_seed_ = 0;
    PackedArray cells_;
};

// Minimal perfect hash: bijection from the n build keys onto [0..n).
// BDZ-style: 2-bit values select one vertex per edge, rank makes it minimal.
class Mphf {
public:
    Mphf() = default;

    static Mphf build(std::span<const uint64_t> fps, uint64_t seed) {
        detail::check_distinct(fps, "Mphf");
        Mphf h;
        h.n_ = fps.size();
        if (h.n_ == 0) return h;
        h.m_ = detail::table_cells(h.n_);
        for (unsigned attempt = 0; attempt < detail::kRetryBudget; ++attempt) {
            uint64_t mix = splitmix64(seed + attempt * 0x01000193ull + 0x9e37ull);
            std::vector<std::array<uint64_t, 3>> edges(h.n_);
            for (size_t i = 0; i < h.n_; ++i)
                edges[i] = detail::edge_vertices(fps[i], mix, h.m_);
            auto order = detail::peel(edges, h.m_);
            if (order.empty()) continue;
            h.mix_seed_ = mix;
            h.g_ = PackedArray(h.m_, 2);
            std::vector<bool> marked(h.m_, false);
            for (auto it = order.rbegin(); it != order.rend(); ++it) {
                const auto& e = edges[it->edge];
                uint64_t sum = 0;
                for (uint32_t s = 0; s < 3; ++s)
                    if (s != it->vertex_slot) sum += h.g_.get(e[s]);
                h.g_.set(e[it->vertex_slot], (3 + it->vertex_slot - sum % 3) % 3);
                marked[e[it->vertex_slot]] = true;
            }
            h.marked_ = RankSelectBits::from_bools(marked);
            return h;
        }
        throw BuildError("Mphf: seed retries exhausted");
    }

    // Index in [0..n) for build keys; some in-range value for anything else.
    uint64_t eval(uint64_t fp) const {
        if (n_ == 0) return 0;
        auto v = detail::edge_vertices(fp, mix_seed_, m_);
        uint64_t j = (g_.get(v[0]) + g_.get(v[1]) + g_.get(v[2])) % 3;
        uint64_t idx = marked_.rank(v[j]);
        return idx < n_ ? idx : n_ - 1;
    }

    uint64_t size() const { return n_; }
    uint64_t size_in_bits() const { return g_.bits() + marked_.size_in_bits(); }

    void save(ByteWriter& w) const {
        w.u64(n_);
        w.u64(m_);
        w.u64(mix_seed_);
        g_.save(w);
        marked_.save(w);
    }

    static Mphf load(ByteReader& r) {
        Mphf h;
        h.n_ = r.u64();
        h.m_ = r.u64();
        h.mix_seed_ = r.u64();
        h.g_ = PackedArray::load(r);
        h.marked_ = RankSelectBits::load(r);
        return h;
    }

private:
    uint64_t n_ = 0;
    uint64_t m_ = 0;
    uint64_t mix_seed_ = 0;
    PackedArray g_;
    RankSelectBits marked_;
};

// Compressed function: mphf picks a slot, values are stored with
// floor(log(v+1)) payload bits each behind an Elias-Fano offset list.
class CompressedFunction {
public:
    CompressedFunction() = default;

    static CompressedFunction build(std::span<const uint64_t> fps,
                                    std::span<const uint64_t> values,
                                    uint64_t seed) {
        CompressedFunction f;
        f.mphf_ = Mphf::build(fps, seed);
        size_t n = fps.size();
        std::vector<unsigned> lens(n, 0);
        std::vector<uint64_t> ordered(n, 0);
        for (size_t i = 0; i < n; ++i) {
            uint64_t idx = f.mphf_.eval(fps[i]);
            ordered[idx] = values[i];
            lens[idx] = static_cast<unsigned>(bitlength(values[i] + 1) - 1);
        }
        std::vector<uint64_t> offsets(n + 1, 0);
        for (size_t i = 0; i < n; ++i) offsets[i + 1] = offsets[i] + lens[i];
        f.offsets_ = EliasFanoSeq(offsets, offsets.back() + 1);
        for (size_t i = 0; i < n; ++i)
            f.payload_.append((ordered[i] + 1) - (uint64_t{1} << lens[i]), lens[i]);
        return f;
    }

    uint64_t get(uint64_t fp) const {
        if (mphf_.size() == 0) return 0;
        uint64_t idx = mphf_.eval(fp);
        uint64_t a = offsets_.get(idx), b = offsets_.get(idx + 1);
        unsigned len = static_cast<unsigned>(b - a);
        return ((uint64_t{1} << len) | payload_.read(a, len)) - 1;
    }

    uint64_t size() const { return mphf_.size(); }
    uint64_t payload_bits() const { return payload_.bit_size(); }
    uint64_t overhead_bits() const { return mphf_.size_in_bits() + offsets_.size_in_bits(); }
    uint64_t size_in_bits() const { return payload_bits() + overhead_bits(); }

    // Test hook: flip one stored payload bit. Returns false if there is none.
    bool corrupt_payload_bit(uint64_t pos) {
        if (pos >= payload_.bit_size()) return false;
        payload_.flip_bit(pos);
        return true;
    }

    void save(ByteWriter& w) const {
        mphf_.save(w);
        offsets_.save(w);
        payload_.save(w);
    }

    static CompressedFunction load(ByteReader& r) {
        CompressedFunction f;
        f.mphf_ = Mphf::load(r);
        f.offsets_ = EliasFanoSeq::load(r);
        f.payload_ = BitStream::load(r);
        return f;
    }

private:
    Mphf mphf_;
    EliasFanoSeq offsets_;
    BitStream payload_;
};

// Membership for E relative to S >= E: answers are exact for queries drawn
// from S and unspecified elsewhere. An mphf over E buckets every element of
// S; each bucket stores a small selector choosing a signature hash that
// separates the bucket's key from every colliding non-member, which makes
// exactness on S achievable at build time (a single global signature seed
// would leave ~|S| / 2^width false positives and never verify clean).
class RelativeDictionary {
public:
    RelativeDictionary() = default;

    static RelativeDictionary build(std::span<const uint64_t> e_fps,
                                    std::span<const uint64_t> s_fps,
                                    uint64_t seed) {
        RelativeDictionary d;
        d.n_ = e_fps.size();
        if (d.n_ == 0) return d;
        std::unordered_set<uint64_t> in_e(e_fps.begin(), e_fps.end());
        unsigned w = 1;
        while ((static_cast<unsigned __int128>(e_fps.size()) << w) < s_fps.size()) ++w;
        for (unsigned attempt = 0; attempt < detail::kRetryBudget; ++attempt) {
            // Widen the signatures every few failed attempts; failures come
            // from overloaded buckets, which wider signatures fix.
            d.sig_width_ = std::min(w + attempt / 4, 63u);
            uint64_t sub = splitmix64(seed + attempt * 0x7f4a7c15ull);
            d.mphf_ = Mphf::build(e_fps, sub);
            d.sig_seed_ = splitmix64(sub ^ 0xda942042e4dd58b5ull);
            std::vector<std::vector<uint64_t>> colliders(d.n_);
            for (uint64_t fp : s_fps)
                if (!in_e.contains(fp)) colliders[d.mphf_.eval(fp)].push_back(fp);
            d.sigs_ = PackedArray(d.n_, d.sig_width_);
            d.sels_ = PackedArray(d.n_, kSelWidth);
            bool ok = true;
            for (uint64_t fp : e_fps) {
                uint64_t slot = d.mphf_.eval(fp);
                uint64_t sel = 0;
                for (;; ++sel) {
                    if (sel == uint64_t{1} << kSelWidth) {
                        ok = false;
                        break;
                    }
                    uint64_t mine = d.sig(fp, sel);
                    bool clash = false;
                    for (uint64_t other : colliders[slot])
                        if (d.sig(other, sel) == mine) {
                            clash = true;
                            break;
                        }
                    if (!clash) break;
                }
                if (!ok) break;
                d.sels_.set(slot, sel);
                d.sigs_.set(slot, d.sig(fp, sel));
            }
            if (ok) return d;
        }
        throw BuildError("RelativeDictionary: seed retries exhausted");
    }

    bool contains(uint64_t fp) const {
        if (n_ == 0) return false;
        uint64_t slot = mphf_.eval(fp);
        return sigs_.get(slot) == sig(fp, sels_.get(slot));
    }

    uint64_t size() const { return n_; }
    uint64_t size_in_bits() const {
        return n_ == 0 ? 0 : mphf_.size_in_bits() + sigs_.bits() + sels_.bits();
    }

    // Test hook: flip one signature bit (breaks one key's membership).
    bool corrupt_signature_bit() {
        if (n_ == 0 || sig_width_ == 0) return false;
        sigs_.set(0, sigs_.get(0) ^ 1);
        return true;
    }

    void save(ByteWriter& w) const {
        w.u64(n_);
        w.u32(sig_width_);
        w.u64(sig_seed_);
        mphf_.save(w);
        sigs_.save(w);
        sels_.save(w);
    }

    static RelativeDictionary load(ByteReader& r) {
        RelativeDictionary d;
        d.n_ = r.u64();
        d.sig_width_ = r.u32();
        d.sig_seed_ = r.u64();
        d.mphf_ = Mphf::load(r);
        d.sigs_ = PackedArray::load(r);
        d.sels_ = PackedArray::load(r);
        return d;
    }

private:
    static constexpr unsigned kSelWidth = 6; // 64 signature hashes per bucket

    uint64_t sig(uint64_t fp, uint64_t sel) const {
        uint64_t mask = (uint64_t{1} << sig_width_) - 1;
        return splitmix64(fp ^ sig_seed_ ^ (sel * 0xbf58476d1ce4e5b9ull)) & mask;
    }

    uint64_t n_ = 0;
    unsigned sig_width_ = 0;
    uint64_t sig_seed_ = 0;
    Mphf mphf_;
    PackedArray sigs_;
    PackedArray sels_;
};

} // namespace wps
