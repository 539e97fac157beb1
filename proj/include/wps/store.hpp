#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "wps/bitstring.hpp"
#include "wps/eliasfano.hpp"
#include "wps/errors.hpp"

namespace wps {

// The slow-access side: concatenated strings in rank order behind Elias-Fano
// offsets. One get() is one probe, the cost unit of the applications below.
class StringStore {
public:
    StringStore() = default;

    static StringStore build(const std::vector<BitString>& sorted_strings) {
        StringStore st;
        BitBuilder bb;
        std::vector<uint64_t> offsets;
        offsets.push_back(0);
        for (const auto& s : sorted_strings) {
            bb.append(s);
            offsets.push_back(bb.size());
        }
        st.payload_ = bb.take();
        st.offsets_ = EliasFanoSeq(offsets, offsets.back() + 1);
        return st;
    }

    size_t n() const { return offsets_.size() == 0 ? 0 : offsets_.size() - 1; }

    BitString get(uint64_t rank, uint64_t* probes = nullptr) const {
        if (rank >= n()) throw InputError("StringStore::get: rank out of range");
        if (probes) ++*probes;
        uint64_t a = offsets_.get(rank), b = offsets_.get(rank + 1);
        return payload_.substr(a, b - a);
    }

    uint64_t size_in_bits() const {
        return payload_.size() + offsets_.size_in_bits();
    }

    void save(ByteWriter& w) const {
        w.u64(payload_.size());
        w.u64vec(payload_.words());
        offsets_.save(w);
    }

    static StringStore load(ByteReader& r) {
        StringStore st;
        uint64_t len = r.u64();
        st.payload_ = BitString::from_words(r.u64vec(), len);
        st.offsets_ = EliasFanoSeq::load(r);
        return st;
    }

private:
    BitString payload_;
    EliasFanoSeq offsets_;
};

// Applications. `Index` is anything with weak_prefix_search(p) -> [i..j);
// the index may return a garbage interval when p prefixes nothing, so every
// answer is trusted only after a verification probe.

template <class Index>
std::pair<std::vector<BitString>, uint64_t>
prefix_search(const Index& index, const StringStore& store, const BitString& p) {
    auto [i, j] = index.weak_prefix_search(p);
    uint64_t probes = 0;
    std::vector<BitString> out;
    if (i >= j) return {out, probes};
    BitString first = store.get(i, &probes);
    if (!p.is_prefix_of(first)) return {{}, probes};
    out.push_back(first);
    for (uint64_t r = i + 1; r < j; ++r) out.push_back(store.get(r, &probes));
    return {out, probes};
}

template <class Index>
std::pair<uint64_t, uint64_t>
prefix_count(const Index& index, const StringStore& store, const BitString& p) {
    auto [i, j] = index.weak_prefix_search(p);
    uint64_t probes = 0;
    if (i >= j) return {0, probes};
    BitString first = store.get(i, &probes);
    return {p.is_prefix_of(first) ? j - i : 0, probes};
}

// All strings of S inside [a..b], in at most K+1 probes when a is a prefix
// of b and K+2 otherwise (K = result count). The split point is the longest
// common prefix p: matches start with p0 (tail of that interval) or p1
// (head of that interval).
template <class Index>
std::pair<std::vector<BitString>, uint64_t>
range_report(const Index& index, const StringStore& store, const BitString& a,
             const BitString& b) {
    if (a > b) throw InputError("range_report: a > b");
    uint64_t probes = 0;
    std::vector<BitString> out;
    size_t plen = lcp(a, b);
    if (plen == a.size()) {
        // a is a prefix of b: scan a's interval forward until past b.
        auto [i, j] = index.weak_prefix_search(a);
        for (uint64_t r = i; r < j; ++r) {
            BitString s = store.get(r, &probes);
            if (!a.is_prefix_of(s) || s > b) break;
            out.push_back(s);
        }
        return {out, probes};
    }
    BitString p0 = a.prefix(plen + 1); // = p then 0
    BitString p1 = b.prefix(plen + 1); // = p then 1
    auto [i0, j0] = index.weak_prefix_search(p0);
    std::vector<BitString> left;
    for (uint64_t r = j0; r-- > i0;) {
        BitString s = store.get(r, &probes);
        if (!p0.is_prefix_of(s) || s < a) break;
        left.push_back(s);
    }
    out.assign(left.rbegin(), left.rend());
    auto [i1, j1] = index.weak_prefix_search(p1);
    for (uint64_t r = i1; r < j1; ++r) {
        BitString s = store.get(r, &probes);
        if (!p1.is_prefix_of(s) || s > b) break;
        out.push_back(s);
    }
    return {out, probes};
}

// Emptiness of S intersect [a..b] in at most two probes.
template <class Index>
std::pair<bool, uint64_t>
range_empty(const Index& index, const StringStore& store, const BitString& a,
            const BitString& b) {
    if (a > b) throw InputError("range_empty: a > b");
    uint64_t probes = 0;
    size_t plen = lcp(a, b);
    if (plen == a.size()) {
        auto [i, j] = index.weak_prefix_search(a);
        if (i >= j) return {true, probes};
        BitString s = store.get(i, &probes);
        return {!(a.is_prefix_of(s) && s <= b), probes};
    }
    BitString p0 = a.prefix(plen + 1);
    BitString p1 = b.prefix(plen + 1);
    auto [i0, j0] = index.weak_prefix_search(p0);
    if (i0 < j0) {
        BitString s = store.get(j0 - 1, &probes); // largest p0-string
        if (p0.is_prefix_of(s) && s >= a) return {false, probes};
    }
    auto [i1, j1] = index.weak_prefix_search(p1);
    if (i1 < j1) {
        BitString s = store.get(i1, &probes); // smallest p1-string
        if (p1.is_prefix_of(s) && s <= b) return {false, probes};
    }
    return {true, probes};
}

} // namespace wps
