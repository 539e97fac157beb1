#pragma once

#include <algorithm>
#include <cstdint>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "wps/bitstring.hpp"
#include "wps/errors.hpp"

namespace wps {

struct TrieNode {
    uint64_t extent_len = 0;
    uint64_t name_len = 0;
    uint64_t skip_lo = 0; // skip interval [skip_lo..skip_hi)
    uint64_t skip_hi = 0;
    bool is_leaf = false;
    uint32_t left = 0; // children (internal nodes only)
    uint32_t right = 0;
    uint32_t leaf_lo = 0; // leaf rank interval [leaf_lo..leaf_hi) below this node
    uint32_t leaf_hi = 0;
    uint32_t repr = 0; // rank of some string extending the extent
};

struct NodeAttributes {
    BitString extent;
    BitString name;
    BitString compacted_path;
    BitString handle;
    std::vector<BitString> pseudohandles; // deduplicated, by length
};

struct TrieMeasures {
    uint64_t trie_measure = 0;        // T(S) = 2n-2 + sum |c|
    uint64_t hollow_measure = 0;      // HT(S) = n-2 + sum_internal bitlength(|c|)
    uint64_t internal_extent_sum = 0; // for the Theorem 1 check
    uint64_t internal_count = 0;
};

// Build-time compacted binary trie over a prefix-free set; the source of
// truth and brute-force oracle for everything downstream.
class CompactedTrie {
public:
    explicit CompactedTrie(std::vector<BitString> strings)
        : strings_(std::move(strings)) {
        if (strings_.empty()) throw InputError("CompactedTrie: empty input");
        std::sort(strings_.begin(), strings_.end());
        for (size_t i = 0; i + 1 < strings_.size(); ++i) {
            if (strings_[i] == strings_[i + 1])
                throw InputError("CompactedTrie: duplicate string at rank " +
                                 std::to_string(i));
            if (strings_[i].is_prefix_of(strings_[i + 1]))
                throw InputError("CompactedTrie: not prefix-free at ranks " +
                                 std::to_string(i) + "," + std::to_string(i + 1));
        }
        for (const auto& s : strings_) {
            total_bits_ += s.size();
            max_len_ = std::max<uint64_t>(max_len_, s.size());
        }
        root_ = build(0, static_cast<uint32_t>(strings_.size()), 0);
        // The root's skip interval is [0..|c_root|), not [|n|-1..|e|).
        nodes_[root_].skip_lo = 0;
    }

    size_t n() const { return strings_.size(); }
    uint64_t total_bits() const { return total_bits_; }
    uint64_t max_len() const { return max_len_; }
    // ceil(total_bits / n), the integer average length used by fastmap.
    uint64_t avg_len_ceil() const { return (total_bits_ + n() - 1) / n(); }

    const std::vector<BitString>& strings() const { return strings_; }
    const std::vector<TrieNode>& nodes() const { return nodes_; }
    uint32_t root() const { return root_; }

    BitString extent(uint32_t v) const {
        return strings_[nodes_[v].repr].prefix(nodes_[v].extent_len);
    }
    BitString name(uint32_t v) const {
        return strings_[nodes_[v].repr].prefix(nodes_[v].name_len);
    }

    NodeAttributes node_attributes(uint32_t v) const {
        const TrieNode& nd = nodes_[v];
        NodeAttributes a;
        a.extent = extent(v);
        a.name = name(v);
        a.compacted_path = a.extent.substr(nd.name_len, nd.extent_len - nd.name_len);
        uint64_t f = two_fattest(nd.skip_lo, nd.skip_hi);
        a.handle = a.extent.prefix(f);
        std::set<uint64_t> lens;
        for (uint64_t t = nd.skip_lo + 1; t < f; ++t)
            lens.insert(two_fattest(nd.skip_lo, t));
        for (uint64_t l : lens) a.pseudohandles.push_back(a.extent.prefix(l));
        return a;
    }

    // The unique node whose name prefixes x while its extent equals x or does
    // not prefix x, found by a top-down walk.
    uint32_t exit_node_oracle(const BitString& x) const {
        uint32_t v = root_;
        for (;;) {
            const TrieNode& nd = nodes_[v];
            if (x.size() <= nd.extent_len) break;
            if (!extent(v).is_prefix_of(x)) break;
            if (nd.is_leaf) break;
            v = x.bit(nd.extent_len) ? nd.right : nd.left;
        }
        if (!(x.size() <= nodes_[v].extent_len && x.is_prefix_of(extent(v))))
            throw InputError("exit_node_oracle: not a prefix of any string");
        return v;
    }

    // Exact interval by linear scan; total on all inputs.
    std::pair<uint32_t, uint32_t> weak_prefix_oracle(const BitString& p) const {
        uint32_t i = 0;
        while (i < strings_.size() && !p.is_prefix_of(strings_[i])) ++i;
        uint32_t j = i;
        while (j < strings_.size() && p.is_prefix_of(strings_[j])) ++j;
        return {i, j};
    }

    TrieMeasures measures() const {
        TrieMeasures m;
        uint64_t path_sum = 0;
        for (uint32_t v = 0; v < nodes_.size(); ++v) {
            const TrieNode& nd = nodes_[v];
            path_sum += nd.extent_len - nd.name_len;
            if (!nd.is_leaf) {
                m.hollow_measure += bitlength(nd.extent_len - nd.name_len);
                m.internal_extent_sum += nd.extent_len;
                ++m.internal_count;
            }
        }
        m.trie_measure = 2 * n() - 2 + path_sum;
        m.hollow_measure = n() >= 2 ? m.hollow_measure + n() - 2 : 0;
        return m;
    }

    // One line per node, preorder:
    // "name_len extent_len [i..j) handle=… pseudo={…}"
    std::string dump() const {
        std::ostringstream out;
        dump_node(root_, out);
        return out.str();
    }

private:
    uint32_t build(uint32_t lo, uint32_t hi, uint64_t name_len) {
        TrieNode nd;
        nd.name_len = name_len;
        nd.leaf_lo = lo;
        nd.leaf_hi = hi;
        nd.repr = lo;
        if (hi - lo == 1) {
            nd.is_leaf = true;
            nd.extent_len = strings_[lo].size();
        } else {
            nd.extent_len = lcp(strings_[lo], strings_[hi - 1]);
        }
        nd.skip_lo = name_len == 0 ? 0 : name_len - 1;
        nd.skip_hi = nd.extent_len;
        uint32_t idx = static_cast<uint32_t>(nodes_.size());
        nodes_.push_back(nd);
        if (!nd.is_leaf) {
            // First rank whose bit at extent_len is 1.
            uint32_t split = static_cast<uint32_t>(
                std::partition_point(strings_.begin() + lo, strings_.begin() + hi,
                                     [&](const BitString& s) {
                                         return !s.bit(nodes_[idx].extent_len);
                                     }) -
                strings_.begin());
            uint32_t l = build(lo, split, nd.extent_len + 1);
            uint32_t r = build(split, hi, nd.extent_len + 1);
            nodes_[idx].left = l;
            nodes_[idx].right = r;
        }
        return idx;
    }

    void dump_node(uint32_t v, std::ostringstream& out) const {
        const TrieNode& nd = nodes_[v];
        NodeAttributes a = node_attributes(v);
        out << nd.name_len << ' ' << nd.extent_len << " [" << nd.skip_lo << ".."
            << nd.skip_hi << ") handle=" << a.handle.to_text() << " pseudo={";
        for (size_t i = 0; i < a.pseudohandles.size(); ++i)
            out << (i ? "," : "") << a.pseudohandles[i].to_text();
        out << "}\n";
        if (!nd.is_leaf) {
            dump_node(nd.left, out);
            dump_node(nd.right, out);
        }
    }

    std::vector<BitString> strings_;
    std::vector<TrieNode> nodes_;
    uint32_t root_ = 0;
    uint64_t total_bits_ = 0;
    uint64_t max_len_ = 0;
};

} // namespace wps
