#pragma once

#include <algorithm>
#include <cstdint>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "wps/index.hpp"
#include "wps/rlocator.hpp"
#include "wps/store.hpp"
#include "wps/trie.hpp"

namespace wps {

// ---- corpus generation --------------------------------------------------

inline BitString random_bits(std::mt19937_64& rng, size_t len) {
    std::vector<uint64_t> w((len + 63) / 64);
    for (auto& x : w) x = rng();
    return BitString::from_words(std::move(w), len);
}

// Insert cand into a prefix-free set if it keeps the set prefix-free. With a
// prefix-free set it suffices to test the lexicographic neighbors.
inline bool try_insert_prefix_free(std::set<BitString>& s, const BitString& cand) {
    if (cand.empty()) return false;
    auto it = s.lower_bound(cand);
    if (it != s.end() && (*it == cand || cand.is_prefix_of(*it))) return false;
    if (it != s.begin() && std::prev(it)->is_prefix_of(cand)) return false;
    s.insert(cand);
    return true;
}

inline std::vector<BitString> make_random_set(std::mt19937_64& rng, size_t n,
                                              size_t max_len) {
    std::set<BitString> s;
    size_t attempts = 0;
    while (s.size() < n && attempts < 64 * n + 1024) {
        ++attempts;
        size_t len = 1 + rng() % max_len;
        try_insert_prefix_free(s, random_bits(rng, len));
    }
    return {s.begin(), s.end()};
}

inline std::vector<BitString> make_shared_prefix_set(std::mt19937_64& rng, size_t n,
                                                     size_t max_len) {
    size_t shared_len = 1 + rng() % std::max<size_t>(1, max_len / 2);
    size_t tail_len = std::max<size_t>(2, max_len - shared_len);
    BitString shared = random_bits(rng, shared_len);
    auto tails = make_random_set(rng, n, tail_len);
    std::vector<BitString> out;
    for (const auto& t : tails) {
        BitBuilder bb;
        bb.append(shared);
        bb.append(t);
        out.push_back(bb.take());
    }
    return out;
}

inline std::vector<BitString> make_fixed_length_set(std::mt19937_64& rng, size_t n,
                                                    size_t len) {
    len = std::max<size_t>(len, bitlength(n) + 1);
    std::set<BitString> s;
    while (s.size() < n) s.insert(random_bits(rng, len));
    return {s.begin(), s.end()};
}

// ---- verification sweep -------------------------------------------------

struct VerifyOptions {
    uint64_t master_seed = 0xC0FFEEull;
    uint32_t corpora = 200;
    uint32_t max_n = 1024;
    uint32_t max_len = 4096;
    uint64_t query_cap = 100000; // sampled prefix queries per set
    uint32_t ranges_per_corpus = 50;
    std::vector<unsigned> cs = {2, 3};
    bool inject_fault = false;
    uint32_t serialization_stride = 20; // round-trip every k-th corpus
};

struct VerifyReport {
    bool ok = true;
    uint64_t corpora = 0;
    uint64_t prefix_queries = 0;
    uint64_t range_queries = 0;
    std::string failure;
};

namespace detail {

struct PrefixCase {
    BitString p;
    uint32_t lo, hi;                  // oracle interval
    std::vector<uint64_t> ancestors;  // extent lengths of strict ancestors
    bool at_extent;                   // |p| equals the exit node's extent length
};

// Enumerate distinct prefixes by trie walk; each prefix's exit node is the
// node whose (name..extent] length range contains it, and its answer is that
// node's leaf interval. Sampled with a stride to respect the query cap.
inline std::vector<PrefixCase> sample_prefixes(const CompactedTrie& trie,
                                               uint64_t cap) {
    uint64_t total = 0;
    for (uint32_t v = 0; v < trie.nodes().size(); ++v) {
        const TrieNode& nd = trie.nodes()[v];
        uint64_t start = v == trie.root() ? 1 : nd.name_len;
        if (nd.extent_len >= start) total += nd.extent_len - start + 1;
    }
    uint64_t stride = total > cap ? total / cap + 1 : 1;
    std::vector<PrefixCase> out;
    // Iterative DFS carrying the ancestor extent lengths.
    std::vector<std::pair<uint32_t, size_t>> stack; // (node, ancestor count)
    std::vector<uint64_t> path;
    stack.push_back({trie.root(), 0});
    uint64_t tick = 0;
    while (!stack.empty()) {
        auto [v, depth] = stack.back();
        stack.pop_back();
        path.resize(depth);
        const TrieNode& nd = trie.nodes()[v];
        BitString ext = trie.extent(v);
        uint64_t start = v == trie.root() ? 1 : nd.name_len;
        for (uint64_t len = start; len <= nd.extent_len; ++len) {
            if (tick++ % stride) continue;
            PrefixCase c;
            c.p = ext.prefix(len);
            c.lo = nd.leaf_lo;
            c.hi = nd.leaf_hi;
            c.ancestors = path;
            c.at_extent = len == nd.extent_len;
            out.push_back(std::move(c));
        }
        if (!nd.is_leaf) {
            path.push_back(nd.extent_len);
            stack.push_back({nd.left, path.size()});
            stack.push_back({nd.right, path.size()});
        }
    }
    return out;
}

inline std::string describe(const BitString& p, const char* what,
                            uint64_t corpus_seed) {
    std::ostringstream out;
    out << what << " (corpus seed " << corpus_seed << ", query "
        << (p.size() <= 256 ? p.to_text() : p.prefix(256).to_text() + "...")
        << " len " << p.size() << ")";
    return out.str();
}

} // namespace detail

// Runs the oracle-equivalence and invariant suites. Stops at the first
// counterexample.
inline VerifyReport run_verify(const VerifyOptions& opt) {
    VerifyReport rep;
    auto fail = [&](std::string msg) {
        rep.ok = false;
        rep.failure = std::move(msg);
    };

    for (uint32_t k = 0; k < opt.corpora && rep.ok; ++k) {
        uint64_t cseed = splitmix64(opt.master_seed + k);
        std::mt19937_64 rng(cseed);
        size_t n = (k % 37 == 0) ? 1
                   : (rng() % 2)  ? 1 + rng() % 32
                                  : 1 + rng() % opt.max_n;
        // Keep per-corpus total bits bounded so 200 corpora stay fast.
        size_t len_cap = std::max<size_t>(8, std::min<size_t>(opt.max_len, 2000000 / std::max<size_t>(n, 1)));
        std::vector<BitString> strings;
        switch (k % 3) {
        case 0: strings = make_random_set(rng, n, len_cap); break;
        case 1: strings = make_shared_prefix_set(rng, n, len_cap); break;
        default:
            strings = make_fixed_length_set(rng, n, 1 + rng() % len_cap);
            break;
        }
        if (strings.empty()) continue;
        ++rep.corpora;

        CompactedTrie trie(strings);
        TrieMeasures m = trie.measures();

        // Theorem 1: mean internal extent length <= mean string length - 1.
        if (m.internal_count > 0 &&
            m.internal_extent_sum * trie.n() >
                (trie.total_bits() - trie.n()) * m.internal_count) {
            fail("Theorem 1 violation (corpus seed " + std::to_string(cseed) + ")");
            break;
        }

        if (trie.n() >= 2) {
            PSet p = build_P(trie);
            uint64_t plen_sum = 0;
            for (const auto& key : p.keys) plen_sum += key.size();
            // Average length of P at most 3 * average string length.
            if (plen_sum * trie.n() > 3 * trie.total_bits() * p.keys.size()) {
                fail("P length proposition violation (corpus seed " +
                     std::to_string(cseed) + ")");
                break;
            }
            // Membership closure for every node name.
            std::set<BitString> pset(p.keys.begin(), p.keys.end());
            for (uint32_t v = 0; v < trie.nodes().size() && rep.ok; ++v) {
                BitString name = trie.name(v);
                if (name.is_all_ones()) continue;
                if (!pset.contains(strip_trailing_zeros(name)) ||
                    !pset.contains(
                        strip_trailing_zeros(successor_same_length(name))))
                    fail("P membership closure violation (corpus seed " +
                         std::to_string(cseed) + ")");
            }
            if (!rep.ok) break;
        }

        IndexConfig space_cfg;
        space_cfg.variant = IndexVariant::SpaceOptimal;
        space_cfg.seed = splitmix64(cseed ^ 0x5eedull);
        WeakPrefixIndex space = WeakPrefixIndex::build_from_trie(trie, space_cfg);
        if (opt.inject_fault) space.corrupt();

        // HT payload bound: delta payload <= sum over internal nodes of
        // floor(log(|c| + 1)).
        if (trie.n() >= 2 && !opt.inject_fault) {
            uint64_t bound = 0;
            for (const auto& nd : trie.nodes())
                if (!nd.is_leaf)
                    bound += bitlength(nd.extent_len - nd.name_len + 1) - 1;
            if (space.stats().zfast_delta_payload_bits > bound) {
                fail("zfast delta payload exceeds HT bound (corpus seed " +
                     std::to_string(cseed) + ")");
                break;
            }
        }

        std::vector<WeakPrefixIndex> times;
        for (unsigned c : opt.cs) {
            IndexConfig tc;
            tc.variant = IndexVariant::TimeOptimal;
            tc.c = c;
            tc.seed = splitmix64(cseed ^ (0x1000ull + c));
            times.push_back(WeakPrefixIndex::build_from_trie(trie, tc));
        }
        StringStore store = StringStore::build(trie.strings());

        // Empty prefix answers the full interval.
        if (space.weak_prefix_search(BitString{}) !=
            std::pair<uint64_t, uint64_t>{0, trie.n()}) {
            fail("empty prefix mismatch (corpus seed " + std::to_string(cseed) + ")");
            break;
        }

        auto cases = detail::sample_prefixes(trie, opt.query_cap);
        uint64_t tick = 0;
        for (const auto& tc : cases) {
            if (!rep.ok) break;
            ++rep.prefix_queries;
            std::pair<uint64_t, uint64_t> want{tc.lo, tc.hi};

            ZfastInstr zi;
            auto got = space.query(tc.p, &zi, nullptr);
            if (got != want) {
                fail(detail::describe(tc.p, "space-variant interval mismatch", cseed));
                break;
            }
            if (zi.iterations > bitlength(tc.p.size())) { // floor(log|p|) + 1
                fail(detail::describe(tc.p, "iteration bound exceeded", cseed));
                break;
            }
            // Lemma 3 invariants on the recorded pre-iteration states. p_t
            // here is the longest extent that properly prefixes p (the
            // parent's extent): r is only ever cut at or above it, and lo is
            // only ever assigned ancestor extent lengths.
            uint64_t pt = tc.ancestors.empty() ? 0 : tc.ancestors.back();
            for (const auto& st : zi.steps) {
                uint64_t grain = uint64_t{1} << st.i;
                uint64_t mult = st.hi == 0 ? 0
                                           : (st.hi - 1) / grain - st.lo / grain;
                bool lo_ok = st.lo == 0 ||
                             std::find(tc.ancestors.begin(), tc.ancestors.end(),
                                       st.lo) != tc.ancestors.end();
                if (mult > 1 || !lo_ok || st.lo > pt || pt > st.hi) {
                    fail(detail::describe(tc.p, "Lemma 3 invariant violation", cseed));
                    break;
                }
            }
            if (!rep.ok) break;

            for (size_t ti = 0; ti < times.size(); ++ti) {
                FastmapStats fs;
                auto got_t = times[ti].query(tc.p, nullptr, &fs);
                if (got_t != want) {
                    fail(detail::describe(tc.p, "time-variant interval mismatch",
                                          cseed));
                    break;
                }
                unsigned c = opt.cs[ti];
                if (fs.f_lookups > c || fs.g_lookups > c) {
                    fail(detail::describe(tc.p, "fastmap lookup ceiling exceeded",
                                          cseed));
                    break;
                }
            }
            if (!rep.ok) break;

            // Probe laws on a sub-sample (prefix_search costs t probes).
            if (tick++ % 4 == 0) {
                auto [cnt, cprobes] = prefix_count(space, store, tc.p);
                if (cnt != tc.hi - tc.lo || cprobes > 1) {
                    fail(detail::describe(tc.p, "prefix_count law violation", cseed));
                    break;
                }
                auto [found, sprobes] = prefix_search(space, store, tc.p);
                if (sprobes != tc.hi - tc.lo || found.size() != tc.hi - tc.lo) {
                    fail(detail::describe(tc.p, "prefix_search law violation", cseed));
                    break;
                }
                for (size_t r = 0; r < found.size(); ++r)
                    if (!(found[r] == trie.strings()[tc.lo + r])) {
                        fail(detail::describe(tc.p, "prefix_search wrong strings",
                                              cseed));
                        break;
                    }
            }
        }
        if (!rep.ok) break;

        // Negative (out-of-contract) prefix queries: crash-free, <= 1 probe.
        for (uint32_t q = 0; q < 32 && rep.ok; ++q) {
            BitString p = random_bits(rng, 1 + rng() % (trie.max_len() + 8));
            auto [olo, ohi] = trie.weak_prefix_oracle(p);
            auto [cnt, cprobes] = prefix_count(space, store, p);
            if (cprobes > 1 || cnt != uint64_t{ohi} - olo) {
                fail(detail::describe(p, "negative prefix_count violation", cseed));
                break;
            }
            auto [found, sprobes] = prefix_search(space, store, p);
            if (found.size() != uint64_t{ohi} - olo ||
                (found.empty() && sprobes > 1)) {
                fail(detail::describe(p, "negative prefix_search violation", cseed));
                break;
            }
        }
        if (!rep.ok) break;

        // Range queries against a brute-force filter.
        for (uint32_t q = 0; q < opt.ranges_per_corpus && rep.ok; ++q) {
            ++rep.range_queries;
            BitString a = random_bits(rng, 1 + rng() % (trie.max_len() + 2));
            BitString b = random_bits(rng, 1 + rng() % (trie.max_len() + 2));
            if (q % 3 == 0) { // bias toward ranges anchored at real strings
                a = trie.strings()[rng() % trie.n()];
                if (q % 6 == 0) b = a.with_appended(true).with_appended(true);
            }
            if (b < a) std::swap(a, b);
            std::vector<BitString> want;
            for (const auto& s : trie.strings())
                if (!(s < a) && !(b < s)) want.push_back(s);
            auto [got, probes] = range_report(space, store, a, b);
            uint64_t limit = want.size() + (lcp(a, b) == a.size() ? 1 : 2);
            if (got != want || probes > limit) {
                fail(detail::describe(a, "range_report law violation", cseed));
                break;
            }
            auto [empty, eprobes] = range_empty(space, store, a, b);
            if (empty != want.empty() || eprobes > 2) {
                fail(detail::describe(a, "range_empty law violation", cseed));
                break;
            }
        }
        if (!rep.ok) break;

        // Serialization round trip on a subset of corpora.
        if (k % opt.serialization_stride == 0) {
            auto bytes = save_container(space, store);
            auto [loaded_ix, loaded_st] = load_container(bytes);
            auto bytes2 = save_container(loaded_ix, loaded_st);
            if (bytes != bytes2) {
                fail("re-serialization not byte-identical (corpus seed " +
                     std::to_string(cseed) + ")");
                break;
            }
            for (size_t ci = 0; ci < cases.size(); ci += 7)
                if (loaded_ix.weak_prefix_search(cases[ci].p) !=
                    space.weak_prefix_search(cases[ci].p)) {
                    fail(detail::describe(cases[ci].p,
                                          "loaded index answer mismatch", cseed));
                    break;
                }
        }
    }
    return rep;
}

} // namespace wps
