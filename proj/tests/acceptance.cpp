// Acceptance suite: one line per criterion, nonzero exit on any failure.
#include <chrono>
#include <cstdint>
#include <iostream>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "wps/index.hpp"
#include "wps/verify.hpp"
#include "wps/zfast.hpp"

using namespace wps;

namespace {

int failures = 0;

void report(int criterion, bool ok, const std::string& what) {
    std::cout << "Criterion " << criterion << ": " << (ok ? "PASS" : "FAIL") << " - "
              << what << "\n";
    if (!ok) ++failures;
}

std::vector<BitString> toy_set() {
    return {BitString::from_text("001001010"), BitString::from_text("0010011010010"),
            BitString::from_text("00100110101")};
}

uint64_t zlookup(const HollowZFastPrefixTrie& z, const std::string& key) {
    BitString k = BitString::from_text(key);
    PrefixHasher h(k, z.fp_seed());
    return z.lookup(h, k.size());
}

uint64_t two_fattest_brute(uint64_t x, uint64_t y) {
    uint64_t best = 0;
    int best_tz = -1;
    for (uint64_t v = x + 1; v <= y; ++v) {
        int tz = static_cast<int>(std::countr_zero(v));
        if (tz > best_tz) {
            best_tz = tz;
            best = v;
        }
    }
    return best;
}

} // namespace

int main() {
    CompactedTrie trie(toy_set());

    // 1. Fig. 2 golden reproduction.
    {
        bool ok = true;
        HollowZFastPrefixTrie z = HollowZFastPrefixTrie::build(trie, 0x12345, 0x678);
        ok &= zlookup(z, "0010") == 6 && zlookup(z, "00100110") == 10;
        std::set<std::string> inf_keys = {"0",          "00",          "0010010",
                                          "00100101",   "0010011",     "00100110100",
                                          "001001101001", "00100110101"};
        for (const auto& k : inf_keys) ok &= zlookup(z, k) == kInfinity;
        // The key universe is exactly the two internal handles plus those eight.
        std::set<std::string> universe;
        for (uint32_t v = 0; v < trie.nodes().size(); ++v) {
            NodeAttributes a = trie.node_attributes(v);
            universe.insert(a.handle.to_text());
            for (const auto& ph : a.pseudohandles) universe.insert(ph.to_text());
        }
        std::set<std::string> expect = inf_keys;
        expect.insert("0010");
        expect.insert("00100110");
        ok &= universe == expect;
        PSet p = build_P(trie);
        std::vector<std::string> keys;
        for (const auto& k : p.keys) keys.push_back(k.to_text());
        ok &= keys == std::vector<std::string>{"001001", "0010011", "001001101",
                                               "00100110101", "0010011011", "00101"};
        ok &= p.marks == std::vector<bool>{1, 0, 1, 1, 0, 0};
        report(1, ok, "Fig. 2 golden reproduction (handle map, infinity keys, P)");
    }

    // 2. weak_prefix_search("0010011") = [1..3) in both variants.
    {
        bool ok = true;
        for (auto v : {IndexVariant::SpaceOptimal, IndexVariant::TimeOptimal}) {
            IndexConfig cfg;
            cfg.variant = v;
            WeakPrefixIndex ix = WeakPrefixIndex::build(toy_set(), cfg);
            ok &= ix.weak_prefix_search(BitString::from_text("0010011")) ==
                  std::pair<uint64_t, uint64_t>{1, 3};
        }
        report(2, ok, "query 0010011 -> [1..3) in both variants");
    }

    // 3-6. Oracle-equivalence sweep: 200 mixed corpora, instrumented
    // Algorithm 1 bounds and invariants, fastmap lookup ceilings, probe laws,
    // 10^4 range queries; Theorem 1 and the P proposition are asserted on
    // every corpus inside the same sweep (re-reported as 7 and 8).
    VerifyOptions vopt; // defaults: 200 corpora, n <= 1024, lengths <= 4096
    auto t0 = std::chrono::steady_clock::now();
    VerifyReport rep = run_verify(vopt);
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
                      .count();
    {
        std::string detail = std::to_string(rep.corpora) + " corpora, " +
                             std::to_string(rep.prefix_queries) + " prefix queries, " +
                             std::to_string(rep.range_queries) + " range queries, " +
                             std::to_string(secs).substr(0, 5) + " s";
        if (!rep.ok) detail += "; first counterexample: " + rep.failure;
        report(3, rep.ok && rep.corpora >= 200 && secs < 120.0,
               "oracle equivalence sweep (" + detail + ")");
        report(4, rep.ok, "Algorithm 1 iteration bound and loop invariants "
                          "(instrumented within the sweep)");
        report(5, rep.ok, "fastmap F/G lookup ceiling <= c (instrumented within "
                          "the sweep)");
        report(6, rep.ok && rep.range_queries >= 10000,
               "probe laws, incl. " + std::to_string(rep.range_queries) +
                   " range queries");
    }

    // 7. Theorem 1, asserted per corpus in the sweep; toy value checked here.
    {
        TrieMeasures m = trie.measures();
        bool ok = rep.ok && m.internal_extent_sum == 16 && m.internal_count == 2 &&
                  trie.total_bits() == 33; // mean 8 <= mean length - 1 = 10
        report(7, ok, "Theorem 1 mean-extent bound (toy: 8 <= 10; all corpora)");
    }

    // 8. P length proposition, asserted per corpus in the sweep.
    {
        PSet p = build_P(trie);
        uint64_t plen_sum = 0;
        for (const auto& k : p.keys) plen_sum += k.size();
        bool ok = rep.ok && plen_sum * trie.n() <= 3 * trie.total_bits() * p.keys.size();
        report(8, ok, "mean |P| length <= 3 * mean string length (all corpora)");
    }

    // 9. two_fattest brute-force agreement; strip/successor property suites.
    {
        bool ok = true;
        for (uint64_t x = 0; x <= 1024 && ok; ++x)
            for (uint64_t y = x; y <= 1024; ++y)
                if (two_fattest(x, y) != two_fattest_brute(x, y)) {
                    ok = false;
                    break;
                }
        std::mt19937_64 rng(97);
        for (int i = 0; i < 5000 && ok; ++i) {
            BitString x = random_bits(rng, 1 + rng() % 160);
            BitString s = strip_trailing_zeros(x);
            ok &= strip_trailing_zeros(s) == s && s.is_prefix_of(x) &&
                  (s.empty() || s.bit(s.size() - 1));
            if (!x.is_all_ones()) {
                BitString succ = successor_same_length(x);
                ok &= succ.size() == x.size() && x < succ;
            }
        }
        report(9, ok, "two_fattest == brute force to 1024; strip/successor suites");
    }

    // 10. Space scaling: SpaceOptimal core bits/key (zfast components + the
    // locator bit vector, excluding the Baseline-style explicit MMPH ranks)
    // over fixed-length corpora n = 2^12, lengths 2^6..2^12; the growth per
    // length doubling must shrink toward a log-like shape: after removing the
    // constant term fitted from the first two points, consecutive totals may
    // grow by at most 1.5x. Also the exact HT payload identity.
    {
        bool ok = true;
        const size_t n = size_t{1} << 12;
        std::vector<double> core;
        std::cout << "  len_bits core_bits/key rd delta_payload delta_overhead "
                     "locator_b mmph(excluded)\n";
        for (unsigned k = 6; k <= 12; ++k) {
            std::mt19937_64 rng(splitmix64(0xACCE55 + k));
            auto strings = make_fixed_length_set(rng, n, size_t{1} << k);
            CompactedTrie t(strings);
            IndexConfig cfg;
            cfg.seed = splitmix64(0x5CA1E ^ k);
            WeakPrefixIndex ix = WeakPrefixIndex::build_from_trie(t, cfg);
            const IndexStats& s = ix.stats();
            uint64_t core_bits = s.zfast_rd_bits + s.zfast_delta_payload_bits +
                                 s.zfast_delta_overhead_bits + s.locator_b_bits;
            core.push_back(double(core_bits) / double(n));
            std::cout << "  " << (1u << k) << " " << core.back() << " "
                      << s.zfast_rd_bits << " " << s.zfast_delta_payload_bits << " "
                      << s.zfast_delta_overhead_bits << " " << s.locator_b_bits << " "
                      << s.locator_mmph_bits << "\n";
            // HT payload identity: delta payload <= sum floor(log(|c|+1)).
            uint64_t bound = 0;
            for (const auto& nd : t.nodes())
                if (!nd.is_leaf) bound += bitlength(nd.extent_len - nd.name_len + 1) - 1;
            ok &= s.zfast_delta_payload_bits <= bound;
        }
        // The constant term comes from a linear fit through the first two
        // points, so the ratio law applies from the third point on.
        double c0 = std::max(0.0, 2.0 * core[0] - core[1]);
        for (size_t i = 2; i < core.size(); ++i)
            ok &= core[i] - c0 <= 1.5001 * (core[i - 1] - c0);
        report(10, ok, "sub-linear core-space scaling and HT payload bound");
    }

    // 11. Serialization: loaded indexes answer identically (also exercised on
    // every 20th sweep corpus); corrupted containers are rejected with tags.
    {
        bool ok = rep.ok;
        IndexConfig cfg;
        WeakPrefixIndex ix = WeakPrefixIndex::build(toy_set(), cfg);
        StringStore st = StringStore::build(toy_set());
        auto bytes = save_container(ix, st);
        auto [back, st2] = load_container(bytes);
        ok &= save_container(back, st2) == bytes;
        for (const auto& s : toy_set())
            for (size_t k = 1; k <= s.size(); ++k)
                ok &= back.weak_prefix_search(s.prefix(k)) ==
                      ix.weak_prefix_search(s.prefix(k));
        auto expect_tag = [&](std::vector<uint8_t> mutated, ContainerError::Tag tag) {
            try {
                load_container(mutated);
                return false;
            } catch (const ContainerError& e) {
                return e.tag == tag;
            }
        };
        auto bad_magic = bytes;
        bad_magic[0] = 'X';
        ok &= expect_tag(bad_magic, ContainerError::Tag::BadMagic);
        auto bad_version = bytes;
        bad_version[4] ^= 0xff;
        ok &= expect_tag(bad_version, ContainerError::Tag::VersionMismatch);
        std::vector<uint8_t> cut(bytes.begin(), bytes.begin() + bytes.size() / 2);
        ok &= expect_tag(cut, ContainerError::Tag::SectionCorrupt);
        auto flipped = bytes;
        flipped[72] ^= 1;
        ok &= expect_tag(flipped, ContainerError::Tag::SectionCorrupt);
        report(11, ok, "serialization round trip and tagged rejection");
    }

    // 12. Theorem 6 is a lower-bound proof with no artifact.
    std::cout << "Criterion 12: N/A - lower bound is a proof; explicitly not an "
                 "acceptance item\n";

    return failures == 0 ? 0 : 1;
}
