#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "wps/verify.hpp"
#include "wps/zfast.hpp"

using namespace wps;

namespace {

const uint64_t kFpSeed = 0xfeedface;
const uint64_t kSeed = 0xbead;

CompactedTrie toy_trie() {
    return CompactedTrie({BitString::from_text("001001010"),
                          BitString::from_text("0010011010010"),
                          BitString::from_text("00100110101")});
}

uint64_t lookup_text(const HollowZFastPrefixTrie& z, const char* key) {
    BitString k = BitString::from_text(key);
    PrefixHasher h(k, z.fp_seed());
    return z.lookup(h, k.size());
}

} // namespace

TEST_CASE("toy internal-handle map") {
    CompactedTrie trie = toy_trie();
    HollowZFastPrefixTrie z = HollowZFastPrefixTrie::build(trie, kFpSeed, kSeed);
    CHECK(lookup_text(z, "0010") == 6);
    CHECK(lookup_text(z, "00100110") == 10);
}

TEST_CASE("toy infinity-key set") {
    CompactedTrie trie = toy_trie();
    HollowZFastPrefixTrie z = HollowZFastPrefixTrie::build(trie, kFpSeed, kSeed);
    for (const char* k : {"0", "00", "0010010", "00100101", "0010011",
                          "00100110100", "001001101001", "00100110101"})
        CHECK(lookup_text(z, k) == kInfinity);
    // ... and those eight plus the two internal handles are exactly the
    // handles and pseudohandles of the toy trie.
    std::set<std::string> keys;
    for (uint32_t v = 0; v < trie.nodes().size(); ++v) {
        NodeAttributes a = trie.node_attributes(v);
        keys.insert(a.handle.to_text());
        for (const auto& ph : a.pseudohandles) keys.insert(ph.to_text());
    }
    CHECK(keys == std::set<std::string>{"0", "00", "0010", "0010010", "00100101",
                                        "0010011", "00100110", "00100110100",
                                        "001001101001", "00100110101"});
}

TEST_CASE("toy find_exit_name traces") {
    CompactedTrie trie = toy_trie();
    HollowZFastPrefixTrie z = HollowZFastPrefixTrie::build(trie, kFpSeed, kSeed);
    CHECK(z.find_exit_name(BitString::from_text("0010011")).to_text() == "0010011");
    CHECK(z.find_exit_name(BitString::from_text("0")).empty());
    CHECK(z.find_exit_name(BitString::from_text("001001101001")).to_text() ==
          "00100110100");
    CHECK(z.find_exit_name(BitString::from_text("001001")).empty());
}

TEST_CASE("single string set") {
    CompactedTrie trie({BitString::from_text("101")});
    HollowZFastPrefixTrie z = HollowZFastPrefixTrie::build(trie, kFpSeed, kSeed);
    ZfastSizeReport r = z.size_report();
    CHECK(r.relative_dict_bits == 0); // no internal handles at all
    CHECK(r.delta_payload_bits == 0);
}

TEST_CASE("oracle equivalence, iteration bound, delta payload bound") {
    std::mt19937_64 rng(41);
    for (int trial = 0; trial < 25; ++trial) {
        size_t n = 2 + rng() % 150;
        std::vector<BitString> strings;
        switch (trial % 3) {
        case 0: strings = make_random_set(rng, n, 128); break;
        case 1: strings = make_shared_prefix_set(rng, n, 128); break;
        default: strings = make_fixed_length_set(rng, n, 16 + rng() % 100); break;
        }
        CompactedTrie trie(strings);
        HollowZFastPrefixTrie z = HollowZFastPrefixTrie::build(trie, rng(), rng());

        // T is exact over the whole key universe.
        uint64_t delta_bound = 0;
        for (uint32_t v = 0; v < trie.nodes().size(); ++v) {
            NodeAttributes a = trie.node_attributes(v);
            PrefixHasher h(a.extent, z.fp_seed());
            uint64_t want = trie.nodes()[v].is_leaf ? kInfinity
                                                    : trie.nodes()[v].extent_len;
            REQUIRE(z.lookup(h, a.handle.size()) == want);
            for (const auto& ph : a.pseudohandles)
                REQUIRE(z.lookup(h, ph.size()) == kInfinity);
            if (!trie.nodes()[v].is_leaf) {
                uint64_t clen = trie.nodes()[v].extent_len - trie.nodes()[v].name_len;
                delta_bound += bitlength(clen + 1) - 1;
                // Stored deltas never exceed |c|.
                CHECK(trie.nodes()[v].extent_len - a.handle.size() <= clen);
            }
        }
        CHECK(z.size_report().delta_payload_bits <= delta_bound);

        // Exit names match the oracle on every prefix of every string.
        for (const auto& s : strings) {
            for (size_t k = 1; k <= s.size(); ++k) {
                BitString p = s.prefix(k);
                ZfastInstr instr;
                BitString got = z.find_exit_name(p, &instr);
                REQUIRE(got == trie.name(trie.exit_node_oracle(p)));
                REQUIRE(instr.iterations <= bitlength(p.size()));
            }
        }
    }
}

TEST_CASE("out-of-contract queries stay bounded") {
    CompactedTrie trie = toy_trie();
    HollowZFastPrefixTrie z = HollowZFastPrefixTrie::build(trie, kFpSeed, kSeed);
    std::mt19937_64 rng(43);
    for (int q = 0; q < 2000; ++q) {
        BitString p = random_bits(rng, 1 + rng() % 64);
        ZfastInstr instr;
        BitString name = z.find_exit_name(p, &instr);
        CHECK(name.size() <= p.size());
        CHECK(instr.iterations <= bitlength(p.size()));
    }
}

TEST_CASE("serialization round trip") {
    CompactedTrie trie = toy_trie();
    HollowZFastPrefixTrie z = HollowZFastPrefixTrie::build(trie, kFpSeed, kSeed);
    ByteWriter w;
    z.save(w);
    auto bytes = w.take();
    ByteReader r(bytes);
    HollowZFastPrefixTrie back = HollowZFastPrefixTrie::load(r);
    CHECK(lookup_text(back, "0010") == 6);
    CHECK(lookup_text(back, "00100110") == 10);
    CHECK(lookup_text(back, "0010011") == kInfinity);
    CHECK(back.find_exit_name(BitString::from_text("0010011")).to_text() ==
          "0010011");
    ByteWriter w2;
    back.save(w2);
    CHECK(w2.take() == bytes);
}

TEST_CASE("corrupt hook breaks an answer") {
    CompactedTrie trie = toy_trie();
    HollowZFastPrefixTrie z = HollowZFastPrefixTrie::build(trie, kFpSeed, kSeed);
    REQUIRE(z.corrupt());
    bool changed = lookup_text(z, "0010") != 6 || lookup_text(z, "00100110") != 10;
    CHECK(changed);
}
