#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "wps/index.hpp"
#include "wps/verify.hpp"

using namespace wps;

namespace {

std::vector<BitString> toy_set() {
    return {BitString::from_text("001001010"), BitString::from_text("0010011010010"),
            BitString::from_text("00100110101")};
}

WeakPrefixIndex build_toy(IndexVariant v, unsigned c = 2) {
    IndexConfig cfg;
    cfg.variant = v;
    cfg.c = c;
    return WeakPrefixIndex::build(toy_set(), cfg);
}

} // namespace

TEST_CASE("toy queries, both variants") {
    for (auto v : {IndexVariant::SpaceOptimal, IndexVariant::TimeOptimal}) {
        WeakPrefixIndex ix = build_toy(v);
        CHECK(ix.weak_prefix_search(BitString::from_text("0010011")) ==
              std::pair<uint64_t, uint64_t>{1, 3});
        CHECK(ix.weak_prefix_search(BitString::from_text("001001")) ==
              std::pair<uint64_t, uint64_t>{0, 3});
        CHECK(ix.weak_prefix_search(BitString::from_text("00100101")) ==
              std::pair<uint64_t, uint64_t>{0, 1});
        CHECK(ix.weak_prefix_search(BitString{}) ==
              std::pair<uint64_t, uint64_t>{0, 3});
    }
}

TEST_CASE("variant agreement on all prefixes of the toy set") {
    WeakPrefixIndex space = build_toy(IndexVariant::SpaceOptimal);
    WeakPrefixIndex time2 = build_toy(IndexVariant::TimeOptimal, 2);
    WeakPrefixIndex time3 = build_toy(IndexVariant::TimeOptimal, 3);
    size_t prefixes = 0;
    for (const auto& s : toy_set())
        for (size_t k = 1; k <= s.size(); ++k) {
            BitString p = s.prefix(k);
            auto want = space.weak_prefix_search(p);
            CHECK(time2.weak_prefix_search(p) == want);
            CHECK(time3.weak_prefix_search(p) == want);
            ++prefixes;
        }
    CHECK(prefixes == 33);
}

TEST_CASE("single string shortcut") {
    IndexConfig cfg;
    WeakPrefixIndex ix = WeakPrefixIndex::build({BitString::from_text("101")}, cfg);
    for (const char* p : {"1", "10", "101"})
        CHECK(ix.weak_prefix_search(BitString::from_text(p)) ==
              std::pair<uint64_t, uint64_t>{0, 1});
    CHECK(ix.stats().hollow_measure == 0);
    // Round trip of the shortcut form.
    StringStore st = StringStore::build({BitString::from_text("101")});
    auto bytes = save_container(ix, st);
    auto [back, st2] = load_container(bytes);
    CHECK(back.weak_prefix_search(BitString::from_text("10")) ==
          std::pair<uint64_t, uint64_t>{0, 1});
    CHECK(st2.get(0).to_text() == "101");
}

TEST_CASE("stats") {
    WeakPrefixIndex ix = build_toy(IndexVariant::SpaceOptimal);
    const IndexStats& s = ix.stats();
    CHECK(s.n == 3);
    CHECK(s.total_bits == 33);
    CHECK(s.trie_measure == 17);
    CHECK(s.hollow_measure == 6);
    // Accounting identity.
    CHECK(s.total_component_bits ==
          s.zfast_rd_bits + s.zfast_delta_payload_bits + s.zfast_delta_overhead_bits +
              s.fastmap_f_bits + s.fastmap_g_bits + s.fastmap_names_bits +
              s.locator_mmph_bits + s.locator_b_bits);
    CHECK(s.fastmap_f_bits == 0); // space variant has no fastmap
    // Determinism: equal seeds give equal stats.
    WeakPrefixIndex again = build_toy(IndexVariant::SpaceOptimal);
    CHECK(again.stats() == s);
    // Rendered form carries the headline measures.
    std::string text = s.render();
    CHECK(text.find("n=3\n") != std::string::npos);
    CHECK(text.find("T=17\n") != std::string::npos);
    CHECK(text.find("HT=6\n") != std::string::npos);
    CHECK(text.find("variant=space\n") != std::string::npos);
}

TEST_CASE("container round trip is byte-identical") {
    WeakPrefixIndex ix = build_toy(IndexVariant::SpaceOptimal);
    StringStore st = StringStore::build(toy_set());
    auto bytes = save_container(ix, st);
    auto [back, st2] = load_container(bytes);
    CHECK(save_container(back, st2) == bytes);
    CHECK(back.stats() == ix.stats());
    for (const auto& s : toy_set())
        for (size_t k = 1; k <= s.size(); ++k)
            CHECK(back.weak_prefix_search(s.prefix(k)) ==
                  ix.weak_prefix_search(s.prefix(k)));
}

TEST_CASE("container error tags") {
    WeakPrefixIndex ix = build_toy(IndexVariant::SpaceOptimal);
    StringStore st = StringStore::build(toy_set());
    auto bytes = save_container(ix, st);

    // Truncation.
    std::vector<uint8_t> cut(bytes.begin(), bytes.begin() + bytes.size() / 2);
    try {
        load_container(cut);
        FAIL("truncated container accepted");
    } catch (const ContainerError& e) {
        CHECK(e.tag == ContainerError::Tag::SectionCorrupt);
    }

    // Bad magic.
    auto bad = bytes;
    bad[0] = 'X';
    try {
        load_container(bad);
        FAIL("bad magic accepted");
    } catch (const ContainerError& e) {
        CHECK(e.tag == ContainerError::Tag::BadMagic);
    }

    // Unsupported version.
    auto vbad = bytes;
    vbad[4] ^= 0xff;
    try {
        load_container(vbad);
        FAIL("bad version accepted");
    } catch (const ContainerError& e) {
        CHECK(e.tag == ContainerError::Tag::VersionMismatch);
    }

    // Flipped byte in the first section body breaks its checksum.
    auto flip = bytes;
    flip[72] ^= 0x01; // just past the 72-byte header of a two-section file
    try {
        load_container(flip);
        FAIL("corrupted section accepted");
    } catch (const ContainerError& e) {
        CHECK(e.tag == ContainerError::Tag::SectionCorrupt);
    }

    // Cross-variant expectation.
    try {
        load_container(bytes, IndexVariant::TimeOptimal);
        FAIL("cross-variant load accepted");
    } catch (const ContainerError& e) {
        CHECK(e.tag == ContainerError::Tag::VersionMismatch);
    }
    // Matching expectation loads fine.
    auto [ok_ix, ok_st] = load_container(bytes, IndexVariant::SpaceOptimal);
    CHECK(ok_ix.variant() == IndexVariant::SpaceOptimal);
}

TEST_CASE("corrupt hook produces a detectable mismatch") {
    std::mt19937_64 rng(73);
    auto strings = make_fixed_length_set(rng, 64, 40);
    IndexConfig cfg;
    WeakPrefixIndex ix = WeakPrefixIndex::build(strings, cfg);
    CompactedTrie trie(strings);
    REQUIRE(ix.corrupt());
    bool mismatch = false;
    for (const auto& s : strings)
        for (size_t k = 1; k <= s.size() && !mismatch; ++k) {
            auto [lo, hi] = trie.weak_prefix_oracle(s.prefix(k));
            mismatch = ix.weak_prefix_search(s.prefix(k)) !=
                       std::pair<uint64_t, uint64_t>{lo, hi};
        }
    CHECK(mismatch);
}

TEST_CASE("oracle equivalence across mixed corpora, loaded and in-memory") {
    std::mt19937_64 rng(79);
    for (int trial = 0; trial < 12; ++trial) {
        size_t n = 1 + rng() % 128;
        auto strings = trial % 2 ? make_random_set(rng, n, 80)
                                 : make_shared_prefix_set(rng, n, 80);
        CompactedTrie trie(strings);
        IndexConfig scfg, tcfg;
        scfg.seed = rng();
        tcfg.variant = IndexVariant::TimeOptimal;
        tcfg.c = 2 + trial % 2;
        tcfg.seed = rng();
        WeakPrefixIndex space = WeakPrefixIndex::build_from_trie(trie, scfg);
        WeakPrefixIndex time = WeakPrefixIndex::build_from_trie(trie, tcfg);
        StringStore st = StringStore::build(trie.strings());
        auto bytes = save_container(space, st);
        auto [loaded, lst] = load_container(bytes);
        for (const auto& s : trie.strings())
            for (size_t k = 1; k <= s.size(); ++k) {
                BitString p = s.prefix(k);
                auto [lo, hi] = trie.weak_prefix_oracle(p);
                std::pair<uint64_t, uint64_t> want{lo, hi};
                REQUIRE(space.weak_prefix_search(p) == want);
                REQUIRE(time.weak_prefix_search(p) == want);
                REQUIRE(loaded.weak_prefix_search(p) == want);
            }
    }
}
