#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "wps/index.hpp"
#include "wps/store.hpp"
#include "wps/verify.hpp"

using namespace wps;

namespace {

std::vector<BitString> toy_set() {
    return {BitString::from_text("001001010"), BitString::from_text("0010011010010"),
            BitString::from_text("00100110101")};
}

struct Fixture {
    WeakPrefixIndex ix;
    StringStore st;
    Fixture() {
        IndexConfig cfg;
        ix = WeakPrefixIndex::build(toy_set(), cfg);
        st = StringStore::build(toy_set());
    }
};

} // namespace

TEST_CASE("StringStore get") {
    StringStore st = StringStore::build(toy_set());
    CHECK(st.n() == 3);
    uint64_t probes = 0;
    CHECK(st.get(0, &probes).to_text() == "001001010");
    CHECK(st.get(1, &probes).to_text() == "0010011010010");
    CHECK(st.get(2, &probes).to_text() == "00100110101");
    CHECK(probes == 3);
    CHECK_THROWS_AS(st.get(3), InputError);
    ByteWriter w;
    st.save(w);
    auto bytes = w.take();
    ByteReader r(bytes);
    StringStore back = StringStore::load(r);
    CHECK(back.get(1).to_text() == "0010011010010");
}

TEST_CASE("prefix_search probe laws on the toy set") {
    Fixture f;
    auto [hit, p1] = prefix_search(f.ix, f.st, BitString::from_text("0010011"));
    REQUIRE(hit.size() == 2);
    CHECK(hit[0].to_text() == "0010011010010");
    CHECK(hit[1].to_text() == "00100110101");
    CHECK(p1 == 2); // match => probes = t exactly

    auto [miss, p2] = prefix_search(f.ix, f.st, BitString::from_text("11"));
    CHECK(miss.empty());
    CHECK(p2 <= 1); // no match => at most one verification probe

    auto [all, p3] = prefix_search(f.ix, f.st, BitString::from_text("001001"));
    CHECK(all.size() == 3);
    CHECK(p3 == 3);
}

TEST_CASE("prefix_count probe laws on the toy set") {
    Fixture f;
    auto [c1, p1] = prefix_count(f.ix, f.st, BitString::from_text("0010011"));
    CHECK(c1 == 2);
    CHECK(p1 == 1);
    auto [c2, p2] = prefix_count(f.ix, f.st, BitString::from_text("0"));
    CHECK(c2 == 3);
    CHECK(p2 == 1);
    auto [c3, p3] = prefix_count(f.ix, f.st, BitString::from_text("1"));
    CHECK(c3 == 0);
    CHECK(p3 <= 1);
}

TEST_CASE("range_report probe laws on the toy set") {
    Fixture f;
    auto [r1, p1] = range_report(f.ix, f.st, BitString::from_text("001001010"),
                                 BitString::from_text("00100110101"));
    CHECK(r1.size() == 3);
    CHECK(p1 <= 5); // K + 2 with K = 3

    auto [r2, p2] = range_report(f.ix, f.st, BitString::from_text("0010011"),
                                 BitString::from_text("00100111111111"));
    REQUIRE(r2.size() == 2); // a prefixes b: K + 1 law
    CHECK(r2[0].to_text() == "0010011010010");
    CHECK(p2 <= 3);

    auto [r3, p3] = range_report(f.ix, f.st, BitString::from_text("1"),
                                 BitString::from_text("11"));
    CHECK(r3.empty());
    CHECK(p3 <= 2);

    CHECK_THROWS_AS(range_report(f.ix, f.st, BitString::from_text("1"),
                                 BitString::from_text("0")),
                    InputError);
}

TEST_CASE("range_empty probe law on the toy set") {
    Fixture f;
    auto [e1, p1] = range_empty(f.ix, f.st, BitString::from_text("001001010"),
                                BitString::from_text("00100110101"));
    CHECK(!e1);
    CHECK(p1 <= 2);
    auto [e2, p2] = range_empty(f.ix, f.st, BitString::from_text("1"),
                                BitString::from_text("11"));
    CHECK(e2);
    CHECK(p2 <= 2);
    CHECK_THROWS_AS(range_empty(f.ix, f.st, BitString::from_text("1"),
                                BitString::from_text("0")),
                    InputError);
}

TEST_CASE("probe laws on random corpora") {
    std::mt19937_64 rng(83);
    for (int trial = 0; trial < 15; ++trial) {
        size_t n = 1 + rng() % 100;
        auto strings = trial % 2 ? make_random_set(rng, n, 64)
                                 : make_fixed_length_set(rng, n, 12 + rng() % 40);
        CompactedTrie trie(strings);
        IndexConfig cfg;
        cfg.seed = rng();
        WeakPrefixIndex ix = WeakPrefixIndex::build_from_trie(trie, cfg);
        StringStore st = StringStore::build(trie.strings());

        for (const auto& s : strings)
            for (size_t k = 1; k <= s.size(); k += 3) {
                BitString p = s.prefix(k);
                auto [lo, hi] = trie.weak_prefix_oracle(p);
                auto [found, probes] = prefix_search(ix, st, p);
                REQUIRE(found.size() == uint64_t{hi} - lo);
                REQUIRE(probes == uint64_t{hi} - lo); // exactly t on a match
                auto [cnt, cprobes] = prefix_count(ix, st, p);
                REQUIRE(cnt == uint64_t{hi} - lo);
                REQUIRE(cprobes <= 1);
            }

        for (int q = 0; q < 40; ++q) {
            BitString a = random_bits(rng, 1 + rng() % 48);
            BitString b = random_bits(rng, 1 + rng() % 48);
            if (b < a) std::swap(a, b);
            std::vector<BitString> want;
            for (const auto& s : strings)
                if (!(s < a) && !(b < s)) want.push_back(s);
            auto [got, probes] = range_report(ix, st, a, b);
            REQUIRE(got == want);
            REQUIRE(probes <= want.size() + (lcp(a, b) == a.size() ? 1 : 2));
            auto [empty, eprobes] = range_empty(ix, st, a, b);
            REQUIRE(empty == want.empty());
            REQUIRE(eprobes <= 2);
        }
    }
}
