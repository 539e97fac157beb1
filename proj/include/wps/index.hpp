#pragma once

#include <chrono>
#include <cstdint>
#include <cstring>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "wps/fastmap.hpp"
#include "wps/rlocator.hpp"
#include "wps/store.hpp"
#include "wps/trie.hpp"
#include "wps/zfast.hpp"

namespace wps {

enum class IndexVariant : uint8_t { SpaceOptimal, TimeOptimal };

struct IndexConfig {
    IndexVariant variant = IndexVariant::SpaceOptimal;
    unsigned c = 2; // fastmap levels (TimeOptimal only)
    uint64_t seed = 0x5eed5eed5eed5eedull;
    // SpaceOptimal pairs with the compact LengthSplit locator, TimeOptimal
    // with the Baseline locator, unless overridden.
    bool mmph_override = false;
    MmphVariant mmph = MmphVariant::Baseline;
};

struct IndexStats {
    uint64_t n = 0;
    uint64_t total_bits = 0;
    uint64_t max_len = 0;
    uint64_t trie_measure = 0;
    uint64_t hollow_measure = 0;
    uint8_t variant = 0;
    uint32_t c = 0;
    uint64_t seed = 0;
    uint64_t zfast_rd_bits = 0;
    uint64_t zfast_delta_payload_bits = 0;
    uint64_t zfast_delta_overhead_bits = 0;
    uint64_t fastmap_f_bits = 0;
    uint64_t fastmap_g_bits = 0;
    uint64_t fastmap_names_bits = 0;
    uint64_t fastmap_key_count = 0;
    uint64_t locator_mmph_bits = 0;
    uint64_t locator_b_bits = 0;
    uint64_t total_component_bits = 0;
    uint64_t build_ms = 0; // wall time; excluded from equality and serialization

    friend bool operator==(const IndexStats& a, const IndexStats& b) {
        return a.n == b.n && a.total_bits == b.total_bits && a.max_len == b.max_len &&
               a.trie_measure == b.trie_measure &&
               a.hollow_measure == b.hollow_measure && a.variant == b.variant &&
               a.c == b.c && a.seed == b.seed && a.zfast_rd_bits == b.zfast_rd_bits &&
               a.zfast_delta_payload_bits == b.zfast_delta_payload_bits &&
               a.zfast_delta_overhead_bits == b.zfast_delta_overhead_bits &&
               a.fastmap_f_bits == b.fastmap_f_bits &&
               a.fastmap_g_bits == b.fastmap_g_bits &&
               a.fastmap_names_bits == b.fastmap_names_bits &&
               a.fastmap_key_count == b.fastmap_key_count &&
               a.locator_mmph_bits == b.locator_mmph_bits &&
               a.locator_b_bits == b.locator_b_bits &&
               a.total_component_bits == b.total_component_bits;
    }

    std::string render() const {
        std::ostringstream out;
        out << "n=" << n << "\ntotal_bits=" << total_bits << "\nmax_len=" << max_len
            << "\navg_len=" << total_bits << "/" << n << "\nT=" << trie_measure
            << "\nHT=" << hollow_measure << "\nvariant="
            << (variant == 0 ? "space" : "time") << "\nc=" << c << "\nseed=" << seed
            << "\nzfast_rd_bits=" << zfast_rd_bits << "\nzfast_delta_payload_bits="
            << zfast_delta_payload_bits << "\nzfast_delta_overhead_bits="
            << zfast_delta_overhead_bits << "\nfastmap_f_bits=" << fastmap_f_bits
            << "\nfastmap_g_bits=" << fastmap_g_bits << "\nfastmap_names_bits="
            << fastmap_names_bits << "\nfastmap_key_count=" << fastmap_key_count
            << "\nlocator_mmph_bits=" << locator_mmph_bits << "\nlocator_b_bits="
            << locator_b_bits << "\ntotal_component_bits=" << total_component_bits
            << "\nbuild_ms=" << build_ms << "\n";
        return out.str();
    }

    void save(ByteWriter& w) const {
        w.u64(n);
        w.u64(total_bits);
        w.u64(max_len);
        w.u64(trie_measure);
        w.u64(hollow_measure);
        w.u8(variant);
        w.u32(c);
        w.u64(seed);
        w.u64(zfast_rd_bits);
        w.u64(zfast_delta_payload_bits);
        w.u64(zfast_delta_overhead_bits);
        w.u64(fastmap_f_bits);
        w.u64(fastmap_g_bits);
        w.u64(fastmap_names_bits);
        w.u64(fastmap_key_count);
        w.u64(locator_mmph_bits);
        w.u64(locator_b_bits);
        w.u64(total_component_bits);
    }

    static IndexStats load(ByteReader& r) {
        IndexStats s;
        s.n = r.u64();
        s.total_bits = r.u64();
        s.max_len = r.u64();
        s.trie_measure = r.u64();
        s.hollow_measure = r.u64();
        s.variant = r.u8();
        s.c = r.u32();
        s.seed = r.u64();
        s.zfast_rd_bits = r.u64();
        s.zfast_delta_payload_bits = r.u64();
        s.zfast_delta_overhead_bits = r.u64();
        s.fastmap_f_bits = r.u64();
        s.fastmap_g_bits = r.u64();
        s.fastmap_names_bits = r.u64();
        s.fastmap_key_count = r.u64();
        s.locator_mmph_bits = r.u64();
        s.locator_b_bits = r.u64();
        s.total_component_bits = r.u64();
        return s;
    }
};

// Weak prefix search: exit-name structure (z-fast trie or constant-time map)
// composed with the range locator. Answers are exact whenever p prefixes
// some string of S; otherwise some interval 0 <= i <= j <= n comes back.
class WeakPrefixIndex {
public:
    WeakPrefixIndex() = default;

    static WeakPrefixIndex build(const std::vector<BitString>& strings,
                                 const IndexConfig& cfg) {
        auto t0 = std::chrono::steady_clock::now();
        CompactedTrie trie(strings);
        WeakPrefixIndex ix = build_from_trie(trie, cfg);
        ix.stats_.build_ms = static_cast<uint64_t>(
            std::chrono::duration_cast<std::chrono::milliseconds>(
                std::chrono::steady_clock::now() - t0)
                .count());
        return ix;
    }

    static WeakPrefixIndex build_from_trie(const CompactedTrie& trie,
                                           const IndexConfig& cfg) {
        WeakPrefixIndex ix;
        ix.variant_ = cfg.variant;
        ix.n_ = trie.n();
        ix.fp_seed_ = splitmix64(cfg.seed ^ 0xf1ea5eed1b873593ull);
        TrieMeasures m = trie.measures();
        ix.stats_.n = trie.n();
        ix.stats_.total_bits = trie.total_bits();
        ix.stats_.max_len = trie.max_len();
        ix.stats_.trie_measure = m.trie_measure;
        ix.stats_.hollow_measure = m.hollow_measure;
        ix.stats_.variant = static_cast<uint8_t>(cfg.variant);
        ix.stats_.c = cfg.variant == IndexVariant::TimeOptimal ? cfg.c : 0;
        ix.stats_.seed = cfg.seed;
        if (ix.n_ == 1) {
            ix.finish_stats();
            return ix; // every valid prefix answers [0..1)
        }
        if (cfg.variant == IndexVariant::SpaceOptimal) {
            ix.zfast_ = HollowZFastPrefixTrie::build(trie, ix.fp_seed_,
                                                     splitmix64(cfg.seed ^ 0x2545ull));
            ZfastSizeReport zr = ix.zfast_.size_report();
            ix.stats_.zfast_rd_bits = zr.relative_dict_bits;
            ix.stats_.zfast_delta_payload_bits = zr.delta_payload_bits;
            ix.stats_.zfast_delta_overhead_bits = zr.delta_overhead_bits;
        } else {
            ix.fastmap_ = ConstTimeMap::build(trie, cfg.c, ix.fp_seed_,
                                              splitmix64(cfg.seed ^ 0x9e37ull));
            FastmapSizeReport fr = ix.fastmap_.size_report();
            ix.stats_.fastmap_f_bits = fr.f_bits;
            ix.stats_.fastmap_g_bits = fr.g_bits;
            ix.stats_.fastmap_names_bits = fr.names_bits;
            ix.stats_.fastmap_key_count = fr.key_count;
        }
        MmphVariant mv = cfg.mmph_override
                             ? cfg.mmph
                             : (cfg.variant == IndexVariant::SpaceOptimal
                                    ? MmphVariant::LengthSplit
                                    : MmphVariant::Baseline);
        ix.locator_ = RangeLocator::build(trie, mv, ix.fp_seed_,
                                          splitmix64(cfg.seed ^ 0x7f4aull));
        RangeLocatorSizeReport lr = ix.locator_.size_report();
        ix.stats_.locator_mmph_bits = lr.mmph_bits;
        ix.stats_.locator_b_bits = lr.b_bits;
        ix.finish_stats();
        return ix;
    }

    std::pair<uint64_t, uint64_t> weak_prefix_search(const BitString& p) const {
        return query(p, nullptr, nullptr);
    }

    // Instrumented form for the bound checks; the pointers may be null.
    std::pair<uint64_t, uint64_t> query(const BitString& p, ZfastInstr* zi,
                                        FastmapStats* fs) const {
        if (n_ == 1) return {0, 1};
        if (p.empty()) return {0, n_};
        BitString name = variant_ == IndexVariant::SpaceOptimal
                             ? zfast_.find_exit_name(p, zi)
                             : fastmap_.find_exit_name(p, fs);
        return locator_.locate(name);
    }

    IndexVariant variant() const { return variant_; }
    uint64_t n() const { return n_; }
    const IndexStats& stats() const { return stats_; }

    // Test hook: corrupt the exit-name structure.
    bool corrupt() {
        if (n_ == 1) return false;
        if (variant_ == IndexVariant::SpaceOptimal) return zfast_.corrupt();
        return false;
    }

    void save(ByteWriter& w) const {
        w.u8(static_cast<uint8_t>(variant_));
        w.u64(n_);
        w.u64(fp_seed_);
        stats_.save(w);
        if (n_ == 1) return;
        if (variant_ == IndexVariant::SpaceOptimal)
            zfast_.save(w);
        else
            fastmap_.save(w);
        locator_.save(w);
    }

    static WeakPrefixIndex load(ByteReader& r) {
        WeakPrefixIndex ix;
        ix.variant_ = static_cast<IndexVariant>(r.u8());
        ix.n_ = r.u64();
        ix.fp_seed_ = r.u64();
        ix.stats_ = IndexStats::load(r);
        if (ix.n_ == 1) return ix;
        if (ix.variant_ == IndexVariant::SpaceOptimal)
            ix.zfast_ = HollowZFastPrefixTrie::load(r);
        else
            ix.fastmap_ = ConstTimeMap::load(r);
        ix.locator_ = RangeLocator::load(r);
        return ix;
    }

private:
    void finish_stats() {
        stats_.total_component_bits =
            stats_.zfast_rd_bits + stats_.zfast_delta_payload_bits +
            stats_.zfast_delta_overhead_bits + stats_.fastmap_f_bits +
            stats_.fastmap_g_bits + stats_.fastmap_names_bits +
            stats_.locator_mmph_bits + stats_.locator_b_bits;
    }

    IndexVariant variant_ = IndexVariant::SpaceOptimal;
    uint64_t n_ = 0;
    uint64_t fp_seed_ = 0;
    HollowZFastPrefixTrie zfast_;
    ConstTimeMap fastmap_;
    RangeLocator locator_;
    IndexStats stats_;
};

// ---- serialized container ----------------------------------------------
// Layout: "WPS1", u16 version, u16 section count, then a table of
// (8-byte name, u64 offset, u64 length, u64 fnv1a checksum); section bodies
// are 8-byte aligned.

inline constexpr uint16_t kContainerVersion = 1;

namespace detail {

struct Section {
    char name[8];
    std::vector<uint8_t> body;
};

inline std::vector<uint8_t> pack_container(std::vector<Section> sections) {
    ByteWriter head;
    head.raw("WPS1", 4);
    head.u16(kContainerVersion);
    head.u16(static_cast<uint16_t>(sections.size()));
    size_t table_bytes = sections.size() * (8 + 8 + 8 + 8);
    size_t offset = 8 + table_bytes;
    offset = (offset + 7) & ~size_t{7};
    for (const auto& s : sections) {
        head.raw(s.name, 8);
        head.u64(offset);
        head.u64(s.body.size());
        head.u64(fnv1a64(s.body));
        offset += (s.body.size() + 7) & ~size_t{7};
    }
    head.pad_to(8);
    std::vector<uint8_t> out = head.take();
    for (const auto& s : sections) {
        out.insert(out.end(), s.body.begin(), s.body.end());
        while (out.size() % 8) out.push_back(0);
    }
    return out;
}

inline std::vector<Section> unpack_container(std::span<const uint8_t> bytes) {
    ByteReader r(bytes);
    char magic[4];
    r.raw(magic, 4);
    if (std::memcmp(magic, "WPS1", 4) != 0)
        throw ContainerError(ContainerError::Tag::BadMagic, "bad container magic");
    uint16_t version = r.u16();
    if (version != kContainerVersion)
        throw ContainerError(ContainerError::Tag::VersionMismatch,
                             "unsupported container version " + std::to_string(version));
    uint16_t count = r.u16();
    std::vector<Section> sections(count);
    for (auto& s : sections) {
        r.raw(s.name, 8);
        uint64_t off = r.u64(), len = r.u64(), sum = r.u64();
        if (off > bytes.size() || len > bytes.size() - off)
            throw ContainerError(ContainerError::Tag::SectionCorrupt,
                                 "section extends past end of container");
        s.body.assign(bytes.begin() + off, bytes.begin() + off + len);
        if (fnv1a64(s.body) != sum)
            throw ContainerError(ContainerError::Tag::SectionCorrupt,
                                 "section checksum mismatch");
    }
    return sections;
}

} // namespace detail

inline std::vector<uint8_t> save_container(const WeakPrefixIndex& index,
                                           const StringStore& store) {
    detail::Section ix{{'i', 'n', 'd', 'e', 'x', 0, 0, 0}, {}};
    detail::Section st{{'s', 't', 'o', 'r', 'e', 0, 0, 0}, {}};
    ByteWriter wi;
    index.save(wi);
    ix.body = wi.take();
    ByteWriter ws;
    store.save(ws);
    st.body = ws.take();
    return detail::pack_container({ix, st});
}

// `expect` checks the stored variant; a mismatch is a tagged container error
// so callers can distinguish "wrong file flavor" from corruption.
inline std::pair<WeakPrefixIndex, StringStore>
load_container(std::span<const uint8_t> bytes,
               std::optional<IndexVariant> expect = std::nullopt) {
    auto sections = detail::unpack_container(bytes);
    WeakPrefixIndex ix;
    StringStore st;
    bool got_ix = false, got_st = false;
    for (const auto& s : sections) {
        ByteReader r(s.body);
        if (std::memcmp(s.name, "index", 5) == 0) {
            ix = WeakPrefixIndex::load(r);
            got_ix = true;
        } else if (std::memcmp(s.name, "store", 5) == 0) {
            st = StringStore::load(r);
            got_st = true;
        }
    }
    if (!got_ix || !got_st)
        throw ContainerError(ContainerError::Tag::SectionCorrupt,
                             "missing index or store section");
    if (expect && ix.variant() != *expect)
        throw ContainerError(ContainerError::Tag::VersionMismatch,
                             "container holds a different index variant");
    return {std::move(ix), std::move(st)};
}

} // namespace wps
