#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "wps/index.hpp"
#include "wps/verify.hpp"

namespace {

struct Options {
    std::string input;
    std::string index_path;
    std::string out;
    std::string variant = "space";
    unsigned c = 2;
    std::string seed_hex = "5eed5eed5eed5eed";
    std::string alphabet = "binary";
};

uint64_t parse_seed(const std::string& hex) {
    return std::stoull(hex, nullptr, 16);
}

wps::IndexVariant parse_variant(const std::string& v) {
    return v == "time" ? wps::IndexVariant::TimeOptimal
                       : wps::IndexVariant::SpaceOptimal;
}

wps::BitString parse_query(const std::string& text, const std::string& alphabet) {
    return alphabet == "byte" ? wps::BitString::from_bytes(text)
                              : wps::BitString::from_text(text);
}

int run_build(const Options& opt) {
    std::ifstream in(opt.input, std::ios::binary);
    if (!in) {
        std::cerr << "error: cannot open " << opt.input << "\n";
        return 2;
    }
    std::vector<std::pair<wps::BitString, size_t>> lines;
    std::string line;
    size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        try {
            lines.push_back({parse_query(line, opt.alphabet), lineno});
        } catch (const wps::InputError& e) {
            std::cerr << "error: line " << lineno << ": " << e.what() << "\n";
            return 2;
        }
    }
    if (lines.empty()) {
        std::cerr << "error: no input strings\n";
        return 2;
    }
    std::sort(lines.begin(), lines.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    for (size_t i = 0; i + 1 < lines.size(); ++i) {
        if (lines[i].first == lines[i + 1].first) {
            std::cerr << "error: duplicate strings at lines " << lines[i].second
                      << " and " << lines[i + 1].second << "\n";
            return 2;
        }
        if (lines[i].first.is_prefix_of(lines[i + 1].first)) {
            std::cerr << "error: line " << lines[i].second << " is a prefix of line "
                      << lines[i + 1].second << "\n";
            return 2;
        }
    }
    std::vector<wps::BitString> strings;
    for (auto& [s, ln] : lines) strings.push_back(std::move(s));
    wps::IndexConfig cfg;
    cfg.variant = parse_variant(opt.variant);
    cfg.c = opt.c;
    cfg.seed = parse_seed(opt.seed_hex);
    try {
        wps::WeakPrefixIndex ix = wps::WeakPrefixIndex::build(strings, cfg);
        wps::StringStore store = wps::StringStore::build(strings);
        if (!opt.out.empty()) {
            auto bytes = wps::save_container(ix, store);
            std::ofstream outf(opt.out, std::ios::binary);
            outf.write(reinterpret_cast<const char*>(bytes.data()),
                       static_cast<std::streamsize>(bytes.size()));
            if (!outf) {
                std::cerr << "error: cannot write " << opt.out << "\n";
                return 2;
            }
        }
        std::cout << ix.stats().render();
        return 0;
    } catch (const wps::BuildError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
}

int load_index(const Options& opt, wps::WeakPrefixIndex& ix, wps::StringStore& st) {
    std::ifstream in(opt.index_path, std::ios::binary);
    if (!in) {
        std::cerr << "error: cannot open " << opt.index_path << "\n";
        return 4;
    }
    std::vector<uint8_t> bytes{std::istreambuf_iterator<char>(in),
                               std::istreambuf_iterator<char>()};
    try {
        auto [i, s] = wps::load_container(bytes);
        ix = std::move(i);
        st = std::move(s);
        return 0;
    } catch (const wps::ContainerError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 4;
    }
}

std::string render_string(const wps::BitString& s, const std::string& alphabet) {
    return alphabet == "byte" && s.size() % 8 == 0 ? s.to_bytes() : s.to_text();
}

int run_query(const Options& opt, const std::string& type,
              const std::vector<std::string>& args) {
    wps::WeakPrefixIndex ix;
    wps::StringStore st;
    if (int rc = load_index(opt, ix, st)) return rc;
    if (type == "prefix") {
        auto [i, j] = ix.weak_prefix_search(parse_query(args.at(0), opt.alphabet));
        std::cout << i << " " << j << "\n";
    } else if (type == "count") {
        auto [cnt, probes] =
            wps::prefix_count(ix, st, parse_query(args.at(0), opt.alphabet));
        std::cout << cnt << " " << probes << "\n";
    } else if (type == "range") {
        auto [found, probes] =
            wps::range_report(ix, st, parse_query(args.at(0), opt.alphabet),
                              parse_query(args.at(1), opt.alphabet));
        for (const auto& s : found) std::cout << render_string(s, opt.alphabet) << "\n";
        std::cout << "probes=" << probes << "\n";
    } else {
        std::cerr << "error: unknown query type " << type << "\n";
        return 2;
    }
    return 0;
}

int run_verify_cmd(const wps::VerifyOptions& vopt) {
    wps::VerifyReport rep = wps::run_verify(vopt);
    std::cout << "corpora=" << rep.corpora << "\nprefix_queries=" << rep.prefix_queries
              << "\nrange_queries=" << rep.range_queries << "\nresult="
              << (rep.ok ? "pass" : "fail") << "\n";
    if (!rep.ok) {
        std::cout << "counterexample: " << rep.failure << "\n";
        return 1;
    }
    return 0;
}

int run_stats(const Options& opt) {
    wps::WeakPrefixIndex ix;
    wps::StringStore st;
    if (int rc = load_index(opt, ix, st)) return rc;
    std::cout << ix.stats().render();
    std::cout << "store_bits=" << st.size_in_bits() << "\n";
    return 0;
}

int run_bench(uint64_t seed) {
    std::cout << "n\tvariant\tzfast_bpk\tfastmap_bpk\tmmph_bpk\tb_bpk\ttotal_bpk\n";
    for (unsigned e = 10; e <= 14; ++e) {
        size_t n = size_t{1} << e;
        std::mt19937_64 rng(wps::splitmix64(seed + e));
        auto strings = wps::make_fixed_length_set(rng, n, 256);
        for (auto variant : {wps::IndexVariant::SpaceOptimal,
                             wps::IndexVariant::TimeOptimal}) {
            wps::IndexConfig cfg;
            cfg.variant = variant;
            cfg.seed = wps::splitmix64(seed ^ e);
            wps::WeakPrefixIndex ix = wps::WeakPrefixIndex::build(strings, cfg);
            const auto& s = ix.stats();
            double zfast = double(s.zfast_rd_bits + s.zfast_delta_payload_bits +
                                  s.zfast_delta_overhead_bits) /
                           double(n);
            double fm = double(s.fastmap_f_bits + s.fastmap_g_bits +
                               s.fastmap_names_bits) /
                        double(n);
            std::cout << n << "\t"
                      << (variant == wps::IndexVariant::SpaceOptimal ? "space" : "time")
                      << "\t" << zfast << "\t" << fm << "\t"
                      << double(s.locator_mmph_bits) / double(n) << "\t"
                      << double(s.locator_b_bits) / double(n) << "\t"
                      << double(s.total_component_bits) / double(n) << "\n";
        }
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"succinct weak prefix search"};
    app.require_subcommand(1);
    Options opt;
    wps::VerifyOptions vopt;

    auto* build = app.add_subcommand("build", "build an index from a string file");
    build->add_option("input", opt.input, "newline-delimited strings")->required();
    build->add_option("--out", opt.out, "output index path");
    build->add_option("--variant", opt.variant, "space|time");
    build->add_option("--c", opt.c, "fastmap level count");
    build->add_option("--seed", opt.seed_hex, "hex seed");
    build->add_option("--alphabet", opt.alphabet, "binary|byte");

    std::string qtype = "prefix";
    std::vector<std::string> qargs;
    auto* query = app.add_subcommand("query", "query a saved index");
    query->add_option("index", opt.index_path, "index file")->required();
    query->add_option("type", qtype, "prefix|count|range")->required();
    query->add_option("args", qargs, "query string(s)")->expected(1, 2);
    query->add_option("--alphabet", opt.alphabet, "binary|byte");

    auto* verify = app.add_subcommand("verify", "run the oracle-equivalence suite");
    verify->add_option("--corpora", vopt.corpora, "number of corpora");
    verify->add_option("--max-n", vopt.max_n, "maximum set size");
    verify->add_option("--max-len", vopt.max_len, "maximum string length (bits)");
    std::string vseed = "c0ffee";
    verify->add_option("--seed", vseed, "hex master seed");
    verify->add_flag("--inject-fault", vopt.inject_fault,
                     "corrupt each built index; expect a counterexample");

    auto* stats = app.add_subcommand("stats", "print stats of a saved index");
    stats->add_option("index", opt.index_path, "index file")->required();

    auto* bench = app.add_subcommand("bench", "bits/key table on synthetic corpora");
    std::string bseed = "b33f";
    bench->add_option("--seed", bseed, "hex seed");

    CLI11_PARSE(app, argc, argv);

    try {
        if (build->parsed()) return run_build(opt);
        if (query->parsed()) return run_query(opt, qtype, qargs);
        if (verify->parsed()) {
            vopt.master_seed = parse_seed(vseed);
            return run_verify_cmd(vopt);
        }
        if (stats->parsed()) return run_stats(opt);
        if (bench->parsed()) return run_bench(parse_seed(bseed));
    } catch (const wps::ContainerError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 4;
    } catch (const wps::BuildError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const wps::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
