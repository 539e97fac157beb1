#pragma once

#include <cstdint>
#include <cstring>
#include <span>
#include <string>
#include <vector>

#include "wps/errors.hpp"

namespace wps {

inline uint64_t fnv1a64(std::span<const uint8_t> data) {
    uint64_t h = 0xcbf29ce484222325ull;
    for (uint8_t b : data) {
        h ^= b;
        h *= 0x100000001b3ull;
    }
    return h;
}

// Little-endian byte sink.
class ByteWriter {
public:
    void u8(uint8_t v) { buf_.push_back(v); }
    void u16(uint16_t v) { put_le(v, 2); }
    void u32(uint32_t v) { put_le(v, 4); }
    void u64(uint64_t v) { put_le(v, 8); }

    void raw(const void* p, size_t n) {
        const auto* b = static_cast<const uint8_t*>(p);
        buf_.insert(buf_.end(), b, b + n);
    }

    void u64vec(const std::vector<uint64_t>& v) {
        u64(v.size());
        for (uint64_t x : v) u64(x);
    }

    void pad_to(size_t alignment) {
        while (buf_.size() % alignment) buf_.push_back(0);
    }

    size_t size() const { return buf_.size(); }
    const std::vector<uint8_t>& bytes() const { return buf_; }
    std::vector<uint8_t> take() { return std::move(buf_); }

private:
    void put_le(uint64_t v, int n) {
        for (int i = 0; i < n; ++i) buf_.push_back(static_cast<uint8_t>(v >> (8 * i)));
    }
    std::vector<uint8_t> buf_;
};

// Bounds-checked little-endian reader; overruns surface as SectionCorrupt.
class ByteReader {
public:
    explicit ByteReader(std::span<const uint8_t> data) : data_(data) {}

    uint8_t u8() { return static_cast<uint8_t>(get_le(1)); }
    uint16_t u16() { return static_cast<uint16_t>(get_le(2)); }
    uint32_t u32() { return static_cast<uint32_t>(get_le(4)); }
    uint64_t u64() { return get_le(8); }

    void raw(void* p, size_t n) {
        need(n);
        std::memcpy(p, data_.data() + pos_, n);
        pos_ += n;
    }

    std::vector<uint64_t> u64vec() {
        uint64_t n = u64();
        if (n > remaining() / 8)
            throw ContainerError(ContainerError::Tag::SectionCorrupt,
                                 "u64vec length exceeds section size");
        std::vector<uint64_t> v(n);
        for (auto& x : v) x = u64();
        return v;
    }

    size_t remaining() const { return data_.size() - pos_; }
    size_t pos() const { return pos_; }
    void skip(size_t n) { need(n); pos_ += n; }

private:
    void need(size_t n) const {
        if (n > remaining())
            throw ContainerError(ContainerError::Tag::SectionCorrupt,
                                 "truncated section");
    }
    uint64_t get_le(int n) {
        need(static_cast<size_t>(n));
        uint64_t v = 0;
        for (int i = 0; i < n; ++i) v |= uint64_t{data_[pos_ + i]} << (8 * i);
        pos_ += static_cast<size_t>(n);
        return v;
    }

    std::span<const uint8_t> data_;
    size_t pos_ = 0;
};

} // namespace wps
