#pragma once

#include <cassert>
#include <cstdint>
#include <vector>

#include "wps/serial.hpp"

namespace wps {

// Fixed-width array of w-bit integers, w in [0, 64].
class PackedArray {
public:
    PackedArray() = default;
    PackedArray(size_t n, unsigned width) : n_(n), width_(width) {
        assert(width <= 64);
        data_.assign((n * width + 63) / 64, 0);
    }

    size_t size() const { return n_; }
    unsigned width() const { return width_; }
    uint64_t bits() const { return uint64_t{n_} * width_; }

    uint64_t get(size_t i) const {
        assert(i < n_);
        if (width_ == 0) return 0;
        uint64_t pos = uint64_t{i} * width_;
        size_t q = pos >> 6, r = pos & 63;
        uint64_t v = data_[q] >> r;
        if (r + width_ > 64) v |= data_[q + 1] << (64 - r);
        return width_ == 64 ? v : v & ((uint64_t{1} << width_) - 1);
    }

    void set(size_t i, uint64_t v) {
        assert(i < n_);
        if (width_ == 0) return;
        uint64_t mask = width_ == 64 ? ~uint64_t{0} : (uint64_t{1} << width_) - 1;
        v &= mask;
        uint64_t pos = uint64_t{i} * width_;
        size_t q = pos >> 6, r = pos & 63;
        data_[q] = (data_[q] & ~(mask << r)) | (v << r);
        if (r + width_ > 64) {
            unsigned spill = static_cast<unsigned>(r + width_ - 64);
            uint64_t hi_mask = (uint64_t{1} << spill) - 1;
            data_[q + 1] = (data_[q + 1] & ~hi_mask) | (v >> (64 - r));
        }
    }

    void save(ByteWriter& w) const {
        w.u64(n_);
        w.u32(width_);
        w.u64vec(data_);
    }

    static PackedArray load(ByteReader& r) {
        PackedArray a;
        a.n_ = r.u64();
        a.width_ = r.u32();
        a.data_ = r.u64vec();
        if (a.data_.size() != (a.n_ * a.width_ + 63) / 64)
            throw ContainerError(ContainerError::Tag::SectionCorrupt,
                                 "PackedArray size mismatch");
        return a;
    }

private:
    size_t n_ = 0;
    unsigned width_ = 0;
    std::vector<uint64_t> data_;
};

// Append-only variable-width bit stream (LSB-first within the stream).
class BitStream {
public:
    void append(uint64_t v, unsigned width) {
        assert(width <= 64);
        if (width == 0) return;
        if (width < 64) v &= (uint64_t{1} << width) - 1;
        size_t q = len_ >> 6, r = len_ & 63;
        if (q == data_.size()) data_.push_back(0);
        data_[q] |= v << r;
        if (r + width > 64) data_.push_back(v >> (64 - r));
        len_ += width;
    }

    uint64_t read(uint64_t pos, unsigned width) const {
        assert(pos + width <= len_);
        if (width == 0) return 0;
        size_t q = pos >> 6, r = pos & 63;
        uint64_t v = data_[q] >> r;
        if (r + width > 64) v |= data_[q + 1] << (64 - r);
        return width == 64 ? v : v & ((uint64_t{1} << width) - 1);
    }

    void flip_bit(uint64_t pos) {
        assert(pos < len_);
        data_[pos >> 6] ^= uint64_t{1} << (pos & 63);
    }

    uint64_t bit_size() const { return len_; }

    void save(ByteWriter& w) const {
        w.u64(len_);
        w.u64vec(data_);
    }

    static BitStream load(ByteReader& r) {
        BitStream s;
        s.len_ = r.u64();
        s.data_ = r.u64vec();
        if (s.data_.size() != (s.len_ + 63) / 64)
            throw ContainerError(ContainerError::Tag::SectionCorrupt,
                                 "BitStream size mismatch");
        return s;
    }

private:
    uint64_t len_ = 0;
    std::vector<uint64_t> data_;
};

} // namespace wps
