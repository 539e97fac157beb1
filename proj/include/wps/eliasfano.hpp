#pragma once

#include <bit>
#include <cstdint>
#include <vector>

#include "wps/packed.hpp"
#include "wps/ranksel.hpp"
#include "wps/serial.hpp"

namespace wps {

// Elias-Fano encoding of a monotone nondecreasing sequence with values < u.
class EliasFanoSeq {
public:
    EliasFanoSeq() = default;

    EliasFanoSeq(const std::vector<uint64_t>& values, uint64_t universe)
        : n_(values.size()), u_(universe) {
        for (size_t i = 0; i < values.size(); ++i) {
            if (values[i] >= universe)
                throw InputError("EliasFanoSeq: value exceeds universe");
            if (i && values[i] < values[i - 1])
                throw InputError("EliasFanoSeq: sequence is not monotone");
        }
        if (n_ == 0) return;
        low_width_ = u_ / n_ >= 2 ? static_cast<unsigned>(std::bit_width(u_ / n_) - 1) : 0;
        low_ = PackedArray(n_, low_width_);
        std::vector<bool> high(n_ + (u_ >> low_width_) + 1, false);
        for (size_t i = 0; i < n_; ++i) {
            low_.set(i, values[i] & ((uint64_t{1} << low_width_) - 1));
            high[(values[i] >> low_width_) + i] = true;
        }
        high_ = RankSelectBits::from_bools(high);
    }

    uint64_t size() const { return n_; }
    uint64_t universe() const { return u_; }

    uint64_t get(uint64_t i) const {
        if (i >= n_) throw InputError("EliasFanoSeq::get: index out of range");
        return ((high_.select(i) - i) << low_width_) | low_.get(i);
    }

    uint64_t size_in_bits() const {
        return n_ == 0 ? 0 : low_.bits() + high_.size_in_bits();
    }

    void save(ByteWriter& w) const {
        w.u64(n_);
        w.u64(u_);
        w.u32(low_width_);
        low_.save(w);
        high_.save(w);
    }

    static EliasFanoSeq load(ByteReader& r) {
        EliasFanoSeq e;
        e.n_ = r.u64();
        e.u_ = r.u64();
        e.low_width_ = r.u32();
        e.low_ = PackedArray::load(r);
        e.high_ = RankSelectBits::load(r);
        return e;
    }

private:
    uint64_t n_ = 0;
    uint64_t u_ = 0;
    unsigned low_width_ = 0;
    PackedArray low_;
    RankSelectBits high_;
};

} // namespace wps
