#pragma once

#include <bit>
#include <cstdint>
#include <vector>

namespace hc {

// Packed bit vector. Bit i lives at word i/64, position i%64.
class BitVec {
public:
    BitVec() = default;
    explicit BitVec(uint64_t n, bool fill = false)
        : n_(n), w_((n + 63) / 64, fill ? ~uint64_t{0} : 0) {
        mask_tail();
    }

    uint64_t size() const { return n_; }
    uint64_t words() const { return w_.size(); }

    int get(uint64_t i) const { return int((w_[i >> 6] >> (i & 63)) & 1); }
    void set(uint64_t i, int v) {
        uint64_t m = uint64_t{1} << (i & 63);
        if (v)
            w_[i >> 6] |= m;
        else
            w_[i >> 6] &= ~m;
    }
    void flip(uint64_t i) { w_[i >> 6] ^= uint64_t{1} << (i & 63); }

    uint64_t word(uint64_t wi) const { return w_[wi]; }
    void set_word(uint64_t wi, uint64_t v) {
        w_[wi] = v;
        if (wi + 1 == w_.size())
            mask_tail();
    }

    uint64_t popcount() const {
        uint64_t c = 0;
        for (uint64_t w : w_)
            c += std::popcount(w);
        return c;
    }

    bool operator==(const BitVec&) const = default;

private:
    void mask_tail() {
        if (n_ % 64 && !w_.empty())
            w_.back() &= (uint64_t{1} << (n_ % 64)) - 1;
    }

    uint64_t n_ = 0;
    std::vector<uint64_t> w_;
};

} // namespace hc
