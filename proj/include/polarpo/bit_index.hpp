#pragma once

#include <bit>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace polarpo {

// Channel indices are 1-based: i in [1, 2^n]. The binary expansion always
// refers to i-1, written MSB first. Bit position k in [1, n] carries weight
// 2^(k-1), so position 1 is the least significant and position n the most
// significant.

inline constexpr int kMaxIndexBits = 30;

inline void check_index_args(std::uint64_t i, int n) {
    if (n < 1 || n > kMaxIndexBits)
        throw std::domain_error("bit width n out of range: " + std::to_string(n));
    if (i < 1 || i > (std::uint64_t{1} << n))
        throw std::domain_error("channel index " + std::to_string(i) +
                                " out of range for n=" + std::to_string(n));
}

/// Binary expansion of i-1 as a fixed-width bit sequence b_n..b_1
/// (most significant first, leading zeros kept).
inline std::vector<std::uint8_t> to_bits(std::uint64_t i, int n) {
    check_index_args(i, n);
    std::vector<std::uint8_t> bits(static_cast<std::size_t>(n));
    const std::uint64_t v = i - 1;
    for (int k = 0; k < n; ++k)
        bits[static_cast<std::size_t>(k)] = static_cast<std::uint8_t>((v >> (n - 1 - k)) & 1u);
    return bits;
}

/// Inverse of to_bits: bit sequence b_n..b_1 back to the 1-based index.
inline std::uint64_t from_bits(const std::vector<std::uint8_t>& bits) {
    if (bits.empty() || bits.size() > kMaxIndexBits)
        throw std::domain_error("bit sequence length out of range");
    std::uint64_t v = 0;
    for (std::uint8_t b : bits) {
        if (b > 1) throw std::domain_error("bit sequence contains non-binary digit");
        v = (v << 1) | b;
    }
    return v + 1;
}

/// A bit-channel index together with its width. The raw mask i-1 is what the
/// order predicates operate on; bits() materializes the expansion.
struct BitIndex {
    std::uint32_t i = 1;
    int n = 1;

    BitIndex() = default;
    BitIndex(std::uint64_t index, int width) {
        check_index_args(index, width);
        i = static_cast<std::uint32_t>(index);
        n = width;
    }

    std::uint32_t mask() const { return i - 1; }
    int hamming_weight() const { return std::popcount(mask()); }
    std::vector<std::uint8_t> bits() const { return to_bits(i, n); }

    friend bool operator==(const BitIndex&, const BitIndex&) = default;
};

/// Splits index i (width n_u + n_l) into the indices of its top n_u bits and
/// bottom n_l bits, both 1-based.
inline std::pair<std::uint32_t, std::uint32_t> split(std::uint64_t i, int n_u, int n_l) {
    if (n_u < 1 || n_l < 0 || n_u + n_l > kMaxIndexBits)
        throw std::domain_error("invalid split sizes n_u=" + std::to_string(n_u) +
                                " n_l=" + std::to_string(n_l));
    check_index_args(i, n_u + n_l);
    const std::uint64_t v = i - 1;
    const std::uint64_t upper = v >> n_l;
    const std::uint64_t lower = v & ((std::uint64_t{1} << n_l) - 1);
    return {static_cast<std::uint32_t>(upper + 1), static_cast<std::uint32_t>(lower + 1)};
}

/// Recomposes a split index: i = (i_u - 1) * 2^n_l + i_l. Inverse of split.
inline std::uint32_t join(std::uint64_t i_u, std::uint64_t i_l, int n_l) {
    if (n_l < 0 || n_l > kMaxIndexBits)
        throw std::domain_error("invalid lower width n_l=" + std::to_string(n_l));
    if (i_u < 1)
        throw std::domain_error("upper index must be >= 1");
    if (i_l < 1 || i_l > (std::uint64_t{1} << n_l))
        throw std::domain_error("lower index " + std::to_string(i_l) +
                                " out of range for n_l=" + std::to_string(n_l));
    const std::uint64_t i = (i_u - 1) * (std::uint64_t{1} << n_l) + i_l;
    if (i > (std::uint64_t{1} << kMaxIndexBits))
        throw std::domain_error("joined index exceeds supported width");
    return static_cast<std::uint32_t>(i);
}

}  // namespace polarpo
