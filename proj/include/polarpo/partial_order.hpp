#pragma once

#include <bit>
#include <cstdint>
#include <stdexcept>

#include "polarpo/bit_index.hpp"

namespace polarpo {

// Channel-independent synthetic-channel orders, evaluated on the raw masks
// j-1 and i-1. All predicates answer "is j no better than i".

namespace detail {

inline void check_same_width(const BitIndex& j, const BitIndex& i) {
    if (j.n != i.n)
        throw std::invalid_argument("indices have different widths");
}

}  // namespace detail

/// Cover step of the equal-weight order: i is obtained from j by moving a
/// single 1 to a higher, previously empty position (all other bits equal).
inline bool po1_swap_cover_masks(std::uint32_t j_mask, std::uint32_t i_mask) {
    const std::uint32_t diff = j_mask ^ i_mask;
    if (std::popcount(diff) != 2) return false;
    const std::uint32_t high = std::uint32_t{1} << (31 - std::countl_zero(diff));
    // The higher differing bit must be the 1 gained by i, the lower one the 1 lost by j.
    return (i_mask & high) != 0 && (j_mask & (diff ^ high)) != 0;
}

inline bool po1_swap_cover(const BitIndex& j, const BitIndex& i) {
    detail::check_same_width(j, i);
    return po1_swap_cover_masks(j.mask(), i.mask());
}

/// Bitwise domination: every 1 of j-1 is also a 1 of i-1.
inline bool po2_leq_masks(std::uint32_t j_mask, std::uint32_t i_mask) {
    return (j_mask & ~i_mask) == 0;
}

inline bool po2_leq(const BitIndex& j, const BitIndex& i) {
    detail::check_same_width(j, i);
    return po2_leq_masks(j.mask(), i.mask());
}

/// Combined order: scan the digit difference of i-1 and j-1 from the most
/// significant position down; the running sum must never go negative.
/// Equivalent to matching every 1 of j-1 injectively to a 1 of i-1 at an
/// equal-or-higher position, and to reachability through swap covers and
/// single-bit raises. Reflexive: combined_leq(i, i) is true.
inline bool combined_leq_masks(std::uint32_t j_mask, std::uint32_t i_mask, int n) {
    int counter = 0;
    for (int k = n - 1; k >= 0; --k) {
        counter += static_cast<int>((i_mask >> k) & 1u) - static_cast<int>((j_mask >> k) & 1u);
        if (counter < 0) return false;
    }
    return true;
}

inline bool combined_leq(const BitIndex& j, const BitIndex& i) {
    detail::check_same_width(j, i);
    return combined_leq_masks(j.mask(), i.mask(), i.n);
}

}  // namespace polarpo
