#pragma once

#include <array>
#include <cstdint>
#include <ostream>
#include <stdexcept>
#include <string>

#include "polarpo/relation_matrix.hpp"

namespace polarpo {

inline constexpr int kMaxRenderBits = 12;

/// Writes the N x N relation dot plot as a binary PPM (P6): for row i,
/// column j with i > j the pixel is black when the pair was determined by the
/// channel-independent orders, red when dimension reduction added it, white
/// otherwise. The diagonal and upper triangle stay white.
inline void render_relation_ppm(const RelationMatrix& m, std::ostream& os) {
    if (m.n() > kMaxRenderBits)
        throw std::domain_error("render supports n <= " + std::to_string(kMaxRenderBits));
    const std::uint32_t num_channels = static_cast<std::uint32_t>(m.block_length());
    os << "P6\n" << num_channels << ' ' << num_channels << "\n255\n";

    static constexpr std::array<unsigned char, 3> white{255, 255, 255};
    static constexpr std::array<unsigned char, 3> black{0, 0, 0};
    static constexpr std::array<unsigned char, 3> red{255, 0, 0};

    std::string row_buf(static_cast<std::size_t>(num_channels) * 3, '\0');
    for (std::uint32_t i = 1; i <= num_channels; ++i) {
        for (std::uint32_t j = 1; j <= num_channels; ++j) {
            const auto* color = &white;
            if (i > j && m.determined(i, j))
                color = m.source_at(i, j) == RelationSource::DR ? &red : &black;
            std::copy(color->begin(), color->end(), row_buf.begin() + (j - 1) * 3);
        }
        os.write(row_buf.data(), static_cast<std::streamsize>(row_buf.size()));
    }
}

}  // namespace polarpo
