#pragma once

#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>
#include <zlib.h>

#include "polarpo/errors.hpp"
#include "polarpo/json_io.hpp"
#include "polarpo/relation_matrix.hpp"
#include "polarpo/reliability.hpp"

namespace polarpo {

// Relation-matrix cache file ("PORP"):
//   bytes 0..3   magic "PORP"
//   byte  4      format version (1)
//   byte  5      n
//   payload      lower-triangle entries row-major, rows i = 2..N; entry
//                (i, j) is 3 bits: bits 0-1 value (0 unknown, 1 better,
//                2 worse), bit 2 source (0 PO, 1 DR); entries packed
//                LSB-first, each row padded to a byte boundary
//   trailer      CRC-32 of the payload, little-endian
// The layout is fixed so cache files are portable across machines.

inline constexpr int kMatrixCacheVersion = 1;
inline constexpr char kMatrixCacheMagic[4] = {'P', 'O', 'R', 'P'};

inline std::vector<std::uint8_t> serialize_relation_matrix(const RelationMatrix& m) {
    const std::uint32_t num_channels = static_cast<std::uint32_t>(m.block_length());
    std::vector<std::uint8_t> bytes;
    bytes.reserve(6 + (m.pair_count() * 3) / 8 + num_channels);
    bytes.insert(bytes.end(), kMatrixCacheMagic, kMatrixCacheMagic + 4);
    bytes.push_back(static_cast<std::uint8_t>(kMatrixCacheVersion));
    bytes.push_back(static_cast<std::uint8_t>(m.n()));

    const std::size_t payload_start = bytes.size();
    for (std::uint32_t i = 2; i <= num_channels; ++i) {
        const std::size_t row_bits = 3 * static_cast<std::size_t>(i - 1);
        std::vector<std::uint8_t> row((row_bits + 7) / 8, 0);
        for (std::uint32_t j = 1; j < i; ++j) {
            const std::uint8_t value = static_cast<std::uint8_t>(m.at(i, j));
            const std::uint8_t source =
                m.source_at(i, j) == RelationSource::DR ? std::uint8_t{1} : std::uint8_t{0};
            const std::uint8_t entry = static_cast<std::uint8_t>(value | (source << 2));
            const std::size_t bit = 3 * static_cast<std::size_t>(j - 1);
            row[bit >> 3] |= static_cast<std::uint8_t>(entry << (bit & 7));
            if ((bit & 7) > 5) row[(bit >> 3) + 1] |= static_cast<std::uint8_t>(entry >> (8 - (bit & 7)));
        }
        bytes.insert(bytes.end(), row.begin(), row.end());
    }

    const auto crc = static_cast<std::uint32_t>(
        ::crc32(0L, bytes.data() + payload_start, static_cast<uInt>(bytes.size() - payload_start)));
    for (int shift = 0; shift < 32; shift += 8)
        bytes.push_back(static_cast<std::uint8_t>((crc >> shift) & 0xff));
    return bytes;
}

inline RelationMatrix deserialize_relation_matrix(const std::vector<std::uint8_t>& bytes) {
    if (bytes.size() < 10 || !std::equal(kMatrixCacheMagic, kMatrixCacheMagic + 4, bytes.begin()))
        throw FormatError("relation cache: bad magic");
    if (bytes[4] != kMatrixCacheVersion)
        throw FormatError("relation cache: unsupported version " + std::to_string(bytes[4]));
    const int n = bytes[5];
    if (n < 1 || n > kMaxRelationBits) throw FormatError("relation cache: bad n");

    const std::size_t payload_end = bytes.size() - 4;
    std::uint32_t stored_crc = 0;
    for (int shift = 0; shift < 32; shift += 8)
        stored_crc |= static_cast<std::uint32_t>(bytes[payload_end + shift / 8]) << shift;
    const auto crc = static_cast<std::uint32_t>(
        ::crc32(0L, bytes.data() + 6, static_cast<uInt>(payload_end - 6)));
    if (crc != stored_crc) throw FormatError("relation cache: checksum mismatch");

    RelationMatrix m(n);
    const std::uint32_t num_channels = std::uint32_t{1} << n;
    std::size_t pos = 6;
    for (std::uint32_t i = 2; i <= num_channels; ++i) {
        const std::size_t row_bits = 3 * static_cast<std::size_t>(i - 1);
        const std::size_t row_bytes = (row_bits + 7) / 8;
        if (pos + row_bytes > payload_end) throw FormatError("relation cache: truncated payload");
        for (std::uint32_t j = 1; j < i; ++j) {
            const std::size_t bit = 3 * static_cast<std::size_t>(j - 1);
            std::uint32_t word = bytes[pos + (bit >> 3)];
            if ((bit >> 3) + 1 < row_bytes) word |= std::uint32_t{bytes[pos + (bit >> 3) + 1]} << 8;
            const std::uint8_t entry = static_cast<std::uint8_t>((word >> (bit & 7)) & 0x7);
            const std::uint8_t value = entry & 0x3;
            if (value == 3) throw FormatError("relation cache: invalid entry value");
            if (value != 0)
                m.set(i, j, static_cast<Relation>(value),
                      (entry & 0x4) ? RelationSource::DR : RelationSource::PO);
        }
        pos += row_bytes;
    }
    if (pos != payload_end) throw FormatError("relation cache: trailing payload bytes");
    return m;
}

namespace detail {

inline void atomic_write(const std::filesystem::path& target, const char* data, std::size_t size) {
    namespace fs = std::filesystem;
    std::error_code ec;
    fs::create_directories(target.parent_path(), ec);
    const fs::path tmp = target.parent_path() /
                         (target.filename().string() + ".tmp." + std::to_string(::getpid()));
    {
        std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
        if (!os) throw ResourceError("cannot write cache file " + tmp.string());
        os.write(data, static_cast<std::streamsize>(size));
        if (!os) throw ResourceError("short write to cache file " + tmp.string());
    }
    fs::rename(tmp, target, ec);
    if (ec) {
        fs::remove(tmp);
        throw ResourceError("cannot move cache file into place: " + target.string());
    }
}

inline std::string sanitize_key(std::string s) {
    for (char& c : s)
        if (c == ':' || c == '/' || c == '\\') c = '-';
    return s;
}

}  // namespace detail

/// Cache directory resolution: explicit override, else POLARPO_CACHE_DIR,
/// else .polarpo-cache under the working directory.
inline std::filesystem::path cache_directory(const std::optional<std::string>& override_dir = {}) {
    if (override_dir && !override_dir->empty()) return *override_dir;
    if (const char* env = std::getenv("POLARPO_CACHE_DIR"); env != nullptr && *env != '\0')
        return env;
    return std::filesystem::path(".polarpo-cache");
}

inline std::filesystem::path relation_cache_path(const std::filesystem::path& dir, int n) {
    return dir / ("po-n" + std::to_string(n) + ".porp");
}

inline std::filesystem::path ranking_cache_path(const std::filesystem::path& dir,
                                                const ChannelModel& model, int n_u,
                                                const std::string& evaluator) {
    return dir / ("ranking-" + detail::sanitize_key(model.spec_string()) + "-nu" +
                  std::to_string(n_u) + "-" + detail::sanitize_key(evaluator) + ".json");
}

inline void save_relation_matrix(const std::filesystem::path& file, const RelationMatrix& m) {
    const std::vector<std::uint8_t> bytes = serialize_relation_matrix(m);
    detail::atomic_write(file, reinterpret_cast<const char*>(bytes.data()), bytes.size());
}

inline RelationMatrix load_relation_matrix(const std::filesystem::path& file) {
    std::ifstream is(file, std::ios::binary);
    if (!is) throw ResourceError("cannot read cache file " + file.string());
    std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(is)),
                                    std::istreambuf_iterator<char>());
    return deserialize_relation_matrix(bytes);
}

/// Returns the cached channel-independent matrix for n, building and caching
/// it on a miss. A present-but-corrupt file is an error, not a rebuild.
inline RelationMatrix load_or_build_po_matrix(int n, const std::filesystem::path& dir) {
    const std::filesystem::path file = relation_cache_path(dir, n);
    if (std::filesystem::exists(file)) return load_relation_matrix(file);
    RelationMatrix m = po_relation_matrix(n);
    save_relation_matrix(file, m);
    return m;
}

inline ReliabilityRanking load_ranking_file(const std::filesystem::path& file) {
    std::ifstream is(file);
    if (!is) throw ResourceError("cannot read ranking file " + file.string());
    return import_ranking(is);
}

inline void save_ranking_file(const std::filesystem::path& file, const ReliabilityRanking& r) {
    std::ostringstream os;
    write_ranking(os, r);
    const std::string text = os.str();
    detail::atomic_write(file, text.data(), text.size());
}

/// Cached channel-specific ranking for (model, n_u), built on a miss.
inline ReliabilityRanking load_or_build_ranking(const ChannelModel& model, int n_u,
                                                const std::filesystem::path& dir) {
    const std::string evaluator = model.kind == ChannelModel::Kind::Bec ? "bec-exact" : "ga";
    const std::filesystem::path file = ranking_cache_path(dir, model, n_u, evaluator);
    if (std::filesystem::exists(file)) return load_ranking_file(file);
    ReliabilityRanking r = rank_channels(model, n_u);
    save_ranking_file(file, r);
    return r;
}

}  // namespace polarpo
