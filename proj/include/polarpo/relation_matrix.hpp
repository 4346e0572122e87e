#pragma once

#include <bit>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "polarpo/errors.hpp"
#include "polarpo/partial_order.hpp"

namespace polarpo {

/// Relation of the higher-indexed channel of a pair versus the lower-indexed one.
enum class Relation : std::uint8_t {
    Unknown = 0,
    BetterHighLow = 1,
    WorseHighLow = 2,
};

enum class RelationSource : std::uint8_t { PO = 0, DR = 1 };

inline constexpr int kMaxRelationBits = 14;

/// Pairwise relation table over all channel pairs of a block length 2^n.
/// Only the strict lower triangle (i > j) is stored, at 3 bits per entry:
/// one bit each for better / worse plus a source bit.
class RelationMatrix {
public:
    explicit RelationMatrix(int n) : n_(n) {
        if (n < 1) throw std::domain_error("relation matrix needs n >= 1");
        if (n > kMaxRelationBits)
            throw ResourceError("relation matrix bound exceeded: n=" + std::to_string(n) +
                                " (max " + std::to_string(kMaxRelationBits) + ")");
        num_channels_ = std::size_t{1} << n;
        num_pairs_ = num_channels_ * (num_channels_ - 1) / 2;
        const std::size_t words = (num_pairs_ + 63) / 64;
        better_.assign(words, 0);
        worse_.assign(words, 0);
        dr_.assign(words, 0);
    }

    int n() const { return n_; }
    std::size_t block_length() const { return num_channels_; }
    std::size_t pair_count() const { return num_pairs_; }

    Relation at(std::uint32_t i, std::uint32_t j) const {
        const std::size_t k = entry_offset(i, j);
        if (get_bit(better_, k)) return Relation::BetterHighLow;
        if (get_bit(worse_, k)) return Relation::WorseHighLow;
        return Relation::Unknown;
    }

    RelationSource source_at(std::uint32_t i, std::uint32_t j) const {
        return get_bit(dr_, entry_offset(i, j)) ? RelationSource::DR : RelationSource::PO;
    }

    /// Sets the entry for pair (i, j) with i > j. Overwriting a determined
    /// entry with a different value is a consistency error.
    void set(std::uint32_t i, std::uint32_t j, Relation r, RelationSource s) {
        const std::size_t k = entry_offset(i, j);
        const Relation current = at(i, j);
        if (current != Relation::Unknown && current != r)
            throw ConsistencyError("conflicting relation for pair (" + std::to_string(i) +
                                   ", " + std::to_string(j) + ")");
        if (r == Relation::BetterHighLow) set_bit(better_, k);
        if (r == Relation::WorseHighLow) set_bit(worse_, k);
        if (r != Relation::Unknown && s == RelationSource::DR) set_bit(dr_, k);
    }

    /// True iff channel a is provably strictly better than channel b.
    bool better(std::uint32_t a, std::uint32_t b) const {
        if (a == b) return false;
        if (a > b) return at(a, b) == Relation::BetterHighLow;
        return at(b, a) == Relation::WorseHighLow;
    }

    bool determined(std::uint32_t i, std::uint32_t j) const {
        return at(i, j) != Relation::Unknown;
    }

    std::size_t determined_count() const {
        return popcount_all(better_) + popcount_all(worse_);
    }

    std::size_t determined_dr_count() const { return popcount_all(dr_); }
    std::size_t determined_po_count() const { return determined_count() - determined_dr_count(); }

    friend bool operator==(const RelationMatrix&, const RelationMatrix&) = default;

private:
    static bool get_bit(const std::vector<std::uint64_t>& v, std::size_t k) {
        return (v[k >> 6] >> (k & 63)) & 1u;
    }
    static void set_bit(std::vector<std::uint64_t>& v, std::size_t k) {
        v[k >> 6] |= std::uint64_t{1} << (k & 63);
    }
    static std::size_t popcount_all(const std::vector<std::uint64_t>& v) {
        std::size_t c = 0;
        for (std::uint64_t w : v) c += static_cast<std::size_t>(std::popcount(w));
        return c;
    }

    std::size_t entry_offset(std::uint32_t i, std::uint32_t j) const {
        if (j < 1 || i <= j || i > num_channels_)
            throw std::domain_error("relation entry requires 1 <= j < i <= N, got (" +
                                    std::to_string(i) + ", " + std::to_string(j) + ")");
        const std::size_t row = i;
        return (row - 1) * (row - 2) / 2 + (j - 1);
    }

    int n_;
    std::size_t num_channels_;
    std::size_t num_pairs_;
    std::vector<std::uint64_t> better_;
    std::vector<std::uint64_t> worse_;
    std::vector<std::uint64_t> dr_;
};

/// Per-channel counts of provably worse (num_worse) and provably better
/// (num_better) channels; element k belongs to channel k+1.
struct DegreeVectors {
    std::vector<std::int32_t> num_worse;
    std::vector<std::int32_t> num_better;
};

/// Relation table the channel-independent orders determine on their own.
/// Every determined pair has the higher index better, so no worse entries
/// appear and all sources are PO.
inline RelationMatrix po_relation_matrix(int n) {
    RelationMatrix m(n);
    const std::uint32_t num_channels = std::uint32_t{1} << n;
    for (std::uint32_t i = 2; i <= num_channels; ++i)
        for (std::uint32_t j = 1; j < i; ++j)
            if (combined_leq_masks(j - 1, i - 1, n))
                m.set(i, j, Relation::BetterHighLow, RelationSource::PO);
    return m;
}

/// Tallies, for every channel, how many channels it provably beats and how
/// many provably beat it.
inline DegreeVectors counting_channels(const RelationMatrix& m) {
    const std::size_t num_channels = m.block_length();
    DegreeVectors d;
    d.num_worse.assign(num_channels, 0);
    d.num_better.assign(num_channels, 0);
    for (std::uint32_t i = 2; i <= num_channels; ++i) {
        for (std::uint32_t j = 1; j < i; ++j) {
            switch (m.at(i, j)) {
                case Relation::BetterHighLow:
                    ++d.num_worse[i - 1];
                    ++d.num_better[j - 1];
                    break;
                case Relation::WorseHighLow:
                    ++d.num_worse[j - 1];
                    ++d.num_better[i - 1];
                    break;
                case Relation::Unknown:
                    break;
            }
        }
    }
    return d;
}

namespace detail {

// Reachability over the strictly-better digraph with one bitset row per
// channel. Iterative DFS; a back edge means the relation data is cyclic.
class ReachabilityClosure {
public:
    explicit ReachabilityClosure(const RelationMatrix& m)
        : m_(m),
          num_channels_(m.block_length()),
          row_words_((num_channels_ + 63) / 64),
          reach_(num_channels_ * row_words_, 0),
          state_(num_channels_ + 1, 0) {
        for (std::uint32_t v = 1; v <= num_channels_; ++v)
            if (state_[v] == 0) dfs(v);
    }

    bool reaches(std::uint32_t a, std::uint32_t b) const {
        const std::uint64_t* row = row_ptr(a);
        return (row[(b - 1) >> 6] >> ((b - 1) & 63)) & 1u;
    }

private:
    const std::uint64_t* row_ptr(std::uint32_t v) const {
        return reach_.data() + (v - 1) * row_words_;
    }
    std::uint64_t* row_ptr(std::uint32_t v) { return reach_.data() + (v - 1) * row_words_; }

    void dfs(std::uint32_t root) {
        struct Frame {
            std::uint32_t v;
            std::uint32_t next;  // next candidate successor to examine
        };
        std::vector<Frame> stack{{root, 1}};
        state_[root] = 1;
        while (!stack.empty()) {
            Frame& f = stack.back();
            bool descended = false;
            while (f.next <= num_channels_) {
                const std::uint32_t w = f.next++;
                if (w == f.v || !m_.better(f.v, w)) continue;
                if (state_[w] == 1)
                    throw ConsistencyError("relation cycle involving pair (" +
                                           std::to_string(f.v) + ", " + std::to_string(w) + ")");
                if (state_[w] == 0) {
                    state_[w] = 1;
                    stack.push_back({w, 1});
                    descended = true;
                    break;
                }
                absorb(f.v, w);
            }
            if (descended) continue;
            state_[f.v] = 2;
            const std::uint32_t done = f.v;
            stack.pop_back();
            if (!stack.empty()) absorb(stack.back().v, done);
        }
    }

    // reach(v) |= reach(w) and the bit for w itself.
    void absorb(std::uint32_t v, std::uint32_t w) {
        std::uint64_t* dst = row_ptr(v);
        const std::uint64_t* src = row_ptr(w);
        for (std::size_t k = 0; k < row_words_; ++k) dst[k] |= src[k];
        dst[(w - 1) >> 6] |= std::uint64_t{1} << ((w - 1) & 63);
    }

    const RelationMatrix& m_;
    std::size_t num_channels_;
    std::size_t row_words_;
    std::vector<std::uint64_t> reach_;
    std::vector<std::uint8_t> state_;
};

}  // namespace detail

/// Adds every relation implied by chains of stored relations. Entries that
/// only exist because of a DR edge are tagged DR; a cycle raises
/// ConsistencyError. Idempotent.
inline RelationMatrix transitive_closure(const RelationMatrix& m) {
    detail::ReachabilityClosure closure(m);
    RelationMatrix out = m;
    const std::uint32_t num_channels = static_cast<std::uint32_t>(m.block_length());
    for (std::uint32_t i = 2; i <= num_channels; ++i) {
        for (std::uint32_t j = 1; j < i; ++j) {
            if (out.at(i, j) != Relation::Unknown) continue;
            if (closure.reaches(i, j))
                out.set(i, j, Relation::BetterHighLow, RelationSource::DR);
            else if (closure.reaches(j, i))
                out.set(i, j, Relation::WorseHighLow, RelationSource::DR);
        }
    }
    return out;
}

}  // namespace polarpo
