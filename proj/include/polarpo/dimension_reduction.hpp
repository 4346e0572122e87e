#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

#include "polarpo/bit_index.hpp"
#include "polarpo/errors.hpp"
#include "polarpo/relation_matrix.hpp"
#include "polarpo/reliability.hpp"

namespace polarpo {

/// Parameters for one dimension-reduction pass: the split point n_u and a
/// channel-specific ranking of the 2^n_u upper-part channels.
struct DrConfig {
    int n = 1;
    int n_u = 1;
    const ReliabilityRanking* ranking = nullptr;
    bool apply_closure = false;

    int n_l() const { return n - n_u; }

    static int default_n_u(int n) { return n - 3; }

    void validate() const {
        if (n_u < 1 || n_u >= n)
            throw std::domain_error("split needs 1 <= n_u < n, got n_u=" + std::to_string(n_u) +
                                    " for n=" + std::to_string(n));
        if (ranking == nullptr) throw std::domain_error("dimension reduction needs a ranking");
        if (ranking->n_u != n_u)
            throw std::domain_error("ranking width " + std::to_string(ranking->n_u) +
                                    " does not match n_u=" + std::to_string(n_u));
    }
};

/// Lifts the upper-part ranking into full-length relations: for every upper
/// pair the channel-independent orders leave open but the ranking decides,
/// and every lower pair the combined order decides (equality included), the
/// composite pair becomes determined with source DR. Entries the orders
/// already determined are untouched. A ranking that inverts a provable upper
/// relation raises ConsistencyError.
inline RelationMatrix dr_update(const RelationMatrix& po_matrix, const DrConfig& cfg) {
    cfg.validate();
    if (po_matrix.n() != cfg.n)
        throw std::domain_error("matrix width does not match DR config");
    const ReliabilityRanking& ranking = *cfg.ranking;

    const std::uint32_t upper_len = std::uint32_t{1} << cfg.n_u;
    const std::uint32_t lower_len = std::uint32_t{1} << cfg.n_l();

    // Lower-part relations are reused for every upper pair; precompute them.
    std::vector<std::pair<std::uint32_t, std::uint32_t>> lower_leq;  // (worse, better)
    for (std::uint32_t a = 1; a <= lower_len; ++a)
        for (std::uint32_t b = 1; b <= lower_len; ++b)
            if (combined_leq_masks(a - 1, b - 1, cfg.n_l())) lower_leq.emplace_back(a, b);

    RelationMatrix out = po_matrix;
    for (std::uint32_t upper_hi = 2; upper_hi <= upper_len; ++upper_hi) {
        for (std::uint32_t upper_lo = 1; upper_lo < upper_hi; ++upper_lo) {
            // The combined order only ever ranks the higher index better, so
            // one direction decides comparability.
            if (combined_leq_masks(upper_lo - 1, upper_hi - 1, cfg.n_u)) {
                // Composite pairs of order-comparable upper parts are already
                // determined; only a contradicting ranking matters here.
                if (ranking.strictly_better(upper_lo, upper_hi))
                    throw ConsistencyError("ranking contradicts channel-independent order on "
                                           "upper pair (" + std::to_string(upper_lo) + ", " +
                                           std::to_string(upper_hi) + ")");
                continue;
            }
            std::uint32_t better_u, worse_u;
            if (ranking.strictly_better(upper_hi, upper_lo)) {
                better_u = upper_hi;
                worse_u = upper_lo;
            } else if (ranking.strictly_better(upper_lo, upper_hi)) {
                better_u = upper_lo;
                worse_u = upper_hi;
            } else {
                continue;  // tie: no genuine degradation to lift
            }
            for (const auto& [worse_l, better_l] : lower_leq) {
                const std::uint32_t i = join(better_u, better_l, cfg.n_l());
                const std::uint32_t j = join(worse_u, worse_l, cfg.n_l());
                if (i > j)
                    out.set(i, j, Relation::BetterHighLow, RelationSource::DR);
                else
                    out.set(j, i, Relation::WorseHighLow, RelationSource::DR);
            }
        }
    }
    return cfg.apply_closure ? transitive_closure(out) : out;
}

}  // namespace polarpo
