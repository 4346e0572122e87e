#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "polarpo/dimension_reduction.hpp"
#include "polarpo/relation_matrix.hpp"
#include "polarpo/reliability.hpp"

namespace polarpo {

/// How a channel's placement was decided.
enum class Provenance : std::uint8_t { PO = 0, DR = 1, Resolved = 2, Undetermined = 3 };

inline const char* to_string(Provenance p) {
    switch (p) {
        case Provenance::PO: return "PO";
        case Provenance::DR: return "DR";
        case Provenance::Resolved: return "resolved";
        case Provenance::Undetermined: return "undetermined";
    }
    return "?";
}

/// A code construction: the disjoint information / frozen / undetermined
/// partition of [1, N], the undetermined ratio gamma = |U|/N, and per-channel
/// provenance (element k belongs to channel k+1).
struct Construction {
    int n = 1;
    std::uint32_t block_length = 2;
    std::uint32_t dimension = 1;  // K
    std::vector<std::uint32_t> info_set;
    std::vector<std::uint32_t> frozen_set;
    std::vector<std::uint32_t> undetermined_set;
    double gamma = 0.0;
    std::vector<Provenance> provenance;
    std::vector<std::pair<std::uint32_t, std::uint32_t>> resolution_ties;
};

/// Places every channel that provably beats at least N-K others into the
/// information set and every channel at least K others provably beat into the
/// frozen set; the rest stay undetermined.
inline Construction classify(const DegreeVectors& degrees, std::uint32_t dimension,
                             Provenance determined_label = Provenance::PO) {
    const std::size_t num_channels = degrees.num_worse.size();
    if (degrees.num_better.size() != num_channels)
        throw std::domain_error("degree vectors have mismatched lengths");
    if (dimension > num_channels)
        throw std::domain_error("dimension exceeds block length");
    const std::int64_t num_frozen = static_cast<std::int64_t>(num_channels) - dimension;

    Construction c;
    c.n = static_cast<int>(std::bit_width(num_channels) - 1);
    c.block_length = static_cast<std::uint32_t>(num_channels);
    c.dimension = dimension;
    c.provenance.assign(num_channels, Provenance::Undetermined);
    for (std::uint32_t i = 1; i <= num_channels; ++i) {
        if (degrees.num_worse[i - 1] >= num_frozen) {
            c.info_set.push_back(i);
            c.provenance[i - 1] = determined_label;
        } else if (degrees.num_better[i - 1] >= static_cast<std::int64_t>(dimension)) {
            c.frozen_set.push_back(i);
            c.provenance[i - 1] = determined_label;
        } else {
            c.undetermined_set.push_back(i);
        }
    }
    c.gamma = static_cast<double>(c.undetermined_set.size()) / static_cast<double>(num_channels);
    return c;
}

struct ConstructOptions {
    int n_u = 0;  // 0 selects the default split n-3
    bool apply_closure = false;
    const ReliabilityRanking* dr_ranking = nullptr;       // overrides the built-in evaluator
    const ReliabilityRanking* resolve_ranking = nullptr;  // full-length override for resolution
    const RelationMatrix* po_matrix = nullptr;            // reuse a cached matrix
};

namespace detail {

/// Full-length best-first metric used to resolve undetermined channels:
/// -Z for BEC, GA mean for AWGN.
inline std::vector<double> resolution_metric(const ChannelModel& model, int n) {
    if (model.kind == ChannelModel::Kind::Bec) {
        std::vector<double> metric = bec_bhattacharyya(n, model.value);
        for (double& z : metric) z = -z;
        return metric;
    }
    return ga_awgn_means(n, model.value);
}

/// Moves the best K-|I| undetermined channels into the information set and
/// the rest into the frozen set. Metric ties break toward the lower index and
/// are reported.
inline void resolve_undetermined(Construction& c, const std::vector<double>& metric) {
    if (c.undetermined_set.empty()) return;
    std::vector<std::uint32_t> by_quality = c.undetermined_set;
    std::sort(by_quality.begin(), by_quality.end(), [&](std::uint32_t a, std::uint32_t b) {
        if (metric[a - 1] != metric[b - 1]) return metric[a - 1] > metric[b - 1];
        return a < b;
    });
    for (std::size_t k = 0; k + 1 < by_quality.size(); ++k)
        if (metric[by_quality[k] - 1] == metric[by_quality[k + 1] - 1])
            c.resolution_ties.emplace_back(by_quality[k], by_quality[k + 1]);

    const std::size_t needed =
        c.dimension > c.info_set.size() ? c.dimension - c.info_set.size() : 0;
    for (std::size_t k = 0; k < by_quality.size(); ++k) {
        const std::uint32_t i = by_quality[k];
        (k < needed ? c.info_set : c.frozen_set).push_back(i);
        c.provenance[i - 1] = Provenance::Resolved;
    }
    c.undetermined_set.clear();
    c.gamma = 0.0;
    std::sort(c.info_set.begin(), c.info_set.end());
    std::sort(c.frozen_set.begin(), c.frozen_set.end());
}

}  // namespace detail

/// Top-level pipeline: channel-independent relation matrix, optional
/// dimension reduction with the model's evaluator, degree counting,
/// classification with K = floor(N * R), and optional resolution of the
/// undetermined set by the full-length metric.
inline Construction construct(int n, double rate, const std::optional<ChannelModel>& model,
                              bool use_dr, bool resolve, const ConstructOptions& options = {}) {
    if (!(rate > 0.0 && rate < 1.0))
        throw std::domain_error("code rate must be in (0, 1)");
    const std::uint32_t num_channels = std::uint32_t{1} << n;
    const std::uint32_t dimension =
        static_cast<std::uint32_t>(std::floor(static_cast<double>(num_channels) * rate));

    if (options.po_matrix && options.po_matrix->n() != n)
        throw std::domain_error("cached relation matrix does not match n");
    RelationMatrix matrix = options.po_matrix ? *options.po_matrix : po_relation_matrix(n);
    Construction po_only = classify(counting_channels(matrix), dimension, Provenance::PO);

    Construction result = po_only;
    if (use_dr) {
        const int n_u = options.n_u > 0 ? options.n_u : DrConfig::default_n_u(n);
        if (n_u >= 1) {
            ReliabilityRanking computed;
            const ReliabilityRanking* ranking = options.dr_ranking;
            if (ranking == nullptr) {
                if (!model)
                    throw std::domain_error("dimension reduction needs a channel model or ranking");
                computed = rank_channels(*model, n_u);
                ranking = &computed;
            }
            DrConfig cfg;
            cfg.n = n;
            cfg.n_u = n_u;
            cfg.ranking = ranking;
            cfg.apply_closure = options.apply_closure;
            matrix = dr_update(matrix, cfg);
            result = classify(counting_channels(matrix), dimension, Provenance::DR);
            // Channels the channel-independent orders already decided keep
            // their PO provenance.
            for (std::uint32_t i = 1; i <= num_channels; ++i)
                if (po_only.provenance[i - 1] == Provenance::PO &&
                    result.provenance[i - 1] == Provenance::DR)
                    result.provenance[i - 1] = Provenance::PO;
        }
    }

    if (resolve) {
        std::vector<double> metric;
        if (options.resolve_ranking != nullptr) {
            if (options.resolve_ranking->n_u != n)
                throw std::domain_error("resolution ranking must cover the full block length");
            metric = options.resolve_ranking->metric;
        } else {
            if (!model)
                throw std::domain_error("resolution needs a channel model or ranking");
            metric = detail::resolution_metric(*model, n);
        }
        detail::resolve_undetermined(result, metric);
    }
    return result;
}

/// One construction per rate, sharing one relation matrix (and one DR pass);
/// returns (rate, gamma) pairs.
inline std::vector<std::pair<double, double>> gamma_sweep_rate(
    int n, const std::optional<ChannelModel>& model, bool use_dr,
    const std::vector<double>& rates, const ConstructOptions& options = {}) {
    if (options.po_matrix && options.po_matrix->n() != n)
        throw std::domain_error("cached relation matrix does not match n");
    RelationMatrix matrix = options.po_matrix ? *options.po_matrix : po_relation_matrix(n);
    if (use_dr) {
        const int n_u = options.n_u > 0 ? options.n_u : DrConfig::default_n_u(n);
        if (n_u >= 1) {
            ReliabilityRanking computed;
            const ReliabilityRanking* ranking = options.dr_ranking;
            if (ranking == nullptr) {
                if (!model)
                    throw std::domain_error("dimension reduction needs a channel model or ranking");
                computed = rank_channels(*model, n_u);
                ranking = &computed;
            }
            DrConfig cfg;
            cfg.n = n;
            cfg.n_u = n_u;
            cfg.ranking = ranking;
            cfg.apply_closure = options.apply_closure;
            matrix = dr_update(matrix, cfg);
        }
    }
    const DegreeVectors degrees = counting_channels(matrix);
    const std::uint32_t num_channels = std::uint32_t{1} << n;

    std::vector<std::pair<double, double>> out;
    out.reserve(rates.size());
    for (double rate : rates) {
        if (!(rate > 0.0 && rate < 1.0))
            throw std::domain_error("code rate must be in (0, 1)");
        const auto dimension =
            static_cast<std::uint32_t>(std::floor(static_cast<double>(num_channels) * rate));
        out.emplace_back(rate, classify(degrees, dimension).gamma);
    }
    return out;
}

/// One construction per block-length exponent at a fixed rate; returns
/// (n, gamma) pairs.
inline std::vector<std::pair<int, double>> gamma_sweep_n(
    const std::vector<int>& ns, double rate, const std::optional<ChannelModel>& model,
    bool use_dr, const ConstructOptions& options = {}) {
    if (ns.empty()) throw std::domain_error("blocklength sweep needs at least one n");
    std::vector<std::pair<int, double>> out;
    out.reserve(ns.size());
    for (int n : ns) {
        ConstructOptions per_n = options;
        per_n.po_matrix = nullptr;  // matrices differ per n
        per_n.n_u = options.n_u > 0 ? options.n_u : 0;
        out.emplace_back(n, construct(n, rate, model, use_dr, false, per_n).gamma);
    }
    return out;
}

}  // namespace polarpo
