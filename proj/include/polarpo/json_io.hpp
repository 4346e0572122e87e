#pragma once

#include <cmath>
#include <cstdint>
#include <istream>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "polarpo/construction.hpp"
#include "polarpo/errors.hpp"
#include "polarpo/reliability.hpp"

namespace polarpo {

inline constexpr int kRankingFormatVersion = 1;

// Ranking files are the exchange format for external sorters, so they stay
// human-inspectable JSON:
//   {version, n_u, channel, evaluator, metric[], order[], ties[]}
// metric is per channel index (1-based), higher = better; order is the
// best-first permutation of [1, 2^n_u].

inline void write_ranking(std::ostream& os, const ReliabilityRanking& r) {
    nlohmann::ordered_json doc;
    doc["version"] = kRankingFormatVersion;
    doc["n_u"] = r.n_u;
    doc["channel"] = r.model.spec_string();
    doc["evaluator"] = r.evaluator;
    doc["metric"] = r.metric;
    doc["order"] = r.order;
    doc["ties"] = r.ties;
    os << doc.dump(2) << '\n';
}

/// Parses and validates a ranking: version, lengths, a genuine permutation,
/// finite metrics, and metric monotone non-increasing along the order.
inline ReliabilityRanking import_ranking(std::istream& is) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(is);
    } catch (const nlohmann::json::exception& e) {
        throw FormatError(std::string("ranking is not valid JSON: ") + e.what());
    }
    try {
        if (doc.at("version").get<int>() != kRankingFormatVersion)
            throw FormatError("unsupported ranking version");
        ReliabilityRanking r;
        r.n_u = doc.at("n_u").get<int>();
        if (r.n_u < 1 || r.n_u > kMaxIndexBits) throw FormatError("ranking n_u out of range");
        r.model = ChannelModel::parse(doc.at("channel").get<std::string>());
        r.evaluator = doc.at("evaluator").get<std::string>();
        r.metric = doc.at("metric").get<std::vector<double>>();
        r.order = doc.at("order").get<std::vector<std::uint32_t>>();
        if (doc.contains("ties"))
            r.ties = doc.at("ties").get<std::vector<std::vector<std::uint32_t>>>();

        const std::size_t num_channels = r.block_length();
        if (r.metric.size() != num_channels || r.order.size() != num_channels)
            throw FormatError("ranking length does not match 2^n_u");
        for (double m : r.metric)
            if (!std::isfinite(m)) throw FormatError("ranking metric must be finite");
        std::vector<bool> seen(num_channels, false);
        for (std::uint32_t idx : r.order) {
            if (idx < 1 || idx > num_channels || seen[idx - 1])
                throw FormatError("ranking order is not a permutation of [1, 2^n_u]");
            seen[idx - 1] = true;
        }
        for (std::size_t k = 0; k + 1 < num_channels; ++k)
            if (r.metric[r.order[k] - 1] < r.metric[r.order[k + 1] - 1])
                throw FormatError("ranking metric is not monotone along order");
        for (const auto& group : r.ties)
            for (std::uint32_t idx : group)
                if (idx < 1 || idx > num_channels)
                    throw FormatError("ranking tie group references a bad index");
        return r;
    } catch (const nlohmann::json::exception& e) {
        throw FormatError(std::string("ranking schema error: ") + e.what());
    }
}

inline nlohmann::ordered_json construction_to_json(const Construction& c) {
    nlohmann::ordered_json doc;
    doc["n"] = c.n;
    doc["N"] = c.block_length;
    doc["K"] = c.dimension;
    doc["I"] = c.info_set;
    doc["F"] = c.frozen_set;
    doc["U"] = c.undetermined_set;
    doc["gamma"] = c.gamma;
    std::vector<std::string> provenance;
    provenance.reserve(c.provenance.size());
    for (Provenance p : c.provenance) provenance.emplace_back(to_string(p));
    doc["provenance"] = provenance;
    return doc;
}

inline void write_construction(std::ostream& os, const Construction& c) {
    os << construction_to_json(c).dump(2) << '\n';
}

}  // namespace polarpo
