#include <catch2/catch_amalgamated.hpp>

#include <algorithm>

#include "oracles.hpp"
#include "polarpo/construction.hpp"

using namespace polarpo;

namespace {

bool partition_ok(const Construction& c) {
    std::vector<std::uint32_t> all;
    all.insert(all.end(), c.info_set.begin(), c.info_set.end());
    all.insert(all.end(), c.frozen_set.begin(), c.frozen_set.end());
    all.insert(all.end(), c.undetermined_set.begin(), c.undetermined_set.end());
    std::sort(all.begin(), all.end());
    if (all.size() != c.block_length) return false;
    for (std::uint32_t i = 1; i <= c.block_length; ++i)
        if (all[i - 1] != i) return false;
    return true;
}

}  // namespace

TEST_CASE("classification of the fully determined two-level code") {
    const DegreeVectors d = counting_channels(po_relation_matrix(2));
    const Construction c = classify(d, 2);
    CHECK(c.info_set == std::vector<std::uint32_t>{3, 4});
    CHECK(c.frozen_set == std::vector<std::uint32_t>{1, 2});
    CHECK(c.undetermined_set.empty());
    CHECK(c.gamma == 0.0);
    CHECK(partition_ok(c));
}

TEST_CASE("degenerate dimensions classify everything one way") {
    const DegreeVectors d = counting_channels(po_relation_matrix(3));
    const Construction all_info = classify(d, 8);
    CHECK(all_info.info_set.size() == 8);
    CHECK(all_info.frozen_set.empty());
    const Construction all_frozen = classify(d, 0);
    CHECK(all_frozen.frozen_set.size() == 8);
    CHECK(all_frozen.info_set.empty());
    CHECK_THROWS_AS(classify(d, 9), std::domain_error);
}

TEST_CASE("order-only construction determines about half the channels at rate one half") {
    const Construction c = construct(10, 0.5, std::nullopt, false, false);
    CHECK(c.dimension == 512);
    const double determined =
        static_cast<double>(c.info_set.size() + c.frozen_set.size()) / 1024.0;
    CHECK(determined >= 0.45);
    CHECK(determined <= 0.55);
    CHECK(partition_ok(c));
    CHECK(c.gamma == Catch::Approx(1.0 - determined));
}

TEST_CASE("construct validates its rate and required inputs") {
    CHECK_THROWS_AS(construct(3, 0.0, std::nullopt, false, false), std::domain_error);
    CHECK_THROWS_AS(construct(3, 1.0, std::nullopt, false, false), std::domain_error);
    CHECK_THROWS_AS(construct(4, 0.5, std::nullopt, true, false), std::domain_error);
    CHECK_THROWS_AS(construct(3, 0.5, std::nullopt, false, true), std::domain_error);
}

TEST_CASE("reduction is a no-op below four levels") {
    // the default split has no room, so no ranking or model is needed
    const Construction with_dr = construct(3, 0.5, std::nullopt, true, false);
    const Construction without = construct(3, 0.5, std::nullopt, false, false);
    CHECK(with_dr.info_set == without.info_set);
    CHECK(with_dr.frozen_set == without.frozen_set);
    CHECK(with_dr.gamma == without.gamma);
}

TEST_CASE("provenance tracks how each channel was decided") {
    const ChannelModel model = ChannelModel::awgn_bpsk(1.0);
    const Construction po_only = construct(8, 0.5, model, false, false);
    const Construction with_dr = construct(8, 0.5, model, true, false);
    const Construction resolved = construct(8, 0.5, model, true, true);

    REQUIRE(partition_ok(with_dr));
    REQUIRE(partition_ok(resolved));
    for (std::uint32_t i = 1; i <= 256; ++i) {
        const Provenance po_label = po_only.provenance[i - 1];
        const Provenance dr_label = with_dr.provenance[i - 1];
        if (po_label == Provenance::PO) REQUIRE(dr_label == Provenance::PO);
        if (dr_label == Provenance::Undetermined)
            REQUIRE(resolved.provenance[i - 1] == Provenance::Resolved);
        else
            REQUIRE(resolved.provenance[i - 1] == dr_label);
    }
    CHECK(resolved.undetermined_set.empty());
    CHECK(resolved.info_set.size() == 128);
    CHECK(resolved.gamma == 0.0);
}

TEST_CASE("more relations never shrink the determined sets") {
    const ChannelModel model = ChannelModel::awgn_bpsk(1.0);
    for (double rate : {0.25, 0.5, 0.75}) {
        const Construction po_only = construct(8, rate, model, false, false);
        const Construction with_dr = construct(8, rate, model, true, false);
        ConstructOptions closure_opts;
        closure_opts.apply_closure = true;
        const Construction with_closure = construct(8, rate, model, true, false, closure_opts);
        CHECK(std::includes(with_dr.info_set.begin(), with_dr.info_set.end(),
                            po_only.info_set.begin(), po_only.info_set.end()));
        CHECK(std::includes(with_dr.frozen_set.begin(), with_dr.frozen_set.end(),
                            po_only.frozen_set.begin(), po_only.frozen_set.end()));
        CHECK(with_closure.gamma <= with_dr.gamma);
        CHECK(with_dr.gamma <= po_only.gamma);
    }
}

TEST_CASE("resolution reproduces the exact best-K sets") {
    for (int n = 1; n <= 8; ++n) {
        const std::uint32_t num_channels = std::uint32_t{1} << n;
        const auto z = bec_bhattacharyya(n, 0.5);
        for (std::uint32_t dimension :
             {num_channels / 4, num_channels / 2, 3 * num_channels / 4}) {
            if (dimension == 0 || dimension >= num_channels) continue;
            const double rate = static_cast<double>(dimension) / num_channels;
            const Construction c =
                construct(n, rate, ChannelModel::bec(0.5), true, true);
            REQUIRE(c.dimension == dimension);
            REQUIRE(c.info_set == oracles::best_k_by_erasure(z, dimension));
        }
    }
}

TEST_CASE("classification never puts a channel on the wrong side of the metric") {
    for (const ChannelModel& model :
         {ChannelModel::bec(0.2), ChannelModel::bec(0.5), ChannelModel::awgn_bpsk(1.0)}) {
        const int n = 8;
        const std::uint32_t num_channels = 256;
        const std::vector<double> metric = detail::resolution_metric(model, n);
        const Construction c = construct(n, 0.5, model, true, false);
        const std::int64_t num_frozen = num_channels - c.dimension;
        for (std::uint32_t i : c.info_set) {
            std::int64_t beaten = 0;
            for (std::uint32_t j = 1; j <= num_channels; ++j)
                if (j != i && metric[i - 1] >= metric[j - 1]) ++beaten;
            REQUIRE(beaten >= num_frozen);
        }
        for (std::uint32_t i : c.frozen_set) {
            std::int64_t beaten_by = 0;
            for (std::uint32_t j = 1; j <= num_channels; ++j)
                if (j != i && metric[j - 1] >= metric[i - 1]) ++beaten_by;
            REQUIRE(beaten_by >= static_cast<std::int64_t>(c.dimension));
        }
    }
}

TEST_CASE("rate sweeps reuse one matrix and match single constructions") {
    const ChannelModel model = ChannelModel::awgn_bpsk(1.0);
    std::vector<double> rates;
    for (int k = 1; k <= 19; ++k) rates.push_back(0.05 * k);

    const auto po_points = gamma_sweep_rate(8, model, false, rates);
    const auto dr_points = gamma_sweep_rate(8, model, true, rates);
    REQUIRE(po_points.size() == rates.size());
    for (std::size_t k = 0; k < rates.size(); ++k) {
        CHECK(dr_points[k].second <= po_points[k].second);
        const Construction c = construct(8, rates[k], model, false, false);
        CHECK(po_points[k].second == c.gamma);
    }
    const auto single = gamma_sweep_rate(8, model, true, {0.5});
    CHECK(single.size() == 1);
    CHECK(single[0].second == construct(8, 0.5, model, true, false).gamma);
}

TEST_CASE("gamma peaks at rate one half in both modes") {
    const ChannelModel model = ChannelModel::awgn_bpsk(1.0);
    std::vector<double> rates;
    for (int k = 1; k <= 19; ++k) rates.push_back(0.05 * k);
    for (bool use_dr : {false, true}) {
        const auto points = gamma_sweep_rate(9, model, use_dr, rates);
        const double at_half = points[9].second;
        for (const auto& [rate, gamma] : points) CHECK(gamma <= at_half);
    }
}

TEST_CASE("blocklength sweeps keep the low-rate curve below the half-rate curve") {
    const ChannelModel model = ChannelModel::awgn_bpsk(1.0);
    const std::vector<int> ns{4, 5, 6, 7, 8, 9};
    for (bool use_dr : {false, true}) {
        const auto low = gamma_sweep_n(ns, 0.1, model, use_dr);
        const auto half = gamma_sweep_n(ns, 0.5, model, use_dr);
        for (std::size_t k = 0; k < ns.size(); ++k) CHECK(low[k].second <= half[k].second);
    }
    // order-only undetermined ratios grow slowly with the block length
    const auto po = gamma_sweep_n(ns, 0.5, model, false);
    for (std::size_t k = 1; k < po.size(); ++k)
        CHECK(po[k].second >= po[k - 1].second - 1e-12);
    CHECK_THROWS_AS(gamma_sweep_n({}, 0.5, model, false), std::domain_error);
}

TEST_CASE("an imported full-length ranking can drive resolution") {
    // rank the full block length and resolve with it: same result as the
    // built-in metric
    const ChannelModel model = ChannelModel::bec(0.5);
    const ReliabilityRanking full = rank_channels(model, 6);
    ConstructOptions options;
    options.resolve_ranking = &full;
    const Construction via_ranking = construct(6, 0.5, model, true, true, options);
    const Construction via_metric = construct(6, 0.5, model, true, true);
    CHECK(via_ranking.info_set == via_metric.info_set);

    ConstructOptions bad;
    const ReliabilityRanking short_ranking = rank_channels(model, 3);
    bad.resolve_ranking = &short_ranking;
    CHECK_THROWS_AS(construct(6, 0.5, model, true, true, bad), std::domain_error);
}

TEST_CASE("a cached matrix must match the requested block length") {
    const RelationMatrix m = po_relation_matrix(5);
    ConstructOptions options;
    options.po_matrix = &m;
    CHECK(construct(5, 0.5, std::nullopt, false, false, options).dimension == 16);
    CHECK_THROWS_AS(construct(6, 0.5, std::nullopt, false, false, options),
                    std::domain_error);
}
