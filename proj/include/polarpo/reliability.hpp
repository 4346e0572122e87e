#pragma once

#include <algorithm>
#include <cassert>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <string>
#include <string_view>
#include <vector>

#include "polarpo/bit_index.hpp"
#include "polarpo/errors.hpp"

namespace polarpo {

/// Underlying channel parameterization: erasure channel with erasure
/// probability eps, or unit-energy BPSK over AWGN at snr_db = Es/N0 in dB
/// (noise variance 1 / (2 * 10^(snr_db/10))).
struct ChannelModel {
    enum class Kind : std::uint8_t { Bec, AwgnBpsk };

    Kind kind = Kind::Bec;
    double value = 0.5;

    static ChannelModel bec(double eps) {
        if (!(eps >= 0.0 && eps <= 1.0))
            throw std::domain_error("erasure probability must be in [0, 1]");
        return {Kind::Bec, eps};
    }

    static ChannelModel awgn_bpsk(double snr_db) {
        if (!std::isfinite(snr_db))
            throw std::domain_error("SNR must be finite");
        return {Kind::AwgnBpsk, snr_db};
    }

    /// Canonical spec string, e.g. "bec:0.5" or "awgn:1.0".
    std::string spec_string() const {
        char buf[32];
        auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), value);
        (void)ec;
        return std::string(kind == Kind::Bec ? "bec:" : "awgn:") + std::string(buf, end);
    }

    /// Parses "bec:<eps>" / "awgn:<snr_db>".
    static ChannelModel parse(std::string_view spec) {
        const auto colon = spec.find(':');
        if (colon == std::string_view::npos)
            throw FormatError("channel spec needs the form bec:<eps> or awgn:<snr_db>: '" +
                              std::string(spec) + "'");
        const std::string_view name = spec.substr(0, colon);
        const std::string_view num = spec.substr(colon + 1);
        double v = 0.0;
        const auto [ptr, ec] = std::from_chars(num.data(), num.data() + num.size(), v);
        if (ec != std::errc{} || ptr != num.data() + num.size())
            throw FormatError("bad channel parameter: '" + std::string(spec) + "'");
        if (name == "bec") {
            if (!(v >= 0.0 && v <= 1.0))
                throw FormatError("erasure probability out of [0, 1]: '" + std::string(spec) + "'");
            return bec(v);
        }
        if (name == "awgn") {
            if (!std::isfinite(v))
                throw FormatError("SNR must be finite: '" + std::string(spec) + "'");
            return awgn_bpsk(v);
        }
        throw FormatError("unknown channel kind: '" + std::string(spec) + "'");
    }

    friend bool operator==(const ChannelModel&, const ChannelModel&) = default;
};

/// Exact erasure parameter of one synthesized channel: starting from eps,
/// apply z -> 2z - z^2 for each 0 bit and z -> z^2 for each 1 bit of i-1,
/// most significant bit first.
inline double bec_bhattacharyya_at(std::uint64_t i, int n, double eps) {
    check_index_args(i, n);
    if (!(eps >= 0.0 && eps <= 1.0))
        throw std::domain_error("erasure probability must be in [0, 1]");
    const std::uint64_t v = i - 1;
    double z = eps;
    for (int k = n - 1; k >= 0; --k) {
        const double z_sq = z * z;
        const double z_or = 2.0 * z - z_sq;
        assert(z_sq <= z + 1e-15 && z <= z_or + 1e-15);
        z = ((v >> k) & 1u) ? z_sq : z_or;
    }
    return z;
}

/// Erasure parameters of all 2^n synthesized channels, index order.
inline std::vector<double> bec_bhattacharyya(int n, double eps) {
    const std::size_t num_channels = std::size_t{1} << n;
    std::vector<double> z(num_channels);
    for (std::size_t i = 1; i <= num_channels; ++i)
        z[i - 1] = bec_bhattacharyya_at(i, n, eps);
    return z;
}

namespace ga {

inline constexpr double kMeanFloor = 1e-300;
inline constexpr double kPhiSplit = 10.0;
// Where 1 - x/4 meets the mid-range exponential form. Below this point the
// exponential form exceeds 1 (the true function never does) and would give
// the degrade step a spurious floor near 0.03, inverting provably ordered
// channel pairs.
inline constexpr double kPhiLinearEnd = 0.04985185940853722;

/// Mean-degradation function of a single check-node combine, approximated in
/// three strictly decreasing pieces: 1 - x/4 for small x, the classic
/// exponential form up to the split point, and the asymptotic tail beyond it.
inline double phi(double x) {
    if (x <= 0.0) return 1.0;
    if (x <= kPhiLinearEnd) return 1.0 - x / 4.0;
    if (x <= kPhiSplit) return std::exp(-0.4527 * std::pow(x, 0.86) + 0.0218);
    return std::sqrt(M_PI / x) * std::exp(-x / 4.0) * (1.0 - 10.0 / (7.0 * x));
}

/// ln(phi(x)), stable where phi itself would underflow.
inline double log_phi(double x) {
    if (x <= 0.0) return 0.0;
    if (x <= kPhiLinearEnd) return std::log1p(-x / 4.0);
    if (x <= kPhiSplit) return -0.4527 * std::pow(x, 0.86) + 0.0218;
    return 0.5 * std::log(M_PI / x) - x / 4.0 + std::log1p(-10.0 / (7.0 * x));
}

/// Inverse of phi by bisection on log_phi to 1e-10 relative tolerance. The
/// mid and tail pieces overlap over a narrow band near the split point;
/// targets in that band resolve to the lower piece.
inline double phi_inv_log(double log_y) {
    if (log_y >= 0.0) return kMeanFloor;
    const double log_mid_at_split = -0.4527 * std::pow(kPhiSplit, 0.86) + 0.0218;
    if (log_y >= log_mid_at_split) {
        // Bisect the exponent so tiny solutions keep full relative precision.
        double t_lo = std::log2(kMeanFloor);
        double t_hi = std::log2(kPhiSplit);
        for (int iter = 0; iter < 200 && t_hi - t_lo > 1.4e-10; ++iter) {
            const double t_mid = 0.5 * (t_lo + t_hi);
            (log_phi(std::exp2(t_mid)) > log_y ? t_lo : t_hi) = t_mid;
        }
        return std::exp2(0.5 * (t_lo + t_hi));
    }
    double lo = kPhiSplit;
    double hi = 2.0 * kPhiSplit;
    while (log_phi(hi) > log_y && hi < 1e15) {
        lo = hi;
        hi *= 2.0;
    }
    for (int iter = 0; iter < 300 && hi - lo > 1e-10 * lo; ++iter) {
        const double mid = 0.5 * (lo + hi);
        (log_phi(mid) > log_y ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

inline double phi_inv(double y) {
    if (y >= 1.0) return kMeanFloor;
    if (y <= 0.0) throw std::domain_error("phi_inv needs y in (0, 1]");
    return phi_inv_log(std::log(y));
}

/// One check-node degrade step, phi_inv(1 - (1 - phi(m))^2). Evaluated as
/// phi_inv(p * (2 - p)) in the log domain -- the same value without
/// cancellation or underflow -- and in closed form inside the linear piece,
/// where it reduces to m^2/4.
inline double degrade(double m) {
    if (m <= kPhiLinearEnd) return std::max(m * m / 4.0, kMeanFloor);
    const double lp = log_phi(m);
    const double log_y = lp + std::log(2.0 - std::exp(lp));
    return std::max(phi_inv_log(log_y), kMeanFloor);
}

}  // namespace ga

/// Mean log-likelihood ratio of one synthesized channel under the Gaussian
/// approximation: start at 4 * 10^(snr_db/10), then per bit of i-1 (most
/// significant first) double the mean on a 1 bit and degrade it on a 0 bit.
inline double ga_awgn_mean_at(std::uint64_t i, int n, double snr_db) {
    check_index_args(i, n);
    if (!std::isfinite(snr_db)) throw std::domain_error("SNR must be finite");
    const std::uint64_t v = i - 1;
    double m = 4.0 * std::pow(10.0, snr_db / 10.0);
    for (int k = n - 1; k >= 0; --k)
        m = ((v >> k) & 1u) ? 2.0 * m : ga::degrade(m);
    return m;
}

/// Gaussian-approximation means of all 2^n synthesized channels, index order.
inline std::vector<double> ga_awgn_means(int n, double snr_db) {
    const std::size_t num_channels = std::size_t{1} << n;
    std::vector<double> means(num_channels);
    for (std::size_t i = 1; i <= num_channels; ++i)
        means[i - 1] = ga_awgn_mean_at(i, n, snr_db);
    return means;
}

/// A strict total quality order over the 2^n_u channels of a block length,
/// best first. metric[k] belongs to channel k+1; higher metric is better.
/// Equal metrics are recorded in ties and ordered lower-index-first.
struct ReliabilityRanking {
    int n_u = 1;
    ChannelModel model;
    std::string evaluator;
    std::vector<double> metric;
    std::vector<std::uint32_t> order;
    std::vector<std::vector<std::uint32_t>> ties;
    bool tie_lower_index_first = true;

    std::size_t block_length() const { return std::size_t{1} << n_u; }

    bool strictly_better(std::uint32_t a, std::uint32_t b) const {
        return metric[a - 1] > metric[b - 1];
    }

    friend bool operator==(const ReliabilityRanking&, const ReliabilityRanking&) = default;
};

namespace detail {

inline std::vector<std::uint32_t> best_first_order(const std::vector<double>& metric) {
    std::vector<std::uint32_t> order(metric.size());
    std::iota(order.begin(), order.end(), 1u);
    std::sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
        if (metric[a - 1] != metric[b - 1]) return metric[a - 1] > metric[b - 1];
        return a < b;
    });
    return order;
}

inline std::vector<std::vector<std::uint32_t>> tie_groups(
    const std::vector<double>& metric, const std::vector<std::uint32_t>& order) {
    std::vector<std::vector<std::uint32_t>> groups;
    std::size_t k = 0;
    while (k < order.size()) {
        std::size_t end = k + 1;
        while (end < order.size() && metric[order[end] - 1] == metric[order[k] - 1]) ++end;
        if (end - k >= 2)
            groups.emplace_back(order.begin() + k, order.begin() + end);
        k = end;
    }
    return groups;
}

}  // namespace detail

/// Ranks all channels of block length 2^n_u under the given model: exact
/// erasure parameters for BEC (metric -Z) or Gaussian-approximation means
/// for AWGN (metric +mean).
inline ReliabilityRanking rank_channels(const ChannelModel& model, int n_u) {
    if (n_u < 1 || n_u > kMaxIndexBits)
        throw std::domain_error("ranking width out of range: " + std::to_string(n_u));
    ReliabilityRanking r;
    r.n_u = n_u;
    r.model = model;
    if (model.kind == ChannelModel::Kind::Bec) {
        r.evaluator = "bec-exact";
        r.metric = bec_bhattacharyya(n_u, model.value);
        for (double& z : r.metric) z = -z;
    } else {
        r.evaluator = "ga";
        r.metric = ga_awgn_means(n_u, model.value);
    }
    r.order = detail::best_first_order(r.metric);
    r.ties = detail::tie_groups(r.metric, r.order);
    return r;
}

}  // namespace polarpo
