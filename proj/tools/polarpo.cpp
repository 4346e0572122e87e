// Command-line driver for polar-code construction with channel-independent
// partial orders and dimension reduction.
//
// Exit codes: 0 success, 2 usage or argument parse failure, 3 relation
// consistency error, 4 malformed file (cache, ranking), 1 anything else.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "polarpo/polarpo.hpp"

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitConsistency = 3;
constexpr int kExitFormat = 4;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::vector<double> parse_rate_list(const std::string& text) {
    std::vector<double> rates;
    if (text.find(',') != std::string::npos || text.find(':') == std::string::npos) {
        std::stringstream ss(text);
        std::string item;
        while (std::getline(ss, item, ',')) rates.push_back(std::stod(item));
        return rates;
    }
    // lo:hi:step, generated as lo + k*step to keep the grid reproducible
    double lo = 0, hi = 0, step = 0;
    if (std::sscanf(text.c_str(), "%lf:%lf:%lf", &lo, &hi, &step) != 3 || step <= 0)
        throw UsageError("bad rate range '" + text + "', expected lo:hi:step");
    for (int k = 0;; ++k) {
        const double r = lo + k * step;
        if (r > hi + 1e-12) break;
        rates.push_back(r);
    }
    return rates;
}

std::vector<int> parse_n_list(const std::string& text) {
    std::vector<int> ns;
    const auto colon = text.find(':');
    if (colon != std::string::npos) {
        const int lo = std::stoi(text.substr(0, colon));
        const int hi = std::stoi(text.substr(colon + 1));
        if (lo < 1 || hi < lo) throw UsageError("bad blocklength range '" + text + "'");
        for (int n = lo; n <= hi; ++n) ns.push_back(n);
        return ns;
    }
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) ns.push_back(std::stoi(item));
    return ns;
}

std::string format_fixed(double v, int decimals = 6) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*f", decimals, v);
    return buf;
}

void write_output(const std::string& out_path, const std::string& content) {
    if (out_path.empty()) {
        std::cout << content;
        return;
    }
    std::ofstream os(out_path, std::ios::binary | std::ios::trunc);
    if (!os) throw polarpo::ResourceError("cannot write output file " + out_path);
    os << content;
}

struct CommonArgs {
    std::string cache_dir;
    std::string channel_spec;
    std::string ranking_file;
    int n_u = 0;
    bool closure = false;
    bool no_dr = false;
    bool dr_flag = false;

    std::optional<polarpo::ChannelModel> model() const {
        if (channel_spec.empty()) return std::nullopt;
        try {
            return polarpo::ChannelModel::parse(channel_spec);
        } catch (const polarpo::FormatError& e) {
            throw UsageError(e.what());  // a bad channel spec is a usage problem
        }
    }

    bool dr_enabled() const {
        if (no_dr) return false;
        return dr_flag || !channel_spec.empty() || !ranking_file.empty();
    }

    std::filesystem::path resolved_cache_dir() const {
        return polarpo::cache_directory(cache_dir.empty()
                                            ? std::optional<std::string>{}
                                            : std::optional<std::string>{cache_dir});
    }
};

int run_relation(int n, const CommonArgs& args) {
    const auto dir = args.resolved_cache_dir();
    const polarpo::RelationMatrix m = polarpo::load_or_build_po_matrix(n, dir);
    const double density =
        static_cast<double>(m.determined_count()) / static_cast<double>(m.pair_count());
    std::cout << "n=" << n << " N=" << m.block_length() << " determined_pairs="
              << m.determined_count() << "/" << m.pair_count()
              << " density=" << format_fixed(density) << "\n";
    return 0;
}

// DR needs an upper-part ranking: an imported file when given, otherwise the
// model's evaluator (cached).
polarpo::ReliabilityRanking dr_ranking(const CommonArgs& args, int n_u) {
    if (!args.ranking_file.empty()) {
        polarpo::ReliabilityRanking r = polarpo::load_ranking_file(args.ranking_file);
        if (r.n_u != n_u)
            throw UsageError("ranking file is for n_u=" + std::to_string(r.n_u) +
                             ", requested n_u=" + std::to_string(n_u));
        return r;
    }
    return polarpo::load_or_build_ranking(*args.model(), n_u, args.resolved_cache_dir());
}

int run_construct(int n, double rate, bool resolve, const std::string& resolve_ranking_file,
                  const std::string& out_path, const CommonArgs& args) {
    const bool use_dr = args.dr_enabled() && n > 1;
    if (args.dr_flag && args.channel_spec.empty() && args.ranking_file.empty())
        throw UsageError("--dr needs --channel or --ranking");
    if (resolve && args.channel_spec.empty() && resolve_ranking_file.empty())
        throw UsageError("--resolve needs --channel or --resolve-ranking");

    const auto model = args.model();
    polarpo::ConstructOptions options;
    options.n_u = args.n_u;
    options.apply_closure = args.closure;

    const polarpo::RelationMatrix po_matrix =
        polarpo::load_or_build_po_matrix(n, args.resolved_cache_dir());
    options.po_matrix = &po_matrix;

    polarpo::ReliabilityRanking upper_ranking;
    const int n_u_effective = args.n_u > 0 ? args.n_u : polarpo::DrConfig::default_n_u(n);
    if (use_dr && n_u_effective >= 1) {
        upper_ranking = dr_ranking(args, n_u_effective);
        options.dr_ranking = &upper_ranking;
    }
    polarpo::ReliabilityRanking full_ranking;
    if (resolve && !resolve_ranking_file.empty()) {
        full_ranking = polarpo::load_ranking_file(resolve_ranking_file);
        options.resolve_ranking = &full_ranking;
    }

    const polarpo::Construction c =
        polarpo::construct(n, rate, model, use_dr, resolve, options);

    std::ostringstream json;
    polarpo::write_construction(json, c);
    write_output(out_path, json.str());

    std::cerr << "n=" << n << " N=" << c.block_length << " K=" << c.dimension
              << " |I|=" << c.info_set.size() << " |F|=" << c.frozen_set.size()
              << " |U|=" << c.undetermined_set.size()
              << " gamma=" << format_fixed(c.gamma) << "\n";
    if (!c.resolution_ties.empty())
        std::cerr << "note: " << c.resolution_ties.size()
                  << " metric tie(s) during resolution, broken toward the lower index\n";
    return 0;
}

int run_sweep(const std::string& mode, int n, double rate, const std::string& rates_text,
              const std::string& ns_text, const std::string& out_path, const CommonArgs& args) {
    if (args.channel_spec.empty())
        throw UsageError("sweep needs --channel for the dimension-reduction column");
    const auto model = args.model();
    polarpo::ConstructOptions options;
    options.n_u = args.n_u;
    options.apply_closure = args.closure;

    std::ostringstream csv;
    csv << "x,gamma_po,gamma_po_dr\n";
    if (mode == "rate") {
        const std::vector<double> rates = parse_rate_list(rates_text);
        const polarpo::RelationMatrix po_matrix =
            polarpo::load_or_build_po_matrix(n, args.resolved_cache_dir());
        options.po_matrix = &po_matrix;
        polarpo::ReliabilityRanking upper_ranking;
        const int n_u_effective = args.n_u > 0 ? args.n_u : polarpo::DrConfig::default_n_u(n);
        const bool dr_possible = n_u_effective >= 1;
        if (dr_possible) {
            upper_ranking = dr_ranking(args, n_u_effective);
            options.dr_ranking = &upper_ranking;
        }
        const auto po_points = polarpo::gamma_sweep_rate(n, model, false, rates, options);
        const auto dr_points = dr_possible
                                   ? polarpo::gamma_sweep_rate(n, model, true, rates, options)
                                   : po_points;
        for (std::size_t k = 0; k < po_points.size(); ++k)
            csv << format_fixed(po_points[k].first) << ',' << format_fixed(po_points[k].second)
                << ',' << format_fixed(dr_points[k].second) << "\n";
    } else if (mode == "blocklength") {
        const std::vector<int> ns = parse_n_list(ns_text);
        const auto po_points = polarpo::gamma_sweep_n(ns, rate, model, false, options);
        const auto dr_points = polarpo::gamma_sweep_n(ns, rate, model, true, options);
        for (std::size_t k = 0; k < po_points.size(); ++k)
            csv << po_points[k].first << ',' << format_fixed(po_points[k].second) << ','
                << format_fixed(dr_points[k].second) << "\n";
    } else {
        throw UsageError("unknown sweep mode '" + mode + "', expected rate or blocklength");
    }
    write_output(out_path, csv.str());
    return 0;
}

int run_render(int n, const std::string& out_path, const CommonArgs& args) {
    if (args.dr_flag && args.channel_spec.empty() && args.ranking_file.empty())
        throw UsageError("dimension-reduction overlay needs --channel or --ranking");
    polarpo::RelationMatrix m = polarpo::load_or_build_po_matrix(n, args.resolved_cache_dir());
    if (args.dr_enabled() && n > 1) {
        const int n_u_effective = args.n_u > 0 ? args.n_u : polarpo::DrConfig::default_n_u(n);
        if (n_u_effective >= 1) {
            const polarpo::ReliabilityRanking ranking = dr_ranking(args, n_u_effective);
            polarpo::DrConfig cfg;
            cfg.n = n;
            cfg.n_u = n_u_effective;
            cfg.ranking = &ranking;
            cfg.apply_closure = args.closure;
            m = polarpo::dr_update(m, cfg);
        }
    }
    std::ostringstream image;
    polarpo::render_relation_ppm(m, image);
    write_output(out_path, image.str());
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"polar-code construction via channel-independent partial orders"};
    app.require_subcommand(1);

    CommonArgs common;
    int n = 0;
    double rate = 0.5;
    bool resolve = false;
    std::string resolve_ranking_file;
    std::string out_path;
    std::string sweep_mode = "rate";
    std::string rates_text = "0.05:0.95:0.05";
    std::string ns_text = "4:10";

    auto add_common = [&](CLI::App* cmd, bool with_channel) {
        cmd->add_option("--cache-dir", common.cache_dir,
                        "cache directory (default: $POLARPO_CACHE_DIR or ./.polarpo-cache)");
        if (with_channel) {
            cmd->add_option("--channel", common.channel_spec,
                            "underlying channel, bec:<eps> or awgn:<snr_db>");
            cmd->add_option("--ranking", common.ranking_file,
                            "imported upper-part ranking JSON for dimension reduction");
            cmd->add_option("--nu", common.n_u, "upper split width (default n-3)");
            cmd->add_flag("--closure", common.closure,
                          "apply a transitive-closure pass after dimension reduction");
            cmd->add_flag("--dr", common.dr_flag,
                          "force dimension reduction (on by default with --channel)");
            cmd->add_flag("--no-dr", common.no_dr, "disable dimension reduction");
        }
    };

    CLI::App* relation = app.add_subcommand("relation",
                                            "build or load the channel-independent relation matrix");
    relation->add_option("-n,--n", n, "block-length exponent, N = 2^n")->required();
    add_common(relation, false);

    CLI::App* construct = app.add_subcommand("construct", "construct a polar code");
    construct->add_option("-n,--n", n, "block-length exponent, N = 2^n")->required();
    construct->add_option("-R,--rate", rate, "code rate in (0, 1)")->required();
    construct->add_flag("--resolve", resolve,
                        "resolve undetermined channels with the full-length metric");
    construct->add_option("--resolve-ranking", resolve_ranking_file,
                          "imported full-length ranking JSON for resolution");
    construct->add_option("-o,--out", out_path, "output JSON file (default: stdout)");
    add_common(construct, true);

    CLI::App* sweep = app.add_subcommand("sweep", "gamma sweeps over rate or block length");
    sweep->add_option("--mode", sweep_mode, "rate or blocklength")->required();
    sweep->add_option("-n,--n", n, "block-length exponent for rate sweeps");
    sweep->add_option("-R,--rate", rate, "code rate for blocklength sweeps");
    sweep->add_option("--rates", rates_text, "rate grid: lo:hi:step or comma list");
    sweep->add_option("--ns", ns_text, "blocklength grid: lo:hi or comma list");
    sweep->add_option("-o,--out", out_path, "output CSV file (default: stdout)");
    add_common(sweep, true);

    CLI::App* render = app.add_subcommand("render", "relation dot plot as a PPM image");
    render->add_option("-n,--n", n, "block-length exponent, N = 2^n")->required();
    render->add_option("-o,--out", out_path, "output PPM file")->required();
    add_common(render, true);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitUsage;
    }

    try {
        if (relation->parsed()) return run_relation(n, common);
        if (construct->parsed())
            return run_construct(n, rate, resolve, resolve_ranking_file, out_path, common);
        if (sweep->parsed())
            return run_sweep(sweep_mode, n, rate, rates_text, ns_text, out_path, common);
        if (render->parsed()) return run_render(n, out_path, common);
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const polarpo::ConsistencyError& e) {
        std::cerr << "consistency error: " << e.what() << "\n";
        return kExitConsistency;
    } catch (const polarpo::FormatError& e) {
        std::cerr << "format error: " << e.what() << "\n";
        return kExitFormat;
    } catch (const std::domain_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
