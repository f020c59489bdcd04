// Command-line driver for the error-floor pipeline:
//   info      inspect a parity-check matrix
//   search    step 1, impulse search for dominant error events
//   boundary  step 2, distance-to-error-boundary ranking
//   simulate  step 3, Monte Carlo or importance-sampling estimation
//   report    merge per-run result files into one curve file

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "errorfloor/io.hpp"

namespace fs = std::filesystem;
using namespace ef;

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitDiagnostic = 3;

DecoderConfig make_decoder_config(const std::string& alg, int iters, double clamp) {
    DecoderConfig cfg;
    cfg.algorithm = (alg == "minsum") ? Algorithm::min_sum : Algorithm::belief_propagation;
    cfg.max_iters = iters;
    cfg.llr_clamp = clamp;
    return cfg;
}

std::string class_name(int a, int b) {
    return "(" + std::to_string(a) + "," + std::to_string(b) + ")";
}

int cmd_info(const std::string& path) {
    TannerCode code = parse_alist_file(path);
    std::cout << "n=" << code.n() << " m=" << code.m() << " k=" << code.k() << "\n";
    auto profile = [](const std::map<int, int>& p) {
        std::ostringstream ss;
        for (auto [deg, cnt] : p) ss << deg << ":" << cnt << " ";
        return ss.str();
    };
    std::cout << "variable degrees: " << profile(code.dv_profile()) << "\n";
    std::cout << "check degrees: " << profile(code.dc_profile()) << "\n";
    if (code.regular()) {
        std::cout << "regular {" << code.dv_profile().begin()->first << ","
                  << code.dc_profile().begin()->first << "}, n=" << code.n() << "\n";
    } else {
        std::cout << "irregular, n=" << code.n() << "\n";
    }
    int g = code.girth();
    if (g == TannerCode::kAcyclic) {
        std::cout << "girth: acyclic\n";
    } else {
        std::cout << "girth: " << g << (g == 4 ? "  (warning: 4-cycles present)" : "") << "\n";
    }
    std::cout << "gf2 rank: " << gf2_rank(code) << "\n";
    return 0;
}

std::string trim(const std::string& s) {
    auto first = s.find_first_not_of(" \t\r");
    if (first == std::string::npos) return "";
    auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

// Replace each "--config <file>" with the file's key=value pairs expanded to
// "--key=value" tokens in place. Flags given after --config win (take-last).
std::vector<std::string> expand_config(int argc, char** argv) {
    std::vector<std::string> args;
    for (int i = 1; i < argc; ++i) {
        std::string tok = argv[i];
        std::string path;
        if (tok == "--config" && i + 1 < argc) {
            path = argv[++i];
        } else if (tok.rfind("--config=", 0) == 0) {
            path = tok.substr(9);
        } else {
            args.push_back(std::move(tok));
            continue;
        }
        std::ifstream in(path);
        if (!in) throw std::invalid_argument("cannot open config file " + path);
        std::string line;
        int lineno = 0;
        while (std::getline(in, line)) {
            ++lineno;
            line = trim(line);
            if (line.empty() || line[0] == '#') continue;
            auto eq = line.find('=');
            if (eq == std::string::npos)
                throw std::invalid_argument(path + " line " + std::to_string(lineno) +
                                            ": expected key=value");
            std::string key = trim(line.substr(0, eq));
            std::string value = trim(line.substr(eq + 1));
            if (key.empty())
                throw std::invalid_argument(path + " line " + std::to_string(lineno) +
                                            ": empty key");
            args.push_back("--" + key + "=" + value);
        }
    }
    return args;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"LDPC error-floor characterization pipeline"};
    app.require_subcommand(1);
    app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);

    std::string code_path, alg = "bp", out_path, detail_path, catalog_path, out_dir, mode = "mc";
    int iters = 50, threads = 1, vnum = 0, depth = 1, degree_cutoff = 2, probes = 10;
    double clamp = 30.0;
    double epsilon1 = 3.0, epsilon2 = -1.0, gamma = 0.6, ebno = 6.0;
    std::vector<std::string> gamma_by_degree;
    double lmin = 1.0, lmax = 3.5;
    double threshold = -1.0, shift = 1.0;
    long cap = -1, trials = 10000, per_center = 100;
    std::uint64_t seed = 1;
    std::vector<double> snr_list;
    bool adapt = false;
    std::string report_dir, report_out = "merged.csv";
    long q_multiplicity = 0;
    double q_weight = 0.0, report_rate = 0.5;

    auto* info = app.add_subcommand("info", "inspect a parity-check matrix");
    info->add_option("code", code_path, "alist file")->required();

    std::string config_doc;  // handled by expand_config, declared here for --help
    auto add_decoder_opts = [&](CLI::App* cmd) {
        cmd->add_option("--config", config_doc,
                        "key=value file of option defaults; later flags override");
        cmd->add_option("--iters", iters, "maximum decoder iterations");
        cmd->add_option("--alg", alg, "bp or minsum")->check(CLI::IsMember({"bp", "minsum"}));
        cmd->add_option("--clamp", clamp, "message magnitude clamp");
        cmd->add_option("--threads", threads, "worker threads");
    };

    auto* search = app.add_subcommand("search", "step 1: impulse search");
    search->add_option("--code", code_path)->required();
    search->add_option("--epsilon1", epsilon1, "tier-0/1 impulse magnitude");
    search->add_option("--epsilon2", epsilon2, "tier-2 impulse magnitude (<0: unused)");
    search->add_option("--gamma", gamma, "scaling of untouched bits");
    search->add_option("--gamma-by-degree", gamma_by_degree,
                       "per-degree gamma overrides, deg=value");
    search->add_option("--ebno", ebno, "search Eb/No in dB");
    search->add_option("--vnum", vnum, "branch-subset size (0: full d_v)");
    search->add_option("--depth", depth, "tree depth, 1 or 2");
    search->add_option("--degree-cutoff", degree_cutoff,
                       "irregular codes: smallest degree classes searched");
    search->add_option("--out", out_path, "catalog output file");
    search->add_option("--csv", detail_path, "optional CSV mirror");
    add_decoder_opts(search);

    auto* boundary = app.add_subcommand("boundary", "step 2: error-boundary ranking");
    boundary->add_option("--code", code_path)->required();
    boundary->add_option("--catalog", catalog_path)->required();
    boundary->add_option("--lmin", lmin);
    boundary->add_option("--lmax", lmax);
    boundary->add_option("-p,--probes", probes, "bisection steps per entry");
    boundary->add_option("--ebno", ebno, "probe Eb/No in dB");
    boundary->add_option("--out", out_path, "per-class table CSV");
    boundary->add_option("--detail", detail_path, "per-entry detail CSV");
    add_decoder_opts(boundary);

    auto* simulate = app.add_subcommand("simulate", "step 3: MC / IS estimation");
    simulate->add_option("--code", code_path)->required();
    simulate->add_option("--mode", mode)->check(CLI::IsMember({"mc", "is"}));
    simulate->add_option("--details", detail_path, "per-entry boundary CSV (required for is)");
    simulate->add_option("--snr", snr_list, "Eb/No sweep list, dB")->required();
    simulate->add_option("--trials", trials, "MC trials per SNR");
    simulate->add_option("--per-center", per_center, "IS trials per shift point per SNR");
    simulate->add_option("--threshold", threshold, "d_e2 selection threshold");
    simulate->add_option("--cap", cap, "select the cap smallest-d_e2 events");
    simulate->add_option("--shift", shift, "mean-shift magnitude");
    simulate->add_option("--seed", seed, "master seed");
    simulate->add_flag("--adapt", adapt, "adapt the density once on new events, then rerun");
    simulate->add_option("--out-dir", out_dir, "output directory")->required();
    add_decoder_opts(simulate);

    auto* report = app.add_subcommand("report", "merge result files for plotting");
    report->add_option("--dir", report_dir, "directory of results CSV files")->required();
    report->add_option("--out", report_out, "merged CSV path");
    report->add_option("--q-multiplicity", q_multiplicity, "dominant-event multiplicity A");
    report->add_option("--q-weight", q_weight, "dominant-event weight w");
    report->add_option("--rate", report_rate, "code rate for the Q-proxy column");

    try {
        std::vector<std::string> args = expand_config(argc, argv);
        std::reverse(args.begin(), args.end());
        app.parse(args);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : kExitUsage;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }

    try {
        if (info->parsed()) return cmd_info(code_path);

        if (search->parsed()) {
            TannerCode code = parse_alist_file(code_path);
            SearchParams params;
            params.epsilon1 = epsilon1;
            params.epsilon2 = epsilon2;
            params.gamma = gamma;
            params.eb_no_db = ebno;
            params.v_num = vnum;
            params.tree_depth = depth;
            params.degree_cutoff = degree_cutoff;
            for (const auto& spec : gamma_by_degree) {
                auto eq = spec.find('=');
                if (eq == std::string::npos)
                    throw std::invalid_argument("--gamma-by-degree expects deg=value");
                params.gamma_by_degree[std::stoi(spec.substr(0, eq))] =
                    std::stod(spec.substr(eq + 1));
            }
            DecoderConfig cfg = make_decoder_config(alg, iters, clamp);

            long predicted = search_cost(code, params);
            TsCatalog catalog = run_search(code, params, cfg, threads);

            if (!out_path.empty()) {
                std::ofstream out(out_path);
                write_catalog(out, catalog);
            }
            if (!detail_path.empty()) {
                std::ofstream out(detail_path);
                write_catalog_csv(out, catalog);
            }
            std::map<std::pair<int, int>, std::pair<long, long>> classes;  // count, elem
            for (const auto& [key, rec] : catalog.entries) {
                auto& c = classes[{rec.cls.a, rec.cls.b}];
                c.first++;
                if (rec.cls.elementary) c.second++;
            }
            std::cout << "decodings: " << catalog.decodings << " (predicted " << predicted
                      << "), mean iterations " << catalog.mean_iterations << "\n";
            if (catalog.entries.empty()) {
                std::cout << "no events found; increase epsilon1\n";
            } else {
                std::cout << "class summary (class count elementary):\n";
                for (auto& [key, c] : classes)
                    std::cout << "  " << class_name(key.first, key.second) << " " << c.first << " "
                              << c.second << "\n";
            }
            return 0;
        }

        if (boundary->parsed()) {
            TannerCode code = parse_alist_file(code_path);
            std::ifstream cat_in(catalog_path);
            if (!cat_in) throw std::runtime_error("cannot open " + catalog_path);
            TsCatalog catalog = read_catalog(cat_in, code.n());
            BoundaryProbe probe{lmin, lmax, probes};
            DecoderConfig cfg = make_decoder_config(alg, iters, clamp);
            ChannelModel channel(ebno, static_cast<double>(code.k()) / code.n());

            auto table = rank_catalog(code, catalog, probe, cfg, channel, threads);
            if (!out_path.empty()) {
                std::ofstream out(out_path);
                write_dominance_csv(out, table, ebno);
            }
            if (!detail_path.empty()) {
                std::ofstream out(detail_path);
                write_entry_details_csv(out, catalog, ebno);
            }
            long non_bracketed = 0;
            for (const auto& row : table) non_bracketed += row.non_bracketed;
            std::cout << "ranked " << catalog.entries.size() << " entries in " << table.size()
                      << " classes; " << non_bracketed << " non-bracketed\n";
            for (size_t i = 0; i < table.size() && i < 5; ++i)
                std::cout << "  " << class_name(table[i].a, table[i].b) << " x"
                          << table[i].multiplicity << " min d_e2 " << table[i].min_d_e2 << "\n";
            return 0;
        }

        if (simulate->parsed()) {
            TannerCode code = parse_alist_file(code_path);
            DecoderConfig cfg = make_decoder_config(alg, iters, clamp);
            fs::create_directories(out_dir);
            NoiseSource noise(seed);
            const double rate = static_cast<double>(code.k()) / code.n();

            TsCatalog ranked;
            std::vector<const TsRecord*> shift_points;
            if (mode == "is") {
                if (detail_path.empty())
                    throw std::invalid_argument("mode=is requires --details from the boundary step");
                std::ifstream det(detail_path);
                if (!det) throw std::runtime_error("cannot open " + detail_path);
                ranked = read_entry_details_csv(det, code.n());
                shift_points = select_shift_points(ranked, threshold, cap);
                std::cout << "selected " << shift_points.size() << " shift points\n";
            }

            std::vector<ResultRecord> rows;
            bool all_overflow = false;
            for (double snr : snr_list) {
                ChannelModel channel(snr, rate);
                ResultRecord row;
                row.eb_no_db = snr;
                auto t0 = std::chrono::steady_clock::now();
                if (mode == "mc") {
                    auto est = mc_estimate(code, channel, trials, cfg, noise, threads);
                    row.source = "mc";
                    row.trials = est.trials;
                    row.hits = est.errors;
                    row.p_f_hat = est.p_f_hat;
                    row.p_b_hat = est.p_b_hat;
                    row.ci_low = est.ci_low;
                    row.ci_high = est.ci_high;
                } else {
                    ISDensity density = ISDensity::make(code.n(), channel.sigma2, shift_points,
                                                        shift);
                    auto est = is_estimate(code, channel, density, per_center, cfg, noise, threads);
                    if (adapt && !est.new_events.empty()) {
                        BoundaryProbe probe{lmin, lmax, probes};
                        double adapt_threshold = threshold >= 0.0
                                                     ? threshold
                                                     : std::numeric_limits<double>::infinity();
                        ISDensity enlarged = adapt_density(code, est, density, probe, cfg, channel,
                                                           adapt_threshold);
                        if (enlarged.centers() > density.centers()) {
                            std::cout << "adapted density: " << density.centers() << " -> "
                                      << enlarged.centers() << " centers; restarting\n";
                            est = is_estimate(code, channel, enlarged, per_center, cfg, noise,
                                              threads);
                        }
                    }
                    row.source = "is";
                    row.trials = est.trials;
                    row.hits = est.hits;
                    row.intended_hits = est.intended_hits;
                    row.p_f_hat = est.p_f_hat;
                    row.p_b_hat = est.p_b_hat;
                    row.v_hat = est.v_hat;
                    row.new_event_count = static_cast<long>(est.new_events.size());
                    double se = std::sqrt(
                        std::max(0.0, est.v_hat - est.p_f_hat * est.p_f_hat) / est.trials);
                    row.ci_low = std::max(0.0, est.p_f_hat - 1.96 * se);
                    row.ci_high = est.p_f_hat + 1.96 * se;
                    if (est.weight_overflows > 0) {
                        std::cout << "weight overflows at " << snr << " dB: "
                                  << est.weight_overflows << "\n";
                        if (est.hits > 0 && est.weight_overflows == est.hits) all_overflow = true;
                    }
                    // new-event catalog, reusable as a search-format file
                    TsCatalog new_cat;
                    for (const auto& [support, ev] : est.new_events) {
                        TsRecord rec;
                        rec.support = BitPattern(support, code.n());
                        rec.cls = ev.cls;
                        rec.discovery_count = ev.count;
                        new_cat.entries[support] = rec;
                    }
                    std::ostringstream name;
                    name << "new_events_" << snr << "dB.txt";
                    std::ofstream out(fs::path(out_dir) / name.str());
                    write_catalog(out, new_cat);
                }
                row.wall_seconds =
                    std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
                rows.push_back(row);
                std::cout << row.source << " " << snr << " dB: p_f=" << row.p_f_hat
                          << " hits=" << row.hits << "\n";
            }

            std::ofstream csv(fs::path(out_dir) / (mode + "_results.csv"));
            csv << "# code=" << fs::path(code_path).filename().string() << "\n";
            write_results_csv(csv, rows);
            std::ofstream rec(fs::path(out_dir) / (mode + "_results.records"));
            write_results_records(rec, rows);
            return all_overflow ? kExitDiagnostic : 0;
        }

        if (report->parsed()) {
            std::vector<ResultRecord> rows;
            std::string code_id;
            bool found = false;
            for (const auto& entry : fs::directory_iterator(report_dir)) {
                if (entry.path().extension() != ".csv") continue;
                std::ifstream in(entry.path());
                std::string first;
                std::getline(in, first);
                if (first.rfind("# code=", 0) == 0) {
                    std::string id = first.substr(7);
                    if (!code_id.empty() && id != code_id)
                        throw std::runtime_error("inconsistent code identities: " + code_id +
                                                 " vs " + id);
                    code_id = id;
                } else {
                    in.seekg(0);
                }
                auto part = read_results_csv(in);
                if (part.empty()) continue;
                found = true;
                rows.insert(rows.end(), part.begin(), part.end());
            }
            if (!found) throw std::runtime_error("no result files in " + report_dir);
            std::ofstream out(report_out);
            write_merged_report(out, rows, q_multiplicity, q_weight, report_rate);
            std::cout << "merged " << rows.size() << " rows into " << report_out << "\n";
            return 0;
        }
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitData;
    }
    return 0;
}
