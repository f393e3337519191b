#include <CLI11.hpp>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "lppls/config.hpp"
#include "lppls/errors.hpp"
#include "lppls/postmortem.hpp"

namespace fs = std::filesystem;
using namespace lppls;

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitData = 3;
constexpr int kExitNoFit = 4;

DateSerial require_date(const std::string& text, const std::string& what) {
    auto d = parse_date(text);
    if (!d) throw CLI::ValidationError(what, "invalid date '" + text + "' (want YYYY-MM-DD)");
    return *d;
}

PriceSeries load_data(const RunConfig& cfg) {
    if (cfg.data_path.empty()) throw DataError("no data path configured (use --data)");
    return PriceSeries::load_csv(cfg.data_path, cfg.csv);
}

void apply_date_range(RunConfig& cfg, const PriceSeries& series) {
    if (!cfg.t2_start_date.empty())
        cfg.scan.schedule.t2_start = series.lower_bound(require_date(cfg.t2_start_date, "t2_start"));
    if (!cfg.t2_end_date.empty()) {
        std::size_t i = series.lower_bound(require_date(cfg.t2_end_date, "t2_end"));
        if (i >= series.size() || series.date(i) != require_date(cfg.t2_end_date, "t2_end")) {
            if (i == 0) throw DataError("t2_end before first observation");
            --i;  // last trading day <= requested end
        }
        cfg.scan.schedule.t2_end = i;
    }
}

std::vector<QualifiedFit> read_fits_jsonl(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open fits file " + path);
    std::vector<QualifiedFit> fits;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        fits.push_back(qualified_from_json(json::parse(line)));
    }
    return fits;
}

void write_fits_jsonl(const std::string& path, const std::vector<QualifiedFit>& fits,
                      const PriceSeries& series) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot write " + path);
    for (const auto& qf : fits) out << to_json(qf, &series).dump() << "\n";
}

int cmd_fit(RunConfig cfg, const std::string& t1_text, const std::string& t2_text,
            const std::string& out_path) {
    const PriceSeries series = load_data(cfg);
    const DateSerial d1 = require_date(t1_text, "t1");
    const DateSerial d2 = require_date(t2_text, "t2");
    if (d1 >= d2) throw CLI::ValidationError("window", "t1 must be before t2");
    const std::size_t i1 = series.lower_bound(d1);
    const std::size_t i2 = series.lower_bound(d2) < series.size() &&
                                   series.date(series.lower_bound(d2)) == d2
                               ? series.lower_bound(d2)
                               : (series.lower_bound(d2) == 0 ? 0 : series.lower_bound(d2) - 1);
    if (i1 >= i2 || i2 >= series.size()) throw DataError("window outside the data range");

    const Window window{i1, i2};
    CalibrationConfig ccfg = cfg.scan.calibration;
    ccfg.seed = window_seed(cfg.scan.master_seed, window.t1, window.t2);
    const CalibrationResult res = calibrate(series, window, cfg.scan.space, ccfg);
    if (!res.ok()) {
        json j{{"status", "no-fit"}, {"reason", res.reason}};
        std::ofstream(out_path) << j.dump(2) << "\n";
        std::cerr << "no fit: " << res.reason << "\n";
        return kExitNoFit;
    }

    const LpplsFit& fit = *res.fit;
    const FilterReport report = qualify(series, window, fit, cfg.scan.filters);

    json curve = json::array();
    for (std::size_t i = window.t1; i <= window.t2; ++i) {
        curve.push_back({{"date", format_date(series.date(i))},
                         {"log_price", series.log_price(i)},
                         {"fitted", lppls_eval(fit.nonlinear, fit.linear, double(i))}});
    }
    json detrended = json::array();
    for (const auto& p : detrended_residual(series, window, fit))
        detrended.push_back({{"x", p.x}, {"r", p.r}});

    json j{{"status", "ok"},
           {"fit", to_json(fit, &series)},
           {"report", to_json(report)},
           {"tc_date", format_date(series.date(series.size() - 1))},
           {"curve", curve},
           {"detrended_residual", detrended}};
    // map fractional t_c to a calendar date for convenience
    {
        const double tc = fit.nonlinear.tc;
        const std::size_t last = series.size() - 1;
        DateSerial d = tc <= double(last) ? series.date(std::size_t(std::lround(tc)))
                                          : series.date(last);
        for (double k = double(last); k < tc - 0.5; k += 1.0)
            d = next_weekday_on_or_after(d + 1);
        j["tc_date"] = format_date(d);
    }
    std::ofstream out(out_path);
    if (!out) throw DataError("cannot write " + out_path);
    out << j.dump(2) << "\n";
    std::cout << "fit written to " << out_path << " (qualified="
              << (report.qualified ? "yes" : "no") << ")\n";
    return 0;
}

int cmd_scan(RunConfig cfg) {
    const PriceSeries series = load_data(cfg);
    apply_date_range(cfg, series);
    fs::create_directories(cfg.output_dir);
    if (cfg.scan.checkpoint_path.empty())
        cfg.scan.checkpoint_path = (fs::path(cfg.output_dir) / "checkpoint.jsonl").string();
    save_config(cfg, (fs::path(cfg.output_dir) / "resolved_config.json").string());

    const auto t_start = std::chrono::steady_clock::now();
    ScanResult result = scan(series, cfg.scan, [](std::size_t done, std::size_t total) {
        std::fprintf(stderr, "\r%zu/%zu t2 complete", done, total);
        if (done == total) std::fprintf(stderr, "\n");
    });
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();

    write_indicator_csv((fs::path(cfg.output_dir) / "indicator.csv").string(),
                        result.points);
    write_fits_jsonl((fs::path(cfg.output_dir) / "qualified_fits.jsonl").string(),
                     result.qualified_fits, series);

    std::size_t total_windows = 0, failed = 0;
    for (const auto& pt : result.points) {
        total_windows += pt.n_windows;
        failed += pt.n_failed_fits;
    }
    std::cout << "scan: " << result.points.size() << " t2 points, " << total_windows
              << " windows, " << result.qualified_fits.size() << " qualified fits, " << failed
              << " failed calibrations, " << secs << " s\n";
    return 0;
}

int cmd_postmortem(RunConfig cfg, const std::string& fits_path, const std::string& lo_text,
                   const std::string& hi_text, const std::string& out_prefix) {
    const PriceSeries series = load_data(cfg);
    const DateSerial lo = require_date(lo_text, "episode-start");
    const DateSerial hi = require_date(hi_text, "episode-end");
    const auto all = read_fits_jsonl(fits_path);
    const auto fits = collect_fits(all, series, lo, hi);

    json summary{{"episode_start", format_date(lo)},
                 {"episode_end", format_date(hi)},
                 {"n_fits", fits.size()}};
    if (fits.empty()) {
        summary["status"] = "empty";
        std::ofstream(out_prefix + "_summary.json") << summary.dump(2) << "\n";
        std::cout << "no qualified fits in the episode window\n";
        return 0;
    }

    const DensityEstimate d_t1 = density(fits, FitField::T1, series);
    const DensityEstimate d_tc = density(fits, FitField::Tc, series);
    write_density_csv(out_prefix + "_density.csv", d_t1, d_tc);

    auto range_json = [](const DensityEstimate& d, double a, double b) {
        auto [qa, qb] = quantile_range(d, a, b);
        return json{{"lo", format_date(qa)}, {"hi", format_date(qb)}};
    };
    summary["status"] = "ok";
    summary["t1"] = {{"q20_80", range_json(d_t1, 0.20, 0.80)},
                     {"q05_95", range_json(d_t1, 0.05, 0.95)}};
    summary["tc"] = {{"q20_80", range_json(d_tc, 0.20, 0.80)},
                     {"q05_95", range_json(d_tc, 0.05, 0.95)}};
    std::ofstream(out_prefix + "_summary.json") << summary.dump(2) << "\n";
    std::cout << "post-mortem over " << fits.size() << " fits written to " << out_prefix
              << "_{density.csv,summary.json}\n";
    return 0;
}

int cmd_synth(double tc, double m, double omega, double a, double b, double c1, double c2,
              std::size_t n, double noise, std::uint64_t seed, const std::string& out_path) {
    const NonlinearParams p{tc, m, omega};
    const LinearParams q{a, b, c1, c2};
    const PriceSeries series = synthesize(p, q, n, noise, seed);
    std::ofstream out(out_path);
    if (!out) throw DataError("cannot write " + out_path);
    out << "date,close\n";
    char buf[64];
    for (std::size_t i = 0; i < series.size(); ++i) {
        std::snprintf(buf, sizeof(buf), "%s,%.12g\n", format_date(series.date(i)).c_str(),
                      series.close(i));
        out << buf;
    }
    std::cout << "wrote " << series.size() << " synthetic rows to " << out_path << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"LPPLS bubble-detection engine"};
    app.require_subcommand(1);

    std::string config_path, data_path, date_col, price_col, date_fmt;
    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", config_path, "JSON config file");
        sub->add_option("--data", data_path, "price CSV (overrides config)");
        sub->add_option("--date-column", date_col, "date column name");
        sub->add_option("--price-column", price_col, "price column name");
        sub->add_option("--date-format", date_fmt, "strptime date format");
    };
    auto resolve_config = [&]() {
        RunConfig cfg;
        if (!config_path.empty()) cfg = load_config(config_path);
        if (!data_path.empty()) cfg.data_path = data_path;
        if (!date_col.empty()) cfg.csv.date_column = date_col;
        if (!price_col.empty()) cfg.csv.price_column = price_col;
        if (!date_fmt.empty()) cfg.csv.date_format = date_fmt;
        return cfg;
    };

    // fit
    auto* fit = app.add_subcommand("fit", "Calibrate and qualify a single window");
    std::string t1_text, t2_text, fit_out = "fit.json";
    add_common(fit);
    fit->add_option("--t1", t1_text, "window start date")->required();
    fit->add_option("--t2", t2_text, "window end date")->required();
    fit->add_option("--out", fit_out, "output JSON path");
    std::uint64_t fit_seed = 0;
    bool fit_seed_set = false;
    fit->add_option("--seed", fit_seed, "master seed")->each([&](const std::string&) {
        fit_seed_set = true;
    });

    // scan
    auto* scan_cmd = app.add_subcommand("scan", "Full confidence-indicator scan");
    std::string out_dir, ckpt, t2_start_text, t2_end_text;
    unsigned parallelism = 0;
    std::uint64_t scan_seed = 0;
    bool scan_seed_set = false;
    add_common(scan_cmd);
    scan_cmd->add_option("--output-dir", out_dir, "output directory");
    scan_cmd->add_option("--checkpoint", ckpt, "checkpoint file (resume support)");
    scan_cmd->add_option("--parallelism", parallelism, "worker threads");
    scan_cmd->add_option("--t2-start", t2_start_text, "first pseudo-present date");
    scan_cmd->add_option("--t2-end", t2_end_text, "last pseudo-present date");
    scan_cmd->add_option("--seed", scan_seed, "master seed")->each([&](const std::string&) {
        scan_seed_set = true;
    });

    // postmortem
    auto* pm = app.add_subcommand("postmortem", "Episode density and quantile analysis");
    std::string fits_path, ep_lo, ep_hi, pm_prefix = "postmortem";
    add_common(pm);
    pm->add_option("--fits", fits_path, "qualified_fits.jsonl from a scan")->required();
    pm->add_option("--episode-start", ep_lo, "first t2 date of the episode")->required();
    pm->add_option("--episode-end", ep_hi, "last t2 date of the episode")->required();
    pm->add_option("--out-prefix", pm_prefix, "output file prefix");

    // synth
    auto* synth = app.add_subcommand("synth", "Generate a synthetic LPPLS price CSV");
    double s_tc = 450.0, s_m = 0.5, s_omega = 9.0, s_a = 7.0, s_b = -0.5, s_c1 = 0.01,
           s_c2 = 0.01, s_noise = 0.0;
    std::size_t s_n = 400;
    std::uint64_t s_seed = 0;
    std::string s_out = "synthetic.csv";
    synth->add_option("--tc", s_tc, "critical time (trading-day ordinal)");
    synth->add_option("--m", s_m, "power-law exponent");
    synth->add_option("--omega", s_omega, "angular log-frequency");
    synth->add_option("--A", s_a, "log-price level at t_c");
    synth->add_option("--B", s_b, "power-law amplitude");
    synth->add_option("--C1", s_c1, "cosine amplitude");
    synth->add_option("--C2", s_c2, "sine amplitude");
    synth->add_option("--n", s_n, "number of trading days");
    synth->add_option("--noise", s_noise, "log-price noise sigma");
    synth->add_option("--seed", s_seed, "RNG seed");
    synth->add_option("--out", s_out, "output CSV path");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : kExitUsage;
    }

    try {
        if (fit->parsed()) {
            RunConfig cfg = resolve_config();
            if (fit_seed_set) cfg.scan.master_seed = fit_seed;
            return cmd_fit(cfg, t1_text, t2_text, fit_out);
        }
        if (scan_cmd->parsed()) {
            RunConfig cfg = resolve_config();
            if (!out_dir.empty()) cfg.output_dir = out_dir;
            if (!ckpt.empty()) cfg.scan.checkpoint_path = ckpt;
            if (parallelism > 0) cfg.scan.parallelism = parallelism;
            if (cfg.scan.parallelism == 0) cfg.scan.parallelism = 1;
            if (!t2_start_text.empty()) cfg.t2_start_date = t2_start_text;
            if (!t2_end_text.empty()) cfg.t2_end_date = t2_end_text;
            if (scan_seed_set) cfg.scan.master_seed = scan_seed;
            return cmd_scan(cfg);
        }
        if (pm->parsed()) return cmd_postmortem(resolve_config(), fits_path, ep_lo, ep_hi, pm_prefix);
        if (synth->parsed())
            return cmd_synth(s_tc, s_m, s_omega, s_a, s_b, s_c1, s_c2, s_n, s_noise, s_seed,
                             s_out);
    } catch (const CLI::ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const DataError& e) {
        std::cerr << "data error: " << e.what() << "\n";
        return kExitData;
    } catch (const DomainError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
