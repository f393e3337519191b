// Acceptance suite: one PASS/FAIL line per criterion, exit 0 iff all
// non-skipped criteria pass. Heavier criteria use reduced evaluation
// budgets and coarser t2 lattices to stay inside the stated runtime
// envelopes without changing the behavior under test.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "lppls/config.hpp"
#include "lppls/postmortem.hpp"

namespace fs = std::filesystem;
using namespace lppls;
using Clock = std::chrono::steady_clock;

namespace {

int g_failures = 0;

void report(int idx, const std::string& title, bool pass, const std::string& detail,
            double seconds) {
    std::ostringstream line;
    line << (pass ? "[PASS]" : "[FAIL]") << " criterion " << idx << ": " << title;
    if (!detail.empty()) line << " — " << detail;
    line << " (" << std::fixed << seconds << " s)";
    std::cout << line.str() << std::endl;
    if (!pass) ++g_failures;
}

void report_skip(int idx, const std::string& title, const std::string& why) {
    std::cout << "[SKIP] criterion " << idx << ": " << title << " — " << why << std::endl;
}

unsigned pool_size() {
    unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 4u : std::min(hw, 8u);
}

PriceSeries weekday_series(const std::vector<double>& log_prices,
                           DateSerial start = to_serial(2000, 1, 3)) {
    std::vector<std::pair<DateSerial, double>> rows;
    rows.reserve(log_prices.size());
    DateSerial d = next_weekday_on_or_after(start);
    for (double lp : log_prices) {
        rows.emplace_back(d, std::exp(lp));
        d = next_weekday_on_or_after(d + 1);
    }
    return PriceSeries::from_rows(std::move(rows));
}

std::string read_bytes(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// Amplitudes sized so the damping ratio m|B|/(omega C) sits at `damping`.
LinearParams damping_compliant_amp(double m, double omega, double b, double phase,
                                   double damping = 1.25) {
    const double c = m * std::fabs(b) / (damping * omega);
    return LinearParams{7.0, b, c * std::cos(phase), c * std::sin(phase)};
}

std::vector<std::string> failed_names(const FilterReport& r) {
    std::vector<std::string> out;
    for (const auto& c : r.conditions)
        if (!c.pass) out.push_back(c.name);
    return out;
}

// ---------------------------------------------------------------------------

void criterion_1() {
    const auto t0 = Clock::now();
    std::vector<double> lp(3939, std::log(1000.0));
    PriceSeries s = weekday_series(lp);
    ScheduleConfig cfg;
    cfg.t2_start = 750;
    const WindowSchedule sched = build_schedule(s, cfg);
    const double secs = std::chrono::duration<double>(Clock::now() - t0).count();

    const bool per_t2 = sched.windows_per_t2_full() == 141 &&
                        sched.windows_at(750).size() == 141;
    const std::size_t n_t2 = sched.t2_list.size();
    const bool t2_ok = n_t2 >= 636 && n_t2 <= 640;  // ±2 for calendar alignment
    const std::size_t total = sched.total_windows();
    const bool total_ok = total >= 141 * 636 && total <= 141 * 640;
    std::ostringstream d;
    d << "141 windows/t2, " << n_t2 << " t2 points, " << total << " windows";
    report(1, "window-lattice counts", per_t2 && t2_ok && total_ok && secs < 1.0, d.str(),
           secs);
}

void criterion_2() {
    const auto t0 = Clock::now();
    int hits = 0;
    const Window window{0, 399};
    for (int trial = 0; trial < 20; ++trial) {
        std::mt19937_64 rng(1000 + trial);
        std::uniform_real_distribution<double> um(0.2, 0.8), uw(5.0, 15.0),
            utc(405.0, 440.0), uph(0.0, 2.0 * M_PI);
        const NonlinearParams gen{utc(rng), um(rng), uw(rng)};
        const LinearParams amp =
            damping_compliant_amp(gen.m, gen.omega, -0.8, uph(rng));
        PriceSeries s = synthesize(gen, amp, 400, 0.01, 2000 + trial);
        CalibrationConfig ccfg;
        ccfg.seed = 3000 + trial;
        const CalibrationResult res = calibrate(s, window, SearchSpace{}, ccfg);
        if (!res.ok()) continue;
        const auto& p = res.fit->nonlinear;
        if (std::fabs(p.tc - gen.tc) <= 3.0 && std::fabs(p.m - gen.m) <= 0.1 &&
            std::fabs(p.omega - gen.omega) <= 1.0)
            ++hits;
    }
    const double secs = std::chrono::duration<double>(Clock::now() - t0).count();
    std::ostringstream d;
    d << hits << "/20 recoveries within tolerance";
    report(2, "synthetic parameter recovery", hits >= 18 && secs < 300.0, d.str(), secs);
}

void criterion_3() {
    const auto t0 = Clock::now();
    const NonlinearParams gen{420.0, 0.5, 9.0};
    const LinearParams amp{7.0, -0.8, 0.03, -0.02};
    const Window window{0, 399};
    PriceSeries s = synthesize(gen, amp, 400, 0.002, 7);
    const CostResult c = cost(s, window, gen);
    const LpplsFit fit{gen, c.linear, window, c.rss, window.n_points()};

    bool ok = true;
    std::ostringstream d;
    const FilterReport base = qualify(s, window, fit);
    if (!base.qualified) {
        ok = false;
        d << "baseline fit does not qualify; ";
    }

    // One threshold-driven flip per directly configurable condition.
    auto single_flip = [&](const std::string& target, const FilterConditions& cfg) {
        const auto bad = failed_names(qualify(s, window, fit, cfg));
        if (bad.size() != 1 || bad[0] != target) {
            ok = false;
            d << target << " did not flip alone; ";
        }
    };
    {
        FilterConditions f;
        f.m_min = fit.nonlinear.m + 0.01;
        single_flip("m_range", f);
    }
    {
        FilterConditions f;
        f.omega_max = fit.nonlinear.omega - 0.5;
        single_flip("omega_range", f);
    }
    {
        FilterConditions f;
        f.tc_extension_factor =
            0.5 * (fit.nonlinear.tc - double(window.t2)) / double(window.dt());
        single_flip("tc_range", f);
    }
    {
        FilterConditions f;
        f.min_oscillations = oscillation_count(fit) + 0.1;
        single_flip("oscillations", f);
    }
    {
        FilterConditions f;
        f.max_rel_error = 0.5 * max_relative_error(s, window, fit);
        single_flip("max_rel_error", f);
    }

    // Spectral flip: no oscillation in the data, so the detrended residual is
    // white noise and only the Lomb condition fails.
    {
        bool found = false;
        const LinearParams flat_amp{7.0, -0.8, 0.0, 0.0};
        for (int seed = 1; seed <= 200 && !found; ++seed) {
            PriceSeries sn = synthesize(gen, flat_amp, 400, 0.002, seed);
            const CostResult cn = cost(sn, window, gen);
            if (!cn.ok) continue;
            const LpplsFit fn{gen, cn.linear, window, cn.rss, window.n_points()};
            const auto bad = failed_names(qualify(sn, window, fn));
            found = bad.size() == 1 && bad[0] == "lomb_p";
        }
        if (!found) {
            ok = false;
            d << "lomb_p did not flip alone; ";
        }
    }

    // Unit-root flips: near-unit-root AR(1) noise added to the LPPLS curve
    // puts the DF and PP statistics on the 10% boundary, where they can land
    // on opposite sides of their critical values.
    {
        bool df_only = false, pp_only = false;
        for (double phi : {0.95, 0.96, 0.97, 0.98, 0.985}) {
            for (int seed = 1; seed <= 400 && !(df_only && pp_only); ++seed) {
                std::mt19937_64 rng(9000u * unsigned(phi * 1000) + unsigned(seed));
                std::normal_distribution<double> g(0.0, 0.002);
                std::vector<double> lp(400);
                double z = 0.0;
                for (std::size_t i = 0; i < lp.size(); ++i) {
                    z = phi * z + g(rng);
                    lp[i] = lppls_eval(gen, amp, double(i)) + z;
                }
                PriceSeries sa = weekday_series(lp);
                const CostResult ca = cost(sa, window, gen);
                if (!ca.ok) continue;
                const LpplsFit fa{gen, ca.linear, window, ca.rss, window.n_points()};
                const auto bad = failed_names(qualify(sa, window, fa));
                if (bad.size() == 1 && bad[0] == "df_reject") df_only = true;
                if (bad.size() == 1 && bad[0] == "pp_reject") pp_only = true;
            }
            if (df_only && pp_only) break;
        }
        if (!df_only) {
            ok = false;
            d << "df_reject did not flip alone; ";
        }
        if (!pp_only) {
            ok = false;
            d << "pp_reject did not flip alone; ";
        }
    }

    const double secs = std::chrono::duration<double>(Clock::now() - t0).count();
    report(3, "filter battery single-condition flips", ok,
           ok ? "8/8 targeted flips" : d.str(), secs);
}

void criterion_4() {
    const auto t0 = Clock::now();
    const int trials = 500;
    const std::size_t n = 400;
    int df_rw = 0, pp_rw = 0, df_ar = 0, pp_ar = 0, lomb_sig = 0;
    for (int t = 0; t < trials; ++t) {
        std::mt19937_64 rng(500 + t);
        std::normal_distribution<double> g(0.0, 1.0);
        std::vector<double> rw(n), ar(n);
        double acc = 0.0, prev = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            acc += g(rng);
            rw[i] = acc;
            prev = 0.5 * prev + g(rng);
            ar[i] = prev;
        }
        if (dickey_fuller(rw).rejects_unit_root) ++df_rw;
        if (phillips_perron(rw).rejects_unit_root) ++pp_rw;
        if (dickey_fuller(ar).rejects_unit_root) ++df_ar;
        if (phillips_perron(ar).rejects_unit_root) ++pp_ar;

        std::vector<DetrendedPoint> pts(n);
        for (std::size_t i = 0; i < n; ++i)
            pts[i] = {std::log(420.0 - double(i)), g(rng)};
        if (lomb_test(pts).p_value <= 0.05) ++lomb_sig;
    }
    const double lomb_frac = double(lomb_sig) / trials;
    const bool ok = df_rw <= trials * 15 / 100 && pp_rw <= trials * 15 / 100 &&
                    df_ar >= trials * 95 / 100 && pp_ar >= trials * 95 / 100 &&
                    lomb_frac >= 0.02 && lomb_frac <= 0.08;
    const double secs = std::chrono::duration<double>(Clock::now() - t0).count();
    std::ostringstream d;
    d << "RW rejection DF " << df_rw << "/500, PP " << pp_rw << "/500; AR(0.5) DF " << df_ar
      << "/500, PP " << pp_ar << "/500; Lomb P(p<=0.05) = " << lomb_frac;
    report(4, "statistical-test Monte-Carlo calibration", ok && secs < 120.0, d.str(), secs);
}

// Coarsened lattice and evaluation budget for the scan-heavy criteria; the
// properties under test (false-positive rates, peak location, determinism)
// do not depend on lattice density.
ScanConfig reduced_scan_config(std::uint64_t seed) {
    ScanConfig cfg;
    cfg.schedule.dt_step = 10;
    cfg.schedule.t2_step = 50;
    cfg.calibration.max_evaluations = 800;
    cfg.calibration.restarts = 1;
    cfg.master_seed = seed;
    cfg.parallelism = pool_size();
    return cfg;
}

void criterion_5() {
    const auto t0 = Clock::now();
    int clean = 0;
    double worst = 0.0;
    for (int trial = 0; trial < 20; ++trial) {
        std::mt19937_64 rng(7000 + trial);
        std::normal_distribution<double> g(0.0, 0.01);
        std::vector<double> lp(1500);
        double z = std::log(100.0);
        for (auto& v : lp) {
            z += g(rng);
            v = z;
        }
        PriceSeries s = weekday_series(lp);
        const ScanResult res = scan(s, reduced_scan_config(100 + trial));
        bool all_low = true;
        for (const auto& pt : res.points) {
            worst = std::max({worst, pt.positive_confidence, pt.negative_confidence});
            if (pt.positive_confidence >= 0.05 || pt.negative_confidence >= 0.05)
                all_low = false;
        }
        if (all_low) ++clean;
    }
    const double secs = std::chrono::duration<double>(Clock::now() - t0).count();
    std::ostringstream d;
    d << clean << "/20 GBM series fully below 0.05 (max confidence seen " << worst << ")";
    report(5, "false-positive control on GBM", clean >= 19 && secs < 1800.0, d.str(), secs);
}

// A 2,000-day series whose first 1,000 days follow a positive bubble ending
// (t_c) at day 1002, followed by a crash and featureless diffusion.
PriceSeries episode_series(const NonlinearParams& gen, const LinearParams& amp) {
    const std::size_t k = 1000;
    std::vector<double> lp(2000);
    std::mt19937_64 rng(42);
    std::normal_distribution<double> noise(0.0, 0.005), rw(0.0, 0.01);
    for (std::size_t i = 0; i < k; ++i) lp[i] = lppls_eval(gen, amp, double(i)) + noise(rng);
    double z = lppls_eval(gen, amp, double(k - 1));
    for (std::size_t i = k; i < lp.size(); ++i) {
        z += (i < k + 30 ? -0.01 : 0.0) + rw(rng);
        lp[i] = z;
    }
    return weekday_series(lp);
}

void criterion_6() {
    const auto t0 = Clock::now();
    const std::size_t k = 1000;
    const NonlinearParams gen{1002.0, 0.45, 8.0};
    const LinearParams amp = damping_compliant_amp(gen.m, gen.omega, -0.6, 0.7);
    PriceSeries s = episode_series(gen, amp);

    ScanConfig cfg = reduced_scan_config(11);
    cfg.schedule.t2_step = 10;
    cfg.schedule.t2_start = 800;
    cfg.schedule.t2_end = 1300;
    const ScanResult res = scan(s, cfg);

    std::size_t best_t2 = 0;
    double best_conf = -1.0;
    for (const auto& pt : res.points)
        if (pt.positive_confidence > best_conf) {
            best_conf = pt.positive_confidence;
            best_t2 = pt.t2;
        }
    const bool peak_ok = best_t2 + 20 >= k && best_t2 <= k + 20;

    bool quantile_ok = false;
    std::string q_detail = "no qualified fits in the episode";
    const auto fits = collect_fits(res.qualified_fits, s, s.date(900), s.date(1050));
    if (!fits.empty()) {
        const DensityEstimate d_tc = density(fits, FitField::Tc, s);
        const auto [q20, q80] = quantile_range(d_tc, 0.20, 0.80);
        const DateSerial truth = s.date(std::size_t(std::lround(gen.tc)));
        quantile_ok = q20 <= truth && truth <= q80;
        q_detail = "t_c 20/80 range [" + format_date(q20) + ", " + format_date(q80) +
                   "], truth " + format_date(truth);
    }
    const double secs = std::chrono::duration<double>(Clock::now() - t0).count();
    std::ostringstream d;
    d << "confidence peak " << best_conf << " at t2 " << best_t2 << " (true end " << k
      << "); " << q_detail;
    report(6, "end-to-end episode detection", peak_ok && quantile_ok && secs < 1800.0,
           d.str(), secs);
}

void criterion_7() {
    const char* env = std::getenv("LPPLS_CSI300_CSV");
    std::string path = env ? env : "data/csi300.csv";
    if (!fs::exists(path)) {
        report_skip(7, "historical reproduction (CSI 300)",
                    "requires a user-supplied CSI 300 daily CSV at data/csi300.csv or "
                    "$LPPLS_CSI300_CSV");
        return;
    }
    const auto t0 = Clock::now();
    PriceSeries s = PriceSeries::load_csv(path, CsvSpec{});
    ScanConfig cfg;
    cfg.master_seed = 1;
    cfg.parallelism = pool_size();
    const ScanResult res = scan(s, cfg);

    auto cluster_max = [&](int y1, unsigned m1, int y2, unsigned m2, bool positive) {
        const DateSerial lo = to_serial(y1, m1, 1);
        const DateSerial hi = to_serial(y2, m2, 28);
        double best = 0.0;
        for (const auto& pt : res.points)
            if (pt.date >= lo && pt.date <= hi)
                best = std::max(best, positive ? pt.positive_confidence
                                               : pt.negative_confidence);
        return best;
    };
    bool ok = true;
    std::ostringstream d;
    auto need = [&](const char* name, double got, double min) {
        if (got < min) {
            ok = false;
            d << name << " peak " << got << " < " << min << "; ";
        }
    };
    need("2007 positive", cluster_max(2007, 1, 2007, 10, true), 0.15);
    need("2009 positive", cluster_max(2009, 3, 2009, 8, true), 0.05);
    need("2014-15 positive", cluster_max(2014, 11, 2015, 1, true), 0.05);
    need("2015 positive", cluster_max(2015, 4, 2015, 6, true), 0.05);
    need("2005 negative", cluster_max(2005, 1, 2005, 12, false), 0.05);
    need("2008 negative", cluster_max(2008, 1, 2008, 12, false), 0.05);
    need("2011-12 negative", cluster_max(2011, 1, 2012, 12, false), 0.05);
    need("2015-08 negative", cluster_max(2015, 8, 2015, 9, false), 0.05);

    auto overlap_ok = [&](DateSerial e_lo, DateSerial e_hi, DateSerial p_lo,
                          DateSerial p_hi) {
        const auto fits = collect_fits(res.qualified_fits, s, e_lo, e_hi);
        if (fits.empty()) return false;
        const DensityEstimate dd = density(fits, FitField::Tc, s);
        const auto [q20, q80] = quantile_range(dd, 0.20, 0.80);
        const double inter = std::max(
            0.0, double(std::min(q80, p_hi) - std::max(q20, p_lo)) + 1.0);
        const double paper_len = double(p_hi - p_lo) + 1.0;
        return inter >= 0.5 * paper_len;
    };
    if (!overlap_ok(to_serial(2007, 1, 1), to_serial(2007, 10, 31),
                    to_serial(2007, 9, 21), to_serial(2007, 10, 22))) {
        ok = false;
        d << "2007 post-mortem overlap < 50%; ";
    }
    if (!overlap_ok(to_serial(2015, 1, 1), to_serial(2015, 6, 30),
                    to_serial(2015, 6, 10), to_serial(2015, 7, 22))) {
        ok = false;
        d << "2015 post-mortem overlap < 50%; ";
    }
    const double secs = std::chrono::duration<double>(Clock::now() - t0).count();
    report(7, "historical reproduction (CSI 300)", ok,
           ok ? "all cluster and overlap checks" : d.str(), secs);
}

void criterion_8() {
    const auto t0 = Clock::now();
    const fs::path dir = fs::temp_directory_path() / "lppls_acceptance_c8";
    fs::create_directories(dir);

    auto indicator_bytes = [&](const PriceSeries& s, ScanConfig cfg, unsigned par,
                               const std::string& tag) {
        cfg.parallelism = par;
        const ScanResult res = scan(s, cfg);
        const std::string path = (dir / (tag + ".csv")).string();
        write_indicator_csv(path, res.points);
        return read_bytes(path);
    };

    bool ok = true;
    std::ostringstream d;

    // criterion-2-style data: one seeded synthetic bubble
    {
        const NonlinearParams gen{430.0, 0.5, 9.0};
        const LinearParams amp = damping_compliant_amp(gen.m, gen.omega, -0.8, 0.4);
        PriceSeries s = synthesize(gen, amp, 420, 0.01, 2001);
        ScanConfig cfg;
        cfg.schedule.dt_max = 300;
        cfg.schedule.dt_min = 100;
        cfg.schedule.dt_step = 50;
        cfg.schedule.t2_step = 20;
        cfg.calibration.max_evaluations = 500;
        cfg.calibration.restarts = 1;
        cfg.master_seed = 17;
        const auto a = indicator_bytes(s, cfg, 1, "c2_par1");
        const auto b = indicator_bytes(s, cfg, 16, "c2_par16");
        if (a.empty() || a != b) {
            ok = false;
            d << "criterion-2-style run differs across parallelism; ";
        }
    }
    // criterion-6-style data: the episode series
    {
        const NonlinearParams gen{1002.0, 0.45, 8.0};
        const LinearParams amp = damping_compliant_amp(gen.m, gen.omega, -0.6, 0.7);
        PriceSeries s = episode_series(gen, amp);
        ScanConfig cfg;
        cfg.schedule.dt_max = 400;
        cfg.schedule.dt_min = 100;
        cfg.schedule.dt_step = 100;
        cfg.schedule.t2_step = 30;
        cfg.schedule.t2_start = 900;
        cfg.schedule.t2_end = 1100;
        cfg.calibration.max_evaluations = 500;
        cfg.calibration.restarts = 1;
        cfg.master_seed = 29;
        const auto a = indicator_bytes(s, cfg, 1, "c6_par1");
        const auto b = indicator_bytes(s, cfg, 16, "c6_par16");
        const auto c = indicator_bytes(s, cfg, 16, "c6_par16_rerun");
        if (a.empty() || a != b || b != c) {
            ok = false;
            d << "criterion-6-style run differs across parallelism or reruns; ";
        }
    }
    fs::remove_all(dir);
    const double secs = std::chrono::duration<double>(Clock::now() - t0).count();
    report(8, "byte-identical determinism across parallelism", ok,
           ok ? "indicator CSVs identical at parallelism 1 and 16" : d.str(), secs);
}

}  // namespace

int main(int argc, char** argv) {
    std::cout.precision(4);
    // Optional arguments select individual criteria by number, e.g.
    // `acceptance 5 8`; no arguments runs all eight.
    auto selected = [&](int n) {
        if (argc < 2) return true;
        for (int i = 1; i < argc; ++i)
            if (std::atoi(argv[i]) == n) return true;
        return false;
    };
    if (selected(1)) criterion_1();
    if (selected(2)) criterion_2();
    if (selected(3)) criterion_3();
    if (selected(4)) criterion_4();
    if (selected(5)) criterion_5();
    if (selected(6)) criterion_6();
    if (selected(7)) criterion_7();
    if (selected(8)) criterion_8();
    if (g_failures == 0) {
        std::cout << "acceptance: all criteria passed" << std::endl;
        return 0;
    }
    std::cout << "acceptance: " << g_failures << " criteria failed" << std::endl;
    return 1;
}
