#include "lppls/indicator.hpp"

#include <atomic>
#include <cstdio>
#include <fstream>
#include <mutex>
#include <thread>
#include <unordered_map>

#include "lppls/errors.hpp"
#include "lppls/serialize.hpp"

namespace lppls {

std::vector<Window> WindowSchedule::windows_at(std::size_t t2) const {
    std::vector<Window> out;
    for (std::size_t dt = cfg.dt_max;; dt -= cfg.dt_step) {
        if (dt <= t2) out.push_back(Window{t2 - dt, t2});
        if (dt < cfg.dt_min + cfg.dt_step) break;
    }
    return out;
}

std::size_t WindowSchedule::total_windows() const {
    std::size_t n = 0;
    for (std::size_t t2 : t2_list) n += windows_at(t2).size();
    return n;
}

WindowSchedule build_schedule(const PriceSeries& series, const ScheduleConfig& cfg) {
    if (cfg.dt_min < 1 || cfg.dt_max < cfg.dt_min || cfg.dt_step < 1 || cfg.t2_step < 1)
        throw DomainError("invalid schedule configuration");
    if (series.size() <= cfg.dt_min) throw DomainError("series shorter than dt_min");

    WindowSchedule sched;
    sched.cfg = cfg;
    const std::size_t last = series.size() - 1;
    std::size_t start = cfg.t2_start == ScheduleConfig::kAuto ? cfg.dt_max : cfg.t2_start;
    std::size_t end = cfg.t2_end == ScheduleConfig::kAuto ? last : cfg.t2_end;
    if (start < cfg.dt_min) start = cfg.dt_min;
    if (end > last) end = last;
    for (std::size_t t2 = start; t2 <= end; t2 += cfg.t2_step) sched.t2_list.push_back(t2);
    if (sched.t2_list.empty()) throw DomainError("empty window schedule");
    return sched;
}

std::uint64_t window_seed(std::uint64_t master_seed, std::size_t t1, std::size_t t2) {
    std::uint64_t z = master_seed;
    z ^= 0x9e3779b97f4a7c15ULL + static_cast<std::uint64_t>(t1) + (z << 6) + (z >> 2);
    z ^= 0x9e3779b97f4a7c15ULL + (static_cast<std::uint64_t>(t2) << 20) + (z << 6) + (z >> 2);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

namespace {

struct WindowOutcome {
    bool fitted = false;
    bool qualified = false;
    QualifiedFit qf;
};

WindowOutcome process_window(const PriceSeries& series, const Window& w,
                             const ScanConfig& cfg) {
    WindowOutcome out;
    CalibrationConfig ccfg = cfg.calibration;
    ccfg.seed = window_seed(cfg.master_seed, w.t1, w.t2);
    const CalibrationResult res = calibrate(series, w, cfg.space, ccfg);
    if (!res.ok()) return out;
    out.fitted = true;
    FilterReport report = qualify(series, w, *res.fit, cfg.filters);
    if (report.qualified) {
        out.qualified = true;
        out.qf = QualifiedFit{*res.fit, std::move(report)};
    }
    return out;
}

IndicatorPoint reduce_point(const PriceSeries& series, std::size_t t2,
                            const std::vector<WindowOutcome>& outcomes,
                            std::vector<QualifiedFit>* qualified) {
    IndicatorPoint pt;
    pt.t2 = t2;
    pt.date = series.date(t2);
    pt.n_windows = outcomes.size();
    for (const auto& o : outcomes) {
        if (!o.fitted) {
            ++pt.n_failed_fits;
            continue;
        }
        if (!o.qualified) continue;
        if (o.qf.report.bubble_sign == BubbleSign::Positive)
            ++pt.n_qualified_pos;
        else if (o.qf.report.bubble_sign == BubbleSign::Negative)
            ++pt.n_qualified_neg;
        if (qualified) qualified->push_back(o.qf);
    }
    if (pt.n_windows > 0) {
        pt.positive_confidence =
            static_cast<double>(pt.n_qualified_pos) / static_cast<double>(pt.n_windows);
        pt.negative_confidence =
            static_cast<double>(pt.n_qualified_neg) / static_cast<double>(pt.n_windows);
    }
    return pt;
}

}  // namespace

IndicatorPoint confidence_at(const PriceSeries& series, std::size_t t2, const ScanConfig& cfg,
                             std::vector<QualifiedFit>* qualified) {
    const WindowSchedule sched = build_schedule(series, cfg.schedule);
    const auto windows = sched.windows_at(t2);
    if (windows.empty()) throw DomainError("no windows available at t2");
    std::vector<WindowOutcome> outcomes(windows.size());
    for (std::size_t i = 0; i < windows.size(); ++i)
        outcomes[i] = process_window(series, windows[i], cfg);
    return reduce_point(series, t2, outcomes, qualified);
}

ScanResult scan(const PriceSeries& series, const ScanConfig& cfg,
                const ScanProgress& progress) {
    const WindowSchedule sched = build_schedule(series, cfg.schedule);

    struct T2Record {
        IndicatorPoint point;
        std::vector<QualifiedFit> fits;
    };

    // Resume from checkpoint: completed t2 records are reused verbatim.
    std::unordered_map<std::size_t, T2Record> done;
    if (!cfg.checkpoint_path.empty()) {
        std::ifstream in(cfg.checkpoint_path);
        std::string line;
        while (in && std::getline(in, line)) {
            if (line.empty()) continue;
            json j = json::parse(line, nullptr, false);
            if (j.is_discarded()) continue;  // torn final line of a killed run
            T2Record rec;
            rec.point = point_from_json(j.at("point"));
            for (const auto& jf : j.at("fits")) rec.fits.push_back(qualified_from_json(jf));
            done[rec.point.t2] = std::move(rec);
        }
    }

    std::vector<std::size_t> todo;
    for (std::size_t t2 : sched.t2_list)
        if (!done.count(t2)) todo.push_back(t2);

    std::mutex io_mutex;
    std::ofstream ckpt;
    if (!cfg.checkpoint_path.empty())
        ckpt.open(cfg.checkpoint_path, std::ios::app);

    std::atomic<std::size_t> next{0};
    std::atomic<std::size_t> completed{done.size()};
    std::vector<T2Record> results(todo.size());
    const unsigned workers =
        std::max(1u, std::min<unsigned>(cfg.parallelism,
                                        todo.empty() ? 1u : static_cast<unsigned>(todo.size())));

    auto work = [&]() {
        for (;;) {
            const std::size_t idx = next.fetch_add(1);
            if (idx >= todo.size()) break;
            const std::size_t t2 = todo[idx];
            const auto windows = sched.windows_at(t2);
            std::vector<WindowOutcome> outcomes(windows.size());
            for (std::size_t i = 0; i < windows.size(); ++i)
                outcomes[i] = process_window(series, windows[i], cfg);
            T2Record rec;
            rec.point = reduce_point(series, t2, outcomes, &rec.fits);
            {
                std::lock_guard<std::mutex> lock(io_mutex);
                if (ckpt.is_open()) {
                    json j{{"point", to_json(rec.point)}, {"fits", json::array()}};
                    for (const auto& qf : rec.fits) j["fits"].push_back(to_json(qf, &series));
                    ckpt << j.dump() << "\n";
                    ckpt.flush();
                }
                if (progress) progress(completed.fetch_add(1) + 1, sched.t2_list.size());
            }
            results[idx] = std::move(rec);
        }
    };

    if (workers == 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (unsigned i = 0; i < workers; ++i) pool.emplace_back(work);
        for (auto& t : pool) t.join();
    }

    for (std::size_t i = 0; i < todo.size(); ++i) done[todo[i]] = std::move(results[i]);

    ScanResult out;
    for (std::size_t t2 : sched.t2_list) {
        auto& rec = done.at(t2);
        out.points.push_back(rec.point);
        for (auto& qf : rec.fits) out.qualified_fits.push_back(std::move(qf));
    }
    return out;
}

void write_indicator_csv(const std::string& path,
                         const std::vector<IndicatorPoint>& points) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot write " + path);
    out << "date,positive_confidence,negative_confidence,n_qualified_pos,n_qualified_neg,"
           "n_windows,n_failed\n";
    char buf[256];
    for (const auto& pt : points) {
        std::snprintf(buf, sizeof(buf), "%s,%.10g,%.10g,%zu,%zu,%zu,%zu\n",
                      format_date(pt.date).c_str(), pt.positive_confidence,
                      pt.negative_confidence, pt.n_qualified_pos, pt.n_qualified_neg,
                      pt.n_windows, pt.n_failed_fits);
        out << buf;
    }
}

}  // namespace lppls
