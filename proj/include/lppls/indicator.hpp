#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "lppls/calibrator.hpp"
#include "lppls/qualifiers.hpp"

namespace lppls {

/// Shrinking-window lattice parameters, in trading days. With the defaults
/// each pseudo-present t2 gets (750-50)/5 + 1 = 141 windows.
struct ScheduleConfig {
    std::size_t dt_max = 750;
    std::size_t dt_min = 50;
    std::size_t dt_step = 5;
    std::size_t t2_step = 5;
    // Trading-day indices; npos means "derive from the series" (t2_start
    // defaults to dt_max, t2_end to the last index).
    static constexpr std::size_t kAuto = static_cast<std::size_t>(-1);
    std::size_t t2_start = kAuto;
    std::size_t t2_end = kAuto;
};

struct WindowSchedule {
    ScheduleConfig cfg;
    std::vector<std::size_t> t2_list;

    // Windows ending at t2, longest first; windows that would start before
    // index 0 are dropped.
    std::vector<Window> windows_at(std::size_t t2) const;
    std::size_t windows_per_t2_full() const {
        return (cfg.dt_max - cfg.dt_min) / cfg.dt_step + 1;
    }
    std::size_t total_windows() const;
};

WindowSchedule build_schedule(const PriceSeries& series, const ScheduleConfig& cfg);

struct IndicatorPoint {
    std::size_t t2 = 0;
    DateSerial date = 0;
    double positive_confidence = 0.0;
    double negative_confidence = 0.0;
    std::size_t n_windows = 0;
    std::size_t n_qualified_pos = 0;
    std::size_t n_qualified_neg = 0;
    std::size_t n_failed_fits = 0;
};

struct QualifiedFit {
    LpplsFit fit;
    FilterReport report;
};

struct ScanConfig {
    ScheduleConfig schedule;
    SearchSpace space;
    CalibrationConfig calibration;
    FilterConditions filters;
    std::uint64_t master_seed = 0;
    unsigned parallelism = 1;
    // Optional append-only checkpoint; a killed scan resumes from it.
    std::string checkpoint_path;
};

// Stable per-window seed so results do not depend on execution order.
std::uint64_t window_seed(std::uint64_t master_seed, std::size_t t1, std::size_t t2);

/// Calibrate and qualify every window ending at t2; failed calibrations
/// count in the denominator only. Qualified fits are appended to
/// `qualified` when non-null.
IndicatorPoint confidence_at(const PriceSeries& series, std::size_t t2, const ScanConfig& cfg,
                             std::vector<QualifiedFit>* qualified = nullptr);

struct ScanResult {
    std::vector<IndicatorPoint> points;
    std::vector<QualifiedFit> qualified_fits;  // across all t2, schedule order
};

using ScanProgress = std::function<void(std::size_t done, std::size_t total)>;

/// Full lattice scan. Window-level parallel, deterministically reduced in
/// schedule order; output is independent of the parallelism degree.
ScanResult scan(const PriceSeries& series, const ScanConfig& cfg,
                const ScanProgress& progress = {});

void write_indicator_csv(const std::string& path,
                         const std::vector<IndicatorPoint>& points);

}  // namespace lppls
