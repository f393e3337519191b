#pragma once

#include <string>

#include "lppls/indicator.hpp"
#include "lppls/serialize.hpp"

namespace lppls {

/// Full run configuration: data source, window schedule, search space,
/// filters and calibration budget. Defaults reproduce the standard setup
/// (750/50/5 shrinking windows, the calibration box and the strict filter
/// thresholds).
struct RunConfig {
    std::string data_path;
    CsvSpec csv;
    ScanConfig scan;
    std::string output_dir = ".";
    // Optional date bounds for the scan range (empty = derive from data).
    std::string t2_start_date;
    std::string t2_end_date;
};

RunConfig config_from_json(const json& j);
json config_to_json(const RunConfig& cfg);

RunConfig load_config(const std::string& path);
void save_config(const RunConfig& cfg, const std::string& path);

}  // namespace lppls
