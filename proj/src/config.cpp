#include "lppls/config.hpp"

#include <fstream>

#include "lppls/errors.hpp"

namespace lppls {

namespace {

template <typename T>
void get_if(const json& j, const char* key, T& out) {
    if (j.contains(key)) out = j.at(key).get<T>();
}

OscConvention osc_from_string(const std::string& s) {
    if (s == "omega_over_2pi") return OscConvention::FullCycles;
    if (s == "omega_over_pi") return OscConvention::HalfPeriods;
    if (s == "omega_over_2") return OscConvention::RawHalfOmega;
    throw DataError("unknown oscillation convention '" + s + "'");
}

std::string osc_to_string(OscConvention c) {
    switch (c) {
        case OscConvention::HalfPeriods: return "omega_over_pi";
        case OscConvention::RawHalfOmega: return "omega_over_2";
        default: return "omega_over_2pi";
    }
}

}  // namespace

RunConfig config_from_json(const json& j) {
    RunConfig cfg;
    if (j.contains("data")) {
        const auto& d = j.at("data");
        get_if(d, "path", cfg.data_path);
        get_if(d, "date_column", cfg.csv.date_column);
        get_if(d, "price_column", cfg.csv.price_column);
        get_if(d, "date_format", cfg.csv.date_format);
    }
    if (j.contains("schedule")) {
        const auto& s = j.at("schedule");
        auto& sc = cfg.scan.schedule;
        get_if(s, "dt_max", sc.dt_max);
        get_if(s, "dt_min", sc.dt_min);
        get_if(s, "dt_step", sc.dt_step);
        get_if(s, "t2_step", sc.t2_step);
        get_if(s, "t2_start_date", cfg.t2_start_date);
        get_if(s, "t2_end_date", cfg.t2_end_date);
    }
    if (j.contains("search_space")) {
        const auto& s = j.at("search_space");
        auto& sp = cfg.scan.space;
        get_if(s, "m_min", sp.m_min);
        get_if(s, "m_max", sp.m_max);
        get_if(s, "omega_min", sp.omega_min);
        get_if(s, "omega_max", sp.omega_max);
        get_if(s, "tc_extension_factor", sp.tc_extension_factor);
        get_if(s, "damping_min", sp.damping_min);
    }
    if (j.contains("filters")) {
        const auto& f = j.at("filters");
        auto& fc = cfg.scan.filters;
        get_if(f, "m_min", fc.m_min);
        get_if(f, "m_max", fc.m_max);
        get_if(f, "omega_min", fc.omega_min);
        get_if(f, "omega_max", fc.omega_max);
        get_if(f, "tc_extension_factor", fc.tc_extension_factor);
        get_if(f, "min_oscillations", fc.min_oscillations);
        get_if(f, "max_rel_error", fc.max_rel_error);
        get_if(f, "alpha_sig", fc.alpha_sig);
        get_if(f, "lomb_freq_tolerance", fc.lomb_freq_tolerance);
        if (f.contains("osc_convention"))
            fc.osc_convention = osc_from_string(f.at("osc_convention").get<std::string>());
    }
    if (j.contains("calibration")) {
        const auto& c = j.at("calibration");
        auto& cc = cfg.scan.calibration;
        get_if(c, "population_size", cc.population_size);
        get_if(c, "max_evaluations", cc.max_evaluations);
        get_if(c, "restarts", cc.restarts);
        get_if(c, "initial_sigma", cc.initial_sigma);
        get_if(c, "penalty_weight", cc.penalty_weight);
    }
    if (j.contains("run")) {
        const auto& r = j.at("run");
        get_if(r, "master_seed", cfg.scan.master_seed);
        get_if(r, "parallelism", cfg.scan.parallelism);
        get_if(r, "output_dir", cfg.output_dir);
        get_if(r, "checkpoint", cfg.scan.checkpoint_path);
    }
    return cfg;
}

json config_to_json(const RunConfig& cfg) {
    const auto& sc = cfg.scan.schedule;
    const auto& sp = cfg.scan.space;
    const auto& fc = cfg.scan.filters;
    const auto& cc = cfg.scan.calibration;
    return json{
        {"data",
         {{"path", cfg.data_path},
          {"date_column", cfg.csv.date_column},
          {"price_column", cfg.csv.price_column},
          {"date_format", cfg.csv.date_format}}},
        {"schedule",
         {{"dt_max", sc.dt_max},
          {"dt_min", sc.dt_min},
          {"dt_step", sc.dt_step},
          {"t2_step", sc.t2_step},
          {"t2_start_date", cfg.t2_start_date},
          {"t2_end_date", cfg.t2_end_date}}},
        {"search_space",
         {{"m_min", sp.m_min},
          {"m_max", sp.m_max},
          {"omega_min", sp.omega_min},
          {"omega_max", sp.omega_max},
          {"tc_extension_factor", sp.tc_extension_factor},
          {"damping_min", sp.damping_min}}},
        {"filters",
         {{"m_min", fc.m_min},
          {"m_max", fc.m_max},
          {"omega_min", fc.omega_min},
          {"omega_max", fc.omega_max},
          {"tc_extension_factor", fc.tc_extension_factor},
          {"min_oscillations", fc.min_oscillations},
          {"max_rel_error", fc.max_rel_error},
          {"alpha_sig", fc.alpha_sig},
          {"lomb_freq_tolerance", fc.lomb_freq_tolerance},
          {"osc_convention", osc_to_string(fc.osc_convention)}}},
        {"calibration",
         {{"population_size", cc.population_size},
          {"max_evaluations", cc.max_evaluations},
          {"restarts", cc.restarts},
          {"initial_sigma", cc.initial_sigma},
          {"penalty_weight", cc.penalty_weight}}},
        {"run",
         {{"master_seed", cfg.scan.master_seed},
          {"parallelism", cfg.scan.parallelism},
          {"output_dir", cfg.output_dir},
          {"checkpoint", cfg.scan.checkpoint_path}}}};
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open config " + path);
    json j = json::parse(in, nullptr, true, true);  // allow comments
    return config_from_json(j);
}

void save_config(const RunConfig& cfg, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot write config " + path);
    out << config_to_json(cfg).dump(2) << "\n";
}

}  // namespace lppls
