#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "lppls/config.hpp"
#include "lppls/errors.hpp"
#include "lppls/postmortem.hpp"

namespace py = pybind11;
using namespace lppls;

namespace {

Window window_from_tuple(std::pair<std::size_t, std::size_t> w) { return Window{w.first, w.second}; }

}  // namespace

PYBIND11_MODULE(_lppls, m) {
    m.doc() = "LPPLS bubble-detection engine (C++ core)";

    py::register_exception<DataError>(m, "DataError");
    py::register_exception<DomainError>(m, "DomainError");

    py::class_<PriceSeries>(m, "PriceSeries")
        .def_static(
            "load_csv",
            [](const std::string& path, const std::string& date_column,
               const std::string& price_column, const std::string& date_format) {
                return PriceSeries::load_csv(path,
                                             CsvSpec{date_column, price_column, date_format});
            },
            py::arg("path"), py::arg("date_column") = "date", py::arg("price_column") = "close",
            py::arg("date_format") = "%Y-%m-%d")
        .def_static("from_rows",
                    [](const std::vector<std::pair<std::string, double>>& rows) {
                        std::vector<std::pair<DateSerial, double>> parsed;
                        for (const auto& [d, p] : rows) {
                            auto s = parse_date(d);
                            if (!s) throw DataError("bad date " + d);
                            parsed.emplace_back(*s, p);
                        }
                        return PriceSeries::from_rows(std::move(parsed));
                    })
        .def("__len__", &PriceSeries::size)
        .def("date", [](const PriceSeries& s, std::size_t i) { return format_date(s.date(i)); })
        .def("close", &PriceSeries::close)
        .def("log_price", &PriceSeries::log_price)
        .def("index_of", [](const PriceSeries& s, const std::string& d) {
            auto serial = parse_date(d);
            if (!serial) throw DataError("bad date " + d);
            return s.index_of(*serial);
        });

    py::class_<NonlinearParams>(m, "NonlinearParams")
        .def(py::init<double, double, double>(), py::arg("tc"), py::arg("m"), py::arg("omega"))
        .def_readwrite("tc", &NonlinearParams::tc)
        .def_readwrite("m", &NonlinearParams::m)
        .def_readwrite("omega", &NonlinearParams::omega);

    py::class_<LinearParams>(m, "LinearParams")
        .def(py::init<double, double, double, double>(), py::arg("a"), py::arg("b"),
             py::arg("c1"), py::arg("c2"))
        .def_readwrite("a", &LinearParams::a)
        .def_readwrite("b", &LinearParams::b)
        .def_readwrite("c1", &LinearParams::c1)
        .def_readwrite("c2", &LinearParams::c2)
        .def_property_readonly("c", &LinearParams::c)
        .def_property_readonly("phase", &LinearParams::phase);

    py::class_<LpplsFit>(m, "LpplsFit")
        .def_readonly("nonlinear", &LpplsFit::nonlinear)
        .def_readonly("linear", &LpplsFit::linear)
        .def_readonly("rss", &LpplsFit::rss)
        .def_readonly("n_points", &LpplsFit::n_points)
        .def_property_readonly("t1", [](const LpplsFit& f) { return f.window.t1; })
        .def_property_readonly("t2", [](const LpplsFit& f) { return f.window.t2; })
        .def_property_readonly("is_positive_bubble", &LpplsFit::is_positive_bubble);

    py::class_<FilterReport>(m, "FilterReport")
        .def_readonly("qualified", &FilterReport::qualified)
        .def_property_readonly("bubble_sign",
                               [](const FilterReport& r) {
                                   return r.bubble_sign == BubbleSign::Positive   ? "positive"
                                          : r.bubble_sign == BubbleSign::Negative ? "negative"
                                                                                  : "undefined";
                               })
        .def_property_readonly("conditions", [](const FilterReport& r) {
            py::list out;
            for (const auto& c : r.conditions) {
                py::dict d;
                d["name"] = c.name;
                d["value"] = c.value;
                d["threshold"] = c.threshold;
                d["pass"] = c.pass;
                out.append(d);
            }
            return out;
        });

    py::class_<IndicatorPoint>(m, "IndicatorPoint")
        .def_readonly("t2", &IndicatorPoint::t2)
        .def_property_readonly("date",
                               [](const IndicatorPoint& p) { return format_date(p.date); })
        .def_readonly("positive_confidence", &IndicatorPoint::positive_confidence)
        .def_readonly("negative_confidence", &IndicatorPoint::negative_confidence)
        .def_readonly("n_windows", &IndicatorPoint::n_windows)
        .def_readonly("n_qualified_pos", &IndicatorPoint::n_qualified_pos)
        .def_readonly("n_qualified_neg", &IndicatorPoint::n_qualified_neg)
        .def_readonly("n_failed_fits", &IndicatorPoint::n_failed_fits);

    m.def("lppls_eval", &lppls_eval, py::arg("nonlinear"), py::arg("linear"), py::arg("t"));

    m.def(
        "synthesize",
        [](const NonlinearParams& p, const LinearParams& q, std::size_t n, double noise_sigma,
           std::uint64_t seed) { return synthesize(p, q, n, noise_sigma, seed); },
        py::arg("nonlinear"), py::arg("linear"), py::arg("n"), py::arg("noise_sigma") = 0.0,
        py::arg("seed") = 0);

    m.def(
        "calibrate",
        [](const PriceSeries& series, std::pair<std::size_t, std::size_t> window,
           std::uint64_t seed, int max_evaluations, int restarts) -> py::object {
            SearchSpace space;
            CalibrationConfig cfg;
            cfg.seed = seed;
            cfg.max_evaluations = max_evaluations;
            cfg.restarts = restarts;
            const CalibrationResult res =
                calibrate(series, window_from_tuple(window), space, cfg);
            if (!res.ok()) return py::none();
            return py::cast(*res.fit);
        },
        py::arg("series"), py::arg("window"), py::arg("seed") = 0,
        py::arg("max_evaluations") = 2000, py::arg("restarts") = 3);

    m.def(
        "qualify",
        [](const PriceSeries& series, std::pair<std::size_t, std::size_t> window,
           const LpplsFit& fit) { return qualify(series, window_from_tuple(window), fit); },
        py::arg("series"), py::arg("window"), py::arg("fit"));

    m.def(
        "confidence_at",
        [](const PriceSeries& series, std::size_t t2, std::uint64_t seed, int max_evaluations,
           int restarts, std::size_t dt_max, std::size_t dt_min, std::size_t dt_step) {
            ScanConfig cfg;
            cfg.master_seed = seed;
            cfg.calibration.max_evaluations = max_evaluations;
            cfg.calibration.restarts = restarts;
            cfg.schedule.dt_max = dt_max;
            cfg.schedule.dt_min = dt_min;
            cfg.schedule.dt_step = dt_step;
            return confidence_at(series, t2, cfg);
        },
        py::arg("series"), py::arg("t2"), py::arg("seed") = 0,
        py::arg("max_evaluations") = 2000, py::arg("restarts") = 3, py::arg("dt_max") = 750,
        py::arg("dt_min") = 50, py::arg("dt_step") = 5);
}
