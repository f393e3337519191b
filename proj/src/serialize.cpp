#include "lppls/serialize.hpp"

namespace lppls {

json to_json(const NonlinearParams& p) {
    return json{{"tc", p.tc}, {"m", p.m}, {"omega", p.omega}};
}

json to_json(const LinearParams& q) {
    return json{{"a", q.a}, {"b", q.b},     {"c1", q.c1},
                {"c2", q.c2}, {"c", q.c()}, {"phase", q.phase()}};
}

json to_json(const LpplsFit& fit, const PriceSeries* series) {
    json j{{"nonlinear", to_json(fit.nonlinear)},
           {"linear", to_json(fit.linear)},
           {"t1", fit.window.t1},
           {"t2", fit.window.t2},
           {"rss", fit.rss},
           {"n_points", fit.n_points}};
    if (series) {
        j["t1_date"] = format_date(series->date(fit.window.t1));
        j["t2_date"] = format_date(series->date(fit.window.t2));
    }
    return j;
}

json to_json(const FilterReport& report) {
    json conds = json::array();
    for (const auto& c : report.conditions) {
        json jc{{"name", c.name}, {"value", c.value}, {"threshold", c.threshold},
                {"pass", c.pass}};
        if (!c.note.empty()) jc["note"] = c.note;
        conds.push_back(jc);
    }
    const char* sign = report.bubble_sign == BubbleSign::Positive   ? "positive"
                       : report.bubble_sign == BubbleSign::Negative ? "negative"
                                                                    : "undefined";
    return json{{"conditions", conds}, {"qualified", report.qualified}, {"bubble_sign", sign}};
}

json to_json(const QualifiedFit& qf, const PriceSeries* series) {
    return json{{"fit", to_json(qf.fit, series)}, {"report", to_json(qf.report)}};
}

json to_json(const IndicatorPoint& pt) {
    return json{{"t2", pt.t2},
                {"date", format_date(pt.date)},
                {"positive_confidence", pt.positive_confidence},
                {"negative_confidence", pt.negative_confidence},
                {"n_windows", pt.n_windows},
                {"n_qualified_pos", pt.n_qualified_pos},
                {"n_qualified_neg", pt.n_qualified_neg},
                {"n_failed_fits", pt.n_failed_fits}};
}

NonlinearParams nonlinear_from_json(const json& j) {
    return {j.at("tc").get<double>(), j.at("m").get<double>(), j.at("omega").get<double>()};
}

LinearParams linear_from_json(const json& j) {
    return {j.at("a").get<double>(), j.at("b").get<double>(), j.at("c1").get<double>(),
            j.at("c2").get<double>()};
}

LpplsFit fit_from_json(const json& j) {
    LpplsFit fit;
    fit.nonlinear = nonlinear_from_json(j.at("nonlinear"));
    fit.linear = linear_from_json(j.at("linear"));
    fit.window = {j.at("t1").get<std::size_t>(), j.at("t2").get<std::size_t>()};
    fit.rss = j.at("rss").get<double>();
    fit.n_points = j.at("n_points").get<std::size_t>();
    return fit;
}

FilterReport report_from_json(const json& j) {
    FilterReport report;
    for (const auto& jc : j.at("conditions")) {
        FilterCondition c;
        c.name = jc.at("name").get<std::string>();
        c.value = jc.at("value").get<double>();
        c.threshold = jc.at("threshold").get<double>();
        c.pass = jc.at("pass").get<bool>();
        if (jc.contains("note")) c.note = jc.at("note").get<std::string>();
        report.conditions.push_back(std::move(c));
    }
    report.qualified = j.at("qualified").get<bool>();
    const std::string sign = j.at("bubble_sign").get<std::string>();
    report.bubble_sign = sign == "positive"   ? BubbleSign::Positive
                         : sign == "negative" ? BubbleSign::Negative
                                              : BubbleSign::Undefined;
    return report;
}

QualifiedFit qualified_from_json(const json& j) {
    return {fit_from_json(j.at("fit")), report_from_json(j.at("report"))};
}

IndicatorPoint point_from_json(const json& j) {
    IndicatorPoint pt;
    pt.t2 = j.at("t2").get<std::size_t>();
    pt.date = *parse_date(j.at("date").get<std::string>());
    pt.positive_confidence = j.at("positive_confidence").get<double>();
    pt.negative_confidence = j.at("negative_confidence").get<double>();
    pt.n_windows = j.at("n_windows").get<std::size_t>();
    pt.n_qualified_pos = j.at("n_qualified_pos").get<std::size_t>();
    pt.n_qualified_neg = j.at("n_qualified_neg").get<std::size_t>();
    pt.n_failed_fits = j.at("n_failed_fits").get<std::size_t>();
    return pt;
}

}  // namespace lppls
