#pragma once

#include <nlohmann/json.hpp>

#include "lppls/indicator.hpp"

namespace lppls {

using json = nlohmann::ordered_json;

json to_json(const NonlinearParams& p);
json to_json(const LinearParams& q);
json to_json(const LpplsFit& fit, const PriceSeries* series = nullptr);
json to_json(const FilterReport& report);
json to_json(const QualifiedFit& qf, const PriceSeries* series = nullptr);
json to_json(const IndicatorPoint& pt);

NonlinearParams nonlinear_from_json(const json& j);
LinearParams linear_from_json(const json& j);
LpplsFit fit_from_json(const json& j);
FilterReport report_from_json(const json& j);
QualifiedFit qualified_from_json(const json& j);
IndicatorPoint point_from_json(const json& j);

}  // namespace lppls
