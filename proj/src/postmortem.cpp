#include "lppls/postmortem.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <map>

#include "lppls/errors.hpp"

namespace lppls {

namespace {

// Calendar date for a (possibly fractional) trading-day ordinal; ordinals
// past the series end continue on consecutive weekdays.
DateSerial ordinal_to_date(double ordinal, const PriceSeries& series) {
    const long k = std::lround(ordinal);
    const long last = static_cast<long>(series.size()) - 1;
    if (k <= 0) return series.date(0);
    if (k <= last) return series.date(static_cast<std::size_t>(k));
    DateSerial d = series.date(series.size() - 1);
    for (long i = last; i < k; ++i) d = next_weekday_on_or_after(d + 1);
    return d;
}

double silverman_bandwidth(const std::vector<double>& v) {
    const std::size_t n = v.size();
    if (n < 2) return 1.0;
    double mean = 0.0;
    for (double x : v) mean += x;
    mean /= static_cast<double>(n);
    double var = 0.0;
    for (double x : v) var += (x - mean) * (x - mean);
    var /= static_cast<double>(n - 1);
    std::vector<double> sorted(v);
    std::sort(sorted.begin(), sorted.end());
    auto quantile = [&](double q) {
        const double pos = q * static_cast<double>(n - 1);
        const std::size_t lo = static_cast<std::size_t>(pos);
        const double frac = pos - static_cast<double>(lo);
        return lo + 1 < n ? sorted[lo] * (1.0 - frac) + sorted[lo + 1] * frac : sorted[lo];
    };
    const double iqr = quantile(0.75) - quantile(0.25);
    double spread = std::sqrt(var);
    if (iqr > 0.0) spread = std::min(spread, iqr / 1.34);
    const double bw = 0.9 * spread * std::pow(static_cast<double>(n), -0.2);
    return std::max(bw, 0.5);  // at least half a trading day
}

}  // namespace

std::vector<QualifiedFit> collect_fits(const std::vector<QualifiedFit>& fits,
                                       const PriceSeries& series, DateSerial t2_lo,
                                       DateSerial t2_hi) {
    std::vector<QualifiedFit> out;
    for (const auto& qf : fits) {
        const DateSerial d = series.date(qf.fit.window.t2);
        if (d >= t2_lo && d <= t2_hi) out.push_back(qf);
    }
    return out;
}

DensityEstimate density(const std::vector<QualifiedFit>& fits, FitField field,
                        const PriceSeries& series) {
    if (fits.empty()) throw DomainError("density requires at least one fit");

    std::vector<double> values;
    values.reserve(fits.size());
    for (const auto& qf : fits)
        values.push_back(field == FitField::T1 ? static_cast<double>(qf.fit.window.t1)
                                               : qf.fit.nonlinear.tc);
    // canonical accumulation order: the estimate must not depend on how the
    // caller ordered the fits
    std::sort(values.begin(), values.end());

    const double bw = silverman_bandwidth(values);
    const auto [vmin_it, vmax_it] = std::minmax_element(values.begin(), values.end());
    const long lo = std::max(0L, static_cast<long>(std::floor(*vmin_it - 3.0 * bw)));
    const long hi = static_cast<long>(std::ceil(*vmax_it + 3.0 * bw));

    DensityEstimate d;
    d.source_count = fits.size();
    d.support.reserve(hi - lo + 1);
    d.mass.reserve(hi - lo + 1);
    d.histogram.assign(hi - lo + 1, 0.0);

    const double inv_n = 1.0 / static_cast<double>(values.size());
    double total = 0.0;
    for (long k = lo; k <= hi; ++k) {
        double mass = 0.0;
        for (double v : values) {
            const double z = (static_cast<double>(k) - v) / bw;
            mass += std::exp(-0.5 * z * z);
        }
        d.support.push_back(ordinal_to_date(static_cast<double>(k), series));
        d.mass.push_back(mass);
        total += mass;
    }
    for (double& m : d.mass) m /= total;

    for (double v : values) {
        long k = std::lround(v);
        k = std::clamp(k, lo, hi);
        d.histogram[k - lo] += inv_n;
    }
    return d;
}

std::pair<DateSerial, DateSerial> quantile_range(const DensityEstimate& d, double lo,
                                                 double hi) {
    if (!(lo >= 0.0 && lo < hi && hi <= 1.0))
        throw DomainError("quantile_range requires 0 <= lo < hi <= 1");
    double cum = 0.0;
    DateSerial q_lo = d.support.front(), q_hi = d.support.back();
    bool lo_found = false;
    for (std::size_t i = 0; i < d.mass.size(); ++i) {
        cum += d.mass[i];
        if (!lo_found && cum >= lo) {
            q_lo = d.support[i];
            lo_found = true;
        }
        if (cum >= hi) {
            q_hi = d.support[i];
            break;
        }
    }
    return {q_lo, q_hi};
}

void write_density_csv(const std::string& path, const DensityEstimate& t1_density,
                       const DensityEstimate& tc_density) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot write " + path);

    std::map<DateSerial, std::array<double, 2>> rows;
    for (std::size_t i = 0; i < t1_density.support.size(); ++i)
        rows[t1_density.support[i]][0] += t1_density.mass[i];
    for (std::size_t i = 0; i < tc_density.support.size(); ++i)
        rows[tc_density.support[i]][1] += tc_density.mass[i];

    out << "date,pdf_t1,pdf_tc,cdf_t1,cdf_tc\n";
    double c1 = 0.0, c2 = 0.0;
    char buf[160];
    for (const auto& [date, pdfs] : rows) {
        c1 += pdfs[0];
        c2 += pdfs[1];
        std::snprintf(buf, sizeof(buf), "%s,%.10g,%.10g,%.10g,%.10g\n",
                      format_date(date).c_str(), pdfs[0], pdfs[1], c1, c2);
        out << buf;
    }
}

}  // namespace lppls
