#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "lppls/date.hpp"

namespace lppls {

struct CsvSpec {
    std::string date_column = "date";
    std::string price_column = "close";
    std::string date_format = "%Y-%m-%d";
};

/// Immutable daily close-price series indexed by trading-day ordinal.
///
/// The trading calendar is exactly the set of observed rows: index i refers
/// to the i-th observation in date order, and all window arithmetic is in
/// these trading-day units.
class PriceSeries {
public:
    // Rows are sorted by date; duplicates and non-positive prices are rejected.
    static PriceSeries from_rows(std::vector<std::pair<DateSerial, double>> rows);

    static PriceSeries load_csv(const std::string& path, const CsvSpec& spec = {});

    std::size_t size() const { return dates_.size(); }
    bool empty() const { return dates_.empty(); }

    DateSerial date(std::size_t i) const;
    double close(std::size_t i) const;
    double log_price(std::size_t i) const;

    std::optional<std::size_t> index_of(DateSerial d) const;
    // First index whose date is >= d (size() if none).
    std::size_t lower_bound(DateSerial d) const;

    std::span<const double> log_prices() const { return log_prices_; }
    std::span<const DateSerial> dates() const { return dates_; }

private:
    PriceSeries() = default;
    std::vector<DateSerial> dates_;
    std::vector<double> closes_;
    std::vector<double> log_prices_;
};

}  // namespace lppls
