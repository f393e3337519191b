#include "lppls/price_series.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "lppls/errors.hpp"

namespace lppls {

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string field;
    bool quoted = false;
    for (char c : line) {
        if (c == '"') {
            quoted = !quoted;
        } else if (c == ',' && !quoted) {
            out.push_back(field);
            field.clear();
        } else {
            field.push_back(c);
        }
    }
    out.push_back(field);
    for (auto& f : out) {
        while (!f.empty() && (f.back() == '\r' || f.back() == ' ')) f.pop_back();
        std::size_t b = f.find_first_not_of(' ');
        if (b != std::string::npos && b > 0) f.erase(0, b);
    }
    return out;
}

}  // namespace

PriceSeries PriceSeries::from_rows(std::vector<std::pair<DateSerial, double>> rows) {
    std::sort(rows.begin(), rows.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    PriceSeries s;
    s.dates_.reserve(rows.size());
    s.closes_.reserve(rows.size());
    s.log_prices_.reserve(rows.size());
    for (const auto& [d, p] : rows) {
        if (!s.dates_.empty() && d == s.dates_.back())
            throw DataError("duplicate date " + format_date(d));
        if (!(p > 0.0) || !std::isfinite(p))
            throw DataError("non-positive or non-finite price " + std::to_string(p) +
                            " on " + format_date(d));
        s.dates_.push_back(d);
        s.closes_.push_back(p);
        s.log_prices_.push_back(std::log(p));
    }
    return s;
}

PriceSeries PriceSeries::load_csv(const std::string& path, const CsvSpec& spec) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open " + path);

    std::string line;
    if (!std::getline(in, line)) throw DataError(path + ": empty file");
    auto header = split_csv_line(line);

    auto find_col = [&](const std::string& name) -> std::size_t {
        auto it = std::find(header.begin(), header.end(), name);
        if (it == header.end())
            throw DataError(path + ": missing column '" + name + "'");
        return static_cast<std::size_t>(it - header.begin());
    };
    const std::size_t date_col = find_col(spec.date_column);
    const std::size_t price_col = find_col(spec.price_column);

    std::vector<std::pair<DateSerial, double>> rows;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line == "\r") continue;
        auto fields = split_csv_line(line);
        if (fields.size() <= std::max(date_col, price_col))
            throw DataError(path + ":" + std::to_string(line_no) + ": too few fields");
        auto d = parse_date(fields[date_col], spec.date_format);
        if (!d)
            throw DataError(path + ":" + std::to_string(line_no) +
                            ": unparseable date '" + fields[date_col] + "'");
        double p;
        try {
            std::size_t pos = 0;
            p = std::stod(fields[price_col], &pos);
            if (pos != fields[price_col].size()) throw std::invalid_argument("trailing");
        } catch (const std::exception&) {
            throw DataError(path + ":" + std::to_string(line_no) +
                            ": unparseable price '" + fields[price_col] + "'");
        }
        if (!(p > 0.0) || !std::isfinite(p))
            throw DataError(path + ":" + std::to_string(line_no) +
                            ": non-positive price " + fields[price_col]);
        rows.emplace_back(*d, p);
    }
    return from_rows(std::move(rows));
}

DateSerial PriceSeries::date(std::size_t i) const {
    if (i >= dates_.size()) throw DomainError("date index out of range");
    return dates_[i];
}

double PriceSeries::close(std::size_t i) const {
    if (i >= closes_.size()) throw DomainError("close index out of range");
    return closes_[i];
}

double PriceSeries::log_price(std::size_t i) const {
    if (i >= log_prices_.size()) throw DomainError("log_price index out of range");
    return log_prices_[i];
}

std::optional<std::size_t> PriceSeries::index_of(DateSerial d) const {
    auto it = std::lower_bound(dates_.begin(), dates_.end(), d);
    if (it == dates_.end() || *it != d) return std::nullopt;
    return static_cast<std::size_t>(it - dates_.begin());
}

std::size_t PriceSeries::lower_bound(DateSerial d) const {
    auto it = std::lower_bound(dates_.begin(), dates_.end(), d);
    return static_cast<std::size_t>(it - dates_.begin());
}

}  // namespace lppls
