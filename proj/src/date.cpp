#include "lppls/date.hpp"

#include <cstdio>
#include <ctime>
#include <iomanip>
#include <sstream>

namespace lppls {

namespace chr = std::chrono;

DateSerial to_serial(int year, unsigned month, unsigned day) {
    chr::year_month_day ymd{chr::year{year}, chr::month{month}, chr::day{day}};
    return static_cast<DateSerial>(chr::sys_days{ymd}.time_since_epoch().count());
}

CivilDate to_civil(DateSerial serial) {
    chr::sys_days sd{chr::days{serial}};
    chr::year_month_day ymd{sd};
    return CivilDate{int(ymd.year()), unsigned(ymd.month()), unsigned(ymd.day())};
}

std::optional<DateSerial> parse_date(const std::string& text, const std::string& format) {
    std::tm tm{};
    std::istringstream is(text);
    is >> std::get_time(&tm, format.c_str());
    if (is.fail()) return std::nullopt;
    int year = tm.tm_year + 1900;
    unsigned month = static_cast<unsigned>(tm.tm_mon + 1);
    unsigned day = static_cast<unsigned>(tm.tm_mday);
    chr::year_month_day ymd{chr::year{year}, chr::month{month}, chr::day{day}};
    if (!ymd.ok()) return std::nullopt;
    return static_cast<DateSerial>(chr::sys_days{ymd}.time_since_epoch().count());
}

std::string format_date(DateSerial serial) {
    CivilDate c = to_civil(serial);
    char buf[16];
    std::snprintf(buf, sizeof(buf), "%04d-%02u-%02u", c.year, c.month, c.day);
    return buf;
}

int weekday(DateSerial serial) {
    chr::sys_days sd{chr::days{serial}};
    chr::weekday wd{sd};
    // iso_encoding: Mon=1..Sun=7
    return static_cast<int>(wd.iso_encoding()) - 1;
}

DateSerial next_weekday_on_or_after(DateSerial serial) {
    while (is_weekend(serial)) ++serial;
    return serial;
}

}  // namespace lppls
