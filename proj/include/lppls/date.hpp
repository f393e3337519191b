#pragma once

#include <chrono>
#include <cstdint>
#include <optional>
#include <string>

namespace lppls {

// Calendar day stored as days since 1970-01-01 (proleptic Gregorian).
using DateSerial = std::int32_t;

DateSerial to_serial(int year, unsigned month, unsigned day);

struct CivilDate {
    int year;
    unsigned month;
    unsigned day;
};

CivilDate to_civil(DateSerial serial);

// Parses a date with a strptime-style format (default ISO-8601).
std::optional<DateSerial> parse_date(const std::string& text,
                                     const std::string& format = "%Y-%m-%d");

std::string format_date(DateSerial serial);

// 0 = Monday .. 6 = Sunday.
int weekday(DateSerial serial);

inline bool is_weekend(DateSerial serial) { return weekday(serial) >= 5; }

// Next calendar day that falls on a weekday (Mon-Fri), starting at `serial`.
DateSerial next_weekday_on_or_after(DateSerial serial);

}  // namespace lppls
