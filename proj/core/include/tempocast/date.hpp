#pragma once

#include <optional>
#include <string>
#include <string_view>

namespace tempocast {

/// Calendar date with day arithmetic on the proleptic Gregorian calendar.
struct Date {
    int year = 1970;
    int month = 1;  // 1..12
    int day = 1;    // 1..31

    bool operator==(const Date&) const = default;
};

/// Days since 1970-01-01 (negative before).
long long days_from_civil(const Date& d);

/// Inverse of days_from_civil.
Date civil_from_days(long long days);

Date add_days(const Date& d, long long n);

/// b - a in days.
long long diff_days(const Date& a, const Date& b);

/// Monday = 0 ... Sunday = 6.
int weekday_mon0(const Date& d);

/// 1-based ordinal day within the year (1..366).
int day_of_year(const Date& d);

bool is_valid_date(const Date& d);

/// "YYYY-MM-DD"
std::string to_iso(const Date& d);

/// Strict "YYYY-MM-DD" parse; nullopt on malformed or impossible dates.
std::optional<Date> parse_iso(std::string_view s);

}  // namespace tempocast
