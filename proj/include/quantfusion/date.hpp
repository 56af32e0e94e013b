#pragma once

#include <compare>
#include <cstdint>
#include <string>

namespace qf {

/// Calendar day. Stored as year/month/day; comparisons use the serial day
/// number so dates order correctly across month and year boundaries.
struct Date {
    int year = 1970;
    int month = 1;
    int day = 1;

    /// Days since 1970-01-01 (negative before).
    [[nodiscard]] std::int64_t serial() const;

    [[nodiscard]] std::string to_string() const; // ISO-8601, YYYY-MM-DD

    friend bool operator==(const Date& a, const Date& b) {
        return a.year == b.year && a.month == b.month && a.day == b.day;
    }
    friend std::strong_ordering operator<=>(const Date& a, const Date& b) {
        return a.serial() <=> b.serial();
    }
};

/// Parses a strict ISO-8601 date (YYYY-MM-DD). Throws ParseError otherwise.
Date parse_date(const std::string& text);

/// True if the text is a valid calendar date in YYYY-MM-DD form.
bool is_valid_date(const std::string& text);

/// Shifts by whole calendar months, clamping the day to the target month's
/// length (2020-03-31 minus 1 month -> 2020-02-29).
Date add_months(const Date& d, int months);

/// Shifts by whole days across month and year boundaries.
Date add_days(const Date& d, std::int64_t days);

int days_in_month(int year, int month);

} // namespace qf
