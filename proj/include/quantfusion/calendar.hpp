#pragma once

#include "quantfusion/date.hpp"
#include "quantfusion/errors.hpp"

#include <algorithm>
#include <cstddef>
#include <optional>
#include <vector>

namespace qf {

// Ordered list of trading days with month-boundary queries. Built from the
// index series; all scheduling (retraining cycles, signal cadence) keys off
// positions in this calendar rather than raw dates.
class TradingCalendar {
public:
    explicit TradingCalendar(std::vector<Date> days) : days_(std::move(days)) {
        for (std::size_t i = 1; i < days_.size(); ++i) {
            if (!(days_[i - 1] < days_[i])) {
                throw ValidationError("calendar days not strictly increasing at " +
                                      days_[i].to_string());
            }
        }
    }

    [[nodiscard]] std::size_t size() const { return days_.size(); }
    [[nodiscard]] const Date& day(std::size_t i) const { return days_.at(i); }
    [[nodiscard]] const std::vector<Date>& days() const { return days_; }

    // True when day i opens a new calendar month (or is the first day).
    [[nodiscard]] bool is_month_start(std::size_t i) const {
        if (i == 0) return true;
        const Date& prev = days_.at(i - 1);
        const Date& cur = days_.at(i);
        return cur.year != prev.year || cur.month != prev.month;
    }

    [[nodiscard]] std::optional<std::size_t> index_of(const Date& d) const {
        auto it = std::lower_bound(days_.begin(), days_.end(), d);
        if (it == days_.end() || !(*it == d)) return std::nullopt;
        return static_cast<std::size_t>(it - days_.begin());
    }

private:
    std::vector<Date> days_;
};

} // namespace qf
