#pragma once

#include "quantfusion/date.hpp"

#include <string>
#include <vector>

namespace qf {

// One daily bar. fsb (financing security balance) is only populated for the
// index series; stock bars carry it as 0.
struct Bar {
    Date date;
    double open = 0.0;
    double high = 0.0;
    double low = 0.0;
    double close = 0.0;
    double volume = 0.0;
    double fsb = 0.0;

    friend bool operator==(const Bar&, const Bar&) = default;
};

struct BarSeries {
    std::string id; // stock identifier, or "index"
    std::vector<Bar> bars;

    friend bool operator==(const BarSeries&, const BarSeries&) = default;
};

// Loads `date,open,high,low,close,volume,fsb`. Rows are sorted by date, then
// validated: prices > 0, fsb > 0, volume >= 0, low <= min(open, close),
// high >= max(open, close), no duplicate dates.
BarSeries load_index_bars(const std::string& path);

// Loads `date,stock_id,open,high,low,close,volume` holding any number of
// stocks. Returns one validated series per stock, ordered by stock id.
std::vector<BarSeries> load_stock_bars(const std::string& path);

void write_index_bars(const std::string& path, const BarSeries& series);
void write_stock_bars(const std::string& path, const std::vector<BarSeries>& stocks);

// Validation shared by the loaders and the synthetic generator. Sorts bars
// by date in place, then throws ValidationError on duplicate dates or OHLC
// violations and DomainError on nonpositive prices. `require_fsb` switches
// on the fsb > 0 check for index series.
void validate_series(BarSeries& series, bool require_fsb);

} // namespace qf
