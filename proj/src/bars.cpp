#include "quantfusion/bars.hpp"

#include "quantfusion/csv.hpp"
#include "quantfusion/errors.hpp"

#include <algorithm>
#include <map>

namespace qf {

namespace {

const std::vector<std::string> kIndexHeader = {"date", "open", "high",
                                               "low",  "close", "volume", "fsb"};
const std::vector<std::string> kStockHeader = {"date", "stock_id", "open", "high",
                                               "low",  "close",    "volume"};

void require_header(const CsvTable& table, const std::vector<std::string>& expected,
                    const std::string& path) {
    if (table.header != expected) {
        std::string want;
        for (std::size_t i = 0; i < expected.size(); ++i) {
            if (i) want += ',';
            want += expected[i];
        }
        throw ParseError(path + ": header mismatch, expected '" + want + "'");
    }
}

} // namespace

void validate_series(BarSeries& series, bool require_fsb) {
    std::stable_sort(series.bars.begin(), series.bars.end(),
                     [](const Bar& a, const Bar& b) { return a.date < b.date; });
    for (std::size_t i = 0; i < series.bars.size(); ++i) {
        const Bar& b = series.bars[i];
        const std::string where = "series '" + series.id + "' date " + b.date.to_string();
        if (b.open <= 0 || b.high <= 0 || b.low <= 0 || b.close <= 0) {
            throw DomainError(where + ": nonpositive price");
        }
        if (b.volume < 0) throw DomainError(where + ": negative volume");
        if (require_fsb && b.fsb <= 0) throw DomainError(where + ": nonpositive fsb");
        if (b.low > std::min(b.open, b.close) || b.high < std::max(b.open, b.close)) {
            throw ValidationError(where + ": OHLC bounds violated");
        }
        if (i > 0 && !(series.bars[i - 1].date < b.date)) {
            throw ValidationError(where + ": duplicate date");
        }
    }
}

BarSeries load_index_bars(const std::string& path) {
    const CsvTable table = read_csv(path);
    require_header(table, kIndexHeader, path);

    BarSeries series;
    series.id = "index";
    series.bars.reserve(table.rows.size());
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
        const auto& row = table.rows[r];
        const std::string where = path + " row " + std::to_string(r + 2);
        Bar bar;
        bar.date = parse_date(row[0]);
        bar.open = parse_number(row[1], where + " open");
        bar.high = parse_number(row[2], where + " high");
        bar.low = parse_number(row[3], where + " low");
        bar.close = parse_number(row[4], where + " close");
        bar.volume = parse_number(row[5], where + " volume");
        bar.fsb = parse_number(row[6], where + " fsb");
        series.bars.push_back(bar);
    }
    validate_series(series, /*require_fsb=*/true);
    return series;
}

std::vector<BarSeries> load_stock_bars(const std::string& path) {
    const CsvTable table = read_csv(path);
    require_header(table, kStockHeader, path);

    std::map<std::string, BarSeries> by_id;
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
        const auto& row = table.rows[r];
        const std::string where = path + " row " + std::to_string(r + 2);
        Bar bar;
        bar.date = parse_date(row[0]);
        const std::string& id = row[1];
        if (id.empty()) throw ParseError(where + ": empty stock_id");
        bar.open = parse_number(row[2], where + " open");
        bar.high = parse_number(row[3], where + " high");
        bar.low = parse_number(row[4], where + " low");
        bar.close = parse_number(row[5], where + " close");
        bar.volume = parse_number(row[6], where + " volume");
        auto& series = by_id[id];
        series.id = id;
        series.bars.push_back(bar);
    }

    std::vector<BarSeries> out;
    out.reserve(by_id.size());
    for (auto& [id, series] : by_id) {
        validate_series(series, /*require_fsb=*/false);
        out.push_back(std::move(series));
    }
    return out;
}

void write_index_bars(const std::string& path, const BarSeries& series) {
    CsvTable table;
    table.header = kIndexHeader;
    for (const Bar& b : series.bars) {
        table.rows.push_back({b.date.to_string(), format_number(b.open),
                              format_number(b.high), format_number(b.low),
                              format_number(b.close), format_number(b.volume),
                              format_number(b.fsb)});
    }
    write_csv(path, table);
}

void write_stock_bars(const std::string& path, const std::vector<BarSeries>& stocks) {
    CsvTable table;
    table.header = kStockHeader;
    for (const BarSeries& s : stocks) {
        for (const Bar& b : s.bars) {
            table.rows.push_back({b.date.to_string(), s.id, format_number(b.open),
                                  format_number(b.high), format_number(b.low),
                                  format_number(b.close), format_number(b.volume)});
        }
    }
    write_csv(path, table);
}

} // namespace qf
