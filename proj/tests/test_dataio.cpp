#include <doctest.h>

#include "quantfusion/bars.hpp"
#include "quantfusion/calendar.hpp"
#include "quantfusion/csv.hpp"
#include "quantfusion/date.hpp"
#include "quantfusion/errors.hpp"
#include "quantfusion/observables.hpp"
#include "quantfusion/panel.hpp"
#include "quantfusion/rng.hpp"
#include "quantfusion/synthetic.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

using namespace qf;

namespace {

// Fresh scratch directory per test binary run.
std::string scratch_path(const std::string& name) {
    static const std::filesystem::path dir = [] {
        auto p = std::filesystem::temp_directory_path() / "qf_dataio_tests";
        std::filesystem::remove_all(p);
        std::filesystem::create_directories(p);
        return p;
    }();
    return (dir / name).string();
}

void write_text(const std::string& path, const std::string& content) {
    std::ofstream out(path);
    out << content;
}

BarSeries flat_index_series(int n, double close = 100.0, double volume = 1e6,
                            double fsb = 2e9) {
    BarSeries s;
    s.id = "index";
    Date d{2020, 1, 1};
    for (int i = 0; i < n; ++i) {
        s.bars.push_back(Bar{d, close, close, close, close, volume, fsb});
        d.day += 1;
        if (d.day > days_in_month(d.year, d.month)) {
            d.day = 1;
            d.month += 1;
            if (d.month > 12) {
                d.month = 1;
                d.year += 1;
            }
        }
    }
    return s;
}

} // namespace

TEST_CASE("date parsing and arithmetic") {
    const Date d = parse_date("2015-03-17");
    CHECK(d.year == 2015);
    CHECK(d.month == 3);
    CHECK(d.day == 17);
    CHECK(d.to_string() == "2015-03-17");

    CHECK(parse_date("1970-01-01").serial() == 0);
    CHECK(parse_date("1970-01-02").serial() == 1);
    CHECK(parse_date("2000-03-01").serial() - parse_date("2000-02-28").serial() == 2);

    CHECK_THROWS_AS(parse_date("2015-13-01"), ParseError);
    CHECK_THROWS_AS(parse_date("2015-02-29"), ParseError); // not a leap year
    CHECK_THROWS_AS(parse_date("2015/01/01"), ParseError);
    CHECK_THROWS_AS(parse_date("20150101"), ParseError);
    CHECK(is_valid_date("2016-02-29")); // leap year

    CHECK(add_months(Date{2015, 1, 31}, 1) == Date{2015, 2, 28});
    CHECK(add_months(Date{2015, 11, 30}, 3) == Date{2016, 2, 29});
    CHECK(add_months(Date{2015, 3, 15}, -3) == Date{2014, 12, 15});
    CHECK(add_months(Date{2015, 3, 15}, 0) == Date{2015, 3, 15});
}

TEST_CASE("rng determinism and distribution sanity") {
    Rng a(123), b(123), c(124);
    for (int i = 0; i < 100; ++i) {
        const double x = a.uniform();
        CHECK(x == b.uniform());
        CHECK(x >= 0.0);
        CHECK(x < 1.0);
    }
    CHECK(a.uniform() != c.uniform());

    // Moments of the hand-rolled normal.
    Rng r(7);
    double sum = 0, sumsq = 0;
    const int n = 20000;
    for (int i = 0; i < n; ++i) {
        const double z = r.normal();
        sum += z;
        sumsq += z * z;
    }
    CHECK(std::abs(sum / n) < 0.03);
    CHECK(std::abs(sumsq / n - 1.0) < 0.05);

    // derive_seed separates streams.
    CHECK(derive_seed(42, 1) != derive_seed(42, 2));
    CHECK(derive_seed(42, 1) != derive_seed(43, 1));
    CHECK(derive_seed(42, 1) == derive_seed(42, 1));

    Rng i1(99);
    for (int k = 0; k < 200; ++k) {
        CHECK(i1.integer(7) < 7);
    }
}

TEST_CASE("csv round trip and errors") {
    const std::string path = scratch_path("basic.csv");
    CsvTable t;
    t.header = {"a", "b", "c"};
    t.rows = {{"1", "", "x"}, {"2", "-0.5", "y"}};
    write_csv(path, t);
    const CsvTable back = read_csv(path);
    CHECK(back.header == t.header);
    CHECK(back.rows == t.rows);
    CHECK(back.column("b") == 1);
    CHECK(back.column("zzz") == -1);

    write_text(scratch_path("ragged.csv"), "a,b\n1,2\n3\n");
    CHECK_THROWS_AS(read_csv(scratch_path("ragged.csv")), ParseError);
    CHECK_THROWS_AS(read_csv(scratch_path("missing.csv")), IoError);
    write_text(scratch_path("empty.csv"), "");
    CHECK_THROWS_AS(read_csv(scratch_path("empty.csv")), ParseError);

    // format_number round-trips doubles exactly.
    for (double v : {0.1, 1.0 / 3.0, -2.5e-7, 1e15, 0.0}) {
        CHECK(parse_number(format_number(v), "t") == v);
    }
    CHECK_THROWS_AS(parse_number("1.2.3", "t"), ParseError);
    CHECK_THROWS_AS(parse_number("", "t"), ParseError);
}

TEST_CASE("index bar loading validates and sorts") {
    const std::string path = scratch_path("index.csv");

    SUBCASE("single valid row") {
        write_text(path,
                   "date,open,high,low,close,volume,fsb\n"
                   "2015-01-05,100,101,99,100.5,1000000,2000000000\n");
        const BarSeries s = load_index_bars(path);
        REQUIRE(s.bars.size() == 1);
        CHECK(s.bars[0].open == 100.0);
        CHECK(s.bars[0].fsb == 2e9);
    }

    SUBCASE("high below low is rejected with the row named") {
        write_text(path,
                   "date,open,high,low,close,volume,fsb\n"
                   "2015-01-05,100,99,100,100,1000000,2000000000\n");
        CHECK_THROWS_WITH_AS(load_index_bars(path),
                             doctest::Contains("2015-01-05"), ValidationError);
    }

    SUBCASE("shuffled dates come back ascending") {
        write_text(path,
                   "date,open,high,low,close,volume,fsb\n"
                   "2015-01-07,100,101,99,100,1,2e9\n"
                   "2015-01-05,100,101,99,100,1,2e9\n"
                   "2015-01-06,100,101,99,100,1,2e9\n");
        const BarSeries s = load_index_bars(path);
        REQUIRE(s.bars.size() == 3);
        CHECK(s.bars[0].date == Date{2015, 1, 5});
        CHECK(s.bars[1].date == Date{2015, 1, 6});
        CHECK(s.bars[2].date == Date{2015, 1, 7});
    }

    SUBCASE("duplicate dates are rejected") {
        write_text(path,
                   "date,open,high,low,close,volume,fsb\n"
                   "2015-01-05,100,101,99,100,1,2e9\n"
                   "2015-01-05,100,101,99,100,1,2e9\n");
        CHECK_THROWS_AS(load_index_bars(path), ValidationError);
    }

    SUBCASE("nonpositive price is a domain error") {
        write_text(path,
                   "date,open,high,low,close,volume,fsb\n"
                   "2015-01-05,100,101,-1,100,1,2e9\n");
        CHECK_THROWS_AS(load_index_bars(path), DomainError);
    }

    SUBCASE("missing fsb column is rejected") {
        write_text(path,
                   "date,open,high,low,close,volume\n"
                   "2015-01-05,100,101,99,100,1\n");
        CHECK_THROWS_AS(load_index_bars(path), ParseError);
    }

    SUBCASE("malformed numeric names the row") {
        write_text(path,
                   "date,open,high,low,close,volume,fsb\n"
                   "2015-01-05,abc,101,99,100,1,2e9\n");
        CHECK_THROWS_WITH_AS(load_index_bars(path), doctest::Contains("row 2"),
                             ParseError);
    }
}

TEST_CASE("stock bar loading splits by id") {
    const std::string path = scratch_path("stocks.csv");
    write_text(path,
               "date,stock_id,open,high,low,close,volume\n"
               "2015-01-05,B,10,11,9,10,100\n"
               "2015-01-05,A,20,21,19,20,100\n"
               "2015-01-06,A,20,22,19,21,100\n");
    const auto stocks = load_stock_bars(path);
    REQUIRE(stocks.size() == 2);
    CHECK(stocks[0].id == "A");
    CHECK(stocks[0].bars.size() == 2);
    CHECK(stocks[1].id == "B");
    CHECK(stocks[1].bars.size() == 1);
}

TEST_CASE("bar series round trip through files") {
    SyntheticSpec spec;
    spec.seed = 11;
    spec.num_days = 40;
    spec.num_stocks = 3;
    spec.regimes = {{0.001, 0.01, 15.0}, {-0.001, 0.02, 10.0}};
    const SyntheticMarket market = generate_synthetic(spec);

    const std::string ipath = scratch_path("rt_index.csv");
    write_index_bars(ipath, market.index);
    CHECK(load_index_bars(ipath) == market.index);

    const std::string spath = scratch_path("rt_stocks.csv");
    write_stock_bars(spath, market.stocks);
    CHECK(load_stock_bars(spath) == market.stocks);

    const std::string ppath = scratch_path("rt_panel.csv");
    write_factor_panel(ppath, market.factors);
    CHECK(load_factor_panel(ppath) == market.factors);
}

TEST_CASE("trading calendar month boundaries") {
    std::vector<Date> days = {{2015, 1, 29}, {2015, 1, 30}, {2015, 2, 2},
                              {2015, 2, 3},  {2015, 3, 2}};
    const TradingCalendar cal(days);
    CHECK(cal.size() == 5);
    CHECK(cal.is_month_start(0));
    CHECK(!cal.is_month_start(1));
    CHECK(cal.is_month_start(2));
    CHECK(!cal.is_month_start(3));
    CHECK(cal.is_month_start(4));
    CHECK(cal.index_of(Date{2015, 2, 2}) == 2);
    CHECK(!cal.index_of(Date{2015, 2, 1}).has_value());

    std::vector<Date> bad = {{2015, 1, 30}, {2015, 1, 29}};
    CHECK_THROWS_AS(TradingCalendar{bad}, ValidationError);
}

TEST_CASE("observables formulas") {
    SUBCASE("constant closes give zero returns") {
        const BarSeries s = flat_index_series(10);
        const ObservationSeries obs = compute_observables(s);
        REQUIRE(obs.rows.size() == 5); // 10 - 5
        for (const auto& row : obs.rows) {
            CHECK(row.dlr == 0.0);
            CHECK(row.fdlr == 0.0);
            CHECK(row.dlshlp == 0.0); // high == low in the flat series
            CHECK(row.lgrfsb == 0.0);
            CHECK(row.tv == 1e6);
        }
    }

    SUBCASE("ten percent daily growth") {
        BarSeries s = flat_index_series(8);
        double close = 100.0;
        for (auto& b : s.bars) {
            const double next = close * 1.1;
            b.open = close;
            b.low = close;
            b.close = next;
            b.high = next;
            close = next;
        }
        const ObservationSeries obs = compute_observables(s);
        for (const auto& row : obs.rows) {
            CHECK(row.dlr == doctest::Approx(0.0953102).epsilon(1e-5));
            CHECK(row.fdlr == doctest::Approx(5 * std::log(1.1)).epsilon(1e-9));
        }
    }

    SUBCASE("row alignment and count") {
        SyntheticSpec spec;
        spec.seed = 3;
        spec.num_days = 60;
        spec.num_stocks = 1;
        spec.regimes = {{0.0, 0.01, 30.0}};
        const auto market = generate_synthetic(spec);
        const ObservationSeries obs = compute_observables(market.index);
        CHECK(obs.rows.size() == market.index.bars.size() - 5);
        CHECK(obs.dates.size() == obs.rows.size());
        CHECK(obs.dates.front() == market.index.bars[5].date);
        CHECK(obs.dates.back() == market.index.bars.back().date);

        // fdlr is the five-day sum of dlr.
        for (std::size_t j = 4; j < obs.rows.size(); ++j) {
            double sum = 0;
            for (std::size_t i = 0; i < 5; ++i) sum += obs.rows[j - i].dlr;
            // The first four rows of the window reach back before the series
            // start only when j < 4, excluded above.
            CHECK(obs.rows[j].fdlr == doctest::Approx(sum).epsilon(1e-10));
        }

        // dlshlp is nonnegative by the OHLC invariant.
        for (const auto& row : obs.rows) CHECK(row.dlshlp >= 0.0);
    }

    SUBCASE("too short input") {
        const BarSeries s = flat_index_series(5);
        CHECK_THROWS_AS(compute_observables(s), InsufficientDataError);
        const BarSeries s6 = flat_index_series(6);
        CHECK(compute_observables(s6).rows.size() == 1);
    }

    SUBCASE("component accessor matches field order") {
        ObservationRow row{1, 2, 3, 4, 5};
        for (int i = 0; i < ObservationRow::kDim; ++i) {
            CHECK(row.component(i) == i + 1);
        }
        CHECK_THROWS_AS(static_cast<void>(row.component(5)), DimensionError);
    }
}

TEST_CASE("synthetic generator contracts") {
    SUBCASE("same seed is bit identical, different seed is not") {
        SyntheticSpec spec;
        spec.seed = 77;
        spec.num_days = 50;
        spec.num_stocks = 4;
        spec.regimes = {{0.002, 0.01, 10.0}, {-0.002, 0.02, 10.0}};
        const auto a = generate_synthetic(spec);
        const auto b = generate_synthetic(spec);
        CHECK(a.index == b.index);
        CHECK(a.stocks == b.stocks);
        CHECK(a.factors == b.factors);
        CHECK(a.true_regimes == b.true_regimes);
        spec.seed = 78;
        const auto c = generate_synthetic(spec);
        CHECK(a.index.bars != c.index.bars);
    }

    SUBCASE("zero drift and volatility give constant closes") {
        SyntheticSpec spec;
        spec.seed = 5;
        spec.num_days = 30;
        spec.num_stocks = 1;
        spec.regimes = {{0.0, 0.0, 10.0}};
        const auto market = generate_synthetic(spec);
        for (const Bar& b : market.index.bars) {
            CHECK(b.close == doctest::Approx(1000.0));
            CHECK(b.high == b.low); // flat bars when vol is zero
        }
    }

    SUBCASE("conditional mean of dlr matches regime drift") {
        SyntheticSpec spec;
        spec.seed = 99;
        spec.num_days = 4000;
        spec.num_stocks = 1;
        spec.num_factors = 1;
        spec.num_signal_factors = 0;
        spec.regimes = {{0.002, 0.01, 25.0}, {-0.002, 0.012, 25.0}};
        const auto market = generate_synthetic(spec);
        for (int reg = 0; reg < 2; ++reg) {
            double sum = 0, sumsq = 0;
            int n = 0;
            for (std::size_t t = 1; t < market.index.bars.size(); ++t) {
                if (market.true_regimes[t] != reg) continue;
                const double dlr = std::log(market.index.bars[t].close /
                                            market.index.bars[t - 1].close);
                sum += dlr;
                sumsq += dlr * dlr;
                ++n;
            }
            REQUIRE(n > 100);
            const double mean = sum / n;
            const double var = sumsq / n - mean * mean;
            const double sem = std::sqrt(var / n);
            CHECK(std::abs(mean - spec.regimes[reg].drift) < 3 * sem);
        }
    }

    SUBCASE("OHLC invariants hold on every synthetic row") {
        SyntheticSpec spec;
        spec.seed = 31;
        spec.num_days = 300;
        spec.num_stocks = 8;
        spec.regimes = {{0.001, 0.015, 20.0}, {-0.003, 0.025, 8.0}};
        const auto market = generate_synthetic(spec);
        auto check_series = [](const BarSeries& s) {
            for (const Bar& b : s.bars) {
                CHECK(b.low <= std::min(b.open, b.close));
                CHECK(b.high >= std::max(b.open, b.close));
                CHECK(b.low > 0);
            }
        };
        check_series(market.index);
        for (const auto& s : market.stocks) check_series(s);
        for (const Bar& b : market.index.bars) CHECK(b.fsb > 0);
    }

    SUBCASE("null injection hits roughly the requested rate") {
        SyntheticSpec spec;
        spec.seed = 8;
        spec.num_days = 100;
        spec.num_stocks = 10;
        spec.num_factors = 5;
        spec.null_rate = 0.1;
        spec.regimes = {{0.0, 0.01, 20.0}};
        const auto market = generate_synthetic(spec);
        int nulls = 0, cells = 0;
        for (const auto& row : market.factors.rows) {
            for (const auto& v : row.values) {
                ++cells;
                if (!v) ++nulls;
            }
        }
        const double rate = static_cast<double>(nulls) / cells;
        CHECK(rate > 0.07);
        CHECK(rate < 0.13);
    }

    SUBCASE("invalid specs are rejected") {
        SyntheticSpec spec;
        spec.regimes = {};
        CHECK_THROWS_AS(generate_synthetic(spec), DomainError);
        spec.regimes = {{0.0, -0.1, 10.0}};
        CHECK_THROWS_AS(generate_synthetic(spec), DomainError);
        spec.regimes = {{0.0, 0.01, 0.5}};
        CHECK_THROWS_AS(generate_synthetic(spec), DomainError);
        spec.regimes = {{0.0, 0.01, 10.0}};
        spec.num_stocks = 0;
        CHECK_THROWS_AS(generate_synthetic(spec), DomainError);
        spec.num_stocks = 2;
        spec.num_signal_factors = 100;
        CHECK_THROWS_AS(generate_synthetic(spec), DomainError);
    }

    SUBCASE("signal factors correlate with next-day stock returns") {
        SyntheticSpec spec;
        spec.seed = 21;
        spec.num_days = 400;
        spec.num_stocks = 5;
        spec.num_factors = 4;
        spec.num_signal_factors = 1;
        spec.signal_strength = 1.0;
        spec.regimes = {{0.0005, 0.01, 50.0}};
        const auto market = generate_synthetic(spec);

        // Correlate factor f01 at t with the stock's log return t -> t+1.
        auto corr_for_factor = [&](std::size_t f) {
            double sx = 0, sy = 0, sxx = 0, syy = 0, sxy = 0;
            int n = 0;
            for (std::size_t s = 0; s < market.stocks.size(); ++s) {
                const auto& bars = market.stocks[s].bars;
                for (std::size_t t = 0; t + 1 < bars.size(); ++t) {
                    const auto& row =
                        market.factors.rows[t * market.stocks.size() + s];
                    REQUIRE(row.stock_id == market.stocks[s].id);
                    const double x = *row.values[f];
                    const double y = std::log(bars[t + 1].close / bars[t].close);
                    sx += x; sy += y; sxx += x * x; syy += y * y; sxy += x * y;
                    ++n;
                }
            }
            const double cov = sxy / n - (sx / n) * (sy / n);
            const double vx = sxx / n - (sx / n) * (sx / n);
            const double vy = syy / n - (sy / n) * (sy / n);
            return cov / std::sqrt(vx * vy);
        };
        CHECK(corr_for_factor(0) > 0.5);         // planted signal
        CHECK(std::abs(corr_for_factor(2)) < 0.1); // pure noise
    }
}

TEST_CASE("factor panel staging and loading") {
    const std::string path = scratch_path("panel.csv");
    write_text(path,
               "date,stock_id,mktcap,industry,f01,f02\n"
               "2015-01-06,A,1e9,TECH,0.5,\n"
               "2015-01-05,B,2e9,FIN,-0.25,1.5\n"
               "2015-01-05,A,1e9,TECH,0.125,2\n");
    const FactorPanel panel = load_factor_panel(path);
    CHECK(panel.stage == PanelStage::raw);
    REQUIRE(panel.rows.size() == 3);
    CHECK(panel.rows[0].stock_id == "A"); // sorted by (date, stock)
    CHECK(panel.rows[0].date == Date{2015, 1, 5});
    CHECK(panel.rows[2].date == Date{2015, 1, 6});
    CHECK(!panel.rows[2].values[1].has_value()); // empty cell is null
    CHECK(panel.rows[1].values[1] == 1.5);

    const auto groups = panel.group_by_date();
    REQUIRE(groups.size() == 2);
    CHECK(groups[0].second.size() == 2);
    CHECK(groups[1].second.size() == 1);

    CHECK_NOTHROW(require_stage(panel, PanelStage::raw, "op"));
    CHECK_THROWS_AS(require_stage(panel, PanelStage::cleaned, "op"), StageError);

    SUBCASE("duplicate (date, stock) rejected") {
        write_text(path,
                   "date,stock_id,mktcap,industry,f01\n"
                   "2015-01-05,A,1e9,TECH,0.5\n"
                   "2015-01-05,A,1e9,TECH,0.6\n");
        CHECK_THROWS_AS(load_factor_panel(path), ValidationError);
    }

    SUBCASE("nonpositive mktcap rejected") {
        write_text(path,
                   "date,stock_id,mktcap,industry,f01\n"
                   "2015-01-05,A,0,TECH,0.5\n");
        CHECK_THROWS_AS(load_factor_panel(path), DomainError);
    }

    SUBCASE("missing factor columns rejected") {
        write_text(path,
                   "date,stock_id,mktcap,industry\n"
                   "2015-01-05,A,1e9,TECH\n");
        CHECK_THROWS_AS(load_factor_panel(path), ParseError);
    }
}
