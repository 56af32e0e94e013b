#include "quantfusion/errors.hpp"
#include "quantfusion/metrics.hpp"
#include "quantfusion/portfolio.hpp"
#include "quantfusion/rng.hpp"
#include "quantfusion/simulation.hpp"
#include "quantfusion/synthetic.hpp"

#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

using namespace qf;

namespace {

TradeParams default_trade() { return TradeParams{}; }

EquityCurve curve_from(const std::vector<double>& equity, const std::vector<double>& bench,
                       Date start = Date{2019, 1, 1}) {
    REQUIRE(equity.size() == bench.size());
    EquityCurve curve;
    Date d = start;
    for (std::size_t i = 0; i < equity.size(); ++i) {
        curve.push_back({d, equity[i], bench[i]});
        d = add_days(d, 1);
    }
    return curve;
}

// Replays the fill log against the same cash arithmetic the portfolio
// uses and marks positions with the last close at or before each day.
// Returns the replayed equity for every curve date.
std::vector<double> replay_equity(double initial, const std::vector<Fill>& fills,
                                  const EquityCurve& curve,
                                  const std::vector<BarSeries>& stocks) {
    std::map<std::string, const BarSeries*> by_id;
    for (const auto& s : stocks) by_id[s.id] = &s;

    double cash = initial;
    std::map<std::string, double> pos;
    std::size_t next_fill = 0;
    std::vector<double> out;
    for (const auto& point : curve) {
        while (next_fill < fills.size() && !(point.date < fills[next_fill].date)) {
            const Fill& f = fills[next_fill++];
            REQUIRE(f.date == point.date); // fills only on curve dates
            double notional = f.shares * f.exec_price;
            if (f.side == Side::buy) {
                cash -= notional + f.fee;
                pos[f.stock_id] += f.shares;
            } else {
                cash += notional - f.fee;
                pos[f.stock_id] -= f.shares;
                if (pos[f.stock_id] <= 1e-12) pos.erase(f.stock_id);
            }
            CHECK(cash >= -1e-9);
        }
        double equity = cash;
        for (const auto& [id, shares] : pos) {
            REQUIRE(shares > -1e-12);
            const auto& bars = by_id.at(id)->bars;
            auto it = std::upper_bound(
                bars.begin(), bars.end(), point.date,
                [](const Date& d, const Bar& bar) { return d < bar.date; });
            REQUIRE(it != bars.begin());
            equity += shares * (it - 1)->close;
        }
        out.push_back(equity);
    }
    CHECK(next_fill == fills.size());
    return out;
}

SyntheticSpec small_market_spec() {
    SyntheticSpec spec;
    spec.seed = 909;
    spec.regimes = {{0.0004, 0.01, 45.0}};
    spec.num_stocks = 8;
    spec.num_days = 260;
    spec.num_factors = 6;
    spec.num_signal_factors = 2;
    spec.signal_strength = 1.0;
    spec.num_industries = 3;
    return spec;
}

BacktestConfig small_config(const SyntheticMarket& market) {
    BacktestConfig config;
    config.trade.regime_train_window_months = 8;
    config.shape = NetworkShape{3, 4, 0.1};
    config.swarm.ps = 25;
    config.swarm.i_max = 50;
    config.swarm.stall_patience = 25;
    config.regime.num_states = 2;
    config.regime.restarts = 2;
    config.regime.max_iter = 150;
    config.factor_count = 4;
    config.seed = 7;
    config.sim_range = default_sim_range(market.index, config.trade);
    return config;
}

} // namespace

TEST_CASE("trade parameter validation") {
    CHECK_NOTHROW(default_trade().validate());
    auto expect_invalid = [](auto mutate) {
        TradeParams params;
        mutate(params);
        CHECK_THROWS_AS(params.validate(), ValidationError);
    };
    expect_invalid([](TradeParams& p) { p.initial_capital = 0.0; });
    expect_invalid([](TradeParams& p) { p.buy_cost = -0.001; });
    expect_invalid([](TradeParams& p) { p.slippage = -0.01; });
    expect_invalid([](TradeParams& p) { p.buy_fraction = 0.0; });
    expect_invalid([](TradeParams& p) { p.buy_fraction = 1.5; });
    expect_invalid([](TradeParams& p) { p.sell_fraction = 0.0; });
    expect_invalid([](TradeParams& p) { p.n_pick = 0; });
    expect_invalid([](TradeParams& p) { p.picking_cycle = 0; });
    expect_invalid([](TradeParams& p) { p.timing_cycle = 0; });
    expect_invalid([](TradeParams& p) { p.training_cycle_months = 0; });
    expect_invalid([](TradeParams& p) { p.picker_train_window = 1; });
    expect_invalid([](TradeParams& p) { p.regime_train_window_months = 0; });
}

TEST_CASE("portfolio buy accounting") {
    TradeParams params = default_trade();
    Date d{2019, 7, 2};

    SUBCASE("the worked single-buy example") {
        Portfolio pf(10000000.0);
        double budget = 0.30 * pf.cash();
        auto fill = pf.buy(d, "SH600000", 100.00, budget, params);
        REQUIRE(fill.has_value());
        CHECK(fill->shares == 29985.0);
        CHECK(fill->raw_price == 100.00);
        CHECK(fill->exec_price == doctest::Approx(100.02).epsilon(1e-14));
        CHECK(fill->fee == doctest::Approx(29985.0 * 100.02 * 0.0003).epsilon(1e-14));
        CHECK(fill->fee == doctest::Approx(899.72991).epsilon(1e-12));
        CHECK(pf.cash() ==
              doctest::Approx(10000000.0 - 29985.0 * 100.02 * 1.0003).epsilon(1e-14));
        CHECK(pf.position("SH600000") == 29985.0);
        CHECK(pf.fills().size() == 1);
    }

    SUBCASE("one more share would not have fit the budget") {
        Portfolio pf(10000000.0);
        auto fill = pf.buy(d, "A", 100.00, 3000000.0, params);
        REQUIRE(fill.has_value());
        double per_share = 100.02 * 1.0003;
        CHECK((fill->shares + 1.0) * per_share > 3000000.0);
        CHECK(fill->shares * per_share <= 3000000.0);
    }

    SUBCASE("fractional shares spend the budget exactly") {
        params.fractional_shares = true;
        Portfolio pf(1000.0);
        auto fill = pf.buy(d, "A", 10.0, 500.0, params);
        REQUIRE(fill.has_value());
        double per_share = (10.0 + params.slippage) * (1.0 + params.buy_cost);
        CHECK(fill->shares == doctest::Approx(500.0 / per_share).epsilon(1e-15));
        CHECK(pf.cash() == doctest::Approx(500.0).epsilon(1e-12));
    }

    SUBCASE("a budget below one share's cost buys nothing") {
        Portfolio pf(1000.0);
        CHECK_FALSE(pf.buy(d, "A", 100.0, 50.0, params).has_value());
        CHECK(pf.cash() == 1000.0);
        CHECK(pf.fills().empty());
    }

    SUBCASE("rejects a budget beyond available cash") {
        Portfolio pf(1000.0);
        CHECK_THROWS_AS(pf.buy(d, "A", 10.0, 2000.0, params), DomainError);
    }

    SUBCASE("rejects nonpositive prices") {
        Portfolio pf(1000.0);
        CHECK_THROWS_AS(pf.buy(d, "A", 0.0, 100.0, params), DomainError);
    }
}

TEST_CASE("portfolio sell accounting") {
    TradeParams params = default_trade();
    Date d{2019, 7, 2};

    SUBCASE("full liquidation with slippage against the seller") {
        Portfolio pf(1000000.0);
        auto bought = pf.buy(d, "A", 50.0, 500000.0, params);
        REQUIRE(bought.has_value());
        double cash_before = pf.cash();
        auto sold = pf.sell(add_days(d, 1), "A", 52.0, params);
        REQUIRE(sold.has_value());
        CHECK(sold->shares == bought->shares);
        CHECK(sold->exec_price == doctest::Approx(51.98).epsilon(1e-14));
        double notional = sold->shares * 51.98;
        CHECK(sold->fee == doctest::Approx(notional * 0.0013).epsilon(1e-14));
        CHECK(pf.cash() ==
              doctest::Approx(cash_before + notional - sold->fee).epsilon(1e-14));
        CHECK(pf.position("A") == 0.0);
        CHECK(pf.positions().empty());
    }

    SUBCASE("partial fraction floors to whole shares") {
        TradeParams half = params;
        half.sell_fraction = 0.5;
        Portfolio pf(10000.0);
        REQUIRE(pf.buy(d, "A", 10.0, 1000.0, half).has_value());
        double held = pf.position("A");
        auto sold = pf.sell(d, "A", 10.0, half);
        REQUIRE(sold.has_value());
        CHECK(sold->shares == std::floor(held * 0.5));
        CHECK(pf.position("A") == held - sold->shares);
    }

    SUBCASE("a fraction rounding below one share sells nothing") {
        TradeParams tiny = params;
        tiny.sell_fraction = 0.2;
        Portfolio pf(10000.0);
        tiny.fractional_shares = false;
        REQUIRE(pf.buy(d, "A", 2000.0, 9000.0, tiny).has_value());
        REQUIRE(pf.position("A") == 4.0);
        CHECK_FALSE(pf.sell(d, "A", 2000.0, tiny).has_value());
        CHECK(pf.position("A") == 4.0);
    }

    SUBCASE("selling an unheld stock is a no-op") {
        Portfolio pf(1000.0);
        CHECK_FALSE(pf.sell(d, "A", 10.0, params).has_value());
    }

    SUBCASE("price at or below slippage cannot execute") {
        Portfolio pf(1000.0);
        REQUIRE(pf.buy(d, "A", 0.5, 900.0, params).has_value());
        CHECK_THROWS_AS(pf.sell(d, "A", 0.02, params), DomainError);
    }
}

TEST_CASE("portfolio equity marks positions with given closes") {
    TradeParams params = default_trade();
    Portfolio pf(100000.0);
    REQUIRE(pf.buy(Date{2019, 7, 2}, "A", 20.0, 50000.0, params).has_value());
    double shares = pf.position("A");

    std::map<std::string, double> closes{{"A", 21.5}};
    CHECK(pf.equity(closes) == doctest::Approx(pf.cash() + shares * 21.5).epsilon(1e-14));

    SUBCASE("held stock without a close throws") {
        CHECK_THROWS_AS(pf.equity({}), DomainError);
    }
}

TEST_CASE("fill log serialization") {
    std::vector<Fill> fills{
        {Date{2019, 7, 2}, "SZ000001", Side::buy, 1200.0, 10.41, 10.43, 3.7467},
        {Date{2019, 7, 9}, "SZ000001", Side::sell, 1200.0, 10.80, 10.78, 16.8168},
    };
    std::string path = (std::filesystem::temp_directory_path() / "qf_fills.csv").string();
    write_fills(path, fills);

    std::ifstream in(path);
    std::string line;
    REQUIRE(std::getline(in, line));
    CHECK(line == "date,stock_id,side,shares,raw_price,exec_price,fee");
    REQUIRE(std::getline(in, line));
    CHECK(line == "2019-07-02,SZ000001,buy,1200,10.41,10.43,3.7467");
    REQUIRE(std::getline(in, line));
    CHECK(line == "2019-07-09,SZ000001,sell,1200,10.8,10.78,16.8168");
    CHECK_FALSE(std::getline(in, line));
    std::remove(path.c_str());
}

TEST_CASE("max drawdown") {
    CHECK(max_drawdown({100.0, 80.0, 120.0}) == 0.20);
    CHECK(max_drawdown({100.0, 120.0, 60.0, 90.0}) == 0.50);
    CHECK(max_drawdown({1.0, 2.0, 3.0, 4.0}) == 0.0);
    CHECK(max_drawdown({5.0}) == 0.0);
    CHECK(max_drawdown({}) == 0.0);
    CHECK(max_drawdown({100.0, 50.0, 100.0, 25.0}) == 0.75);
    CHECK_THROWS_AS(max_drawdown({1.0, std::nan("")}), DomainError);
}

TEST_CASE("metrics on hand-built curves") {
    SUBCASE("a curve measured against itself has beta one and no active risk") {
        Rng rng(2024);
        std::vector<double> equity{1000000.0};
        for (int i = 0; i < 300; ++i)
            equity.push_back(equity.back() * (1.0 + 0.0005 + 0.012 * rng.normal()));
        EquityCurve curve = curve_from(equity, equity);
        MetricsReport report = compute_metrics(curve, {}, 0.03);
        REQUIRE_FALSE(report.rows.empty());
        const MetricsRow& overall = report.rows.back();
        CHECK(overall.period == "overall");
        CHECK(overall.beta == doctest::Approx(1.0).epsilon(1e-10));
        CHECK(std::abs(overall.alpha) < 1e-12);
        CHECK_FALSE(overall.information_ratio_defined);
        CHECK(overall.sharpe_defined);
        CHECK(overall.turnover == 0.0);
    }

    SUBCASE("constant equity against a moving benchmark") {
        std::vector<double> equity(40, 500000.0);
        std::vector<double> bench;
        for (int i = 0; i < 40; ++i) bench.push_back(100000.0 * (1.0 + 0.001 * i));
        MetricsReport report = compute_metrics(curve_from(equity, bench), {}, 0.0);
        const MetricsRow& overall = report.rows.back();
        CHECK(overall.annualized_return == 0.0);
        CHECK(overall.volatility == 0.0);
        CHECK_FALSE(overall.sharpe_defined);
        CHECK(overall.beta == 0.0);
        CHECK(overall.max_drawdown == 0.0);
        CHECK(overall.information_ratio_defined);
        CHECK(overall.information_ratio < 0.0); // flat lost to a rising benchmark
    }

    SUBCASE("annualized volatility of one-percent daily noise") {
        Rng rng(77);
        std::vector<double> equity{1000000.0};
        std::vector<double> bench{1000000.0};
        for (int i = 0; i < 252; ++i) {
            equity.push_back(equity.back() * (1.0 + 0.001 + 0.01 * rng.normal()));
            bench.push_back(bench.back() * (1.0 + 0.0005 + 0.008 * rng.normal()));
        }
        MetricsReport report = compute_metrics(curve_from(equity, bench), {}, 0.03);
        const MetricsRow& overall = report.rows.back();
        CHECK(overall.volatility >= 0.13);
        CHECK(overall.volatility <= 0.19);
        CHECK(overall.sharpe_defined);
        CHECK(overall.information_ratio_defined);
    }

    SUBCASE("annualization formula on a two-point curve") {
        EquityCurve curve = curve_from({1000.0, 1010.0}, {500.0, 501.0});
        MetricsReport report = compute_metrics(curve, {}, 0.0);
        CHECK(report.rows.back().annualized_return ==
              doctest::Approx(std::pow(1.01, 252.0) - 1.0).epsilon(1e-12));
    }

    SUBCASE("turnover annualizes traded notional over mean equity") {
        std::vector<double> equity{1000.0, 1000.0, 1000.0, 1000.0};
        std::vector<double> bench{100.0, 101.0, 102.5, 101.5};
        EquityCurve curve = curve_from(equity, bench);
        std::vector<Fill> fills{
            {curve[1].date, "A", Side::buy, 10.0, 5.0, 5.02, 0.01506},
        };
        MetricsReport report = compute_metrics(curve, fills, 0.0);
        double notional = 10.0 * 5.02;
        CHECK(report.rows.back().turnover ==
              doctest::Approx(notional / 1000.0 * 252.0 / 4.0).epsilon(1e-12));
    }

    SUBCASE("zero-variance benchmark leaves beta undefined") {
        std::vector<double> equity{100.0, 101.0, 103.0};
        std::vector<double> bench{50.0, 50.0, 50.0};
        CHECK_THROWS_AS(compute_metrics(curve_from(equity, bench), {}, 0.03), DomainError);
    }

    SUBCASE("nonpositive equity is rejected") {
        CHECK_THROWS_AS(compute_metrics(curve_from({100.0, -5.0, 50.0},
                                                   {1.0, 2.0, 3.0}),
                                        {}, 0.03),
                        DomainError);
    }

    SUBCASE("too few points or disordered dates are rejected") {
        CHECK_THROWS_AS(compute_metrics(curve_from({100.0}, {1.0}), {}, 0.03),
                        InsufficientDataError);
        EquityCurve curve = curve_from({100.0, 101.0, 102.0}, {1.0, 2.0, 3.0});
        curve[2].date = curve[0].date;
        CHECK_THROWS_AS(compute_metrics(curve, {}, 0.03), ValidationError);
    }
}

TEST_CASE("metrics split calendar years with an anchor point") {
    // Ten days in late December 2019 and ten in January 2020.
    EquityCurve curve;
    Date d{2019, 12, 15};
    double equity = 1000.0, bench = 2000.0;
    for (int i = 0; i < 20; ++i) {
        curve.push_back({d, equity, bench});
        d = add_days(d, 1);
        equity *= (i % 3 == 0) ? 1.01 : 0.998;
        bench *= (i % 4 == 0) ? 1.006 : 0.999;
    }
    REQUIRE(curve[16].date.year == 2019);
    REQUIRE(curve[17].date.year == 2020);

    MetricsReport report = compute_metrics(curve, {}, 0.03);
    REQUIRE(report.rows.size() == 3);
    CHECK(report.rows[0].period == "2019");
    CHECK(report.rows[1].period == "2020");
    CHECK(report.rows[2].period == "overall");

    // The 2020 slice spans three points but borrows the last 2019 close,
    // so it annualizes three daily returns.
    double growth = curve[19].equity / curve[16].equity;
    CHECK(report.rows[1].annualized_return ==
          doctest::Approx(std::pow(growth, 252.0 / 3.0) - 1.0).epsilon(1e-12));

    double growth_2019 = curve[16].equity / curve[0].equity;
    CHECK(report.rows[0].annualized_return ==
          doctest::Approx(std::pow(growth_2019, 252.0 / 16.0) - 1.0).epsilon(1e-12));
}

TEST_CASE("equity curve serialization round trip") {
    EquityCurve curve = curve_from({10000000.0, 10012345.25, 9998000.5},
                                   {10000000.0, 10005000.75, 10001234.0});
    std::string path = (std::filesystem::temp_directory_path() / "qf_equity.csv").string();
    write_equity(path, curve);
    EquityCurve loaded = load_equity(path);
    CHECK(loaded == curve); // format_number round-trips bit for bit
    std::remove(path.c_str());

    CHECK_THROWS_AS(load_equity(path), IoError);
}

TEST_CASE("metrics report serialization round trip") {
    MetricsReport report;
    MetricsRow y1;
    y1.period = "2019";
    y1.annualized_return = 0.12;
    y1.alpha = 0.03;
    y1.beta = 0.9;
    y1.sharpe = 1.1;
    y1.volatility = 0.15;
    y1.information_ratio = 0.4;
    y1.max_drawdown = 0.08;
    y1.turnover = 3.2;
    MetricsRow overall = y1;
    overall.period = "overall";
    overall.sharpe_defined = false;
    overall.sharpe = 0.0;
    overall.information_ratio_defined = false;
    overall.information_ratio = 0.0;
    report.rows = {y1, overall};

    std::string path = (std::filesystem::temp_directory_path() / "qf_metrics.json").string();
    write_metrics(path, report);
    MetricsReport loaded = load_metrics(path);
    REQUIRE(loaded.rows.size() == 2);
    CHECK(loaded.rows[0].period == "2019");
    CHECK(loaded.rows[0].sharpe == 1.1);
    CHECK(loaded.rows[0].sharpe_defined);
    CHECK(loaded.rows[0].turnover == 3.2);
    CHECK(loaded.rows[1].period == "overall");
    CHECK_FALSE(loaded.rows[1].sharpe_defined);
    CHECK_FALSE(loaded.rows[1].information_ratio_defined);
    CHECK(loaded.rows[1].beta == 0.9);

    // The undefined entries are stored as JSON nulls, not numbers.
    std::ifstream in(path);
    std::stringstream buffer;
    buffer << in.rdbuf();
    CHECK(buffer.str().find("null") != std::string::npos);
    std::remove(path.c_str());
}

TEST_CASE("backtest config validation") {
    SyntheticMarket market = generate_synthetic(small_market_spec());
    BacktestConfig config = small_config(market);
    CHECK_NOTHROW(config.validate());

    BacktestConfig bad = config;
    bad.factor_count = 2; // narrower than the network input
    CHECK_THROWS_AS(bad.validate(), ValidationError);

    bad = config;
    bad.sim_range.end = bad.sim_range.begin;
    CHECK_THROWS_AS(bad.validate(), ValidationError);
}

TEST_CASE("backtest rejects unusable inputs") {
    SyntheticMarket market = generate_synthetic(small_market_spec());
    BacktestConfig config = small_config(market);
    SimulationData data{market.index, market.stocks, market.factors};

    SUBCASE("wrong panel stage") {
        SimulationData staged = data;
        staged.factors.stage = PanelStage::winsorized;
        CHECK_THROWS_AS(run_backtest(staged, config), StageError);
    }

    SUBCASE("no stocks") {
        SimulationData empty = data;
        empty.stocks.clear();
        CHECK_THROWS_AS(run_backtest(empty, config), EmptyPanelError);
    }

    SUBCASE("insufficient history before the range") {
        BacktestConfig early = config;
        early.sim_range.begin = market.index.bars[2].date;
        CHECK_THROWS_AS(run_backtest(data, early), InsufficientDataError);

        BacktestConfig late = early;
        late.timing_override = TimingOverride::force_long; // regime check skipped
        CHECK_THROWS_AS(run_backtest(data, late), InsufficientDataError);
    }

    SUBCASE("range outside the calendar") {
        BacktestConfig outside = config;
        outside.sim_range.begin = add_days(market.index.bars.back().date, 10);
        outside.sim_range.end = add_days(market.index.bars.back().date, 40);
        CHECK_THROWS_AS(run_backtest(data, outside), InsufficientDataError);
    }
}

TEST_CASE("flat-signal backtest never leaves cash") {
    SyntheticMarket market = generate_synthetic(small_market_spec());
    BacktestConfig config = small_config(market);
    config.timing_override = TimingOverride::force_flat;
    SimulationData data{market.index, market.stocks, market.factors};

    BacktestResult result = run_backtest(data, config);
    REQUIRE_FALSE(result.curve.empty());
    CHECK(result.fills.empty());
    for (const auto& point : result.curve)
        CHECK(point.equity == config.trade.initial_capital);
    CHECK(result.curve.front().benchmark == config.trade.initial_capital);
    for (const auto& day : result.days) {
        CHECK(day.state == -1);
        CHECK_FALSE(day.long_signal);
    }
    const MetricsRow& overall = result.metrics.rows.back();
    CHECK(overall.annualized_return == 0.0);
    CHECK(overall.turnover == 0.0);
}

TEST_CASE("forced-long backtest accounting reconciles from the fill log") {
    SyntheticMarket market = generate_synthetic(small_market_spec());
    BacktestConfig config = small_config(market);
    config.timing_override = TimingOverride::force_long;
    SimulationData data{market.index, market.stocks, market.factors};

    BacktestResult result = run_backtest(data, config);
    REQUIRE(result.curve.size() >= 2);
    REQUIRE_FALSE(result.fills.empty());

    CHECK(result.curve.front().equity == config.trade.initial_capital);
    for (const auto& fill : result.fills) {
        CHECK(result.curve.front().date < fill.date); // inception day never trades
        CHECK_FALSE(result.curve.back().date < fill.date);
        CHECK(fill.shares > 0.0);
        CHECK(fill.shares == std::floor(fill.shares));
        CHECK(fill.fee >= 0.0);
    }

    std::vector<double> replayed =
        replay_equity(config.trade.initial_capital, result.fills, result.curve, market.stocks);
    REQUIRE(replayed.size() == result.curve.size());
    for (std::size_t i = 0; i < replayed.size(); ++i)
        CHECK(result.curve[i].equity == doctest::Approx(replayed[i]).epsilon(1e-9));

    // Holdings stay within the candidate count.
    std::map<std::string, double> pos;
    for (const auto& f : result.fills) {
        if (f.side == Side::buy)
            pos[f.stock_id] += f.shares;
        else {
            pos[f.stock_id] -= f.shares;
            if (pos[f.stock_id] <= 0.0) pos.erase(f.stock_id);
        }
        CHECK(static_cast<int>(pos.size()) <= config.trade.n_pick);
    }
}

TEST_CASE("fractional shares make the run linear in starting capital") {
    SyntheticMarket market = generate_synthetic(small_market_spec());
    BacktestConfig config = small_config(market);
    config.timing_override = TimingOverride::force_long;
    config.trade.fractional_shares = true;
    SimulationData data{market.index, market.stocks, market.factors};

    BacktestResult base = run_backtest(data, config);

    BacktestConfig doubled = config;
    doubled.trade.initial_capital = 2.0 * config.trade.initial_capital;
    BacktestResult scaled = run_backtest(data, doubled);

    REQUIRE(base.curve.size() == scaled.curve.size());
    for (std::size_t i = 0; i < base.curve.size(); ++i)
        CHECK(scaled.curve[i].equity == 2.0 * base.curve[i].equity);
    REQUIRE(base.fills.size() == scaled.fills.size());
    for (std::size_t i = 0; i < base.fills.size(); ++i) {
        CHECK(scaled.fills[i].stock_id == base.fills[i].stock_id);
        CHECK(scaled.fills[i].shares == 2.0 * base.fills[i].shares);
        CHECK(scaled.fills[i].fee == 2.0 * base.fills[i].fee);
    }
}

TEST_CASE("full backtest with live models is deterministic and sane") {
    SyntheticMarket market = generate_synthetic(small_market_spec());
    BacktestConfig config = small_config(market);
    SimulationData data{market.index, market.stocks, market.factors};

    BacktestResult first = run_backtest(data, config);
    BacktestResult second = run_backtest(data, config);

    CHECK(first.curve == second.curve);
    CHECK(first.fills == second.fills);
    CHECK(first.days == second.days);

    REQUIRE(first.curve.size() >= 2);
    CHECK(first.curve.front().equity == config.trade.initial_capital);
    CHECK(first.days.size() == first.curve.size());

    // Every simulated day carries a decoded state with a valid rank.
    for (const auto& day : first.days) {
        CHECK(day.state >= 0);
        CHECK(day.state < config.regime.num_states);
        CHECK(day.state_rank >= 1);
        CHECK(day.state_rank <= config.regime.num_states);
    }

    // With two states both rank in the top two, so the stance stays long
    // and the run actually trades.
    CHECK_FALSE(first.fills.empty());

    std::vector<double> replayed =
        replay_equity(config.trade.initial_capital, first.fills, first.curve, market.stocks);
    for (std::size_t i = 0; i < replayed.size(); ++i)
        CHECK(first.curve[i].equity == doctest::Approx(replayed[i]).epsilon(1e-9));

    REQUIRE_FALSE(first.metrics.rows.empty());
    CHECK(first.metrics.rows.back().period == "overall");
    CHECK(first.metrics.rows.back().turnover > 0.0);

    // A different master seed changes the trained models and the trades.
    BacktestConfig reseeded = config;
    reseeded.seed = 99;
    BacktestResult other = run_backtest(data, reseeded);
    CHECK(first.fills != other.fills);
}

TEST_CASE("default simulation range starts one regime window into the data") {
    SyntheticMarket market = generate_synthetic(small_market_spec());
    TradeParams params = default_trade();
    params.regime_train_window_months = 8;
    DateRange range = default_sim_range(market.index, params);
    CHECK(range.end == market.index.bars.back().date);
    Date target = add_months(market.index.bars.front().date, 8);
    CHECK_FALSE(range.begin < target);

    params.regime_train_window_months = 40; // longer than the data
    CHECK_THROWS_AS(default_sim_range(market.index, params), InsufficientDataError);
}
