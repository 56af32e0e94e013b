#include "quantfusion/portfolio.hpp"

#include "quantfusion/csv.hpp"
#include "quantfusion/errors.hpp"

#include <cmath>
#include <fstream>

namespace qf {

void TradeParams::validate() const {
    if (!(initial_capital > 0.0)) throw ValidationError("initial_capital must be positive");
    if (buy_cost < 0.0 || sell_cost < 0.0) throw ValidationError("cost rates must be nonnegative");
    if (slippage < 0.0) throw ValidationError("slippage must be nonnegative");
    if (!(buy_fraction > 0.0) || buy_fraction > 1.0)
        throw ValidationError("buy_fraction must lie in (0, 1]");
    if (!(sell_fraction > 0.0) || sell_fraction > 1.0)
        throw ValidationError("sell_fraction must lie in (0, 1]");
    if (n_pick < 1) throw ValidationError("n_pick must be at least 1");
    if (picking_cycle < 1 || timing_cycle < 1)
        throw ValidationError("cycle lengths must be at least 1 day");
    if (training_cycle_months < 1)
        throw ValidationError("training_cycle_months must be at least 1");
    if (picker_train_window < 2)
        throw ValidationError("picker_train_window must span at least 2 days");
    if (regime_train_window_months < 1)
        throw ValidationError("regime_train_window_months must be at least 1");
}

Portfolio::Portfolio(double initial_cash) : cash_(initial_cash) {
    if (!(initial_cash > 0.0)) throw ValidationError("initial cash must be positive");
}

double Portfolio::position(const std::string& stock_id) const {
    auto it = positions_.find(stock_id);
    return it == positions_.end() ? 0.0 : it->second;
}

std::optional<Fill> Portfolio::buy(const Date& date, const std::string& stock_id,
                                   double raw_price, double budget, const TradeParams& params) {
    if (!(raw_price > 0.0)) throw DomainError("buy price must be positive for " + stock_id);
    if (budget > cash_ + 1e-9) throw DomainError("buy budget exceeds available cash");
    if (budget <= 0.0) return std::nullopt;

    double exec = raw_price + params.slippage;
    double per_share = exec * (1.0 + params.buy_cost);
    double shares = budget / per_share;
    if (!params.fractional_shares) shares = std::floor(shares);
    if (shares <= 0.0) return std::nullopt;

    double notional = shares * exec;
    double fee = notional * params.buy_cost;
    cash_ -= notional + fee;
    positions_[stock_id] += shares;

    Fill fill{date, stock_id, Side::buy, shares, raw_price, exec, fee};
    fills_.push_back(fill);
    return fill;
}

std::optional<Fill> Portfolio::sell(const Date& date, const std::string& stock_id,
                                    double raw_price, const TradeParams& params) {
    auto it = positions_.find(stock_id);
    if (it == positions_.end() || it->second <= 0.0) return std::nullopt;

    double exec = raw_price - params.slippage;
    if (!(exec > 0.0))
        throw DomainError("sell price does not cover slippage for " + stock_id);

    double shares = it->second * params.sell_fraction;
    if (!params.fractional_shares) shares = std::floor(shares);
    if (shares <= 0.0) return std::nullopt; // fraction rounds below one share
    if (shares > it->second) shares = it->second;

    double notional = shares * exec;
    double fee = notional * params.sell_cost;
    cash_ += notional - fee;
    it->second -= shares;
    if (it->second <= 0.0) positions_.erase(it);

    Fill fill{date, stock_id, Side::sell, shares, raw_price, exec, fee};
    fills_.push_back(fill);
    return fill;
}

double Portfolio::equity(const std::map<std::string, double>& closes) const {
    double total = cash_;
    for (const auto& [stock_id, shares] : positions_) {
        auto it = closes.find(stock_id);
        if (it == closes.end())
            throw DomainError("no close price to mark " + stock_id);
        total += shares * it->second;
    }
    return total;
}

void write_fills(const std::string& path, const std::vector<Fill>& fills) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open " + path + " for writing");
    out << "date,stock_id,side,shares,raw_price,exec_price,fee\n";
    for (const auto& f : fills) {
        out << f.date.to_string() << ',' << f.stock_id << ','
            << (f.side == Side::buy ? "buy" : "sell") << ',' << format_number(f.shares)
            << ',' << format_number(f.raw_price) << ',' << format_number(f.exec_price)
            << ',' << format_number(f.fee) << '\n';
    }
    if (!out.good()) throw IoError("failed writing " + path);
}

} // namespace qf
