#pragma once

#include "quantfusion/date.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace qf {

/// Operational trading parameters. Slippage is an absolute per-share
/// price offset applied in the adverse direction; the cost rates are
/// proportional fees on executed notional.
struct TradeParams {
    double initial_capital = 10000000.0;
    double buy_cost = 0.0003;
    double sell_cost = 0.0013;
    double slippage = 0.02;
    double buy_fraction = 0.30; // of residual cash per buy order
    double sell_fraction = 1.0; // of the position per sell order
    int n_pick = 3;
    int picking_cycle = 7;  // trading days between candidate refreshes
    int timing_cycle = 1;   // trading days between signal updates
    int training_cycle_months = 1;
    int picker_train_window = 7;     // trading days
    int regime_train_window_months = 40;
    bool fractional_shares = false;  // test switch for linearity checks

    void validate() const;
};

enum class Side { buy, sell };

struct Fill {
    Date date;
    std::string stock_id;
    Side side = Side::buy;
    double shares = 0.0;     // integral unless fractional_shares is set
    double raw_price = 0.0;  // quoted open
    double exec_price = 0.0; // open +/- slippage
    double fee = 0.0;        // executed notional times the side's rate

    bool operator==(const Fill&) const = default;
};

/// Cash plus long-only integral positions. Cash can never go negative:
/// buys spend at most the given budget including slippage and fees.
class Portfolio {
  public:
    explicit Portfolio(double initial_cash);

    double cash() const { return cash_; }
    const std::map<std::string, double>& positions() const { return positions_; }
    double position(const std::string& stock_id) const;
    const std::vector<Fill>& fills() const { return fills_; }

    /// Buys as many shares as `budget` affords at raw_price plus
    /// slippage, fee included. Returns the fill, or nothing when the
    /// budget covers no shares. Budget must not exceed available cash.
    std::optional<Fill> buy(const Date& date, const std::string& stock_id, double raw_price,
                            double budget, const TradeParams& params);

    /// Sells sell_fraction of the position at raw_price minus slippage.
    /// Returns nothing when there is nothing to sell.
    std::optional<Fill> sell(const Date& date, const std::string& stock_id, double raw_price,
                             const TradeParams& params);

    /// Marked-to-market equity under the given close prices. Held
    /// stocks must all be priced.
    double equity(const std::map<std::string, double>& closes) const;

  private:
    double cash_ = 0.0;
    std::map<std::string, double> positions_;
    std::vector<Fill> fills_;
};

/// Writes `date,stock_id,side,shares,raw_price,exec_price,fee` rows.
void write_fills(const std::string& path, const std::vector<Fill>& fills);

} // namespace qf
