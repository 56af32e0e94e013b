#pragma once

#include "quantfusion/panel.hpp"

#include <string>
#include <vector>

namespace qf {

// Clamp interval actually applied to one (date, factor) cross-section.
// Exposed so callers (and the idempotence test) can re-apply the bounds of a
// first pass instead of recomputing them from already-clamped data.
struct ClampBounds {
    Date date;
    std::size_t factor = 0;
    double lo = 0.0;
    double hi = 0.0;
};

// Removes every row containing any null factor value. raw -> cleaned.
// Throws EmptyPanelError when nothing survives.
FactorPanel drop_null_rows(const FactorPanel& panel);

// Clamps each (date, factor) cross-section to mean +/- 3 sample stdevs.
// Cross-sections with fewer than two rows, or zero stdev, pass through.
// cleaned -> winsorized. Bounds applied are appended to *bounds if given.
FactorPanel winsorize_3sigma(const FactorPanel& panel,
                             std::vector<ClampBounds>* bounds = nullptr);

// Replaces each (date, factor) cross-section by the residual of an ordinary
// least squares fit on [intercept, ln(mktcap), industry one-hots]. The
// intercept plus a full one-hot set is collinear by construction, so the fit
// uses a minimum-norm solve; residuals are unique either way. When the
// industry design saturates the cross-section (fit rank >= row count, which
// would zero every residual) the date falls back to [intercept, ln(mktcap)]
// and a warning naming the date is appended to *warnings. winsorized ->
// neutralized.
FactorPanel neutralize(const FactorPanel& panel,
                       std::vector<std::string>* warnings = nullptr);

// Z-scores each (date, factor) cross-section with the sample stdev. Zero
// stdev (or a single row) maps the section to zeros. neutralized ->
// standardized.
FactorPanel zscore(const FactorPanel& panel);

// All four stages in order.
FactorPanel preprocess_panel(const FactorPanel& raw,
                             std::vector<std::string>* warnings = nullptr);

} // namespace qf
