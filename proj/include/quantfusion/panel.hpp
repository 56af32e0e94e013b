#pragma once

#include "quantfusion/date.hpp"

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace qf {

// Preprocessing advances through these stages in order. Each operation
// checks the tag of its input so a caller cannot, say, z-score before
// neutralizing.
enum class PanelStage { raw, cleaned, winsorized, neutralized, standardized };

const char* stage_name(PanelStage stage);

struct PanelRow {
    Date date;
    std::string stock_id;
    double mktcap = 0.0;
    std::string industry;
    // Aligned with FactorPanel::factor_names. Nulls only legal at raw stage.
    std::vector<std::optional<double>> values;

    friend bool operator==(const PanelRow&, const PanelRow&) = default;
};

struct FactorPanel {
    PanelStage stage = PanelStage::raw;
    std::vector<std::string> factor_names;
    std::vector<PanelRow> rows;

    // Row indices grouped by date, dates ascending. Rows are kept in
    // (date, stock_id) order by the loader and the generator, so groups are
    // contiguous, but this does not assume it.
    [[nodiscard]] std::vector<std::pair<Date, std::vector<std::size_t>>> group_by_date() const;

    friend bool operator==(const FactorPanel&, const FactorPanel&) = default;
};

// Throws StageError unless the panel is at `expected`.
void require_stage(const FactorPanel& panel, PanelStage expected, const std::string& op);

// CSV `date,stock_id,mktcap,industry,<factor...>`; empty cell = null.
// Loader validates mktcap > 0 and nonempty ids, sorts rows by (date, stock).
FactorPanel load_factor_panel(const std::string& path);
void write_factor_panel(const std::string& path, const FactorPanel& panel);

} // namespace qf
