#include "quantfusion/panel.hpp"

#include "quantfusion/csv.hpp"
#include "quantfusion/errors.hpp"

#include <algorithm>
#include <map>

namespace qf {

const char* stage_name(PanelStage stage) {
    switch (stage) {
        case PanelStage::raw: return "raw";
        case PanelStage::cleaned: return "cleaned";
        case PanelStage::winsorized: return "winsorized";
        case PanelStage::neutralized: return "neutralized";
        case PanelStage::standardized: return "standardized";
    }
    return "?";
}

void require_stage(const FactorPanel& panel, PanelStage expected, const std::string& op) {
    if (panel.stage != expected) {
        throw StageError(op + " expects a " + stage_name(expected) + " panel, got " +
                         stage_name(panel.stage));
    }
}

std::vector<std::pair<Date, std::vector<std::size_t>>> FactorPanel::group_by_date() const {
    std::map<std::int64_t, std::pair<Date, std::vector<std::size_t>>> groups;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        auto& slot = groups[rows[i].date.serial()];
        slot.first = rows[i].date;
        slot.second.push_back(i);
    }
    std::vector<std::pair<Date, std::vector<std::size_t>>> out;
    out.reserve(groups.size());
    for (auto& [serial, group] : groups) out.push_back(std::move(group));
    return out;
}

FactorPanel load_factor_panel(const std::string& path) {
    const CsvTable table = read_csv(path);
    const std::vector<std::string> fixed = {"date", "stock_id", "mktcap", "industry"};
    if (table.header.size() < fixed.size() + 1) {
        throw ParseError(path + ": factor panel needs at least one factor column");
    }
    for (std::size_t i = 0; i < fixed.size(); ++i) {
        if (table.header[i] != fixed[i]) {
            throw ParseError(path + ": column " + std::to_string(i + 1) + " must be '" +
                             fixed[i] + "', got '" + table.header[i] + "'");
        }
    }

    FactorPanel panel;
    panel.factor_names.assign(table.header.begin() + 4, table.header.end());
    panel.rows.reserve(table.rows.size());
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
        const auto& row = table.rows[r];
        const std::string where = path + " row " + std::to_string(r + 2);
        PanelRow pr;
        pr.date = parse_date(row[0]);
        pr.stock_id = row[1];
        if (pr.stock_id.empty()) throw ParseError(where + ": empty stock_id");
        pr.mktcap = parse_number(row[2], where + " mktcap");
        if (pr.mktcap <= 0) throw DomainError(where + ": mktcap must be positive");
        pr.industry = row[3];
        if (pr.industry.empty()) throw ParseError(where + ": empty industry");
        pr.values.reserve(panel.factor_names.size());
        for (std::size_t c = 4; c < row.size(); ++c) {
            if (row[c].empty()) {
                pr.values.emplace_back(std::nullopt);
            } else {
                pr.values.emplace_back(parse_number(row[c], where + " " + table.header[c]));
            }
        }
        panel.rows.push_back(std::move(pr));
    }

    std::stable_sort(panel.rows.begin(), panel.rows.end(),
                     [](const PanelRow& a, const PanelRow& b) {
                         if (a.date != b.date) return a.date < b.date;
                         return a.stock_id < b.stock_id;
                     });
    for (std::size_t i = 1; i < panel.rows.size(); ++i) {
        if (panel.rows[i - 1].date == panel.rows[i].date &&
            panel.rows[i - 1].stock_id == panel.rows[i].stock_id) {
            throw ValidationError(path + ": duplicate (date, stock) pair " +
                                  panel.rows[i].date.to_string() + "/" +
                                  panel.rows[i].stock_id);
        }
    }
    return panel;
}

void write_factor_panel(const std::string& path, const FactorPanel& panel) {
    CsvTable table;
    table.header = {"date", "stock_id", "mktcap", "industry"};
    table.header.insert(table.header.end(), panel.factor_names.begin(),
                        panel.factor_names.end());
    for (const PanelRow& pr : panel.rows) {
        std::vector<std::string> row = {pr.date.to_string(), pr.stock_id,
                                        format_number(pr.mktcap), pr.industry};
        for (const auto& v : pr.values) {
            row.push_back(v ? format_number(*v) : std::string());
        }
        table.rows.push_back(std::move(row));
    }
    write_csv(path, table);
}

} // namespace qf
