#include "petsim/report.hpp"

#include "petsim/text_format.hpp"

#include <json.hpp>

#include <algorithm>
#include <sstream>
#include <vector>

namespace petsim {

namespace {

nlohmann::ordered_json row_json(const ComparisonRow& r) {
    const Metrics& m = r.metrics;
    nlohmann::ordered_json j;
    j["label"] = r.label;
    j["timed_out"] = r.timed_out;
    j["energy_j"] = m.energy_j;
    j["delay_s"] = m.delay_s;
    j["instructions"] = m.instructions;
    j["mips"] = m.mips;
    j["edp"] = m.edp;
    j["ed2p"] = m.ed2p;
    j["ops_per_joule"] = m.ops_per_joule;
    j["avg_core_temperature_k"] = m.avg_core_temperature_k;
    j["max_core_temperature_k"] = m.max_core_temperature_k;
    j["t_act"] = m.t_act;
    j["avg_frequency_ghz"] = m.avg_frequency_ghz;
    j["avg_voltage_v"] = m.avg_voltage_v;
    j["mttf_em"] = r.mttf_em;
    j["mttf_tddb"] = r.mttf_tddb;
    j["mttf_em_ratio"] = r.em_ratio;
    j["mttf_tddb_ratio"] = r.tddb_ratio;
    const double d = m.delay_s > 0.0 ? m.delay_s : 1.0;
    j["avg_power_w"] = {{"core_dynamic", m.energy_by_layer.core_dynamic_j / d},
                        {"core_leakage", m.energy_by_layer.core_leakage_j / d},
                        {"l2", m.energy_by_layer.l2_j / d},
                        {"dram", m.energy_by_layer.dram_j / d}};
    return j;
}

struct Column {
    const char* name;
    int decimals;  ///< negative: that many significant digits instead
    double (*get)(const ComparisonRow&);
};

const std::vector<Column>& columns() {
    static const std::vector<Column> cols = {
        {"energy_j", 4, [](const ComparisonRow& r) { return r.metrics.energy_j; }},
        {"delay_s", 4, [](const ComparisonRow& r) { return r.metrics.delay_s; }},
        {"mips", 1, [](const ComparisonRow& r) { return r.metrics.mips; }},
        {"edp", 4, [](const ComparisonRow& r) { return r.metrics.edp; }},
        {"ed2p", 4, [](const ComparisonRow& r) { return r.metrics.ed2p; }},
        {"mops_per_j", 2, [](const ComparisonRow& r) { return r.metrics.ops_per_joule / 1e6; }},
        {"avg_t_k", 2, [](const ComparisonRow& r) { return r.metrics.avg_core_temperature_k; }},
        {"max_t_k", 2, [](const ComparisonRow& r) { return r.metrics.max_core_temperature_k; }},
        {"em_ratio", -4, [](const ComparisonRow& r) { return r.em_ratio; }},
        {"tddb_ratio", -4, [](const ComparisonRow& r) { return r.tddb_ratio; }},
    };
    return cols;
}

std::string cell(const Column& c, const ComparisonRow& r) {
    const double v = c.get(r);
    return c.decimals < 0 ? format_significant(v, -c.decimals) : format_fixed(v, c.decimals);
}

}  // namespace

std::string summary_json(const ComparisonRow& row) { return row_json(row).dump(2) + "\n"; }

std::string comparison_json(const ComparisonReport& report) {
    nlohmann::ordered_json j;
    j["baseline"] = report.baseline;
    j["runs"] = nlohmann::ordered_json::array();
    for (const auto& r : report.rows) j["runs"].push_back(row_json(r));
    return j.dump(2) + "\n";
}

std::string comparison_csv(const ComparisonReport& report) {
    std::ostringstream out;
    out << "label";
    for (const auto& c : columns()) out << ',' << c.name;
    out << ",timed_out\n";
    for (const auto& r : report.rows) {
        out << r.label;
        for (const auto& c : columns()) out << ',' << cell(c, r);
        out << ',' << (r.timed_out ? 1 : 0) << '\n';
    }
    return out.str();
}

std::string comparison_table(const ComparisonReport& report) {
    std::vector<std::vector<std::string>> cells;
    std::vector<std::string> header = {"governor"};
    for (const auto& c : columns()) header.emplace_back(c.name);
    cells.push_back(header);
    for (const auto& r : report.rows) {
        std::vector<std::string> line = {r.timed_out ? r.label + "*" : r.label};
        for (const auto& c : columns()) line.push_back(cell(c, r));
        cells.push_back(line);
    }
    std::vector<std::size_t> width(header.size(), 0);
    for (const auto& line : cells)
        for (std::size_t i = 0; i < line.size(); ++i) width[i] = std::max(width[i], line[i].size());

    std::ostringstream out;
    for (const auto& line : cells) {
        for (std::size_t i = 0; i < line.size(); ++i) {
            if (i == 0) out << line[i] << std::string(width[i] - line[i].size(), ' ');
            else out << "  " << std::string(width[i] - line[i].size(), ' ') << line[i];
        }
        out << '\n';
    }
    out << "(MTTF ratios relative to " << report.baseline << ")\n";
    return out.str();
}

}  // namespace petsim
