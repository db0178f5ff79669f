#pragma once

#include "petsim/metrics.hpp"

#include <string>

namespace petsim {

/// One run: metrics, MTTF values and the layer energy breakdown, as JSON.
std::string summary_json(const ComparisonRow& row);

std::string comparison_json(const ComparisonReport& report);
/// One row per run, fixed decimals.
std::string comparison_csv(const ComparisonReport& report);
/// Aligned plain-text table for the terminal.
std::string comparison_table(const ComparisonReport& report);

}  // namespace petsim
