#pragma once

// Flat CSV files: workload traces in, per-cycle records out.

#include "petsim/engine.hpp"
#include "petsim/workload.hpp"

#include <filesystem>
#include <iosfwd>
#include <string>

namespace petsim {

/// Columns: core_id, order, mode (duration|instructions), value, ipc0, m, alpha_true.
/// Rows may come in any order; `order` sorts phases within a core.
WorkloadTrace read_trace_csv(std::istream& in, std::size_t cores, const std::string& name);
WorkloadTrace load_trace(const std::filesystem::path& path, std::size_t cores);

void write_trace_csv(std::ostream& out, const WorkloadTrace& trace);

/// Columns: time_ms, core, freq_ghz, temp_k, p_dyn_w, p_leak_w, ipc, retired.
void write_records_csv(std::ostream& out, const SimResult& result);

/// Writes `text` to `path`, throwing ConfigError naming the path on failure.
void write_text_file(const std::filesystem::path& path, const std::string& text);
std::string read_text_file(const std::filesystem::path& path);

}  // namespace petsim
