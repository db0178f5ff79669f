#include "petsim/trace_io.hpp"

#include "petsim/errors.hpp"
#include "petsim/text_format.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <vector>

namespace petsim {

namespace {

const char* const kTraceHeader = "core_id,order,mode,value,ipc0,m,alpha_true";

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream ss(line);
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    return cells;
}

std::string strip(std::string s) {
    const auto a = s.find_first_not_of(" \t\r");
    const auto b = s.find_last_not_of(" \t\r");
    return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
}

}  // namespace

WorkloadTrace read_trace_csv(std::istream& in, std::size_t cores, const std::string& name) {
    std::string line;
    if (!std::getline(in, line) || strip(line) != kTraceHeader)
        throw ConfigError("trace '" + name + "' must start with the header " + kTraceHeader);

    std::vector<std::map<long, Phase>> per_core(cores);
    long lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (strip(line).empty() || strip(line).front() == '#') continue;
        const auto cells = split_csv(line);
        const std::string where = name + ":" + std::to_string(lineno);
        if (cells.size() != 7) throw ConfigError(where + ": expected 7 columns");
        const long core = parse_long(cells[0], where + " core_id");
        const long order = parse_long(cells[1], where + " order");
        if (core < 0 || static_cast<std::size_t>(core) >= cores)
            throw ConfigError(where + ": core_id out of range");
        Phase p;
        const std::string mode = strip(cells[2]);
        if (mode == "duration") p.mode = PhaseMode::duration;
        else if (mode == "instructions") p.mode = PhaseMode::instructions;
        else throw ConfigError(where + ": mode must be duration or instructions");
        p.value = parse_double(cells[3], where + " value");
        p.ipc0 = parse_double(cells[4], where + " ipc0");
        p.mem_slope = parse_double(cells[5], where + " m");
        p.alpha_true = parse_double(cells[6], where + " alpha_true");
        try {
            p.validate();
        } catch (const ConfigError& e) {
            throw ConfigError(where + ": " + e.what());
        }
        if (!per_core[static_cast<std::size_t>(core)].emplace(order, p).second)
            throw ConfigError(where + ": duplicate order for core " + std::to_string(core));
    }

    WorkloadTrace trace;
    trace.name = name;
    trace.cores.resize(cores);
    for (std::size_t c = 0; c < cores; ++c)
        for (const auto& [order, phase] : per_core[c]) trace.cores[c].push_back(phase);
    return trace;
}

WorkloadTrace load_trace(const std::filesystem::path& path, std::size_t cores) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open trace file " + path.string());
    return read_trace_csv(in, cores, path.stem().string());
}

void write_trace_csv(std::ostream& out, const WorkloadTrace& trace) {
    out << kTraceHeader << '\n';
    for (std::size_t c = 0; c < trace.cores.size(); ++c) {
        for (std::size_t i = 0; i < trace.cores[c].size(); ++i) {
            const Phase& p = trace.cores[c][i];
            out << c << ',' << i << ',' << (p.mode == PhaseMode::duration ? "duration" : "instructions") << ','
                << format_compact(p.value) << ',' << format_compact(p.ipc0) << ',' << format_compact(p.mem_slope)
                << ',' << format_compact(p.alpha_true) << '\n';
        }
    }
}

void write_records_csv(std::ostream& out, const SimResult& result) {
    out << "time_ms,core,freq_ghz,temp_k,p_dyn_w,p_leak_w,ipc,retired\n";
    std::string line;
    for (const CycleRecord& r : result.records) {
        line.clear();
        line += format_fixed(r.time_s * 1e3, 3);
        line += ',';
        line += std::to_string(r.core);
        line += ',';
        line += format_fixed(r.f_ghz, 3);
        line += ',';
        line += format_fixed(r.temperature_k, 6);
        line += ',';
        line += format_fixed(r.p_dyn_w, 6);
        line += ',';
        line += format_fixed(r.p_leak_w, 6);
        line += ',';
        line += format_fixed(r.ipc, 6);
        line += ',';
        line += format_fixed(r.retired, 3);
        line += '\n';
        out << line;
    }
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw ConfigError("cannot write " + path.string());
    out << text;
    out.flush();
    if (!out) throw ConfigError("failed writing " + path.string());
}

std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace petsim
