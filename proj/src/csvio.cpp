#include "crane/csvio.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace crane {

namespace {

std::string num9(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.9g", v);
    return buf;
}

}  // namespace

std::string trace_csv_string(const EpisodeResult& result,
                             const std::vector<std::string>& record_fields) {
    if (result.trace.empty()) throw EmptyTrace("emit_trace_csv: empty trace");

    std::vector<std::string> cols;
    if (record_fields.empty())
        cols.assign(kTraceColumns.begin(), kTraceColumns.end());
    else
        cols = record_fields;

    std::ostringstream o;
    for (std::size_t i = 0; i < cols.size(); ++i) o << (i ? "," : "") << cols[i];
    o << "\n";
    for (const auto& row : result.trace) {
        for (std::size_t i = 0; i < cols.size(); ++i)
            o << (i ? "," : "") << num9(trace_field(row, cols[i]));
        o << "\n";
    }
    return o.str();
}

void emit_trace_csv(const EpisodeResult& result, const std::string& path,
                    const std::vector<std::string>& record_fields) {
    write_text_file(path, trace_csv_string(result, record_fields));
}

void emit_weights_csv(const std::vector<double>& weights, const std::string& path) {
    std::ostringstream o;
    for (std::size_t i = 0; i < weights.size(); ++i) o << (i ? "," : "") << num9(weights[i]);
    o << "\n";
    write_text_file(path, o.str());
}

std::string summary_csv_string(const std::vector<SummaryRow>& rows) {
    std::ostringstream o;
    o << "Controller,Scenario,Seed,MSE,MaxError,ResponseTime,ChatteringEnergy,"
         "ControlEffort,Status\n";
    for (const auto& r : rows) {
        o << r.controller << "," << r.scenario << "," << r.seed << ","
          << num9(r.metrics.mse) << "," << num9(r.metrics.max_error) << ","
          << num9(r.metrics.response_time) << "," << num9(r.metrics.chattering_energy)
          << "," << num9(r.metrics.control_effort) << "," << r.status << "\n";
    }
    return o.str();
}

std::string summary_text_table(const std::vector<SummaryRow>& rows) {
    std::ostringstream o;
    char line[256];
    std::snprintf(line, sizeof(line), "%-8s %-14s %6s %12s %10s %9s %12s %12s %-9s\n",
                  "Ctrl", "Scenario", "Seed", "MSE", "MaxErr", "RespT", "ChatterE",
                  "Effort", "Status");
    o << line;
    for (const auto& r : rows) {
        std::snprintf(line, sizeof(line),
                      "%-8s %-14s %6llu %12.5g %10.4g %9.3g %12.5g %12.5g %-9s\n",
                      r.controller.c_str(), r.scenario.c_str(),
                      static_cast<unsigned long long>(r.seed), r.metrics.mse,
                      r.metrics.max_error, r.metrics.response_time,
                      r.metrics.chattering_energy, r.metrics.control_effort,
                      r.status.c_str());
        o << line;
    }
    return o.str();
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open for writing: " + path);
    out << content;
    if (!out) throw IoError("write failed: " + path);
}

}  // namespace crane
