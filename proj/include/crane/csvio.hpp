#pragma once

#include <string>
#include <vector>

#include "crane/simkit.hpp"

namespace crane {

/// Writes the episode trace as CSV: exact column names, 9 significant
/// digits, newline-terminated, byte-deterministic for a fixed result.
/// record_fields selects columns; empty means all.
void emit_trace_csv(const EpisodeResult& result, const std::string& path,
                    const std::vector<std::string>& record_fields = {});

/// Same rendering into a string (used by tests and the determinism check).
std::string trace_csv_string(const EpisodeResult& result,
                             const std::vector<std::string>& record_fields = {});

/// Flat weight dump (W_in row-major, b_in, w_out) as a one-row CSV.
void emit_weights_csv(const std::vector<double>& weights, const std::string& path);

struct SummaryRow {
    std::string controller;
    std::string scenario;
    std::uint64_t seed = 0;
    MetricsSummary metrics;
    std::string status = "ok";  // ok | blowup | unsettled
};

std::string summary_csv_string(const std::vector<SummaryRow>& rows);
std::string summary_text_table(const std::vector<SummaryRow>& rows);

void write_text_file(const std::string& path, const std::string& content);

}  // namespace crane
