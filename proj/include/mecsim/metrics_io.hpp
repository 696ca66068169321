#pragma once

#include <span>
#include <string>
#include <vector>

#include "mecsim/engine.hpp"

namespace mecsim::io {

// %.17g so repeated runs produce byte-identical files.
std::string format_double(double v);

// One row per UE per record. Column set is fixed; see kMetricsHeader.
extern const char* const kMetricsHeader;
void write_metrics_csv(const std::string& path,
                       std::span<const engine::MetricsRecord> records);

// Aggregate view, one object per record. schema_version bumps on layout
// changes.
void write_summary_json(const std::string& path,
                        std::span<const engine::MetricsRecord> records);

// Plot-ready tables: task-split ratio with the sustainable-rate marker,
// power versus the tradeoff parameter, delay/percentile/exceedance versus
// load, and the per-association-scheme SNR CDF.
void write_plot_tables(const std::string& dir,
                       std::span<const engine::MetricsRecord> records);

// Single-column text trace (one sample per line), e.g. offload exceedances
// for external statistical cross-checks.
void write_trace(const std::string& path, std::span<const double> samples);
std::vector<double> read_trace(const std::string& path);

}  // namespace mecsim::io
