#pragma once

#include <cmath>
#include <span>
#include <string>
#include <vector>

#include "dtn/events.hpp"

namespace dtn {

// Aggregated message statistics of one simulation run. Metrics that need at
// least one delivery (or deletion) are NaN when undefined.
struct SimReport {
    int64_t n_created = 0;
    int64_t n_started = 0;
    int64_t n_relayed = 0;
    int64_t n_aborted = 0;
    int64_t n_dropped = 0;
    int64_t n_removed = 0;
    int64_t n_delivered = 0;
    double delivery_probability = 0.0;
    double overhead_ratio = NAN;
    double latency_avg = NAN;
    double hopcount_avg = NAN;
    double buffertime_avg = NAN;

    // key: value block mirroring MessageStatsReport naming
    std::string serialize() const;
    static SimReport parse(std::string_view text);
};

// Recomputes the full report from the event log alone: counts per status,
// delivery probability, overhead ratio, average latency/hop count over first
// deliveries, and average buffer time over deleted copies.
SimReport compute_report(const EventLog& log);

// Per-status counts, indexed by EventKind.
std::vector<int64_t> status_histogram(const EventLog& log);

// Two-sided Wilcoxon rank-sum p-value with midrank ties: exact null
// distribution by enumeration when |a|+|b| <= 16, normal approximation with
// tie correction otherwise. Degenerate all-equal samples give p = 1.
double wilcoxon_rank_sum(std::span<const double> a, std::span<const double> b);

// Lower median for odd sizes, mean of the two middle values for even sizes.
double median(std::vector<double> values);

struct ComparisonResult {
    std::vector<double> sample_a;
    std::vector<double> sample_b;
    double median_a = 0.0;
    double median_b = 0.0;
    double p_value = 1.0;
};

ComparisonResult compare_samples(std::vector<double> a, std::vector<double> b);

// Median-per-metric rows, one per (scenario, protocol) cell.
struct TradeoffRow {
    std::string scenario;
    std::string protocol;
    std::vector<SimReport> runs;
};

std::string tradeoff_table(std::span<const TradeoffRow> rows);

} // namespace dtn
