#include "dtn/metrics.hpp"

#include <algorithm>
#include <cstdio>
#include <map>
#include <stdexcept>

#include "dtn/error.hpp"

namespace dtn {

namespace {

std::string fmt(double v, const char* spec) {
    if (std::isnan(v)) return "NaN";
    char buf[64];
    std::snprintf(buf, sizeof buf, spec, v);
    return buf;
}

} // namespace

std::string SimReport::serialize() const {
    std::string out;
    out += "created: " + std::to_string(n_created) + "\n";
    out += "started: " + std::to_string(n_started) + "\n";
    out += "relayed: " + std::to_string(n_relayed) + "\n";
    out += "aborted: " + std::to_string(n_aborted) + "\n";
    out += "dropped: " + std::to_string(n_dropped) + "\n";
    out += "removed: " + std::to_string(n_removed) + "\n";
    out += "delivered: " + std::to_string(n_delivered) + "\n";
    out += "delivery_prob: " + fmt(delivery_probability, "%.6f") + "\n";
    out += "overhead_ratio: " + fmt(overhead_ratio, "%.6f") + "\n";
    out += "latency_avg: " + fmt(latency_avg, "%.4f") + "\n";
    out += "hopcount_avg: " + fmt(hopcount_avg, "%.4f") + "\n";
    out += "buffertime_avg: " + fmt(buffertime_avg, "%.4f") + "\n";
    return out;
}

SimReport SimReport::parse(std::string_view text) {
    SimReport r;
    std::map<std::string, std::string> kv;
    size_t pos = 0;
    int lineno = 0;
    while (pos < text.size()) {
        size_t eol = text.find('\n', pos);
        if (eol == std::string_view::npos) eol = text.size();
        std::string_view line = text.substr(pos, eol - pos);
        pos = eol + 1;
        ++lineno;
        if (line.empty()) continue;
        const size_t colon = line.find(':');
        if (colon == std::string_view::npos) throw ParseError("expected 'key: value'", lineno);
        std::string key(line.substr(0, colon));
        std::string val(line.substr(colon + 1));
        while (!val.empty() && val.front() == ' ') val.erase(val.begin());
        kv[key] = val;
    }
    auto count = [&](const char* k) -> int64_t {
        auto it = kv.find(k);
        if (it == kv.end()) throw ConfigError(std::string("report lacks field '") + k + "'");
        return std::atoll(it->second.c_str());
    };
    auto value = [&](const char* k) -> double {
        auto it = kv.find(k);
        if (it == kv.end()) throw ConfigError(std::string("report lacks field '") + k + "'");
        if (it->second == "NaN") return NAN;
        return std::atof(it->second.c_str());
    };
    r.n_created = count("created");
    r.n_started = count("started");
    r.n_relayed = count("relayed");
    r.n_aborted = count("aborted");
    r.n_dropped = count("dropped");
    r.n_removed = count("removed");
    r.n_delivered = count("delivered");
    r.delivery_probability = value("delivery_prob");
    r.overhead_ratio = value("overhead_ratio");
    r.latency_avg = value("latency_avg");
    r.hopcount_avg = value("hopcount_avg");
    r.buffertime_avg = value("buffertime_avg");
    return r;
}

SimReport compute_report(const EventLog& log) {
    SimReport r;

    struct CopyState {
        double t_receive = 0.0;
        int hops = 0;
        bool held = false;
    };
    std::map<std::pair<int, int>, CopyState> copies;        // (msg, host) -> state
    std::map<int, int> destination;                         // msg -> destination host
    std::map<int, double> creation_time;                    // msg -> t
    std::map<std::tuple<int, int, int>, int> pending_hops;  // (msg, from, to) -> hop count
    std::map<std::tuple<int, int, int>, int> relay_hops;    // hop count of completed relays

    double latency_sum = 0.0;
    int64_t hop_sum = 0;
    double buffertime_sum = 0.0;
    int64_t n_deleted = 0;

    for (const Event& e : log.events) {
        switch (e.kind) {
            case EventKind::Created: {
                ++r.n_created;
                destination[e.msg] = e.to;
                creation_time[e.msg] = e.time;
                copies[{e.msg, e.from}] = {e.time, 0, true};
                break;
            }
            case EventKind::Started: {
                ++r.n_started;
                pending_hops[{e.msg, e.from, e.to}] = copies[{e.msg, e.from}].hops + 1;
                break;
            }
            case EventKind::Aborted: {
                ++r.n_aborted;
                pending_hops.erase({e.msg, e.from, e.to});
                break;
            }
            case EventKind::Relayed: {
                ++r.n_relayed;
                auto it = pending_hops.find({e.msg, e.from, e.to});
                const int hops = it == pending_hops.end() ? 1 : it->second;
                if (it != pending_hops.end()) pending_hops.erase(it);
                relay_hops[{e.msg, e.from, e.to}] = hops;
                if (e.to == destination[e.msg]) break;  // final recipients do not buffer
                CopyState& c = copies[{e.msg, e.to}];
                if (!c.held) c = {e.time, hops, true};  // duplicates keep the original copy
                break;
            }
            case EventKind::Delivered: {
                ++r.n_delivered;
                latency_sum += e.time - creation_time[e.msg];
                hop_sum += relay_hops[{e.msg, e.from, e.to}];
                break;
            }
            case EventKind::Dropped:
            case EventKind::Removed: {
                if (e.kind == EventKind::Dropped)
                    ++r.n_dropped;
                else
                    ++r.n_removed;
                CopyState& c = copies[{e.msg, e.from}];
                buffertime_sum += e.time - c.t_receive;
                ++n_deleted;
                c.held = false;
                break;
            }
        }
    }

    r.delivery_probability =
        r.n_created > 0 ? static_cast<double>(r.n_delivered) / static_cast<double>(r.n_created)
                        : 0.0;
    if (r.n_delivered > 0) {
        r.overhead_ratio = static_cast<double>(r.n_relayed - r.n_delivered) /
                           static_cast<double>(r.n_delivered);
        r.latency_avg = latency_sum / static_cast<double>(r.n_delivered);
        r.hopcount_avg = static_cast<double>(hop_sum) / static_cast<double>(r.n_delivered);
    }
    if (n_deleted > 0) r.buffertime_avg = buffertime_sum / static_cast<double>(n_deleted);
    return r;
}

std::vector<int64_t> status_histogram(const EventLog& log) {
    std::vector<int64_t> counts(kEventKindCount, 0);
    for (const Event& e : log.events) ++counts[static_cast<int>(e.kind)];
    return counts;
}

double median(std::vector<double> values) {
    if (values.empty()) throw std::logic_error("median of an empty sample");
    std::sort(values.begin(), values.end());
    const size_t n = values.size();
    if (n % 2 == 1) return values[n / 2];
    return (values[n / 2 - 1] + values[n / 2]) / 2.0;
}

// ---------------------------------------------------------------------------
// Wilcoxon rank-sum
// ---------------------------------------------------------------------------

namespace {

// midranks in half-units so tie handling stays in integer arithmetic
std::vector<int64_t> half_unit_ranks(std::vector<double> pooled) {
    const size_t n = pooled.size();
    std::vector<size_t> order(n);
    for (size_t i = 0; i < n; ++i) order[i] = i;
    std::sort(order.begin(), order.end(),
              [&](size_t a, size_t b) { return pooled[a] < pooled[b]; });
    std::vector<int64_t> ranks2(n);
    size_t i = 0;
    while (i < n) {
        size_t j = i;
        while (j + 1 < n && pooled[order[j + 1]] == pooled[order[i]]) ++j;
        // ranks i+1 .. j+1 (1-based) tie; midrank = (i+j+2)/2
        const int64_t mid2 = static_cast<int64_t>(i + j + 2);
        for (size_t k = i; k <= j; ++k) ranks2[order[k]] = mid2;
        i = j + 1;
    }
    return ranks2;
}

double erfc_two_sided(double z) {
    return std::erfc(std::abs(z) / std::sqrt(2.0));
}

} // namespace

double wilcoxon_rank_sum(std::span<const double> a, std::span<const double> b) {
    const size_t n = a.size();
    const size_t m = b.size();
    if (n == 0 || m == 0) throw std::logic_error("wilcoxon_rank_sum needs nonempty samples");
    const size_t total = n + m;

    std::vector<double> pooled(a.begin(), a.end());
    pooled.insert(pooled.end(), b.begin(), b.end());
    const std::vector<int64_t> ranks2 = half_unit_ranks(pooled);

    int64_t w2_obs = 0;
    for (size_t i = 0; i < n; ++i) w2_obs += ranks2[i];
    const int64_t mu2 = static_cast<int64_t>(n) * static_cast<int64_t>(total + 1);

    if (total <= 16) {
        // exact: every C(total, n) assignment of the pooled ranks to sample a
        const int64_t target = std::llabs(w2_obs - mu2);
        int64_t hits = 0, all = 0;
        std::vector<int> pick(total, 0);
        std::fill(pick.begin(), pick.begin() + n, 1);
        std::sort(pick.begin(), pick.end());
        do {
            int64_t w2 = 0;
            for (size_t i = 0; i < total; ++i)
                if (pick[i]) w2 += ranks2[i];
            if (std::llabs(w2 - mu2) >= target) ++hits;
            ++all;
        } while (std::next_permutation(pick.begin(), pick.end()));
        return static_cast<double>(hits) / static_cast<double>(all);
    }

    // normal approximation with tie correction
    std::vector<double> sorted(pooled);
    std::sort(sorted.begin(), sorted.end());
    double tie_term = 0.0;
    size_t i = 0;
    while (i < total) {
        size_t j = i;
        while (j + 1 < total && sorted[j + 1] == sorted[i]) ++j;
        const double t = static_cast<double>(j - i + 1);
        tie_term += t * t * t - t;
        i = j + 1;
    }
    const double N = static_cast<double>(total);
    const double var = (static_cast<double>(n) * static_cast<double>(m) / 12.0) *
                       ((N + 1.0) - tie_term / (N * (N - 1.0)));
    if (var <= 0.0) return 1.0;
    const double w = static_cast<double>(w2_obs) / 2.0;
    const double mu = static_cast<double>(mu2) / 2.0;
    const double z = (w - mu) / std::sqrt(var);
    return std::min(1.0, erfc_two_sided(z));
}

ComparisonResult compare_samples(std::vector<double> a, std::vector<double> b) {
    ComparisonResult r;
    r.median_a = median(a);
    r.median_b = median(b);
    r.p_value = wilcoxon_rank_sum(a, b);
    r.sample_a = std::move(a);
    r.sample_b = std::move(b);
    return r;
}

std::string tradeoff_table(std::span<const TradeoffRow> rows) {
    std::string out =
        "scenario,protocol,delivery_prob,overhead_ratio,latency_avg,hopcount_avg,buffertime_avg\n";
    auto med = [](const std::vector<SimReport>& runs, auto field) {
        std::vector<double> v;
        for (const SimReport& r : runs) v.push_back(field(r));
        return median(std::move(v));
    };
    char buf[256];
    for (const TradeoffRow& row : rows) {
        if (row.runs.empty()) throw std::logic_error("tradeoff_table needs >= 1 run per cell");
        std::snprintf(buf, sizeof buf, "%s,%s,%.6f,%.6f,%.4f,%.4f,%.4f\n", row.scenario.c_str(),
                      row.protocol.c_str(),
                      med(row.runs, [](const SimReport& r) { return r.delivery_probability; }),
                      med(row.runs, [](const SimReport& r) { return r.overhead_ratio; }),
                      med(row.runs, [](const SimReport& r) { return r.latency_avg; }),
                      med(row.runs, [](const SimReport& r) { return r.hopcount_avg; }),
                      med(row.runs, [](const SimReport& r) { return r.buffertime_avg; }));
        out += buf;
    }
    return out;
}

} // namespace dtn
