#include "dtn/events.hpp"

#include <cstdio>
#include <cstdlib>

#include "dtn/error.hpp"

namespace dtn {

namespace {
constexpr const char* kNames[kEventKindCount] = {"created", "started",  "relayed", "aborted",
                                                 "dropped", "removed", "delivered"};
}

const char* event_kind_name(EventKind k) { return kNames[static_cast<int>(k)]; }

EventKind event_kind_from_name(std::string_view name) {
    for (int i = 0; i < kEventKindCount; ++i)
        if (name == kNames[i]) return static_cast<EventKind>(i);
    throw ParseError("unknown event kind '" + std::string(name) + "'", 0);
}

std::string to_csv(const EventLog& log, const std::string& msg_prefix, int time_decimals) {
    std::string out = "time,kind,msg_id,from,to\n";
    char buf[160];
    for (const Event& e : log.events) {
        int n = std::snprintf(buf, sizeof buf, "%.*f,%s,%s%d,", time_decimals, e.time,
                              event_kind_name(e.kind), msg_prefix.c_str(), e.msg);
        out.append(buf, n);
        if (e.from >= 0) out += std::to_string(e.from);
        out += ',';
        if (e.to >= 0) out += std::to_string(e.to);
        out += '\n';
    }
    return out;
}

EventLog csv_to_log(std::string_view csv) {
    EventLog log;
    size_t pos = 0;
    int lineno = 0;
    while (pos < csv.size()) {
        size_t eol = csv.find('\n', pos);
        if (eol == std::string_view::npos) eol = csv.size();
        std::string_view line = csv.substr(pos, eol - pos);
        pos = eol + 1;
        ++lineno;
        if (line.empty() || lineno == 1) continue;  // header

        std::string_view f[5];
        size_t start = 0;
        for (int i = 0; i < 5; ++i) {
            size_t comma = (i < 4) ? line.find(',', start) : line.size();
            if (comma == std::string_view::npos) throw ParseError("expected 5 CSV fields", lineno);
            f[i] = line.substr(start, comma - start);
            start = comma + 1;
        }
        Event e;
        e.time = std::strtod(std::string(f[0]).c_str(), nullptr);
        e.kind = event_kind_from_name(f[1]);
        size_t d = 0;
        while (d < f[2].size() && (f[2][d] < '0' || f[2][d] > '9')) ++d;
        e.msg = std::atoi(std::string(f[2].substr(d)).c_str());
        e.from = f[3].empty() ? -1 : std::atoi(std::string(f[3]).c_str());
        e.to = f[4].empty() ? -1 : std::atoi(std::string(f[4]).c_str());
        log.events.push_back(e);
    }
    return log;
}

} // namespace dtn
