#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace dtn {

// The seven message status kinds tracked by the simulator.
enum class EventKind : uint8_t { Created, Started, Relayed, Aborted, Dropped, Removed, Delivered };

constexpr int kEventKindCount = 7;

const char* event_kind_name(EventKind k);
EventKind event_kind_from_name(std::string_view name);

struct Event {
    double time = 0.0;
    EventKind kind = EventKind::Created;
    int msg = 0;    // numeric message id; rendered with the scenario prefix
    int from = -1;  // -1 = none
    int to = -1;
};

// Append-only, time-ordered record of everything that happened to messages.
struct EventLog {
    std::vector<Event> events;

    void append(double time, EventKind kind, int msg, int from, int to) {
        events.push_back({time, kind, msg, from, to});
    }

    size_t size() const { return events.size(); }
};

// CSV with header "time,kind,msg_id,from,to"; one row per event. Times are
// printed with `time_decimals` fractional digits, message ids as prefix+id,
// and absent host fields as empty.
std::string to_csv(const EventLog& log, const std::string& msg_prefix, int time_decimals);

// Inverse of to_csv; accepts any message id prefix.
EventLog csv_to_log(std::string_view csv);

} // namespace dtn
